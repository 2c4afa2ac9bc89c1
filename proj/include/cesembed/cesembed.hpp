#pragma once

// Umbrella include for the whole library.

#include "cesembed/constants.hpp"
#include "cesembed/errors.hpp"
#include "cesembed/extreal.hpp"
#include "cesembed/funcspace.hpp"
#include "cesembed/interval.hpp"
#include "cesembed/oracle.hpp"
#include "cesembed/parse.hpp"
#include "cesembed/quadrature.hpp"
#include "cesembed/reduce.hpp"
#include "cesembed/report.hpp"
#include "cesembed/stepfunc.hpp"
#include "cesembed/weights.hpp"
