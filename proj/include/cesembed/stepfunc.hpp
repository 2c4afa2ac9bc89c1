#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "cesembed/errors.hpp"
#include "cesembed/interval.hpp"

namespace cesembed {

// Nonnegative step function: values[i] on (breaks[i], breaks[i+1]), zero
// elsewhere. The canonical test-function class for all ratio evaluations.
struct StepFunction {
  std::vector<double> breaks;  // strictly increasing, size = values.size() + 1
  std::vector<double> values;  // finite, >= 0

  StepFunction() = default;
  StepFunction(std::vector<double> b, std::vector<double> v)
      : breaks(std::move(b)), values(std::move(v)) {
    validate();
  }

  void validate() const {
    if (breaks.size() < 2 || values.size() + 1 != breaks.size())
      throw SpecError("step function: breaks must have values.size()+1 entries");
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
      if (!(breaks[i] < breaks[i + 1]))
        throw SpecError("step function: breaks must be strictly increasing");
    for (double v : values)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw SpecError("step function: values must be finite and >= 0");
  }

  std::size_t cells() const { return values.size(); }
  Interval support() const { return Interval(breaks.front(), breaks.back()); }

  double value_at(double t) const {
    if (t < breaks.front() || t >= breaks.back()) return 0.0;
    std::size_t i = std::upper_bound(breaks.begin(), breaks.end(), t) - breaks.begin();
    return values[i - 1];
  }

  bool is_zero() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
  }

  StepFunction scaled(double lam) const {
    StepFunction g = *this;
    for (double& v : g.values) v *= lam;
    g.validate();
    return g;
  }

  // g(t) = f(s - t); used to carry test functions across reflections.
  StepFunction reflected(double s) const {
    StepFunction g;
    g.breaks.resize(breaks.size());
    g.values.resize(values.size());
    for (std::size_t i = 0; i < breaks.size(); ++i)
      g.breaks[breaks.size() - 1 - i] = s - breaks[i];
    for (std::size_t i = 0; i < values.size(); ++i) g.values[values.size() - 1 - i] = values[i];
    g.validate();
    return g;
  }

  // g(t) = f(a + 1/(t-a)); carries test functions across inversions.
  StepFunction inverted(double a) const {
    if (breaks.front() <= a) throw SpecError("step function: inversion needs support above a");
    StepFunction g;
    g.breaks.resize(breaks.size());
    g.values.resize(values.size());
    for (std::size_t i = 0; i < breaks.size(); ++i)
      g.breaks[breaks.size() - 1 - i] = a + 1.0 / (breaks[i] - a);
    for (std::size_t i = 0; i < values.size(); ++i) g.values[values.size() - 1 - i] = values[i];
    g.validate();
    return g;
  }
};

}  // namespace cesembed
