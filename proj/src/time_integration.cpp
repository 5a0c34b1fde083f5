#include "pulsedg/time_integration.hpp"

#include <cmath>
#include <string>

#include "pulsedg/error.hpp"

namespace pulsedg {

double StepPolicy::target(double h, int degree) const {
  if (dt) return *dt;
  if (scaling == StepScaling::matched_order) return cfl * std::pow(h, (degree + 1.0) / 4.0);
  return cfl * h;
}

std::size_t StepPolicy::steps_for(double span, double h, int degree) const {
  if (span <= 0.0) return 0;
  const double t = target(h, degree);
  return static_cast<std::size_t>(std::max(1.0, std::ceil(span / t - 1e-9)));
}

void StepPolicy::validate() const {
  if (dt && !(*dt > 0.0 && std::isfinite(*dt))) throw ConfigError("step.dt must be positive");
  if (!(cfl > 0.0 && std::isfinite(cfl))) throw ConfigError("step.cfl must be positive");
}

namespace {

Recovered staged_recover(const SemiDiscreteScheme& scheme, double s, const FieldSet& fields, int stage) {
  try {
    return scheme.recover(s, fields);
  } catch (const NumericalError& e) {
    throw NumericalError("stage " + std::to_string(stage) + " at s=" + std::to_string(s) + ": " + e.what());
  }
}

void check_finite(const FieldSet& fields, double s) {
  for (const auto& f : fields)
    for (double v : f.data())
      if (!std::isfinite(v)) throw NumericalError("non-finite state at s=" + std::to_string(s));
}

}  // namespace

IntegratorState rk4_step(const SemiDiscreteScheme& scheme, const IntegratorState& y, double ds) {
  const double s = y.s;
  Recovered a1 = staged_recover(scheme, s, y.fields, 1);
  const FieldSet k1 = scheme.rhs(s, y.fields, a1);
  const double x1 = scheme.anchor_rate(s, y.fields, a1);

  const FieldSet y2 = combine(y.fields, 0.5 * ds, k1);
  Recovered a2 = staged_recover(scheme, s + 0.5 * ds, y2, 2);
  const FieldSet k2 = scheme.rhs(s + 0.5 * ds, y2, a2);
  const double x2 = scheme.anchor_rate(s + 0.5 * ds, y2, a2);

  const FieldSet y3 = combine(y.fields, 0.5 * ds, k2);
  Recovered a3 = staged_recover(scheme, s + 0.5 * ds, y3, 3);
  const FieldSet k3 = scheme.rhs(s + 0.5 * ds, y3, a3);
  const double x3 = scheme.anchor_rate(s + 0.5 * ds, y3, a3);

  const FieldSet y4 = combine(y.fields, ds, k3);
  Recovered a4 = staged_recover(scheme, s + ds, y4, 4);
  const FieldSet k4 = scheme.rhs(s + ds, y4, a4);
  const double x4 = scheme.anchor_rate(s + ds, y4, a4);

  IntegratorState out{y.fields, y.anchor, s + ds};
  accumulate(out.fields, ds / 6.0, k1);
  accumulate(out.fields, ds / 3.0, k2);
  accumulate(out.fields, ds / 3.0, k3);
  accumulate(out.fields, ds / 6.0, k4);
  out.anchor += ds / 6.0 * (x1 + 2.0 * x2 + 2.0 * x3 + x4);
  check_finite(out.fields, out.s);
  return out;
}

RunResult run_steps(const SemiDiscreteScheme& scheme, IntegratorState state, double s_end, std::size_t n_steps,
                    const StepObserver& observer) {
  RunResult res;
  const double s0 = state.s;
  res.ds = n_steps > 0 ? (s_end - s0) / static_cast<double>(n_steps) : 0.0;
  res.recovered = staged_recover(scheme, state.s, state.fields, 0);
  if (observer) observer(state, res.recovered, 0);
  for (std::size_t i = 1; i <= n_steps; ++i) {
    state = rk4_step(scheme, state, res.ds);
    if (i == n_steps) state.s = s_end;
    else state.s = s0 + static_cast<double>(i) * res.ds;
    res.recovered = staged_recover(scheme, state.s, state.fields, 0);
    if (observer) observer(state, res.recovered, i);
  }
  res.state = std::move(state);
  res.steps = n_steps;
  return res;
}

}  // namespace pulsedg
