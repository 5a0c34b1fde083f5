#pragma once

// Classical fourth-order Runge-Kutta for the semi-discrete schemes, with the
// algebraic recovery run before every stage and the hodograph anchor advanced
// alongside the fields.

#include <functional>
#include <optional>

#include "pulsedg/scheme.hpp"

namespace pulsedg {

enum class StepScaling { linear_h, matched_order };

struct StepPolicy {
  double cfl = 0.1;
  std::optional<double> dt;  // overrides cfl when set
  StepScaling scaling = StepScaling::linear_h;

  // Target step: dt, or cfl*h (linear_h), or cfl*h^((k+1)/4) (matched_order,
  // so the O(ds^4) time error tracks the O(h^{k+1}) space error).
  double target(double h, int degree) const;
  // Number of uniform steps covering an interval of length span.
  std::size_t steps_for(double span, double h, int degree) const;
  void validate() const;
};

struct IntegratorState {
  FieldSet fields;
  double anchor = 0.0;
  double s = 0.0;
};

// One RK4 step; a NumericalError from a recovery names the stage.
IntegratorState rk4_step(const SemiDiscreteScheme& scheme, const IntegratorState& state, double ds);

// Called after recovery at the start (step 0) and after every step.
using StepObserver = std::function<void(const IntegratorState&, const Recovered&, std::size_t step)>;

struct RunResult {
  IntegratorState state;
  Recovered recovered;
  std::size_t steps = 0;
  double ds = 0.0;
};

// Advance from state.s to s_end in n_steps uniform steps.
RunResult run_steps(const SemiDiscreteScheme& scheme, IntegratorState state, double s_end, std::size_t n_steps,
                    const StepObserver& observer = {});

}  // namespace pulsedg
