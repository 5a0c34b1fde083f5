#pragma once

// Common interface of the semi-discrete schemes driven by the time integrator.

#include <string>
#include <vector>

#include "pulsedg/mesh_basis.hpp"

namespace pulsedg {

using FieldSet = std::vector<DGField>;

// Auxiliary fields recovered algebraically from the evolved ones
// (u from omega, gamma = Pi G(u), z from omega, ...).
struct Recovered {
  FieldSet fields;
};

class SemiDiscreteScheme {
 public:
  virtual ~SemiDiscreteScheme() = default;
  virtual std::string name() const = 0;
  virtual Recovered recover(double s, const FieldSet& state) const = 0;
  virtual FieldSet rhs(double s, const FieldSet& state, const Recovered& aux) const = 0;
  // dx/ds of the hodograph anchor at the left boundary.
  virtual double anchor_rate(double s, const FieldSet& state, const Recovered& aux) const = 0;
};

// out = a + alpha * b, fieldwise.
FieldSet combine(const FieldSet& a, double alpha, const FieldSet& b);
void accumulate(FieldSet& target, double alpha, const FieldSet& increment);

}  // namespace pulsedg
