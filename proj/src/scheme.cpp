#include "pulsedg/scheme.hpp"

#include <stdexcept>

#include "pulsedg/kernels.hpp"

namespace pulsedg {

FieldSet combine(const FieldSet& a, double alpha, const FieldSet& b) {
  if (a.size() != b.size()) throw std::invalid_argument("field sets differ in size");
  FieldSet out = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].same_space(b[i])) throw std::invalid_argument("field sets differ in space");
    kernels::active().add_scaled(a[i].data(), alpha, b[i].data(), out[i].data());
  }
  return out;
}

void accumulate(FieldSet& target, double alpha, const FieldSet& increment) {
  if (target.size() != increment.size()) throw std::invalid_argument("field sets differ in size");
  for (std::size_t i = 0; i < target.size(); ++i) {
    kernels::active().axpy(alpha, increment[i].data(), target[i].data());
  }
}

}  // namespace pulsedg
