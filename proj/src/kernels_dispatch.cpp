#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "pulsedg/kernels.hpp"

namespace pulsedg::kernels {
namespace {

const KernelTable* detect() {
  if (const char* env = std::getenv("PULSEDG_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return &scalar_table();
    if (v == "avx2") return &avx2_table();
  }
  return avx2_available() ? &avx2_table() : &scalar_table();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{detect()};
  return current;
}

}  // namespace

const KernelTable& table(Isa isa) {
  switch (isa) {
    case Isa::scalar: return scalar_table();
    case Isa::avx2: return avx2_table();
  }
  throw std::invalid_argument("unknown ISA");
}

const KernelTable& active() { return *slot().load(std::memory_order_relaxed); }

Isa active_isa() { return active().isa; }

void set_active(Isa isa) { slot().store(&table(isa)); }

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

}  // namespace pulsedg::kernels
