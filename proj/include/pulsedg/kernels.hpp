#pragma once

// Data-parallel inner loops of the DG solvers.
//
// Every per-cell array in this project is stored "lane-major": entry
// (row, cell) lives at row * n_cells + cell, so a loop over cells is a
// contiguous stream. Each kernel has a scalar reference version and an
// AVX2/FMA version; the active table is picked once at startup from CPUID
// and can be pinned with PULSEDG_SIMD=scalar|avx2.

#include <cstddef>
#include <span>
#include <string_view>

namespace pulsedg::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;

  // out[r * n + j] = sum_c matrix[r * cols + c] * in[c * n + j]
  // Used for modal->nodal evaluation and for nodal->modal projection.
  void (*apply_rows)(std::span<const double> matrix, std::size_t rows, std::size_t cols,
                     std::span<const double> in, std::size_t n, std::span<double> out);

  // out[i] = a[i] * b[i]
  void (*multiply)(std::span<const double> a, std::span<const double> b, std::span<double> out);

  // out[i] += scale * a[i] * b[i]
  void (*multiply_add)(double scale, std::span<const double> a, std::span<const double> b,
                       std::span<double> out);

  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, std::span<const double> x, std::span<double> y);

  // out[i] = x[i] + alpha * y[i]
  void (*add_scaled)(std::span<const double> x, double alpha, std::span<const double> y,
                     std::span<double> out);
};

const KernelTable& scalar_table();
bool avx2_available();
// Throws std::runtime_error if the CPU cannot run it.
const KernelTable& avx2_table();

const KernelTable& table(Isa isa);
const KernelTable& active();
Isa active_isa();
void set_active(Isa isa);
std::string_view isa_name(Isa isa);

}  // namespace pulsedg::kernels
