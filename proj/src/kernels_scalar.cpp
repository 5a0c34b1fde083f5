#include "pulsedg/kernels.hpp"

namespace pulsedg::kernels {
namespace {

void apply_rows_scalar(std::span<const double> matrix, std::size_t rows, std::size_t cols,
                       std::span<const double> in, std::size_t n, std::span<double> out) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* dst = out.data() + r * n;
    for (std::size_t j = 0; j < n; ++j) dst[j] = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      const double m = matrix[r * cols + c];
      const double* src = in.data() + c * n;
      for (std::size_t j = 0; j < n; ++j) dst[j] += m * src[j];
    }
  }
}

void multiply_scalar(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
}

void multiply_add_scalar(double scale, std::span<const double> a, std::span<const double> b,
                         std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += scale * a[i] * b[i];
}

void axpy_scalar(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

void add_scaled_scalar(std::span<const double> x, double alpha, std::span<const double> y,
                       std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + alpha * y[i];
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{Isa::scalar,        apply_rows_scalar, multiply_scalar,
                             multiply_add_scalar, axpy_scalar,       add_scaled_scalar};
  return t;
}

}  // namespace pulsedg::kernels
