#pragma once

// Arithmetic expressions for exact-solution parameters such as "exp(-2)" or
// "0.5+1*i": numbers, + - * / ^, parentheses, the constants pi, e, i and the
// functions exp, log, sqrt, sin, cos.

#include <complex>
#include <string_view>

namespace pulsedg {

// Throws ConfigError with the offending position on malformed input.
std::complex<double> evaluate_expression(std::string_view text);
double evaluate_real_expression(std::string_view text);

}  // namespace pulsedg
