#pragma once

#include "aniso/types.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace aniso {

/// Named scalar fields for the CLI: one, zero, x, sinsin (sin(pi x) sin(pi y)),
/// bump (exp(-10 |x - c|^2) around the unit-cube centre).
ScalarField builtin_scalar(std::string_view name);
std::vector<std::string> builtin_scalar_names();

/// sin(x) cos(y).
SmoothScalar sin_cos_2d();
/// sin(x + y).
SmoothScalar sin_sum_2d();
/// (sin y, cos x).
SmoothVector sin_cos_field_2d();
/// (y sin x, e^x).
SmoothVector mixed_field_2d();

/// Vector field whose components are random polynomials of total degree
/// <= degree with coefficients in [-1, 1].
SmoothVector random_polynomial_field(int dim, int degree, std::uint64_t seed);

}  // namespace aniso
