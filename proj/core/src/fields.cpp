#include "aniso/fields.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace aniso {

ScalarField builtin_scalar(std::string_view name) {
  if (name == "one") return [](const Vec&) { return 1.0; };
  if (name == "zero") return [](const Vec&) { return 0.0; };
  if (name == "x") return [](const Vec& x) { return x(0); };
  if (name == "sinsin")
    return [](const Vec& x) {
      double v = 1;
      for (int i = 0; i < x.size(); ++i) v *= std::sin(std::numbers::pi * x(i));
      return v;
    };
  if (name == "bump")
    return [](const Vec& x) { return std::exp(-10 * (x.array() - 0.5).square().sum()); };
  std::string known;
  for (const auto& n : builtin_scalar_names()) known += (known.empty() ? "" : ", ") + n;
  throw Error("unknown field '" + std::string(name) + "' (known: " + known + ")");
}

std::vector<std::string> builtin_scalar_names() { return {"one", "zero", "x", "sinsin", "bump"}; }

SmoothScalar sin_cos_2d() {
  return {[](const Vec& x) { return std::sin(x(0)) * std::cos(x(1)); },
          [](const Vec& x) {
            return Vec{{std::cos(x(0)) * std::cos(x(1)), -std::sin(x(0)) * std::sin(x(1))}};
          }};
}

SmoothScalar sin_sum_2d() {
  return {[](const Vec& x) { return std::sin(x(0) + x(1)); },
          [](const Vec& x) {
            double c = std::cos(x(0) + x(1));
            return Vec{{c, c}};
          }};
}

SmoothVector sin_cos_field_2d() {
  return {[](const Vec& x) { return Vec{{std::sin(x(1)), std::cos(x(0))}}; },
          [](const Vec& x) {
            Mat j(2, 2);
            j << 0, std::cos(x(1)), -std::sin(x(0)), 0;
            return j;
          }};
}

SmoothVector mixed_field_2d() {
  return {[](const Vec& x) { return Vec{{x(1) * std::sin(x(0)), std::exp(x(0))}}; },
          [](const Vec& x) {
            Mat j(2, 2);
            j << x(1) * std::cos(x(0)), std::sin(x(0)), std::exp(x(0)), 0;
            return j;
          }};
}

SmoothVector random_polynomial_field(int dim, int degree, std::uint64_t seed) {
  struct Term {
    std::array<int, 3> exp;
    std::array<double, 3> coef;
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Term> terms;
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; a + b <= degree; ++b)
      for (int c = 0; a + b + c <= degree; ++c) {
        if (dim == 2 && c > 0) continue;
        Term t{{a, b, c}, {u(rng), u(rng), u(rng)}};
        terms.push_back(t);
      }
  auto mono = [](const Vec& x, const std::array<int, 3>& e, int skip) {
    double v = 1;
    for (int k = 0; k < x.size(); ++k) {
      int p = e[k] - (k == skip ? 1 : 0);
      if (p < 0) return 0.0;
      v *= std::pow(x(k), p);
    }
    if (skip >= 0) v *= e[skip];
    return v;
  };
  return {[terms, dim, mono](const Vec& x) {
            Vec v = Vec::Zero(dim);
            for (const auto& t : terms) {
              double m = mono(x, t.exp, -1);
              for (int i = 0; i < dim; ++i) v(i) += t.coef[i] * m;
            }
            return v;
          },
          [terms, dim, mono](const Vec& x) {
            Mat j = Mat::Zero(dim, dim);
            for (const auto& t : terms)
              for (int k = 0; k < dim; ++k) {
                double m = mono(x, t.exp, k);
                for (int i = 0; i < dim; ++i) j(i, k) += t.coef[i] * m;
              }
            return j;
          }};
}

}  // namespace aniso
