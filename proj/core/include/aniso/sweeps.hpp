#pragma once

#include "aniso/fields.hpp"
#include "aniso/geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace aniso {

struct ProjectionRow {
  double epsilon = 0;
  double aspect = 0;
  double ratio = 0;  // max over the elements of the needle mesh
};
/// projection_error_ratio of sin(x) cos(y) on needle_2d(eps, n) meshes.
std::vector<ProjectionRow> projection_sweep(const std::vector<double>& eps, double q, double p, int n = 2);

struct RtRow {
  double param = 0;
  double gamma_max = 0;
  double stability_ratio = 0;  // v = (sin y, cos x) on the whole mesh
  double error_ratio = 0;      // v = (y sin x, e^x), max over elements
};
std::vector<RtRow> rt_sweep(const std::vector<double>& eps, double p, int n = 2);

struct TraceRow {
  double epsilon = 0;
  double ratio = 0;  // max over elements and faces, v = sin(x + y)
};
std::vector<TraceRow> trace_sweep(const std::vector<double>& eps, double p, int n = 2);

/// Largest residuals of the exact identities over the given families.
struct IdentityReport {
  double ibp = 0;              // max |volume - face| / magnitude over RT0 x DC1 basis pairs
  double jump_product = 0;       // max pointwise defect over random O(1) configurations
  double jump_product_mesh = 0;  // same on mesh faces with random RT0 x DC1 traces, relative
  double commuting = 0;        // max_T |div I v - Pi^0 div v| / ||div v||_inf, cubic v
  double cr_duality = 0;       // max |chi_i(theta_j) - delta_ij|
  double rt_duality = 0;       // max |int_{F_j} theta_i . n_j - delta_ij|
  double rt_reproduction = 0;  // max |I_T v - v|_inf / |v|_inf for random RT0 fields
};
IdentityReport identity_suite(const std::vector<std::string>& family_specs, int random_configs = 1000,
                              std::uint64_t seed = 11);

}  // namespace aniso
