#include "aniso/meshgen.hpp"

#include "aniso/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace aniso {

namespace {

Vec pt(double x, double y) { return Vec{{x, y}}; }

SimplicialMesh grid(int nx, int ny, double x0, double y0, double hx, double hy, bool alternate,
                    const std::function<bool(int, int)>& keep) {
  std::vector<Vec> v;
  std::map<std::pair<int, int>, int> id;
  auto vertex = [&](int i, int j) {
    auto [it, fresh] = id.emplace(std::make_pair(i, j), static_cast<int>(v.size()));
    if (fresh) v.push_back(pt(x0 + i * hx, y0 + j * hy));
    return it->second;
  };
  std::vector<Cell> cells;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (!keep(i, j)) continue;
      int a = vertex(i, j), b = vertex(i + 1, j), c = vertex(i + 1, j + 1), d = vertex(i, j + 1);
      if (alternate && j % 2 == 1) {
        cells.push_back({a, b, d, -1});
        cells.push_back({b, c, d, -1});
      } else {
        cells.push_back({a, b, c, -1});
        cells.push_back({a, c, d, -1});
      }
    }
  return SimplicialMesh(2, std::move(v), std::move(cells));
}

auto all_cells = [](int, int) { return true; };

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s, std::string_view spec) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos == s.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw Error("invalid number '" + s + "' in family spec '" + std::string(spec) + "'");
}

int to_int(const std::string& s, std::string_view spec) {
  double v = to_double(s, spec);
  if (v != std::floor(v) || v < 1) throw Error("expected a positive integer, got '" + s + "' in '" + std::string(spec) + "'");
  return static_cast<int>(v);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

double max_diameter(const SimplicialMesh& m) {
  double h = 0;
  for (int e = 0; e < m.num_cells(); ++e) {
    auto p = m.cell_vertices(e);
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j < p.size(); ++j) h = std::max(h, (p[i] - p[j]).norm());
  }
  return h;
}

}  // namespace

SimplicialMesh aniso_grid_2d(int nx, int ny) {
  if (nx < 1 || ny < 1) throw Error("aniso_grid_2d: cell counts must be positive");
  return grid(nx, ny, 0, 0, 1.0 / nx, 1.0 / ny, false, all_cells);
}

SimplicialMesh needle_2d(double eps, int n) {
  if (!(eps > 0) || eps > 1 || n < 1) throw Error("needle_2d: need 0 < eps <= 1 and n >= 1");
  int ny = std::max(1, static_cast<int>(std::lround(n / eps)));
  return grid(n, ny, 0, 0, 1.0 / n, 1.0 / ny, true, all_cells);
}

SimplicialMesh kuhn_3d(int nx, int ny, int nz) {
  if (nx < 1 || ny < 1 || nz < 1) throw Error("kuhn_3d: box counts must be positive");
  auto index = [&](int i, int j, int k) { return (k * (ny + 1) + j) * (nx + 1) + i; };
  std::vector<Vec> v;
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) v.push_back(Vec{{double(i) / nx, double(j) / ny, double(k) / nz}});
  const std::array<std::array<int, 3>, 6> perms{{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  std::vector<Cell> cells;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        for (const auto& p : perms) {
          std::array<int, 3> c{i, j, k};
          Cell cell;
          cell[0] = index(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[p[s]];
            cell[s + 1] = index(c[0], c[1], c[2]);
          }
          cells.push_back(cell);
        }
  return SimplicialMesh(3, std::move(v), std::move(cells));
}

SimplicialMesh sliver_3d(double eps) {
  if (!(eps > 0) || eps > 1) throw Error("sliver_3d: need 0 < eps <= 1");
  std::vector<Vec> v{Vec{{0.0, 0.0, 0.0}}, Vec{{1.0, 0.0, 0.0}}, Vec{{0.5, eps, eps * eps}},
                     Vec{{0.5, -eps, eps * eps}}};
  return SimplicialMesh(3, std::move(v), {Cell{0, 1, 2, 3}});
}

SimplicialMesh lshape_2d(int n) {
  if (n < 1) throw Error("lshape_2d: n must be positive");
  const double h = 1.0 / n;
  // Cell (i, j) covers [-1 + i h, -1 + (i+1) h] x [-1 + j h, ...]; drop x >= 0, y < 0.
  return grid(2 * n, 2 * n, -1, -1, h, h, false, [n](int i, int j) { return !(i >= n && j < n); });
}

std::vector<FamilyMember> gen_family(std::string_view spec) {
  auto parts = split(spec, ':');
  const std::string& name = parts[0];
  std::vector<FamilyMember> out;
  auto add = [&](std::string label, double param, double aspect, SimplicialMesh mesh) {
    FamilyMember m{name, std::move(label), param, aspect, 0, 0, std::move(mesh)};
    m.gamma_max = semi_regularity(m.mesh).max;
    m.h = max_diameter(m.mesh);
    out.push_back(std::move(m));
  };
  auto bad = [&]() { return Error("invalid family spec '" + std::string(spec) + "'"); };
  if (name == "aniso_grid_2d") {
    if (parts.size() != 3) throw bad();
    for (const auto& sx : split(parts[1], ',')) {
      int nx = to_int(sx, spec);
      for (const auto& sy : split(parts[2], ',')) {
        int ny = !sy.empty() && sy[0] == 'x' ? nx * to_int(sy.substr(1), spec) : to_int(sy, spec);
        double aspect = double(std::max(nx, ny)) / std::min(nx, ny);
        add("nx=" + std::to_string(nx) + ",ny=" + std::to_string(ny), aspect, aspect, aniso_grid_2d(nx, ny));
      }
    }
  } else if (name == "needle_2d") {
    if (parts.size() != 2 && parts.size() != 3) throw bad();
    int n = parts.size() == 3 ? to_int(parts[2], spec) : 2;
    for (const auto& se : split(parts[1], ',')) {
      double eps = to_double(se, spec);
      SimplicialMesh m = needle_2d(eps, n);
      int ny = std::max(1, static_cast<int>(std::lround(n / eps)));
      double aspect = double(std::max(n, ny)) / std::min(n, ny);
      add("eps=" + fmt(eps) + ",n=" + std::to_string(n), eps, aspect, std::move(m));
    }
  } else if (name == "kuhn_3d") {
    if (parts.size() != 4) throw bad();
    int nx = to_int(parts[1], spec), ny = to_int(parts[2], spec);
    for (const auto& sz : split(parts[3], ',')) {
      int nz = to_int(sz, spec);
      double aspect = double(std::max({nx, ny, nz})) / std::min({nx, ny, nz});
      add("nx=" + std::to_string(nx) + ",ny=" + std::to_string(ny) + ",nz=" + std::to_string(nz), nz, aspect,
          kuhn_3d(nx, ny, nz));
    }
  } else if (name == "sliver_3d") {
    if (parts.size() != 2) throw bad();
    for (const auto& se : split(parts[1], ',')) {
      double eps = to_double(se, spec);
      add("eps=" + fmt(eps), eps, 1 / eps, sliver_3d(eps));
    }
  } else if (name == "lshape_2d") {
    if (parts.size() != 2) throw bad();
    for (const auto& sn : split(parts[1], ',')) {
      int n = to_int(sn, spec);
      add("n=" + std::to_string(n), n, 1, lshape_2d(n));
    }
  } else {
    throw bad();
  }
  return out;
}

}  // namespace aniso
