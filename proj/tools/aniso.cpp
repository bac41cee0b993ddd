#include <aniso/fields.hpp>
#include <aniso/geometry.hpp>
#include <aniso/mesh.hpp>
#include <aniso/meshgen.hpp>
#include <aniso/poisson.hpp>
#include <aniso/sobolev.hpp>
#include <aniso/sweeps.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

using namespace aniso;

namespace {

// Writes to `path`, or stdout when it is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw Error("cannot open " + path + " for writing");
  }
  std::ostream& stream() {
    std::ostream& os = file_ ? static_cast<std::ostream&>(*file_) : std::cout;
    os << std::setprecision(17);
    return os;
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

const std::vector<double> kEps{1, 1e-1, 1e-2, 1e-3, 1e-4};

void geometry_report(const std::string& mesh_path, const std::string& out) {
  const SimplicialMesh mesh = read_mesh_file(mesh_path);
  const int d = mesh.dim();
  auto geo = decompose_mesh(mesh);
  Output o(out);
  auto& os = o.stream();
  os << "element_id,cond_tag";
  for (int i = 1; i <= d; ++i) os << ",h_" << i;
  os << ",h_T,H_T,gamma,det_check,norm_checks\n";
  for (int e = 0; e < mesh.num_cells(); ++e) {
    const auto& g = geo[e];
    auto pts = mesh.cell_vertices(e);
    BoundsCheck b = check_bounds(g, pts);
    os << e << ',' << to_string(g.cond);
    for (int i = 0; i < d; ++i) os << ',' << g.h(i);
    os << ',' << g.h_T << ',' << g.H_T << ',' << g.gamma << ',' << b.det_rel_error << ','
       << (b.pass() ? "pass" : "fail") << '\n';
  }
}

void projection_sweep_cmd(double q, double p, const std::vector<double>& eps, int n, const std::string& out) {
  Output o(out);
  auto& os = o.stream();
  os << "epsilon,aspect,ratio\n";
  for (const auto& r : projection_sweep(eps, q, p, n)) os << r.epsilon << ',' << r.aspect << ',' << r.ratio << '\n';
}

void rt_sweep_cmd(double p, const std::vector<double>& eps, int n, const std::string& out) {
  Output o(out);
  auto& os = o.stream();
  os << "param,gamma_max,stability_ratio,error_ratio\n";
  for (const auto& r : rt_sweep(eps, p, n))
    os << r.param << ',' << r.gamma_max << ',' << r.stability_ratio << ',' << r.error_ratio << '\n';
}

void identity_check(const std::vector<std::string>& families, int configs, std::uint64_t seed) {
  IdentityReport r = identity_suite(families, configs, seed);
  std::cout << std::setprecision(3) << std::scientific;
  std::cout << "ibp                " << r.ibp << '\n'
            << "jump_product       " << r.jump_product << '\n'
            << "jump_product_mesh  " << r.jump_product_mesh << '\n'
            << "commuting          " << r.commuting << '\n'
            << "cr_duality         " << r.cr_duality << '\n'
            << "rt_duality         " << r.rt_duality << '\n'
            << "rt_reproduction    " << r.rt_reproduction << '\n';
}

void sobolev_sweep(const std::string& family, double q, double p, const std::string& space, int restarts,
                   std::uint64_t seed, const std::string& out) {
  AscentOptions opt;
  opt.restarts = restarts;
  opt.seed = seed;
  SweepReport rep = sweep_family(family, q, p, parse_space(space), opt);
  Output o(out);
  rep.write_csv(o.stream());
  std::cerr << "max/min " << rep.max_over_min() << '\n';
}

void poisson_cmd(const std::string& mesh_path, const std::string& space, const std::string& f,
                 const std::string& out) {
  auto tri = Triangulation::create(read_mesh_file(mesh_path));
  auto sys = assemble_poisson(tri, parse_space(space), builtin_scalar(f));
  auto s = solve_poisson(sys);
  const auto& r = s.record;
  Output o(out);
  auto& os = o.stream();
  os << "space,f,dofs,energy,f_l2,u_l2,work,energy_over_f,u_over_energy,residual,zero_solution\n";
  os << space << ',' << f << ',' << sys.dofs->n_dofs << ',' << r.energy << ',' << r.f_l2 << ',' << r.u_l2 << ','
     << r.work << ',' << r.energy_over_f << ',' << r.u_over_energy << ',' << r.residual << ','
     << (r.zero_solution ? 1 : 0) << '\n';
}

void gen_mesh(const std::string& family, const std::string& dir) {
  namespace fs = std::filesystem;
  auto members = gen_family(family);
  fs::create_directories(dir);
  int k = 0;
  for (const auto& m : members) {
    fs::path path = fs::path(dir) / (m.family + "_" + std::to_string(k++) + ".mesh");
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    os << "# " << m.family << ' ' << m.label << " aspect=" << m.aspect << " gamma_max=" << m.gamma_max << '\n'
       << format_mesh(m.mesh);
    std::cout << path.string() << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic Crouzeix-Raviart / Raviart-Thomas verification"};
  app.require_subcommand(1);

  std::string mesh_path, out, family, space, f = "one";
  double q = 2, p = 2;
  int n = 2, restarts = 8, configs = 1000;
  std::uint64_t seed = 1;
  std::vector<double> eps = kEps;
  std::vector<std::string> families{"aniso_grid_2d:4:4,40,400", "kuhn_3d:2:2:2,20"};

  auto* geo = app.add_subcommand("geometry-report", "Per-element decomposition and matrix bounds");
  geo->add_option("--mesh", mesh_path, "Mesh file")->required()->check(CLI::ExistingFile);
  geo->add_option("--out", out, "CSV output (default stdout)");

  auto* proj = app.add_subcommand("projection-sweep", "P0 projection error ratio on needle meshes");
  proj->add_option("--q", q)->capture_default_str();
  proj->add_option("--p", p)->capture_default_str();
  proj->add_option("--eps", eps, "Needle widths")->delimiter(',');
  proj->add_option("--n", n, "Grid cells per side")->capture_default_str();
  proj->add_option("--out", out, "CSV output (default stdout)");

  auto* rt = app.add_subcommand("rt-sweep", "RT0 stability and error ratios on needle meshes");
  rt->add_option("--p", p)->capture_default_str();
  rt->add_option("--eps", eps, "Needle widths")->delimiter(',');
  rt->add_option("--n", n, "Grid cells per side")->capture_default_str();
  rt->add_option("--out", out, "CSV output (default stdout)");

  auto* ids = app.add_subcommand("identity-check", "Max residuals of the exact identities");
  ids->add_option("--family", families, "Family specs (repeatable)");
  ids->add_option("--configs", configs, "Random jump-product configurations")->capture_default_str();
  ids->add_option("--seed", seed)->capture_default_str();

  auto* sob = app.add_subcommand("sobolev-sweep", "Discrete Sobolev constant over a mesh family");
  sob->add_option("--family", family, "Family spec")->required();
  sob->add_option("--q", q)->capture_default_str();
  sob->add_option("--p", p)->capture_default_str();
  sob->add_option("--space", space, "cr0, cr or dccr")->required();
  sob->add_option("--restarts", restarts, "Ascent restarts")->capture_default_str();
  sob->add_option("--seed", seed)->capture_default_str();
  sob->add_option("--out", out, "CSV output (default stdout)");

  auto* poi = app.add_subcommand("poisson", "Solve -Laplace u = f and report the stability record");
  poi->add_option("--mesh", mesh_path, "Mesh file")->required()->check(CLI::ExistingFile);
  poi->add_option("--space", space, "cr0 or dccr")->required();
  poi->add_option("--f", f, "Builtin right-hand side")->capture_default_str();
  poi->add_option("--out", out, "CSV output (default stdout)");

  auto* gen = app.add_subcommand("gen-mesh", "Write the meshes of a family");
  gen->add_option("--family", family, "Family spec")->required();
  gen->add_option("--out", out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*geo) geometry_report(mesh_path, out);
    else if (*proj) projection_sweep_cmd(q, p, eps, n, out);
    else if (*rt) rt_sweep_cmd(p, eps, n, out);
    else if (*ids) identity_check(families, configs, seed);
    else if (*sob) sobolev_sweep(family, q, p, space, restarts, seed, out);
    else if (*poi) poisson_cmd(mesh_path, space, f, out);
    else if (*gen) gen_mesh(family, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
