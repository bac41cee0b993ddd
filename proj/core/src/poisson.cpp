#include "aniso/poisson.hpp"

#include "aniso/quadrature.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <vector>
#include <sstream>

namespace aniso {

double PoissonSystem::energy_norm(const Eigen::VectorXd& u) const {
  long double acc = 0;
  for (int k = 0; k < matrix.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(matrix, k); it; ++it)
      acc += static_cast<long double>(u(it.row())) * it.value() * u(it.col());
  return static_cast<double>(std::sqrt(std::max(acc, 0.0L)));
}

PoissonSystem assemble_poisson(std::shared_ptr<const Triangulation> tri, SpaceTag space, ScalarField f,
                               int load_degree) {
  if (space != SpaceTag::CR0 && space != SpaceTag::DCCR)
    throw PreconditionError("assemble_poisson: space must be CR0 or DCCR, got " + to_string(space));
  PoissonSystem sys;
  sys.dofs = std::make_shared<const DofMap>(build_dofs(tri, space));
  sys.weights = build_face_weights(*tri, 2);
  sys.matrix = energy_matrix(*sys.dofs, sys.weights);
  sys.f = std::move(f);
  sys.load_degree = load_degree;
  sys.load = Eigen::VectorXd::Zero(sys.dofs->n_dofs);
  const DofMap& dofs = *sys.dofs;
  for (int e = 0; e < tri->num_cells(); ++e) {
    const Simplex& T = tri->cell(e);
    for (const auto& p : cell_points(T, load_degree)) {
      double fx = sys.f(p.x);
      Bary v = local_values(space, T, p.bary);
      for (int i = 0; i < dofs.local_size; ++i)
        if (dofs.cell_dofs[e][i] >= 0) sys.load(dofs.cell_dofs[e][i]) += p.w * fx * v(i);
    }
  }
  return sys;
}

PoissonSolution solve_poisson(const PoissonSystem& system) {
  PoissonSolution out{FeFunction(system.dofs), {}};
  StabilityRecord& rec = out.record;
  const Triangulation& tri = *system.dofs->tri;
  rec.f_l2 = lq_norm(tri, system.f, 2, system.load_degree);
  const double bnorm = system.load.norm();
  if (bnorm == 0) {
    rec.zero_solution = true;
    return out;
  }
  // Factor the Jacobi-scaled matrix D^{-1/2} A D^{-1/2}; refine against A itself so
  // u solves the assembled system rather than its rounded rescaling.
  const Eigen::VectorXd dinv = system.matrix.diagonal().cwiseSqrt().cwiseInverse();
  if (!dinv.allFinite()) throw SolverError("solve_poisson: zero diagonal");
  const SparseMatrix as = dinv.asDiagonal() * system.matrix * dinv.asDiagonal();
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(as);
  if (ldlt.info() != Eigen::Success) throw SolverError("solve_poisson: factorization failed");
  auto correction = [&](const Eigen::VectorXd& r) -> Eigen::VectorXd {
    return dinv.cwiseProduct(ldlt.solve(dinv.cwiseProduct(r)));
  };
  // b - A u accumulated in long double
  auto residual = [&](const Eigen::VectorXd& uu) {
    std::vector<long double> acc(uu.size());
    for (int i = 0; i < uu.size(); ++i) acc[i] = system.load(i);
    for (int k = 0; k < system.matrix.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(system.matrix, k); it; ++it)
        acc[it.row()] -= static_cast<long double>(it.value()) * uu(it.col());
    Eigen::VectorXd r(uu.size());
    for (int i = 0; i < uu.size(); ++i) r(i) = static_cast<double>(acc[i]);
    return r;
  };
  Eigen::VectorXd u = correction(system.load);
  if (ldlt.info() != Eigen::Success || !u.allFinite()) throw SolverError("solve_poisson: solve failed");
  for (int k = 0; k < 3; ++k) u += correction(residual(u));
  rec.residual = dinv.cwiseProduct(residual(u)).norm() / dinv.cwiseProduct(system.load).norm();
  if (!(rec.residual <= 1e-10)) {
    std::ostringstream msg;
    msg << "solve_poisson: relative residual " << rec.residual << " exceeds 1e-10";
    throw SolverError(msg.str());
  }
  out.u.coeffs() = u;
  rec.energy = system.energy_norm(u);
  rec.work = system.load.dot(u);
  rec.u_l2 = lq_norm(out.u, 2);
  rec.energy_over_f = rec.f_l2 > 0 ? rec.energy / rec.f_l2 : 0;
  rec.u_over_energy = rec.energy > 0 ? rec.u_l2 / rec.energy : 0;
  return out;
}

}  // namespace aniso
