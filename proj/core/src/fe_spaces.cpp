#include "aniso/fe_spaces.hpp"

#include "aniso/quadrature.hpp"

#include <algorithm>
#include <cctype>

namespace aniso {

std::string to_string(SpaceTag tag) {
  switch (tag) {
    case SpaceTag::DCCR: return "DCCR";
    case SpaceTag::CR: return "CR";
    case SpaceTag::CR0: return "CR0";
    case SpaceTag::RT0: return "RT0";
    case SpaceTag::P0: return "P0";
    case SpaceTag::DC1: return "DC1";
  }
  return "?";
}

SpaceTag parse_space(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "dccr") return SpaceTag::DCCR;
  if (s == "cr") return SpaceTag::CR;
  if (s == "cr0") return SpaceTag::CR0;
  if (s == "rt0") return SpaceTag::RT0;
  if (s == "p0") return SpaceTag::P0;
  if (s == "dc1") return SpaceTag::DC1;
  throw Error("unknown space '" + std::string(name) + "'");
}

int local_size(SpaceTag tag, int dim) { return tag == SpaceTag::P0 ? 1 : dim + 1; }

DofMap build_dofs(std::shared_ptr<const Triangulation> tri, SpaceTag tag) {
  DofMap m;
  m.tag = tag;
  m.tri = std::move(tri);
  const Triangulation& t = *m.tri;
  const int d = t.dim();
  const int ne = t.num_cells();
  m.local_size = local_size(tag, d);
  m.cell_dofs.assign(ne, {-1, -1, -1, -1});
  m.cell_signs.assign(ne, {1, 1, 1, 1});
  switch (tag) {
    case SpaceTag::DCCR:
    case SpaceTag::DC1:
      for (int e = 0; e < ne; ++e)
        for (int i = 0; i <= d; ++i) m.cell_dofs[e][i] = e * (d + 1) + i;
      m.n_dofs = ne * (d + 1);
      break;
    case SpaceTag::P0:
      for (int e = 0; e < ne; ++e) m.cell_dofs[e][0] = e;
      m.n_dofs = ne;
      break;
    case SpaceTag::CR:
    case SpaceTag::CR0:
    case SpaceTag::RT0: {
      m.face_dof.assign(t.num_faces(), -1);
      int n = 0;
      for (int f = 0; f < t.num_faces(); ++f) {
        if (tag == SpaceTag::CR0 && !t.face(f).interior()) {
          m.constrained_faces.push_back(f);
          continue;
        }
        m.face_dof[f] = n++;
      }
      m.n_dofs = n;
      for (int e = 0; e < ne; ++e)
        for (int i = 0; i <= d; ++i) {
          m.cell_dofs[e][i] = m.face_dof[t.faces.cell_faces[e][i]];
          if (tag == SpaceTag::RT0) m.cell_signs[e][i] = t.faces.orientation(e, i);
        }
      break;
    }
  }
  return m;
}

double eval_cr_basis(const Simplex& T, int i, const Bary& lambda) { return 1.0 - T.dim() * lambda(i); }

double eval_cr_basis(const Simplex& T, int i, const Vec& x) { return eval_cr_basis(T, i, T.barycentric(x)); }

Vec cr_basis_gradient(const Simplex& T, int i) { return -T.dim() * T.grad_lambda(i); }

double apply_cr_dof_local(const Simplex& T, int i, const LocalField& q, int degree) {
  double acc = 0;
  for (const auto& p : local_face_points(T, i, degree)) acc += p.w * q(p.bary);
  return acc / T.face_measure(i);
}

double apply_cr_dof(const Simplex& T, int i, const ScalarField& q, int degree) {
  double acc = 0;
  for (const auto& p : local_face_points(T, i, degree)) acc += p.w * q(p.x);
  return acc / T.face_measure(i);
}

Vec eval_rt_basis(const Simplex& T, int i, const Bary& lambda, double sign) {
  return sign / (T.dim() * T.volume()) * T.offset(i, lambda);
}

Vec eval_rt_basis(const Simplex& T, int i, const Vec& x, double sign) {
  Vec off = x - T.vertex(i);
  return sign / (T.dim() * T.volume()) * off;
}

double rt_basis_normal(const Simplex& T, int i, const Bary& lambda, int j, double sign) {
  double acc = 0;
  for (int k = 0; k <= T.dim(); ++k)
    if (k != i) acc += lambda(k) * T.edge_normal_component(k, i, j);
  return sign * acc / (T.dim() * T.volume());
}

double rt_basis_divergence(const Simplex& T, double sign) { return sign / T.volume(); }

double apply_rt_dof(const Simplex& T, int j, const VectorField& v, int degree) {
  const Vec& n = T.outward_normal(j);
  double acc = 0;
  for (const auto& p : local_face_points(T, j, degree)) acc += p.w * v(p.x).dot(n);
  return acc;
}

Bary local_values(SpaceTag tag, const Simplex& T, const Bary& lambda) {
  const int d = T.dim();
  switch (tag) {
    case SpaceTag::P0: return Bary::Ones(1);
    case SpaceTag::DC1: return lambda;
    case SpaceTag::DCCR:
    case SpaceTag::CR:
    case SpaceTag::CR0: {
      Bary out(d + 1);
      for (int i = 0; i <= d; ++i) out(i) = 1.0 - d * lambda(i);
      return out;
    }
    case SpaceTag::RT0: break;
  }
  throw PreconditionError("local_values: RT0 is vector valued");
}

std::array<Vec, 4> local_gradients(SpaceTag tag, const Simplex& T) {
  const int d = T.dim();
  std::array<Vec, 4> g;
  switch (tag) {
    case SpaceTag::P0: g[0] = Vec::Zero(d); return g;
    case SpaceTag::DC1:
      for (int i = 0; i <= d; ++i) g[i] = T.grad_lambda(i);
      return g;
    case SpaceTag::DCCR:
    case SpaceTag::CR:
    case SpaceTag::CR0:
      for (int i = 0; i <= d; ++i) g[i] = cr_basis_gradient(T, i);
      return g;
    case SpaceTag::RT0: break;
  }
  throw PreconditionError("local_gradients: RT0 is vector valued");
}

Bary local_face_means(SpaceTag tag, int dim, int i) {
  switch (tag) {
    case SpaceTag::P0: return Bary::Ones(1);
    case SpaceTag::DC1: {
      Bary m = Bary::Constant(dim + 1, 1.0 / dim);
      m(i) = 0;
      return m;
    }
    case SpaceTag::DCCR:
    case SpaceTag::CR:
    case SpaceTag::CR0: {
      Bary m = Bary::Zero(dim + 1);
      m(i) = 1;
      return m;
    }
    case SpaceTag::RT0: break;
  }
  throw PreconditionError("local_face_means: RT0 is vector valued");
}

VectorField piola_push(const ElementGeometry& geo, VectorField v_hat) {
  Mat a = geo.A();
  double det = a.determinant();
  return [geo, a, det, v_hat = std::move(v_hat)](const Vec& x) -> Vec {
    return a * v_hat(geo.inverse_map(x)) / det;
  };
}

FeFunction::FeFunction(std::shared_ptr<const DofMap> dofs, Eigen::VectorXd coeffs)
    : dofs_(std::move(dofs)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != dofs_->n_dofs)
    throw PreconditionError("FeFunction: " + std::to_string(coeffs_.size()) + " coefficients for " +
                            std::to_string(dofs_->n_dofs) + " dofs");
}

FeFunction::FeFunction(std::shared_ptr<const DofMap> dofs)
    : FeFunction(dofs, Eigen::VectorXd::Zero(dofs->n_dofs)) {}

Bary FeFunction::local_coefficients(int e) const {
  const auto& dofs = dofs_->cell_dofs[e];
  Bary c(dofs_->local_size);
  for (int i = 0; i < dofs_->local_size; ++i) c(i) = dofs[i] < 0 ? 0.0 : dofs_->cell_signs[e][i] * coeffs_(dofs[i]);
  return c;
}

double FeFunction::value(int e, const Bary& lambda) const {
  return local_coefficients(e).dot(local_values(dofs_->tag, tri().cell(e), lambda));
}

Vec FeFunction::gradient(int e) const {
  auto g = local_gradients(dofs_->tag, tri().cell(e));
  Bary c = local_coefficients(e);
  Vec out = Vec::Zero(tri().dim());
  for (int i = 0; i < dofs_->local_size; ++i) out += c(i) * g[i];
  return out;
}

double FeFunction::face_mean(int e, int i) const {
  return local_coefficients(e).dot(local_face_means(dofs_->tag, tri().dim(), i));
}

Vec FeFunction::vector_value(int e, const Bary& lambda) const {
  const Simplex& T = tri().cell(e);
  Bary c = local_coefficients(e);
  Vec out = Vec::Zero(T.dim());
  for (int i = 0; i <= T.dim(); ++i) out += eval_rt_basis(T, i, lambda, c(i));
  return out;
}

double FeFunction::normal_component(int e, const Bary& lambda, int j) const {
  const Simplex& T = tri().cell(e);
  Bary c = local_coefficients(e);
  double acc = 0;
  for (int i = 0; i <= T.dim(); ++i) acc += rt_basis_normal(T, i, lambda, j, c(i));
  return acc;
}

double FeFunction::divergence(int e) const {
  return local_coefficients(e).sum() / tri().cell(e).volume();
}

FeFunction interpolate(std::shared_ptr<const DofMap> dofs, const ScalarField& f, int degree) {
  const Triangulation& t = *dofs->tri;
  FeFunction out(dofs);
  auto& c = out.coeffs();
  switch (dofs->tag) {
    case SpaceTag::CR:
    case SpaceTag::CR0:
      for (int fi = 0; fi < t.num_faces(); ++fi) {
        if (dofs->face_dof[fi] < 0) continue;
        const Face& face = t.face(fi);
        int local = face.plus_local;
        c(dofs->face_dof[fi]) = apply_cr_dof(t.cell(face.plus), local, f, degree);
      }
      break;
    case SpaceTag::DCCR:
      for (int e = 0; e < t.num_cells(); ++e)
        for (int i = 0; i <= t.dim(); ++i) c(dofs->cell_dofs[e][i]) = apply_cr_dof(t.cell(e), i, f, degree);
      break;
    case SpaceTag::DC1:
      for (int e = 0; e < t.num_cells(); ++e)
        for (int i = 0; i <= t.dim(); ++i) c(dofs->cell_dofs[e][i]) = f(t.cell(e).vertex(i));
      break;
    case SpaceTag::P0:
      for (int e = 0; e < t.num_cells(); ++e) {
        double acc = 0;
        for (const auto& p : cell_points(t.cell(e), degree)) acc += p.w * f(p.x);
        c(e) = acc / t.cell(e).volume();
      }
      break;
    case SpaceTag::RT0:
      throw PreconditionError("interpolate: use rt_interpolate for RT0");
  }
  return out;
}

FeFunction embed(const FeFunction& f, std::shared_ptr<const DofMap> target) {
  const DofMap& src = f.dofs();
  // rank in the chain CR0 < CR < DCCR, -1 outside it
  auto rank = [](SpaceTag t) {
    return t == SpaceTag::CR0 ? 0 : t == SpaceTag::CR ? 1 : t == SpaceTag::DCCR ? 2 : -1;
  };
  bool same = src.tag == target->tag;
  bool chain = rank(src.tag) >= 0 && rank(src.tag) <= rank(target->tag);
  if (!(same || chain) || src.tri != target->tri)
    throw PreconditionError("embed: incompatible spaces " + to_string(src.tag) + " -> " + to_string(target->tag));
  FeFunction out(target);
  for (int e = 0; e < target->tri->num_cells(); ++e) {
    Bary c = f.local_coefficients(e);
    for (int i = 0; i < target->local_size; ++i) {
      int g = target->cell_dofs[e][i];
      if (g >= 0) out.coeffs()(g) = c(i) * target->cell_signs[e][i];
    }
  }
  return out;
}

}  // namespace aniso
