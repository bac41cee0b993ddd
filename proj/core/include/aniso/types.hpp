#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>

namespace aniso {

/// Points and vectors in R^d, d <= 3. Dynamic size, stack storage.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;
/// Barycentric coordinates, d+1 <= 4 entries.
using Bary = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>;
/// Small dense matrices (affine factors, barycentric maps), at most 4x4.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 4, 4>;

/// Extended precision used for element geometry on needle and sliver shapes.
using Real = long double;
using VecL = Eigen::Matrix<Real, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;
using MatL = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 4, 4>;

using ScalarField = std::function<double(const Vec&)>;
using VectorField = std::function<Vec(const Vec&)>;
using MatrixField = std::function<Mat(const Vec&)>;

/// Scalar field together with its gradient.
struct SmoothScalar {
  ScalarField value;
  VectorField gradient;
};

/// Vector field together with its Jacobian (row i = gradient of component i).
struct SmoothVector {
  VectorField value;
  MatrixField jacobian;

  double divergence(const Vec& x) const { return jacobian(x).trace(); }
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class MeshError : public Error {
 public:
  enum class Kind { IndexOutOfRange, RepeatedVertex, Degenerate, Nonconforming };

  MeshError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A ratio whose denominator vanishes while the numerator does not.
class UndefinedRatio : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace aniso
