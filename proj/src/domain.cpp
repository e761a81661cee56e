#include "barons/domain.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "barons/errors.hpp"

namespace barons {

Polytope::Polytope(const Matrix& a_raw, const Vector& b_raw, const Vector& witness)
    : a_(a_raw), b_(b_raw), witness_(witness) {
  if (b_raw.size() != a_raw.rows()) {
    throw DimensionMismatch("polytope offsets", a_raw.rows(), b_raw.size());
  }
  if (witness.size() != a_raw.cols()) {
    throw DimensionMismatch("polytope witness", a_raw.cols(), witness.size());
  }
  for (Eigen::Index i = 0; i < a_.rows(); ++i) {
    const double n = a_.row(i).norm();
    if (!(n > 1e-12) || !std::isfinite(n)) {
      throw ZeroRow("constraint row " + std::to_string(i) + " has zero norm");
    }
    a_.row(i) /= n;
    b_[i] /= n;
  }
  const Vector s = a_ * witness_ - b_;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (!(s[i] > 0.0)) {
      throw InfeasibleWitness("witness has slack " + std::to_string(s[i]) +
                              " on constraint " + std::to_string(i));
    }
  }
}

Vector slacks(const Polytope& p, const Vector& w) {
  if (w.size() != p.dimension()) throw DimensionMismatch("slacks", p.dimension(), w.size());
  return p.normals() * w - p.offsets();
}

bool is_strictly_feasible(const Polytope& p, const Vector& w, double margin) {
  if (w.size() != p.dimension() || !w.allFinite()) return false;
  return slacks(p, w).minCoeff() > margin;
}

Vector shrink_toward(const Vector& w, double c, const Vector& w_star) {
  return (1.0 - c) * w + c * w_star;
}

Polytope build_box(int d, double lo, double hi) {
  if (d < 1) throw InvalidBounds("box dimension must be positive");
  if (!(hi > lo)) throw InvalidBounds("box requires hi > lo");
  Matrix a = Matrix::Zero(2 * d, d);
  Vector b(2 * d);
  for (int i = 0; i < d; ++i) {
    a(i, i) = 1.0;
    b[i] = lo;
    a(d + i, i) = -1.0;
    b[d + i] = -hi;
  }
  return Polytope(a, b, Vector::Constant(d, 0.5 * (lo + hi)));
}

Polytope build_reduced_simplex(int d) {
  if (d < 2) throw InvalidBounds("reduced simplex needs at least two assets");
  const int k = d - 1;
  Matrix a = Matrix::Zero(d, k);
  Vector b = Vector::Zero(d);
  a.topRows(k).setIdentity();
  a.row(k).setConstant(-1.0);
  b[k] = -1.0;
  return Polytope(a, b, Vector::Constant(k, 1.0 / d));
}

Vector lift_reduced_simplex(const Vector& reduced) {
  Vector full(reduced.size() + 1);
  full.head(reduced.size()) = reduced;
  full[reduced.size()] = 1.0 - reduced.sum();
  return full;
}

Polytope read_polytope(std::istream& in) {
  long m = 0;
  long d = 0;
  if (!(in >> m >> d) || m < 1 || d < 1) throw IoError("polytope: bad header, expected \"m d\"");
  Matrix a(m, d);
  Vector b(m);
  for (long i = 0; i < m; ++i) {
    for (long j = 0; j < d; ++j) {
      if (!(in >> a(i, j))) throw IoError("polytope: truncated constraint row " + std::to_string(i));
    }
    if (!(in >> b[i])) throw IoError("polytope: missing offset on row " + std::to_string(i));
  }
  Vector witness(d);
  for (long j = 0; j < d; ++j) {
    if (!(in >> witness[j])) throw IoError("polytope: truncated witness line");
  }
  return Polytope(a, b, witness);
}

Polytope read_polytope_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open domain file " + path);
  return read_polytope(in);
}

void write_polytope(std::ostream& out, const Polytope& p) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << p.num_constraints() << ' ' << p.dimension() << '\n';
  for (Eigen::Index i = 0; i < p.num_constraints(); ++i) {
    for (Eigen::Index j = 0; j < p.dimension(); ++j) out << p.normals()(i, j) << ' ';
    out << p.offsets()[i] << '\n';
  }
  for (Eigen::Index j = 0; j < p.dimension(); ++j) {
    out << p.witness()[j] << (j + 1 < p.dimension() ? ' ' : '\n');
  }
  out.precision(old);
}

}  // namespace barons
