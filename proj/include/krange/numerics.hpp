#pragma once

// Dense Hermitian linear algebra: cyclic Jacobi diagonalization and the
// spectral function calculus built on it. Everything here is templated on
// the real scalar type; the rest of the library uses the double aliases.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <vector>

#include "krange/errors.hpp"

namespace krange {

template <typename Real>
using MatrixX = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using VectorX = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RealVectorX = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using Matrix = MatrixX<double>;
using Vector = VectorX<double>;
using RealVector = RealVectorX<double>;
using Index = Eigen::Index;

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors
/// (as columns), so that A = V diag(eigenvalues) V*.
template <typename Real>
struct SpectralDecomposition {
  RealVectorX<Real> eigenvalues;
  MatrixX<Real> eigenvectors;

  Index size() const { return eigenvalues.size(); }

  MatrixX<Real> reconstruct() const {
    return eigenvectors * eigenvalues.template cast<std::complex<Real>>().asDiagonal() *
           eigenvectors.adjoint();
  }
};

struct JacobiOptions {
  int max_sweeps = 30;
  double off_tol = 1e-12;  // stop when |offdiag(A)|_F <= off_tol * |A|_F
};

template <typename Real>
void require_finite(const MatrixX<Real>& a, const char* what) {
  if (!a.allFinite()) throw Error(ErrorKind::NonFinite, std::string(what) + ": non-finite entry");
}

/// |A - A*|_F
template <typename Real>
Real hermitian_defect(const MatrixX<Real>& a) {
  return (a - a.adjoint()).norm();
}

template <typename Real>
bool is_hermitian(const MatrixX<Real>& a, Real rel_tol = Real(1e-10)) {
  return a.rows() == a.cols() && hermitian_defect(a) <= rel_tol * std::max(Real(1), a.norm());
}

/// Cyclic complex Jacobi. Each rotation is conjugated by the phase of the
/// pivot so the 2x2 subproblem is real symmetric.
template <typename Real>
SpectralDecomposition<Real> hermitian_eig(const MatrixX<Real>& input, const JacobiOptions& options = {}) {
  using C = std::complex<Real>;
  if (input.rows() != input.cols()) throw Error(ErrorKind::ShapeMismatch, "hermitian_eig: matrix is not square");
  require_finite(input, "hermitian_eig");
  const Real scale = input.norm();
  if (hermitian_defect(input) > Real(1e-10) * std::max(Real(1), scale))
    throw Error(ErrorKind::NotHermitian, "hermitian_eig: |A - A*|_F exceeds 1e-10 max(1, |A|_F)");

  const Index n = input.rows();
  MatrixX<Real> a = (input + input.adjoint()) / Real(2);
  for (Index i = 0; i < n; ++i) a(i, i) = C(a(i, i).real(), Real(0));
  MatrixX<Real> v = MatrixX<Real>::Identity(n, n);

  auto off_norm = [&] {
    Real s = 0;
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  const Real threshold = Real(options.off_tol) * scale;
  int sweeps = 0;
  while (off_norm() > threshold) {
    if (sweeps++ == options.max_sweeps)
      throw Error(ErrorKind::NoConvergence, "hermitian_eig: sweep budget exhausted");
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const Real apq = std::abs(a(p, q));
        if (apq == Real(0)) continue;
        const C phase = a(p, q) / apq;
        const Real app = a(p, p).real();
        const Real aqq = a(q, q).real();
        const Real tau = (aqq - app) / (Real(2) * apq);
        Real t;
        if (std::abs(tau) > Real(1e150)) {
          t = Real(1) / (Real(2) * tau);
        } else {
          t = (tau >= 0 ? Real(1) : Real(-1)) / (std::abs(tau) + std::sqrt(Real(1) + tau * tau));
        }
        const Real c = Real(1) / std::sqrt(Real(1) + t * t);
        const Real s = t * c;
        const C sp = s * phase;             // s e^{i phi}
        const C sm = s * std::conj(phase);  // s e^{-i phi}

        // A <- A U, then A <- U* A, with U = [[c, sp], [-sm, c]] on (p, q).
        for (Index k = 0; k < n; ++k) {
          const C kp = a(k, p), kq = a(k, q);
          a(k, p) = c * kp - sm * kq;
          a(k, q) = sp * kp + c * kq;
        }
        for (Index k = 0; k < n; ++k) {
          const C pk = a(p, k), qk = a(q, k);
          a(p, k) = c * pk - sp * qk;
          a(q, k) = sm * pk + c * qk;
        }
        a(p, q) = a(q, p) = C(0);
        a(p, p) = C(app - t * apq, 0);
        a(q, q) = C(aqq + t * apq, 0);
        for (Index k = 0; k < n; ++k) {
          const C kp = v(k, p), kq = v(k, q);
          v(k, p) = c * kp - sm * kq;
          v(k, q) = sp * kp + c * kq;
        }
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return a(i, i).real() < a(j, j).real(); });

  SpectralDecomposition<Real> out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = a(order[k], order[k]).real();
    out.eigenvectors.col(k) = v.col(order[k]);
  }
  return out;
}

/// f(A) = sum_i f(lambda_i) P_i for a real-valued f.
template <typename Real, typename F>
MatrixX<Real> apply_spectral_function(const SpectralDecomposition<Real>& d, F&& f) {
  RealVectorX<Real> values(d.size());
  for (Index i = 0; i < d.size(); ++i) values(i) = static_cast<Real>(f(d.eigenvalues(i)));
  return d.eigenvectors * values.template cast<std::complex<Real>>().asDiagonal() * d.eigenvectors.adjoint();
}

template <typename Real>
void require_psd(const SpectralDecomposition<Real>& d, Real tol_psd, const char* what) {
  if (d.size() > 0 && d.eigenvalues(0) < -tol_psd)
    throw Error(ErrorKind::NotPSD, std::string(what) + ": eigenvalue " + std::to_string(d.eigenvalues(0)) +
                                       " below -tol_psd");
}

/// Square root of a Hermitian PSD matrix. Eigenvalues in [-tol_psd, 0) are clamped.
template <typename Real>
MatrixX<Real> sqrt_psd(const SpectralDecomposition<Real>& d, Real tol_psd = Real(1e-9)) {
  require_psd(d, tol_psd, "sqrt_psd");
  return apply_spectral_function(d, [](Real x) { return std::sqrt(std::max(x, Real(0))); });
}

template <typename Real>
MatrixX<Real> sqrt_psd(const MatrixX<Real>& a, Real tol_psd = Real(1e-9)) {
  return sqrt_psd(hermitian_eig(a), tol_psd);
}

/// max(rel * lambda_max, floor): the default kernel cutoff.
template <typename Real>
Real default_rank_tol(Real largest, Real rel = Real(1e-10), Real floor = Real(1e-14)) {
  return std::max(rel * std::max(largest, Real(0)), floor);
}

/// Pseudo-inverse of a Hermitian PSD matrix; eigenvalues <= rank_tol count as 0.
template <typename Real>
MatrixX<Real> pinv_psd(const SpectralDecomposition<Real>& d, std::optional<Real> rank_tol = std::nullopt,
                       Real tol_psd = Real(1e-9)) {
  require_psd(d, tol_psd, "pinv_psd");
  const Real largest = d.size() > 0 ? d.eigenvalues(d.size() - 1) : Real(0);
  const Real cut = rank_tol.value_or(default_rank_tol(largest));
  return apply_spectral_function(d, [cut](Real x) { return x > cut ? Real(1) / x : Real(0); });
}

template <typename Real>
MatrixX<Real> pinv_psd(const MatrixX<Real>& a, std::optional<Real> rank_tol = std::nullopt,
                       Real tol_psd = Real(1e-9)) {
  return pinv_psd(hermitian_eig(a), rank_tol, tol_psd);
}

/// E((eps, inf)): projection onto eigenvectors with eigenvalue strictly above
/// eps. Eigenvalues within `tie` of eps are treated as <= eps.
template <typename Real>
MatrixX<Real> spectral_projector(const SpectralDecomposition<Real>& d, Real eps, Real tie = Real(1e-12)) {
  if (!(eps >= Real(0))) throw Error(ErrorKind::InvalidArgument, "spectral_projector: eps must be >= 0");
  return apply_spectral_function(d, [eps, tie](Real x) { return x > eps + tie ? Real(1) : Real(0); });
}

/// Eigenvectors whose eigenvalue exceeds `cut`, as columns.
template <typename Real>
MatrixX<Real> eigenvectors_above(const SpectralDecomposition<Real>& d, Real cut) {
  Index first = 0;
  while (first < d.size() && !(d.eigenvalues(first) > cut)) ++first;
  return d.eigenvectors.rightCols(d.size() - first);
}

/// Largest singular value, from the top eigenvalue of A*A.
template <typename Real>
Real operator_norm(const MatrixX<Real>& a) {
  if (a.size() == 0) return Real(0);
  const MatrixX<Real> gram = a.adjoint() * a;
  const auto d = hermitian_eig<Real>(gram);
  return std::sqrt(std::max(d.eigenvalues(d.size() - 1), Real(0)));
}

/// Nonzero singular triplets A = U diag(sigma) V*, obtained by diagonalizing
/// the Hermitian embedding [[0, A], [A*, 0]] whose eigenvalues are +-sigma.
/// This keeps singular values to absolute accuracy eps|A| instead of the
/// eps|A|^2 a Gram-matrix route would give.
template <typename Real>
struct SingularTriplets {
  MatrixX<Real> u;           // rows(A) x r, orthonormal columns
  RealVectorX<Real> sigma;   // r, ascending
  MatrixX<Real> v;           // cols(A) x r, orthonormal columns
  Real largest = Real(0);    // sigma_max, including the discarded part
  Real cutoff = Real(0);

  Index rank() const { return sigma.size(); }
};

template <typename Real>
SingularTriplets<Real> singular_triplets(const MatrixX<Real>& a, Real rel = Real(1e-10), Real floor = Real(1e-14)) {
  require_finite(a, "singular_triplets");
  const Index m = a.rows(), n = a.cols();
  MatrixX<Real> embedding = MatrixX<Real>::Zero(m + n, m + n);
  embedding.topRightCorner(m, n) = a;
  embedding.bottomLeftCorner(n, m) = a.adjoint();
  const auto d = hermitian_eig(embedding);

  SingularTriplets<Real> out;
  out.largest = d.size() > 0 ? std::max(d.eigenvalues(d.size() - 1), Real(0)) : Real(0);
  out.cutoff = default_rank_tol(out.largest, rel, floor);
  const MatrixX<Real> top = eigenvectors_above(d, out.cutoff);
  const Index r = top.cols();
  const Real root2 = std::sqrt(Real(2));
  out.u = root2 * top.topRows(m);
  out.v = root2 * top.bottomRows(n);
  out.sigma = d.eigenvalues.tail(r);
  return out;
}

/// Orthonormal basis of the column span by modified Gram-Schmidt, run twice.
/// Throws DegenerateBasis when the column-normalized input has smallest
/// singular value <= min_sigma.
template <typename Real>
MatrixX<Real> orthonormalize(const MatrixX<Real>& b, Real min_sigma = Real(1e-10)) {
  require_finite(b, "orthonormalize");
  const Index k = b.cols();
  MatrixX<Real> q = b;
  for (Index j = 0; j < k; ++j) {
    const Real len = q.col(j).norm();
    if (!(len > Real(0))) throw Error(ErrorKind::DegenerateBasis, "orthonormalize: zero column");
    q.col(j) /= len;
  }
  if (k > 0) {
    const MatrixX<Real> gram = q.adjoint() * q;
    const auto d = hermitian_eig<Real>(gram);
    if (!(std::sqrt(std::max(d.eigenvalues(0), Real(0))) > min_sigma))
      throw Error(ErrorKind::DegenerateBasis, "orthonormalize: columns are numerically dependent");
  }
  for (int pass = 0; pass < 2; ++pass) {
    for (Index j = 0; j < k; ++j) {
      for (Index i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
      q.col(j).normalize();
    }
  }
  return q;
}

}  // namespace krange
