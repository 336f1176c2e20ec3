#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include "hypermoment/assembly.hpp"
#include "hypermoment/hermite.hpp"
#include "hypermoment/moment_state.hpp"
#include "hypermoment/multi_index.hpp"

namespace hypermoment {

// Eigenvalues of the flux Jacobian come in families u1 + C*sqrt(theta) where
// C runs over the roots of a Hermite polynomial.  Each family is labelled by
// a transverse multi-index (the last D-1 components); the family whose label
// has grade s uses the Hermite polynomial of degree M+1-s.
struct WaveClass {
  MultiIndex hat;
  int ordinal;
  int hermite_degree;
};

inline std::vector<WaveClass> wave_classes(int D, int M) {
  auto hats = enumerate_indices(D - 1, M);
  std::vector<WaveClass> out;
  out.reserve(hats.size());
  for (std::size_t i = 0; i < hats.size(); ++i)
    out.push_back({hats[i], static_cast<int>(i) + 1, M + 1 - grade(hats[i])});
  return out;
}

template <typename Scalar>
std::vector<std::pair<Scalar, int>> analytic_eigenvalues(
    const MomentState<Scalar>& s) {
  detail::validate_admissible(s.D, s.M, s.rho, s.theta);
  Scalar root_scale = std::sqrt(s.theta);
  std::vector<std::pair<Scalar, int>> out;
  for (int k = 1; k <= s.M + 1; ++k) {
    int mult = hermite_factor_multiplicity(s.D, s.M, k);
    for (Scalar c : hermite_roots<Scalar>(k))
      out.emplace_back(s.u(0) + c * root_scale, mult);
  }
  return out;
}

namespace detail {

// Closing the moment chain forces one linear condition per transverse class
// on the free parameters v.  In the graded class order the conditions form a
// unit lower triangular system; the class being built keeps gate value 1
// (its Hermite factor vanishes at the chosen root) and all others get 0.
template <typename Scalar, typename G>
DenseMatrix<Scalar> parameter_matrix(int D, int M, const G& g, Scalar lambda) {
  auto hats = enumerate_indices(D - 1, M);
  int nv = static_cast<int>(hats.size());
  DenseMatrix<Scalar> B = DenseMatrix<Scalar>::Identity(nv, nv);
  const auto& hat_table = index_table(D - 1, M);
  for (int row = 0; row < nv; ++row) {
    const MultiIndex& h = hats[row];
    int s = grade(h);
    if (s == 2) {
      for (int c : h)
        if (c == 2) B(row, 0) = Scalar(-0.5);
      continue;
    }
    if (s < 3) continue;
    MultiIndex full(D, 0);
    for (int d = 1; d < D; ++d) full[d] = h[d - 1];
    Scalar ssum = 0;
    for (int i = 0; i < D; ++i) ssum += g(shifted(full, i, -2));
    B(row, 0) = ssum * (lambda * lambda / (2 * D) - Scalar(0.5));
    for (int d = 2; d <= D; ++d) {
      Scalar gd = g(shifted(full, d - 1, -1));
      int ucol = static_cast<int>(hat_table.position(unit_index(D - 1, d - 2)));
      B(row, ucol) += gd;
      MultiIndex twohat(D - 1, 0);
      twohat[d - 2] = 2;
      B(row, static_cast<int>(hat_table.position(twohat))) += ssum / Scalar(D);
    }
  }
  return B;
}

template <typename Scalar, typename G>
DenseVector<Scalar> class_parameters(int D, int M, const G& g, int ordinal,
                                     Scalar lambda) {
  DenseMatrix<Scalar> B = parameter_matrix(D, M, g, lambda);
  DenseVector<Scalar> rhs = DenseVector<Scalar>::Zero(B.rows());
  rhs(ordinal - 1) = Scalar(1);
  return B.template triangularView<Eigen::UnitLower>().solve(rhs);
}

// Scaled eigenvector for Hermite root lambda: the slots whose first index
// component is zero are seeded from v, the low order slots in the first
// direction follow from the conservative part, and everything else comes
// from one pass of the moment recurrence.  Works on a plain g accessor so
// the finite volume path can reuse it without building a state.
template <typename Scalar, typename G>
DenseVector<Scalar> scaled_eigenvector(int D, int M, const G& g,
                                       const MultiIndex& hat_index,
                                       Scalar lambda) {
  const auto& table = index_table(D, M);
  const auto& hat_table = index_table(D - 1, M);
  int N = static_cast<int>(table.size());
  DenseVector<Scalar> v = class_parameters(
      D, M, g, static_cast<int>(hat_table.position(hat_index)) + 1, lambda);

  DenseVector<Scalar> r = DenseVector<Scalar>::Zero(N);
  auto at = [&](const MultiIndex& a) -> Scalar& {
    return r(static_cast<int>(table.position(a)));
  };
  for (const MultiIndex& a : table.indices())
    if (a[0] == 0) at(a) = v(static_cast<int>(hat_table.position(hat(a))));

  auto r_u = [&](int d) -> Scalar {
    if (d == 1) return lambda * v(0);
    return r(static_cast<int>(table.position(unit_index(D, d - 1))));
  };
  at(unit_index(D, 0)) = lambda * v(0);
  at(shifted(MultiIndex(D, 0), 0, 2)) = lambda * lambda * v(0) / 2;
  for (int d = 2; d <= D; ++d) {
    MultiIndex mixed = shifted(unit_index(D, d - 1), 0, 1);
    at(mixed) = lambda * r_u(d);
  }
  Scalar second_sum = 0;
  for (int d = 0; d < D; ++d)
    second_sum += r(static_cast<int>(table.position(shifted(MultiIndex(D, 0), d, 2))));

  auto r_f = [&](const MultiIndex& b) -> Scalar {
    int gb = grade(b);
    if (gb == 0) return v(0);
    if (gb == 1) return Scalar(0);
    if (gb == 2) {
      bool pure = false;
      for (int c : b) pure = pure || c == 2;
      if (pure)
        return r(static_cast<int>(table.position(b))) - second_sum / Scalar(D);
    }
    return r(static_cast<int>(table.position(b)));
  };
  Scalar csigma = second_sum / Scalar(D) - v(0) / 2;
  auto big_g = [&](const MultiIndex& a) -> Scalar {
    Scalar acc = 0;
    Scalar ssum = 0;
    for (int d = 0; d < D; ++d) {
      acc += g(shifted(a, d, -1)) * r_u(d + 1);
      ssum += g(shifted(a, d, -2));
    }
    return acc + csigma * ssum;
  };

  for (const MultiIndex& a : table.indices()) {
    if (a[0] == 0 || grade(a) < 3) continue;
    MultiIndex tl = tilde(a);
    Scalar head = hermite_value(a[0], lambda) / Scalar(factorial(a[0]));
    at(a) = head * (r_f(tl) + big_g(tl)) - big_g(a);
  }
  return r;
}

template <typename Scalar>
auto state_g_accessor(const MomentState<Scalar>& s) {
  return [&s](const MultiIndex& a) -> Scalar {
    for (int c : a)
      if (c < 0) return Scalar(0);
    if (grade(a) > s.M) return Scalar(0);
    return scaled_coeff(s, a);
  };
}

}  // namespace detail

template <typename Scalar>
DenseVector<Scalar> class_parameter_vector(const MomentState<Scalar>& s,
                                           int ordinal, Scalar lambda) {
  return detail::class_parameters(s.D, s.M, detail::state_g_accessor(s),
                                  ordinal, lambda);
}

// Eigenvector of the regularized flux Jacobian for the eigenvalue
// u1 + c*sqrt(theta), c the root_index-th ascending root of the Hermite
// polynomial of degree M + 1 - |hat_index|.  Indexing is 1-based.
template <typename Scalar>
DenseVector<Scalar> analytic_eigenvector(const MomentState<Scalar>& s,
                                         const MultiIndex& hat_index,
                                         int root_index) {
  detail::validate_admissible(s.D, s.M, s.rho, s.theta);
  int k = s.M + 1 - grade(hat_index);
  if (root_index < 1 || root_index > k)
    throw ValidationError("root index out of range");
  Scalar c = hermite_roots<Scalar>(k)[root_index - 1];
  DenseVector<Scalar> r = detail::scaled_eigenvector(
      s.D, s.M, detail::state_g_accessor(s), hat_index, c);
  return r.cwiseQuotient(scaling_diagonal(s));
}

// Raw-coefficient entry point used by the finite volume scheme: reads
// rho/theta/moments straight from a coefficient vector without validation.
template <typename Scalar>
DenseVector<Scalar> eigenvector_from_w(int D, int M,
                                       const DenseVector<Scalar>& w,
                                       const MultiIndex& hat_index, Scalar c) {
  const auto& table = index_table(D, M);
  Scalar rho = w(0);
  Scalar theta = 0;
  for (int d = 0; d < D; ++d)
    theta += w(static_cast<int>(table.position(shifted(MultiIndex(D, 0), d, 2))));
  theta *= Scalar(2) / (Scalar(D) * rho);
  auto g = [&](const MultiIndex& a) -> Scalar {
    for (int cpt : a)
      if (cpt < 0) return Scalar(0);
    int m = grade(a);
    if (m == 0) return Scalar(1);
    if (m == 1 || m > M) return Scalar(0);
    Scalar raw = w(static_cast<int>(table.position(a)));
    if (m == 2)
      for (int cpt : a)
        if (cpt == 2) raw -= rho * theta / 2;
    return raw / (rho * std::pow(theta, Scalar(m) / 2));
  };
  DenseVector<Scalar> r = detail::scaled_eigenvector(D, M, g, hat_index, c);
  DenseVector<Scalar> d(static_cast<int>(table.size()));
  for (const MultiIndex& a : table.indices()) {
    int m = grade(a);
    int pos = static_cast<int>(table.position(a));
    d(pos) = m == 1 ? Scalar(1) / std::sqrt(theta)
                    : Scalar(1) / (rho * std::pow(theta, Scalar(m) / 2));
  }
  return r.cwiseQuotient(d);
}

template <typename Scalar>
struct SpectralDecomposition {
  DenseMatrix<Scalar> eigenvectors;
  std::vector<Scalar> eigenvalues;
  std::vector<int> class_ordinal;
  std::vector<int> root_index;
  std::vector<MultiIndex> hat;
};

template <typename Scalar>
SpectralDecomposition<Scalar> spectral_decomposition(
    const MomentState<Scalar>& s) {
  detail::validate_admissible(s.D, s.M, s.rho, s.theta);
  int N = state_size(s.D, s.M);
  SpectralDecomposition<Scalar> out;
  out.eigenvectors.resize(N, N);
  Scalar root_scale = std::sqrt(s.theta);
  int col = 0;
  for (const WaveClass& wc : wave_classes(s.D, s.M)) {
    auto roots = hermite_roots<Scalar>(wc.hermite_degree);
    for (int i = 1; i <= wc.hermite_degree; ++i) {
      out.eigenvectors.col(col) = analytic_eigenvector(s, wc.hat, i);
      out.eigenvalues.push_back(s.u(0) + roots[i - 1] * root_scale);
      out.class_ordinal.push_back(wc.ordinal);
      out.root_index.push_back(i);
      out.hat.push_back(wc.hat);
      ++col;
    }
  }
  return out;
}

template <typename Scalar>
struct HyperbolicityReport {
  bool hyperbolic = true;
  Scalar max_imaginary = 0;
  Scalar condition = 0;
  std::vector<std::complex<Scalar>> offending;
};

template <typename Scalar>
HyperbolicityReport<Scalar> hyperbolicity_report(const DenseMatrix<Scalar>& A) {
  if (A.rows() != A.cols()) throw ValidationError("matrix must be square");
  HyperbolicityReport<Scalar> out;
  Eigen::EigenSolver<DenseMatrix<Scalar>> es(A);
  Scalar radius = es.eigenvalues().cwiseAbs().maxCoeff();
  Scalar imag_tol =
      tolerance("HYPERBOLIC", 1e-8) * std::max(radius, Scalar(1e-30));
  for (int i = 0; i < A.rows(); ++i) {
    std::complex<Scalar> lam = es.eigenvalues()(i);
    out.max_imaginary = std::max(out.max_imaginary, std::abs(lam.imag()));
    if (std::abs(lam.imag()) > imag_tol) {
      out.hyperbolic = false;
      out.offending.push_back(lam);
    }
  }
  Eigen::JacobiSVD<DenseMatrix<std::complex<Scalar>>> svd(es.eigenvectors());
  Scalar smin = svd.singularValues()(A.rows() - 1);
  Scalar smax = svd.singularValues()(0);
  out.condition = smin > Scalar(0) ? smax / smin
                                   : std::numeric_limits<Scalar>::infinity();
  if (!(out.condition < Scalar(1e12))) out.hyperbolic = false;
  return out;
}

}  // namespace hypermoment
