#include "bidisk/blaschke1d.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "bidisk/errors.hpp"

namespace bidisk {

namespace {

std::vector<cplx> polyMul(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<cplx> c(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

// Taylor coefficients of num/den up to degree n
std::vector<cplx> seriesDivide(const UniPoly& num, const UniPoly& den, int n) {
  std::vector<cplx> f(n + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    cplx acc = k < static_cast<int>(num.coeffs.size()) ? num.coeffs[k] : 0.0;
    for (int j = 1; j <= k && j < static_cast<int>(den.coeffs.size()); ++j) acc -= den.coeffs[j] * f[k - j];
    f[k] = acc / den.coeffs[0];
  }
  return f;
}

cplx kernel(const BlaschkeProduct& phi, cplx w, cplx z) {
  return (1.0 - std::conj(phi.eval(w)) * phi.eval(z)) / (1.0 - std::conj(w) * z);
}

}  // namespace

cplx BlaschkeProduct::eval(cplx z) const {
  cplx v = std::polar(1.0, phase) * std::pow(z, m);
  for (const cplx& l : zeros) v *= (std::abs(l) / l) * (l - z) / (1.0 - std::conj(l) * z);
  return v;
}

UniPoly BlaschkeProduct::numerator() const {
  std::vector<cplx> c(m + 1, 0.0);
  c[m] = std::polar(1.0, phase);
  for (const cplx& l : zeros) {
    const cplx u = std::abs(l) / l;
    c = polyMul(c, {u * l, -u});
  }
  return UniPoly{c};
}

UniPoly BlaschkeProduct::denominator() const {
  std::vector<cplx> c{1.0};
  for (const cplx& l : zeros) c = polyMul(c, {1.0, -std::conj(l)});
  return UniPoly{c};
}

cplx BlaschkeProduct::derivative(cplx z) const {
  const UniPoly n = numerator(), d = denominator();
  auto deriv = [](const UniPoly& p) {
    std::vector<cplx> c;
    for (size_t j = 1; j < p.coeffs.size(); ++j) c.push_back(double(j) * p.coeffs[j]);
    if (c.empty()) c.push_back(0.0);
    return UniPoly{c};
  };
  const cplx dv = d.eval(z);
  return (deriv(n).eval(z) * dv - n.eval(z) * deriv(d).eval(z)) / (dv * dv);
}

BlaschkeProduct makeBlaschke(std::vector<cplx> zeros, int m, double phase) {
  BlaschkeProduct b;
  b.m = m;
  b.phase = phase;
  for (const cplx& l : zeros) {
    if (std::abs(l) >= 1.0) throw DomainError("Blaschke zero outside the open disk");
    if (l == 0.0) ++b.m;
    else b.zeros.push_back(l);
  }
  if (b.m < 0) throw DomainError("negative monomial power");
  return b;
}

double Clark1D::totalWeight() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.weight;
  return s;
}

Clark1D clarkMeasure1d(const BlaschkeProduct& phi, cplx alpha) {
  if (phi.degree() < 1) throw DomainError("constant Blaschke product");
  const UniPoly n = phi.numerator(), d = phi.denominator();
  std::vector<cplx> c(std::max(n.coeffs.size(), d.coeffs.size()), 0.0);
  for (size_t j = 0; j < n.coeffs.size(); ++j) c[j] += n.coeffs[j];
  for (size_t j = 0; j < d.coeffs.size(); ++j) c[j] -= alpha * d.coeffs[j];
  Clark1D out;
  out.alpha = alpha;
  for (cplx z : roots(trimmed(c, 1e-14))) {
    z /= std::abs(z);
    double dphi = phi.m;  // |phi'| on the circle
    for (const cplx& l : phi.zeros) dphi += (1.0 - std::norm(l)) / std::norm(z - l);
    out.atoms.push_back({z, 1.0 / dphi});
  }
  return out;
}

Eigen::MatrixXcd ModelBasis1D::monomialCoefficients(const BlaschkeProduct& phi, int degree) const {
  const std::vector<cplx> F = seriesDivide(phi.numerator(), phi.denominator(), degree);
  const int n = static_cast<int>(points.size());
  Eigen::MatrixXcd K(degree + 1, n);
  for (int j = 0; j < n; ++j) {
    const cplx w = points[j], fw = std::conj(phi.eval(w));
    for (int k = 0; k <= degree; ++k) {
      cplx acc = 0.0;  // (1 - conj(phi(w)) phi) * sum (conj(w) z)^t
      for (int t = 0; t <= k; ++t) acc += ((t == 0 ? 1.0 : 0.0) - fw * F[t]) * std::pow(std::conj(w), k - t);
      K(k, j) = acc;
    }
  }
  return K * coeffs;
}

Eigen::MatrixXcd ModelBasis1D::evaluate(const BlaschkeProduct& phi, const std::vector<cplx>& z) const {
  Eigen::MatrixXcd K(z.size(), points.size());
  for (size_t r = 0; r < z.size(); ++r)
    for (size_t j = 0; j < points.size(); ++j) K(r, j) = kernel(phi, points[j], z[r]);
  return K * coeffs;
}

ModelBasis1D modelBasis1d(const BlaschkeProduct& phi) {
  const int n = phi.degree();
  if (n < 1) throw DomainError("model space of a constant is trivial");
  ModelBasis1D b;
  const double rad = std::pow(0.5, 1.0 / n);
  for (int j = 0; j < n; ++j) b.points.push_back(std::polar(rad, 2.0 * std::numbers::pi * j / n));
  b.gram.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b.gram(i, j) = kernel(phi, b.points[j], b.points[i]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b.gram);
  const auto& ev = es.eigenvalues();
  if (ev(0) <= 0.0) throw PointSelectionError("kernel Gram matrix is not positive definite");
  b.gramCondition = ev(n - 1) / ev(0);
  if (b.gramCondition > 1e12) throw PointSelectionError("kernel Gram matrix is ill-conditioned");
  b.coeffs = es.eigenvectors() * ev.cwiseInverse().cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
  return b;
}

Unitary1D clarkUnitary1d(const BlaschkeProduct& phi, cplx alpha) {
  if (std::abs(phi.eval(0.0)) > 1e-12) throw Phi0Error("rank-one formula needs phi(0) = 0");
  Unitary1D out;
  out.basis = modelBasis1d(phi);
  const auto& w = out.basis.points;
  const int n = static_cast<int>(w.size());
  // kernel coordinates: Sg(i,j) = <z k_j, k_i> = conj((B k_i)(w_j))
  Eigen::MatrixXcd Sg(n, n), R(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cplx bk = (kernel(phi, w[i], w[j]) - kernel(phi, w[i], 0.0)) / w[j];
      Sg(i, j) = std::conj(bk);
      R(i, j) = alpha * std::conj(phi.eval(w[j]) / w[j]);  // alpha <k_j, B phi> <1, k_i>
    }
  const Eigen::MatrixXcd& C = out.basis.coeffs;
  out.S = C.adjoint() * Sg * C;
  out.U = C.adjoint() * (Sg + R) * C;
  return out;
}

double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  auto directed = [](const std::vector<cplx>& x, const std::vector<cplx>& y) {
    double worst = 0.0;
    for (const cplx& p : x) {
      double best = std::numeric_limits<double>::infinity();
      for (const cplx& q : y) best = std::min(best, std::abs(p - q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace bidisk
