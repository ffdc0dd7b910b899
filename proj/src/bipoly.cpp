#include "bidisk/bipoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "bidisk/errors.hpp"

namespace bidisk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool rowZero(const Eigen::MatrixXcd& c, Eigen::Index r, double thresh) {
  for (Eigen::Index j = 0; j < c.cols(); ++j)
    if (std::abs(c(r, j)) > thresh) return false;
  return true;
}

bool colZero(const Eigen::MatrixXcd& c, Eigen::Index col, double thresh) {
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    if (std::abs(c(i, col)) > thresh) return false;
  return true;
}

}  // namespace

cplx UniPoly::eval(cplx z) const {
  cplx acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

UniPoly trimmed(std::vector<cplx> c, double rel) {
  double m = 0.0;
  for (const auto& v : c) m = std::max(m, std::abs(v));
  if (m == 0.0) return {};
  const double thresh = rel * m;
  while (!c.empty() && std::abs(c.back()) <= thresh) c.pop_back();
  return UniPoly{std::move(c)};
}

BiPoly::BiPoly() : c_(Eigen::MatrixXcd::Zero(1, 1)) {}

BiPoly::BiPoly(Eigen::MatrixXcd coeffs) : c_(std::move(coeffs)) {
  if (c_.rows() == 0 || c_.cols() == 0) throw DomainError("empty coefficient array");
  if (c_.isZero(0.0)) {
    c_ = Eigen::MatrixXcd::Zero(1, 1);
    return;
  }
  if (c_.rows() > 1 && rowZero(c_, c_.rows() - 1, 0.0))
    throw DomainError("declared z1-degree not attained");
  if (c_.cols() > 1 && colZero(c_, c_.cols() - 1, 0.0))
    throw DomainError("declared z2-degree not attained");
}

BiPoly::BiPoly(int n1, int n2, const std::vector<cplx>& rowMajor) {
  if (n1 < 0 || n2 < 0) throw DomainError("negative bidegree");
  if (rowMajor.size() != static_cast<size_t>((n1 + 1) * (n2 + 1)))
    throw DomainError("coefficient count does not match bidegree");
  Eigen::MatrixXcd c(n1 + 1, n2 + 1);
  for (int k = 0; k <= n1; ++k)
    for (int l = 0; l <= n2; ++l) c(k, l) = rowMajor[k * (n2 + 1) + l];
  *this = BiPoly(std::move(c));
}

BiPoly BiPoly::constant(cplx c) {
  Eigen::MatrixXcd m(1, 1);
  m(0, 0) = c;
  return BiPoly(m);
}

BiPoly BiPoly::monomial(int k, int l, cplx c) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(k + 1, l + 1);
  m(k, l) = c;
  return BiPoly(m);
}

BiPoly BiPoly::fromTrimmed(const Eigen::MatrixXcd& coeffs, double rel) {
  double m = coeffs.size() ? coeffs.cwiseAbs().maxCoeff() : 0.0;
  if (m == 0.0) return BiPoly();
  const double thresh = rel * m;
  Eigen::Index r = coeffs.rows(), c = coeffs.cols();
  while (r > 1 && rowZero(coeffs.topLeftCorner(r, c), r - 1, thresh)) --r;
  while (c > 1 && colZero(coeffs.topLeftCorner(r, c), c - 1, thresh)) --c;
  BiPoly p;
  p.c_ = coeffs.topLeftCorner(r, c);
  return p;
}

cplx BiPoly::operator()(int k, int l) const {
  if (k < 0 || l < 0 || k > n1() || l > n2()) return 0.0;
  return c_(k, l);
}

bool BiPoly::isZero() const { return c_.isZero(0.0); }

double BiPoly::scale() const { return c_.cwiseAbs().maxCoeff(); }

cplx BiPoly::eval(cplx z1, cplx z2) const {
  cplx acc = 0.0;
  for (Eigen::Index k = c_.rows() - 1; k >= 0; --k) {
    cplx row = 0.0;
    for (Eigen::Index l = c_.cols() - 1; l >= 0; --l) row = row * z2 + c_(k, l);
    acc = acc * z1 + row;
  }
  return acc;
}

BiPoly BiPoly::swapped() const {
  BiPoly p;
  p.c_ = c_.transpose();
  return p;
}

BiPoly operator+(const BiPoly& a, const BiPoly& b) {
  const Eigen::Index r = std::max(a.c_.rows(), b.c_.rows());
  const Eigen::Index c = std::max(a.c_.cols(), b.c_.cols());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(r, c);
  m.topLeftCorner(a.c_.rows(), a.c_.cols()) += a.c_;
  m.topLeftCorner(b.c_.rows(), b.c_.cols()) += b.c_;
  return BiPoly::fromTrimmed(m, 0.0);
}

BiPoly operator-(const BiPoly& a, const BiPoly& b) { return a + cplx(-1.0) * b; }

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(a.c_.rows() + b.c_.rows() - 1,
                                              a.c_.cols() + b.c_.cols() - 1);
  for (Eigen::Index i = 0; i < a.c_.rows(); ++i)
    for (Eigen::Index j = 0; j < a.c_.cols(); ++j) {
      if (a.c_(i, j) == 0.0) continue;
      m.block(i, j, b.c_.rows(), b.c_.cols()) += a.c_(i, j) * b.c_;
    }
  return BiPoly::fromTrimmed(m, 0.0);
}

BiPoly operator*(cplx s, const BiPoly& a) { return BiPoly::fromTrimmed(s * a.c_, 0.0); }

cplx eval(const BiPoly& p, cplx z1, cplx z2) { return p.eval(z1, z2); }

BiPoly reflect(const BiPoly& p) {
  if (p.isZero()) throw DomainError("reflection of the zero polynomial");
  const int n1 = p.n1(), n2 = p.n2();
  Eigen::MatrixXcd m(n1 + 1, n2 + 1);
  for (int k = 0; k <= n1; ++k)
    for (int l = 0; l <= n2; ++l) m(k, l) = std::conj(p(n1 - k, n2 - l));
  return BiPoly::fromTrimmed(m, 0.0);
}

BiPoly partial(const BiPoly& p, int axis) {
  const auto& c = p.coeffs();
  if (axis == 1) {
    if (c.rows() == 1) return BiPoly();
    Eigen::MatrixXcd m(c.rows() - 1, c.cols());
    for (Eigen::Index k = 1; k < c.rows(); ++k) m.row(k - 1) = double(k) * c.row(k);
    return BiPoly::fromTrimmed(m, 0.0);
  }
  if (axis == 2) {
    if (c.cols() == 1) return BiPoly();
    Eigen::MatrixXcd m(c.rows(), c.cols() - 1);
    for (Eigen::Index l = 1; l < c.cols(); ++l) m.col(l - 1) = double(l) * c.col(l);
    return BiPoly::fromTrimmed(m, 0.0);
  }
  throw DomainError("axis must be 1 or 2");
}

UniPoly slice(const BiPoly& p, int axis, cplx xi) {
  const auto& c = p.coeffs();
  std::vector<cplx> out;
  double reach = 1.0;
  if (axis == 1) {
    out.assign(c.cols(), 0.0);
    for (Eigen::Index l = 0; l < c.cols(); ++l) {
      cplx acc = 0.0;
      for (Eigen::Index k = c.rows() - 1; k >= 0; --k) acc = acc * xi + c(k, l);
      out[l] = acc;
    }
    reach = std::pow(std::max(1.0, std::abs(xi)), static_cast<double>(p.n1()));
  } else if (axis == 2) {
    out.assign(c.rows(), 0.0);
    for (Eigen::Index k = 0; k < c.rows(); ++k) {
      cplx acc = 0.0;
      for (Eigen::Index l = c.cols() - 1; l >= 0; --l) acc = acc * xi + c(k, l);
      out[k] = acc;
    }
    reach = std::pow(std::max(1.0, std::abs(xi)), static_cast<double>(p.n2()));
  } else {
    throw DomainError("axis must be 1 or 2");
  }
  const double thresh = 1e-12 * p.scale() * reach;
  while (!out.empty() && std::abs(out.back()) <= thresh) out.pop_back();
  return UniPoly{std::move(out)};
}

double argPositive(cplx z) {
  double a = std::arg(z);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

double argCentered(double theta) {
  double t = std::remainder(theta, kTwoPi);
  if (t <= -std::numbers::pi) t += kTwoPi;
  return t;
}

std::vector<cplx> roots(const UniPoly& q) {
  if (q.isZero()) throw DomainError("roots of the zero polynomial");
  const int n = q.degree();
  std::vector<cplx> r;
  if (n == 0) return r;
  const cplx lead = q.coeffs[n];
  if (n == 1) {
    r.push_back(-q.coeffs[0] / lead);
  } else {
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -q.coeffs[i] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    for (int i = 0; i < n; ++i) r.push_back(es.eigenvalues()(i));
    // guarded Newton polish: keep a step only if it lowers |q|
    std::vector<cplx> dq(n);
    for (int j = 1; j <= n; ++j) dq[j - 1] = double(j) * q.coeffs[j];
    const UniPoly dpoly{dq};
    for (auto& z : r) {
      for (int it = 0; it < 2; ++it) {
        const cplx f = q.eval(z), d = dpoly.eval(z);
        if (d == 0.0) break;
        const cplx zn = z - f / d;
        if (std::abs(q.eval(zn)) < std::abs(f)) z = zn;
        else break;
      }
    }
  }
  std::sort(r.begin(), r.end(), [](cplx a, cplx b) {
    const double aa = argPositive(a), ab = argPositive(b);
    if (aa != ab) return aa < ab;
    return std::abs(a) < std::abs(b);
  });
  return r;
}

StabilityCertificate isStable(const BiPoly& p, int samples, double tol) {
  if (samples < 16) throw DomainError("stability sampling needs samples >= 16");
  StabilityCertificate cert;
  cert.minRootModulus = std::numeric_limits<double>::infinity();
  if (p.isZero()) {
    cert.stable = false;
    cert.minRootModulus = 0.0;
    return cert;
  }
  const double R = 1.0 - tol;
  for (int axis = 1; axis <= 2; ++axis) {
    for (int i = 0; i < samples; ++i) {
      const double r = R * i / (samples - 1);
      const int nang = (i == 0) ? 1 : samples;
      for (int j = 0; j < nang; ++j) {
        const cplx xi = std::polar(r, kTwoPi * j / samples);
        UniPoly s = slice(p, axis, xi);
        if (s.isZero()) {
          cert.stable = false;
          cert.minRootModulus = 0.0;
          return cert;
        }
        for (const cplx& z : roots(s)) {
          cert.minRootModulus = std::min(cert.minRootModulus, std::abs(z));
          if (std::abs(z) < R) cert.stable = false;
        }
      }
    }
  }
  return cert;
}

}  // namespace bidisk
