#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace bidisk {

using cplx = std::complex<double>;

// One-variable polynomial, coeffs[j] multiplies z^j.
struct UniPoly {
  std::vector<cplx> coeffs;

  int degree() const { return coeffs.empty() ? -1 : static_cast<int>(coeffs.size()) - 1; }
  bool isZero() const { return coeffs.empty(); }
  cplx eval(cplx z) const;
};

// Drops trailing coefficients below rel * max|coeff|; all-zero input becomes the empty polynomial.
UniPoly trimmed(std::vector<cplx> c, double rel = 1e-12);

// Dense bivariate polynomial sum c(k,l) z1^k z2^l with declared bidegree (n1,n2).
class BiPoly {
 public:
  BiPoly();  // zero polynomial, bidegree (0,0)
  explicit BiPoly(Eigen::MatrixXcd coeffs);  // throws if a trailing row/column is zero
  BiPoly(int n1, int n2, const std::vector<cplx>& rowMajor);

  static BiPoly constant(cplx c);
  static BiPoly monomial(int k, int l, cplx c = 1.0);
  // Builds from a matrix, trimming trailing rows/columns below rel * max|coeff|.
  static BiPoly fromTrimmed(const Eigen::MatrixXcd& coeffs, double rel = 1e-12);

  int n1() const { return static_cast<int>(c_.rows()) - 1; }
  int n2() const { return static_cast<int>(c_.cols()) - 1; }
  const Eigen::MatrixXcd& coeffs() const { return c_; }
  cplx operator()(int k, int l) const;
  bool isZero() const;
  double scale() const;  // max coefficient modulus

  cplx eval(cplx z1, cplx z2) const;
  BiPoly swapped() const;  // p(z2, z1)

  friend BiPoly operator+(const BiPoly& a, const BiPoly& b);
  friend BiPoly operator-(const BiPoly& a, const BiPoly& b);
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b);
  friend BiPoly operator*(cplx s, const BiPoly& a);

 private:
  Eigen::MatrixXcd c_;
};

cplx eval(const BiPoly& p, cplx z1, cplx z2);
BiPoly reflect(const BiPoly& p);
BiPoly partial(const BiPoly& p, int axis);
// axis 1 fixes z1 = xi, axis 2 fixes z2 = xi.
UniPoly slice(const BiPoly& p, int axis, cplx xi);
// Companion-matrix roots sorted by argument in [0, 2pi), then modulus.
std::vector<cplx> roots(const UniPoly& q);

struct StabilityCertificate {
  bool stable = true;
  bool sampled = true;  // the grid test is necessary, not sufficient
  double minRootModulus = 0.0;
  explicit operator bool() const { return stable; }
};
StabilityCertificate isStable(const BiPoly& p, int samples = 64, double tol = 1e-9);

double argPositive(cplx z);  // argument in [0, 2pi)
double argCentered(double theta);  // wraps to (-pi, pi]

}  // namespace bidisk
