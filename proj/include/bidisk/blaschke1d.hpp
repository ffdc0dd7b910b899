#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bidisk/bipoly.hpp"

namespace bidisk {

// e^{ia} z^m prod_j b_{lambda_j}(z), b_l(z) = (|l|/l)(l - z)/(1 - conj(l) z)
struct BlaschkeProduct {
  std::vector<cplx> zeros;
  int m = 0;
  double phase = 0.0;

  int degree() const { return m + static_cast<int>(zeros.size()); }
  cplx eval(cplx z) const;
  cplx derivative(cplx z) const;
  // numerator and denominator polynomials, phi = num/den
  UniPoly numerator() const;
  UniPoly denominator() const;
};

BlaschkeProduct makeBlaschke(std::vector<cplx> zeros, int m = 0, double phase = 0.0);

struct Atom {
  cplx zeta;
  double weight;
};

struct Clark1D {
  cplx alpha;
  std::vector<Atom> atoms;
  double totalWeight() const;
};

Clark1D clarkMeasure1d(const BlaschkeProduct& phi, cplx alpha);

// Orthonormal basis e_b = sum_j coeffs(j,b) k^phi_{w_j} of the model space.
struct ModelBasis1D {
  std::vector<cplx> points;  // kernel sample points w_j
  Eigen::MatrixXcd gram;     // <k_j, k_i>
  Eigen::MatrixXcd coeffs;   // gram^{-1/2}
  double gramCondition = 0.0;
  // Taylor coefficients (rows 0..degree) of the basis functions
  Eigen::MatrixXcd monomialCoefficients(const BlaschkeProduct& phi, int degree) const;
  // basis values at arbitrary points (rows) for each basis vector (columns)
  Eigen::MatrixXcd evaluate(const BlaschkeProduct& phi, const std::vector<cplx>& z) const;
};

ModelBasis1D modelBasis1d(const BlaschkeProduct& phi);

struct Unitary1D {
  Eigen::MatrixXcd U;  // S_phi + rank-one term
  Eigen::MatrixXcd S;  // compressed shift
  ModelBasis1D basis;
};

Unitary1D clarkUnitary1d(const BlaschkeProduct& phi, cplx alpha);

double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b);

}  // namespace bidisk
