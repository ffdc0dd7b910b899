#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bidisk/bipoly.hpp"

namespace bidisk {

struct KoszulReport {
  cplx lambda1, lambda2;
  int n = 0;
  int rankDelta1 = 0, rankDelta2 = 0;
  double tolerance = 0.0;     // relative threshold tol * sigma_max
  double absTolerance = 0.0;  // absolute floor
  double sigmaMin1 = 0.0, sigmaMin2 = 0.0;
  bool singular = false;
};

// delta1 = [(A - l1); (B - l2)] (2n x n), delta2 = [-(B - l2), (A - l1)] (n x 2n).
// A singular value counts toward the rank if it exceeds max(tol * max(sigma_max, ||A||, ||B||), absTol).
KoszulReport koszulRanks(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, cplx lambda1, cplx lambda2,
                         double tol = 1e-8, double absTol = 0.0);

std::vector<std::pair<cplx, cplx>> jointEigenvalues(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B);

struct SpectrumScan {
  int gridN = 0;
  std::vector<double> angles;  // cell centres in (-pi, pi]
  std::vector<unsigned char> mask;  // mask[i * gridN + j] for (angles[i], angles[j])
  double tol = 0.0;
  double absTol = 0.0;
  double widening = 0.0;
  int evaluatedCells = 0;  // cells needing an explicit rank computation
  std::string inputHash;

  bool at(int i, int j) const { return mask[static_cast<size_t>(i) * gridN + j] != 0; }
  std::vector<std::pair<double, double>> maskedAngles() const;
};

std::vector<double> scanAngles(int gridN);
// chordal circumradius of a scan cell
double cellRadius(int gridN);

// Dense scan of a commuting (near-)unitary pair. widening is added to the absolute tolerance.
SpectrumScan taylorSpectrumOnTorus(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, int gridN = 256,
                                   double tol = 1e-8, double widening = 0.0);

// Scan of the pair (diag(m1) + X1 Y^*, diag(m2) + X2 Y^*). Cells are settled by the Weyl bound
// where possible; the rest use exact inertia counts of the low-rank-updated Gram matrices, which
// give the same verdicts as koszulRanks with the absolute threshold.
SpectrumScan taylorSpectrumPerturbedDiagonal(const Eigen::VectorXcd& m1, const Eigen::VectorXcd& m2,
                                             const Eigen::MatrixXcd& X1, const Eigen::MatrixXcd& X2,
                                             const Eigen::MatrixXcd& Y, int gridN = 256, double widening = 0.0);

double torusHausdorff(const std::vector<std::pair<double, double>>& a,
                      const std::vector<std::pair<double, double>>& b);

}  // namespace bidisk
