#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bidisk/io.hpp"
#include "bidisk/koszul.hpp"
#include "bidisk/modelspace.hpp"
#include "bidisk/profiles.hpp"

namespace bidisk {

// Least-squares fit mass(eps) = c * eps through the origin.
struct EpsilonFit {
  double c = 0.0;
  double r2 = 0.0;
  std::vector<double> eps, mass;
};
EpsilonFit epsilonFit(const ClarkMeasureQuad& mu, cplx lambda1, cplx lambda2,
                      const std::vector<double>& eps = {0.4, 0.2, 0.1, 0.05});

// count nodes spread evenly over the measure, each at least minDist from every singular point
std::vector<TorusPoint> sampleLevelPoints(const Rif& phi, const ClarkMeasureQuad& mu, int count,
                                          double minDist);

// Spectrum of the node-basis pair diag(nodes_j) + X_j Y^*, X_j = (J U^j - M_j J) W, Y = J W,
// which acts as J U^j J^* on the probe range and as node multiplication elsewhere.
struct NodeScan {
  SpectrumScan scan;
  double commutation = 0.0;   // of the perturbed pair
  double intertwining = 0.0;  // of the model
  double hausdorff = 0.0;     // mask vs node angles
  double bound = 0.0;         // 2 * grid step + 10 * intertwining
};
NodeScan nodeBasisScan(const ClarkModel& model, int gridN);

// ||[diag(m1) + X1 Y^*, diag(m2) + X2 Y^*]|| from the low-rank form of the commutator.
double perturbedDiagonalCommutator(const Eigen::VectorXcd& m1, const Eigen::VectorXcd& m2,
                                   const Eigen::MatrixXcd& X1, const Eigen::MatrixXcd& X2,
                                   const Eigen::MatrixXcd& Y);

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct VerifyOptions {
  ModelConfig model;
  Thresholds thresholds;
  int scanGrid = 256;
  int disintegrationAlphas = 16;
  int disintegrationNodes = 2048;
  int epsilonPoints = 10;
};

struct VerifyReport {
  std::vector<Check> checks;
  json details;
  bool pass() const;
  const Check* firstFailure() const;
  json toJson() const;
};

VerifyReport runVerify(const Rif& phi, cplx alpha, const VerifyOptions& opt);

}  // namespace bidisk
