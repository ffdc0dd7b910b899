#pragma once

#include <functional>
#include <vector>

#include "bidisk/rif.hpp"

namespace bidisk {

struct ClarkNode {
  cplx z1, z2;
  double weight = 0.0;
  double mass = 0.0;
  int branch = 0;
  int index = 0;  // circle node index i
};

struct ClarkOptions {
  double exclusionRadius = 1e-4;
};

struct ClarkMeasureQuad {
  cplx alpha;
  int N = 0;
  LevelSetBranches branches;
  std::vector<ClarkNode> nodes;     // branch-major, node-minor
  std::vector<ClarkNode> excluded;  // mass field holds the interpolated estimate
  double massDeficitEstimate = 0.0;
};

using TorusFunction = std::function<cplx(cplx, cplx)>;

ClarkMeasureQuad buildClarkMeasure(const Rif& phi, cplx alpha, int N, const ClarkOptions& opt = {});
cplx integrate(const ClarkMeasureQuad& mu, const TorusFunction& f);
double totalMass(const ClarkMeasureQuad& mu);
double massIdentity(const Rif& phi, cplx alpha);  // (1-|phi(0)|^2)/|alpha-phi(0)|^2

double poissonKernel(cplx z, cplx zeta);
double poissonResidual(const ClarkMeasureQuad& mu, const Rif& phi, cplx z1, cplx z2);
double disintegrationResidual(const Rif& phi, const TorusFunction& f, int nAlpha, int N);

double supportDistance(const ClarkMeasureQuad& a, const ClarkMeasureQuad& b);
// node pairs of the two measures closer than radius, reported as midpoints
std::vector<TorusPoint> supportIntersections(const ClarkMeasureQuad& a, const ClarkMeasureQuad& b,
                                             double radius);
double epsilonBoxMass(const ClarkMeasureQuad& mu, cplx lambda1, cplx lambda2, double eps);

}  // namespace bidisk
