#pragma once

#include <utility>
#include <vector>

#include "bidisk/bipoly.hpp"

namespace bidisk {

struct TorusPoint {
  cplx z1, z2;
};

struct SingularSet {
  std::vector<TorusPoint> points;
  double tol = 0.0;
};

// phi = e^{ia} z1^m1 z2^m2 pTilde / p
struct Rif {
  BiPoly p;
  BiPoly pTilde;
  BiPoly q;  // full numerator e^{ia} z^m pTilde
  int m1 = 0, m2 = 0;
  double phase = 0.0;
  SingularSet singular;

  double scale() const { return p.scale(); }
  // raw quotient q/p with no domain checks
  cplx value(cplx z1, cplx z2) const { return q.eval(z1, z2) / p.eval(z1, z2); }
  cplx at0() const { return value(0.0, 0.0); }
  int levelDegree() const { return q.n2() > p.n2() ? q.n2() : p.n2(); }
};

struct RifOptions {
  int stabilitySamples = 64;
  double stabilityTol = 1e-9;
  int innerSamples = 64;
  double innerTol = 1e-9;
};

Rif makeRif(const BiPoly& p, std::pair<int, int> monomial = {0, 0}, double phase = 0.0,
            const RifOptions& opt = {});

cplx evalInterior(const Rif& phi, cplx z1, cplx z2);
cplx evalBoundary(const Rif& phi, cplx z1, cplx z2);
// d phi / d z_axis by the quotient rule
cplx partialPhi(const Rif& phi, int axis, cplx z1, cplx z2);

// Numerator of the level set: q - alpha p.
BiPoly levelPolynomial(const Rif& phi, cplx alpha);

bool isExceptional(const Rif& phi, cplx alpha, int gridN = 256, double tol = 1e-6);

std::vector<cplx> levelSetSlice(const Rif& phi, cplx alpha, cplx xi, bool assumeGeneric = false,
                                double unimodTol = 1e-8);

struct BranchCrossing {
  int node;
  int branchA, branchB;
};

struct LevelSetBranches {
  cplx alpha;
  int N = 0;
  std::vector<cplx> nodes;                 // xi_i = exp(2 pi i i / N)
  std::vector<std::vector<cplx>> branches; // branches[j][i] = g_j(xi_i)
  double continuityResidual = 0.0;
  std::vector<BranchCrossing> crossings;   // recorded, not fatal
};

LevelSetBranches levelSetBranches(const Rif& phi, cplx alpha, int N);

SingularSet singularPoints(const Rif& phi, int gridN = 512);

double clarkWeightAt(const Rif& phi, cplx z1, cplx z2, int axis = 2);

double torusDistance(const TorusPoint& a, const TorusPoint& b);
double distanceToSingular(const Rif& phi, const TorusPoint& z);

}  // namespace bidisk
