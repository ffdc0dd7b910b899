#include "bidisk/clark.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "bidisk/errors.hpp"

namespace bidisk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrapDiff(cplx a, cplx b) { return std::arg(a * std::conj(b)); }

}  // namespace

ClarkMeasureQuad buildClarkMeasure(const Rif& phi, cplx alpha, int N, const ClarkOptions& opt) {
  ClarkMeasureQuad mu;
  mu.alpha = alpha;
  mu.N = N;
  mu.branches = levelSetBranches(phi, alpha, N);
  const auto& br = mu.branches.branches;
  for (size_t j = 0; j < br.size(); ++j) {
    std::vector<ClarkNode> row(N);
    std::vector<bool> ok(N, true);
    for (int i = 0; i < N; ++i) {
      ClarkNode& nd = row[i];
      nd.z1 = mu.branches.nodes[i];
      nd.z2 = br[j][i];
      nd.branch = static_cast<int>(j);
      nd.index = i;
      if (distanceToSingular(phi, {nd.z1, nd.z2}) < opt.exclusionRadius) {
        ok[i] = false;
        continue;
      }
      try {
        nd.weight = clarkWeightAt(phi, nd.z1, nd.z2, 2);
        nd.mass = nd.weight / N;
      } catch (const SingularPointError&) {
        ok[i] = false;
      } catch (const VanishingDerivativeError&) {
        ok[i] = false;
      }
    }
    for (int i = 0; i < N; ++i) {
      if (ok[i]) {
        mu.nodes.push_back(row[i]);
        continue;
      }
      // interpolate the integrable weight from the nearest kept neighbours on this branch
      double left = 0.0, right = 0.0;
      int dl = 0, dr = 0;
      for (int s = 1; s < N; ++s)
        if (ok[(i - s + N) % N]) {
          left = row[(i - s + N) % N].mass;
          dl = s;
          break;
        }
      for (int s = 1; s < N; ++s)
        if (ok[(i + s) % N]) {
          right = row[(i + s) % N].mass;
          dr = s;
          break;
        }
      ClarkNode ex = row[i];
      ex.mass = (dl + dr) > 0 ? (left * dr + right * dl) / (dl + dr) : 0.0;
      ex.weight = ex.mass * N;
      mu.massDeficitEstimate += ex.mass;
      mu.excluded.push_back(ex);
    }
  }
  return mu;
}

cplx integrate(const ClarkMeasureQuad& mu, const TorusFunction& f) {
  cplx acc = 0.0;
  for (const auto& nd : mu.nodes) acc += f(nd.z1, nd.z2) * nd.mass;
  return acc;
}

double totalMass(const ClarkMeasureQuad& mu) {
  double m = 0.0;
  for (const auto& nd : mu.nodes) m += nd.mass;
  return m;
}

double massIdentity(const Rif& phi, cplx alpha) {
  const cplx f0 = phi.at0();
  return (1.0 - std::norm(f0)) / std::norm(alpha - f0);
}

double poissonKernel(cplx z, cplx zeta) { return (1.0 - std::norm(z)) / std::norm(zeta - z); }

double poissonResidual(const ClarkMeasureQuad& mu, const Rif& phi, cplx z1, cplx z2) {
  const cplx f = evalInterior(phi, z1, z2);
  const double lhs = (1.0 - std::norm(f)) / std::norm(mu.alpha - f);
  double rhs = 0.0;
  for (const auto& nd : mu.nodes) rhs += poissonKernel(z1, nd.z1) * poissonKernel(z2, nd.z2) * nd.mass;
  return std::abs(lhs - rhs);
}

double disintegrationResidual(const Rif& phi, const TorusFunction& f, int nAlpha, int N) {
  cplx avg = 0.0;
  int used = 0;
  for (int k = 0; k < nAlpha; ++k) {
    const cplx alpha = std::polar(1.0, kTwoPi * (k + 0.5) / nAlpha);
    if (isExceptional(phi, alpha)) continue;
    avg += integrate(buildClarkMeasure(phi, alpha, N), f);
    ++used;
  }
  if (used == 0) throw ExceptionalAlphaError("every sampled alpha is exceptional");
  avg /= double(used);
  cplx dbl = 0.0;
  for (int a = 0; a < N; ++a) {
    const cplx z1 = std::polar(1.0, kTwoPi * a / N);
    cplx row = 0.0;
    for (int b = 0; b < N; ++b) row += f(z1, std::polar(1.0, kTwoPi * b / N));
    dbl += row;
  }
  dbl /= double(N) * double(N);
  return std::abs(avg - dbl);
}

double supportDistance(const ClarkMeasureQuad& a, const ClarkMeasureQuad& b) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& x : a.nodes)
    for (const auto& y : b.nodes) best = std::min(best, torusDistance({x.z1, x.z2}, {y.z1, y.z2}));
  return best;
}

std::vector<TorusPoint> supportIntersections(const ClarkMeasureQuad& a, const ClarkMeasureQuad& b,
                                             double radius) {
  std::vector<TorusPoint> out;
  for (const auto& x : a.nodes)
    for (const auto& y : b.nodes) {
      if (torusDistance({x.z1, x.z2}, {y.z1, y.z2}) >= radius) continue;
      const double h1 = 0.5 * wrapDiff(y.z1, x.z1), h2 = 0.5 * wrapDiff(y.z2, x.z2);
      out.push_back({x.z1 * std::polar(1.0, h1), x.z2 * std::polar(1.0, h2)});
    }
  return out;
}

double epsilonBoxMass(const ClarkMeasureQuad& mu, cplx lambda1, cplx lambda2, double eps) {
  if (eps >= kTwoPi) return totalMass(mu);
  double m = 0.0;
  for (const auto& nd : mu.nodes)
    if (std::abs(wrapDiff(nd.z1, lambda1)) < 0.5 * eps && std::abs(wrapDiff(nd.z2, lambda2)) < 0.5 * eps)
      m += nd.mass;
  return m;
}

}  // namespace bidisk
