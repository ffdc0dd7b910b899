#include "bidisk/rif.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "bidisk/errors.hpp"

namespace bidisk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx unit(double theta) { return std::polar(1.0, theta); }

bool isPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }

double arcGap(cplx a, cplx b) { return std::abs(std::arg(a * std::conj(b))); }

// max over the xi-grid of |phi*(xi, eta) - alpha| (axis 2: horizontal line z2 = eta)
double lineDeviation(const Rif& phi, cplx alpha, cplx eta, int axis, int gridN) {
  const double skip = 1e-8 * phi.scale();
  double worst = 0.0;
  for (int k = 0; k < gridN; ++k) {
    const cplx xi = unit(kTwoPi * k / gridN);
    const cplx z1 = axis == 2 ? xi : eta;
    const cplx z2 = axis == 2 ? eta : xi;
    const cplx pv = phi.p.eval(z1, z2);
    if (std::abs(pv) < skip) continue;
    worst = std::max(worst, std::abs(phi.q.eval(z1, z2) / pv - alpha));
  }
  return worst;
}

// Unimodular eta at which every coefficient polynomial of the level numerator vanishes.
std::vector<cplx> lineCandidates(const BiPoly& L, int axis) {
  const BiPoly M = axis == 2 ? L : L.swapped();
  const auto& c = M.coeffs();
  std::vector<cplx> cand;
  int best = -1, bestDeg = std::numeric_limits<int>::max();
  std::vector<UniPoly> rows;
  for (Eigen::Index k = 0; k < c.rows(); ++k) {
    std::vector<cplx> v(c.cols());
    for (Eigen::Index l = 0; l < c.cols(); ++l) v[l] = c(k, l);
    rows.push_back(trimmed(v, 1e-12));
    const int d = rows.back().degree();
    if (d == 0) return cand;  // a nonzero constant coefficient rules out any line
    if (d > 0 && d < bestDeg) {
      bestDeg = d;
      best = static_cast<int>(k);
    }
  }
  if (best < 0) return cand;
  for (const cplx& r : roots(rows[best]))
    if (std::abs(std::abs(r) - 1.0) < 1e-6) cand.push_back(r / std::abs(r));
  return cand;
}

}  // namespace

Rif makeRif(const BiPoly& p, std::pair<int, int> monomial, double phase, const RifOptions& opt) {
  if (monomial.first < 0 || monomial.second < 0) throw DomainError("negative monomial power");
  if (p.isZero()) throw StabilityError("zero denominator");
  const auto cert = isStable(p, opt.stabilitySamples, opt.stabilityTol);
  if (!cert.stable)
    throw StabilityError("denominator has a zero in the bidisk (sampled, min root modulus " +
                         std::to_string(cert.minRootModulus) + ")");
  Rif r;
  r.p = p;
  r.pTilde = reflect(p);
  r.m1 = monomial.first;
  r.m2 = monomial.second;
  r.phase = phase;
  r.q = BiPoly::monomial(r.m1, r.m2, unit(phase)) * r.pTilde;
  r.singular = singularPoints(r);

  for (double rad : {0.3, 0.6, 0.9, 0.99}) {
    for (int a = 0; a < 16; ++a)
      for (int b = 0; b < 16; ++b) {
        const cplx v = r.value(std::polar(rad, kTwoPi * a / 16), std::polar(rad, kTwoPi * (b + 0.5) / 16));
        if (std::abs(v) > 1.0 + opt.innerTol)
          throw InnerUnimodularityError("|phi| exceeds 1 inside the bidisk");
      }
  }
  const int n = opt.innerSamples;
  const double skip = 1e-6 * r.scale();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const cplx z1 = unit(kTwoPi * (a + 0.5) / n), z2 = unit(kTwoPi * (b + 0.25) / n);
      const cplx pv = p.eval(z1, z2);
      if (std::abs(pv) < skip) continue;
      if (std::abs(std::abs(r.q.eval(z1, z2) / pv) - 1.0) > opt.innerTol)
        throw InnerUnimodularityError("boundary values are not unimodular");
    }
  return r;
}

cplx evalInterior(const Rif& phi, cplx z1, cplx z2) {
  if (std::abs(z1) >= 1.0 || std::abs(z2) >= 1.0) throw DomainError("point not inside the bidisk");
  return phi.value(z1, z2);
}

cplx evalBoundary(const Rif& phi, cplx z1, cplx z2) {
  const TorusPoint z{z1, z2};
  const cplx pv = phi.p.eval(z1, z2);
  if (distanceToSingular(phi, z) < 1e-10 || std::abs(pv) <= 1e-13 * phi.scale())
    throw SingularPointError("boundary value requested at a singular point");
  return phi.q.eval(z1, z2) / pv;
}

cplx partialPhi(const Rif& phi, int axis, cplx z1, cplx z2) {
  const cplx pv = phi.p.eval(z1, z2);
  const cplx qv = phi.q.eval(z1, z2);
  const cplx dq = partial(phi.q, axis).eval(z1, z2);
  const cplx dp = partial(phi.p, axis).eval(z1, z2);
  return (dq * pv - qv * dp) / (pv * pv);
}

BiPoly levelPolynomial(const Rif& phi, cplx alpha) { return phi.q - alpha * phi.p; }

bool isExceptional(const Rif& phi, cplx alpha, int gridN, double tol) {
  if (gridN < 128) throw DomainError("exceptional-value grid needs gridN >= 128");
  const BiPoly L = levelPolynomial(phi, alpha);
  for (int axis : {2, 1}) {
    for (int j = 0; j < gridN; ++j)
      if (lineDeviation(phi, alpha, unit(kTwoPi * j / gridN), axis, gridN) < tol) return true;
    for (const cplx& eta : lineCandidates(L, axis))
      if (lineDeviation(phi, alpha, eta, axis, gridN) < tol) return true;
  }
  return false;
}

std::vector<cplx> levelSetSlice(const Rif& phi, cplx alpha, cplx xi, bool assumeGeneric,
                                double unimodTol) {
  if (!assumeGeneric && isExceptional(phi, alpha))
    throw ExceptionalAlphaError("alpha is exceptional for this function");
  const UniPoly s = slice(levelPolynomial(phi, alpha), 1, xi);
  if (s.isZero()) throw ExceptionalAlphaError("level set contains the vertical line through xi");
  std::vector<cplx> r = roots(s);
  for (auto& z : r) {
    if (std::abs(std::abs(z) - 1.0) > unimodTol)
      throw NonUnimodularRootError("level-set root off the circle by " +
                                   std::to_string(std::abs(std::abs(z) - 1.0)));
    z /= std::abs(z);
  }
  return r;
}

LevelSetBranches levelSetBranches(const Rif& phi, cplx alpha, int N) {
  if (N < 64 || !isPowerOfTwo(N)) throw DomainError("node count must be a power of two >= 64");
  if (isExceptional(phi, alpha)) throw ExceptionalAlphaError("alpha is exceptional for this function");
  LevelSetBranches out;
  out.alpha = alpha;
  out.N = N;
  out.nodes.resize(N);
  std::vector<std::vector<cplx>> perNode(N);
  for (int i = 0; i < N; ++i) {
    out.nodes[i] = unit(kTwoPi * i / N);
    perNode[i] = levelSetSlice(phi, alpha, out.nodes[i], true);
  }
  const size_t n = perNode[0].size();
  for (int i = 1; i < N; ++i)
    if (perNode[i].size() != n) throw RefinementError("level-set root count changes along the circle");
  out.branches.assign(n, std::vector<cplx>(N));
  for (size_t j = 0; j < n; ++j) out.branches[j][0] = perNode[0][j];

  std::vector<size_t> perm(n);
  for (int i = 1; i < N; ++i) {
    const auto& cur = perNode[i];
    std::vector<size_t> best(n);
    std::iota(best.begin(), best.end(), 0);
    if (n <= 6) {
      std::iota(perm.begin(), perm.end(), 0);
      double bestCost = std::numeric_limits<double>::infinity();
      do {
        double cost = 0.0;
        for (size_t j = 0; j < n; ++j) cost += arcGap(cur[perm[j]], out.branches[j][i - 1]);
        if (cost < bestCost - 1e-15) {
          bestCost = cost;
          best = perm;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
      std::vector<bool> used(n, false);
      for (size_t j = 0; j < n; ++j) {
        size_t pick = 0;
        double d = std::numeric_limits<double>::infinity();
        for (size_t t = 0; t < n; ++t)
          if (!used[t] && arcGap(cur[t], out.branches[j][i - 1]) < d) {
            d = arcGap(cur[t], out.branches[j][i - 1]);
            pick = t;
          }
        used[pick] = true;
        best[j] = pick;
      }
    }
    for (size_t j = 0; j < n; ++j) out.branches[j][i] = cur[best[j]];
  }

  for (int i = 0; i < N; ++i)
    for (size_t a = 0; a < n; ++a)
      for (size_t b = a + 1; b < n; ++b)
        if (std::abs(out.branches[a][i] - out.branches[b][i]) < 1e-6)
          out.crossings.push_back({i, static_cast<int>(a), static_cast<int>(b)});
  for (size_t j = 0; j < n; ++j)
    for (int i = 0; i + 1 < N; ++i)
      out.continuityResidual =
          std::max(out.continuityResidual, arcGap(out.branches[j][i + 1], out.branches[j][i]));
  return out;
}

SingularSet singularPoints(const Rif& phi, int gridN) {
  SingularSet out;
  out.tol = 1e-8 * phi.scale();
  const BiPoly& p = phi.p;
  if (p.n2() == 0 && p.n1() == 0) return out;

  // distance of the slice roots of p from the circle, and the nearest root
  auto probe = [&](double theta, cplx* root) {
    const UniPoly s = slice(p, 1, unit(theta));
    double d = std::numeric_limits<double>::infinity();
    if (s.isZero()) {
      if (root) *root = 1.0;
      return 0.0;
    }
    for (const cplx& r : roots(s)) {
      const double dd = std::abs(std::abs(r) - 1.0);
      if (dd < d) {
        d = dd;
        if (root) *root = r;
      }
    }
    return d;
  };

  auto accept = [&](const TorusPoint& z) {
    if (std::abs(p.eval(z.z1, z.z2)) > out.tol) return;
    if (std::abs(phi.pTilde.eval(z.z1, z.z2)) > out.tol) return;
    for (const auto& e : out.points)
      if (torusDistance(e, z) < 1e-6) return;
    out.points.push_back(z);
  };

  if (p.n2() == 0) {
    // p depends on z1 only: zeros on the circle give whole vertical lines, never isolated points
    return out;
  }
  std::vector<double> d(gridN);
  for (int k = 0; k < gridN; ++k) d[k] = probe(kTwoPi * k / gridN, nullptr);
  const double phiGolden = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int k = 0; k < gridN; ++k) {
    const double dl = d[(k + gridN - 1) % gridN], dr = d[(k + 1) % gridN];
    if (!(d[k] <= dl && d[k] <= dr) || d[k] > 0.05) continue;
    double a = kTwoPi * (k - 1) / gridN, b = kTwoPi * (k + 1) / gridN;
    double x1 = b - phiGolden * (b - a), x2 = a + phiGolden * (b - a);
    double f1 = probe(x1, nullptr), f2 = probe(x2, nullptr);
    for (int it = 0; it < 200 && (b - a) > 1e-15; ++it) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - phiGolden * (b - a);
        f1 = probe(x1, nullptr);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + phiGolden * (b - a);
        f2 = probe(x2, nullptr);
      }
    }
    const double theta = 0.5 * (a + b);
    cplx r = 1.0;
    probe(theta, &r);
    accept({unit(theta), r / std::abs(r)});
  }
  return out;
}

double clarkWeightAt(const Rif& phi, cplx z1, cplx z2, int axis) {
  const cplx pv = phi.p.eval(z1, z2);
  if (distanceToSingular(phi, {z1, z2}) < 1e-10 || std::abs(pv) <= 1e-13 * phi.scale())
    throw SingularPointError("Clark weight requested at a singular point");
  const cplx d = partialPhi(phi, axis, z1, z2);
  if (std::abs(d) < 1e-14) throw VanishingDerivativeError("derivative vanishes on the level set");
  return 1.0 / std::abs(d);
}

double torusDistance(const TorusPoint& a, const TorusPoint& b) {
  const double d1 = std::arg(a.z1 * std::conj(b.z1));
  const double d2 = std::arg(a.z2 * std::conj(b.z2));
  return std::hypot(d1, d2);
}

double distanceToSingular(const Rif& phi, const TorusPoint& z) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& s : phi.singular.points) d = std::min(d, torusDistance(s, z));
  return d;
}

}  // namespace bidisk
