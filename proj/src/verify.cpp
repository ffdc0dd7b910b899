#include "bidisk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bidisk/errors.hpp"

namespace bidisk {

EpsilonFit epsilonFit(const ClarkMeasureQuad& mu, cplx lambda1, cplx lambda2, const std::vector<double>& eps) {
  EpsilonFit f;
  f.eps = eps;
  double se2 = 0.0, sem = 0.0;
  for (double e : eps) {
    const double m = epsilonBoxMass(mu, lambda1, lambda2, e);
    f.mass.push_back(m);
    se2 += e * e;
    sem += e * m;
  }
  f.c = sem / se2;
  double mean = 0.0;
  for (double m : f.mass) mean += m;
  mean /= static_cast<double>(f.mass.size());
  double ssRes = 0.0, ssTot = 0.0;
  for (size_t i = 0; i < eps.size(); ++i) {
    ssRes += std::pow(f.mass[i] - f.c * eps[i], 2);
    ssTot += std::pow(f.mass[i] - mean, 2);
  }
  f.r2 = ssTot > 0.0 ? 1.0 - ssRes / ssTot : 0.0;
  return f;
}

std::vector<TorusPoint> sampleLevelPoints(const Rif& phi, const ClarkMeasureQuad& mu, int count, double minDist) {
  std::vector<TorusPoint> out;
  const size_t n = mu.nodes.size();
  if (n == 0 || count <= 0) return out;
  const size_t stride = std::max<size_t>(1, n / static_cast<size_t>(count));
  for (size_t k = 0; k < n && static_cast<int>(out.size()) < count; k += stride) {
    for (size_t s = 0; s < stride; ++s) {
      const ClarkNode& nd = mu.nodes[(k + s) % n];
      const TorusPoint tp{nd.z1, nd.z2};
      if (distanceToSingular(phi, tp) >= minDist) {
        out.push_back(tp);
        break;
      }
    }
  }
  return out;
}

double perturbedDiagonalCommutator(const Eigen::VectorXcd& m1, const Eigen::VectorXcd& m2,
                                   const Eigen::MatrixXcd& X1, const Eigen::MatrixXcd& X2,
                                   const Eigen::MatrixXcd& Y) {
  const Eigen::Index N = m1.size(), r = Y.cols();
  // [A1, A2] = (D1 X2 - D2 X1 + X1 Y^* X2 - X2 Y^* X1) Y^* + X1 Y^* D2 - X2 Y^* D1
  const Eigen::MatrixXcd P =
      m1.asDiagonal() * X2 - m2.asDiagonal() * X1 + X1 * (Y.adjoint() * X2) - X2 * (Y.adjoint() * X1);
  Eigen::MatrixXcd Lm(N, 3 * r), Rt(N, 3 * r);
  Lm << P, X1, -X2;
  Rt << Y, m2.conjugate().asDiagonal() * Y, m1.conjugate().asDiagonal() * Y;
  Eigen::HouseholderQR<Eigen::MatrixXcd> q1(Lm), q2(Rt);
  const Eigen::MatrixXcd R1 = q1.matrixQR().topRows(3 * r).triangularView<Eigen::Upper>();
  const Eigen::MatrixXcd R2 = q2.matrixQR().topRows(3 * r).triangularView<Eigen::Upper>();
  return opNorm(R1 * R2.adjoint());
}

NodeScan nodeBasisScan(const ClarkModel& model, int gridN) {
  const auto& nodes = model.mu.nodes;
  const Eigen::Index n = static_cast<Eigen::Index>(nodes.size());
  Eigen::VectorXcd m1(n), m2(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m1(i) = nodes[i].z1;
    m2(i) = nodes[i].z2;
  }
  const Eigen::MatrixXcd Y = model.J * model.W;
  const Eigen::MatrixXcd X1 = model.J * (model.ops.U1.matrix * model.W) - m1.asDiagonal() * Y;
  const Eigen::MatrixXcd X2 = model.J * (model.ops.U2.matrix * model.W) - m2.asDiagonal() * Y;
  NodeScan out;
  out.commutation = perturbedDiagonalCommutator(m1, m2, X1, X2, Y);
  out.intertwining = model.residuals.at("intertwining");
  out.scan = taylorSpectrumPerturbedDiagonal(m1, m2, X1, X2, Y, gridN, 10.0 * out.commutation);
  std::vector<std::pair<double, double>> level;
  level.reserve(nodes.size());
  for (const auto& nd : nodes) level.emplace_back(std::arg(nd.z1), std::arg(nd.z2));
  out.hausdorff = torusHausdorff(out.scan.maskedAngles(), level);
  out.bound = 2.0 * (2.0 * std::numbers::pi / gridN) + 10.0 * out.intertwining;
  return out;
}

bool VerifyReport::pass() const { return firstFailure() == nullptr; }

const Check* VerifyReport::firstFailure() const {
  for (const auto& c : checks)
    if (!c.pass) return &c;
  return nullptr;
}

json VerifyReport::toJson() const {
  json cs = json::array();
  for (const auto& c : checks)
    cs.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}});
  json j = details;
  j["checks"] = cs;
  j["pass"] = pass();
  if (const Check* f = firstFailure()) j["firstFailure"] = f->name;
  return j;
}

VerifyReport runVerify(const Rif& phi, cplx alpha, const VerifyOptions& opt) {
  if (isExceptional(phi, alpha)) throw ExceptionalAlphaError("alpha is exceptional for this function");
  VerifyReport rep;
  const Thresholds& th = opt.thresholds;
  auto add = [&](const std::string& name, double v, double thr) {
    // NaN fails
    rep.checks.push_back({name, v, thr, v <= thr});
  };

  const ClarkModel model = buildClarkModel(phi, alpha, opt.model);
  const ClarkMeasureQuad& mu = model.mu;

  add("mass", std::abs(totalMass(mu) - massIdentity(phi, alpha)), th.mass);

  const cplx pts[5][2] = {{{0.0, 0.0}, {0.0, 0.0}},
                          {{0.3, 0.0}, {0.0, 0.2}},
                          {{0.5, 0.0}, {0.5, 0.0}},
                          {{-0.4, 0.1}, {0.1, -0.5}},
                          {{0.0, 0.6}, {-0.3, 0.0}}};
  double poisson = 0.0;
  json pj = json::array();
  for (const auto& z : pts) {
    const double r = poissonResidual(mu, phi, z[0], z[1]);
    pj.push_back({{"z1", bidisk::toJson(z[0])}, {"z2", bidisk::toJson(z[1])}, {"residual", r}});
    poisson = std::max(poisson, r);
  }
  add("poisson", poisson, th.poisson);

  const double dis = disintegrationResidual(
      phi, [](cplx a, cplx b) { return cplx(std::norm(a + b)); }, opt.disintegrationAlphas, opt.disintegrationNodes);
  add("disintegration", dis, th.disintegration);

  add("isometry", model.residuals.at("isometry"), th.isometry);
  add("unitarity", model.residuals.at("unitarity"), th.residual);
  add("commutation", model.residuals.at("commutation"), th.residual);
  add("intertwining", model.residuals.at("intertwining"), th.residual);

  json pphi;
  try {
    const PPhiReport pr = pPhiNecessity(phi, alpha, model.basis, model.space);
    pphi = {{"value", pr.value}, {"crossCase", pr.crossCase}};
  } catch (const HypothesisError& e) {
    pphi = {{"skipped", e.what()}};
  }

  double worstR2 = 1.0, minC = std::numeric_limits<double>::infinity();
  json ej = json::array();
  for (const TorusPoint& tp : sampleLevelPoints(phi, mu, opt.epsilonPoints, 0.5)) {
    const EpsilonFit f = epsilonFit(mu, tp.z1, tp.z2);
    worstR2 = std::min(worstR2, f.r2);
    minC = std::min(minC, f.c);
    ej.push_back({{"theta1", std::arg(tp.z1)}, {"theta2", std::arg(tp.z2)}, {"c", f.c}, {"r2", f.r2}});
  }
  // reported as a deficit so that smaller is better, like every other check
  add("epsilonFit", (minC > 0.0 && ej.size() > 0) ? 1.0 - worstR2 : 1.0, 1.0 - th.epsilonFitR2);

  const NodeScan ns = nodeBasisScan(model, opt.scanGrid);
  add("spectrumHausdorff", ns.hausdorff, ns.bound);

  json res = json::object();
  for (const auto& [k, v] : model.residuals) res[k] = v;
  rep.details = {{"alpha", bidisk::toJson(alpha)},
                 {"tolerance", th.name},
                 {"model", {{"D", opt.model.D}, {"G", model.space.G}, {"N", opt.model.N},
                            {"probeDegree", opt.model.probeDegree}, {"spectralCut", opt.model.spectralCut}}},
                 {"massDeficitEstimate", mu.massDeficitEstimate},
                 {"excludedNodes", mu.excluded.size()},
                 {"poissonPoints", pj},
                 {"residuals", res},
                 {"pPhiNecessity", pphi},
                 {"epsilonFits", ej},
                 {"scan",
                  {{"gridN", ns.scan.gridN},
                   {"widening", ns.scan.widening},
                   {"wideningRule", "10 x commutation residual of the node-basis pair"},
                   {"pairCommutation", ns.commutation},
                   {"absTol", ns.scan.absTol},
                   {"evaluatedCells", ns.scan.evaluatedCells},
                   {"maskedCells", ns.scan.maskedAngles().size()},
                   {"hausdorff", ns.hausdorff},
                   {"bound", ns.bound}}}};
  return rep;
}

}  // namespace bidisk
