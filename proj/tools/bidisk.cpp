#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bidisk/errors.hpp"
#include "bidisk/io.hpp"
#include "bidisk/verify.hpp"

namespace fs = std::filesystem;
using namespace bidisk;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kAllExceptional = 3 };

struct RunConfig {
  std::string command;
  std::string rifSource;
  std::string alphaList;
  bool verifyProfileAlpha = false;
  int nodes = 0;
  int degree = 0;
  int grid = 0;
  int scan = 256;
  std::string tolProfile;
  std::string out = ".";
  std::string format;

  // resolved
  std::optional<Profile> profile;
  Rif phi;
  std::vector<double> angles;
  ModelConfig model;
  Thresholds thresholds;
  json canonical;
  std::string hash;
};

std::vector<double> parseAngles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) throw FormatError("empty entry in --alpha");
    size_t used = 0;
    double v;
    try {
      v = std::stod(item.substr(b), &used);
    } catch (const std::exception&) {
      throw FormatError("cannot parse angle '" + item + "'");
    }
    if (item.find_first_not_of(" \t", b + used) != std::string::npos || !std::isfinite(v))
      throw FormatError("cannot parse angle '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw FormatError("--alpha needs at least one angle");
  return out;
}

// Validates everything before any computation or output.
void resolve(RunConfig& c) {
  const auto& names = profileNames();
  if (std::find(names.begin(), names.end(), c.rifSource) != names.end()) c.profile = makeProfile(c.rifSource);
  if (c.profile) {
    c.phi = c.profile->phi;
    c.model = c.profile->model;
    if (c.tolProfile.empty()) c.tolProfile = c.profile->tolerance;
  } else {
    if (c.rifSource.empty()) throw FormatError("--rif is required");
    c.phi = rifFromJson(loadJsonSource(c.rifSource));
    c.model = ModelConfig{};
    if (!c.phi.singular.points.empty()) c.model.N = 8192;
  }
  if (c.tolProfile.empty()) c.tolProfile = c.phi.singular.points.empty() ? "strict" : "singular";
  c.thresholds = tolerancesFor(c.tolProfile);
  if (c.nodes) c.model.N = c.nodes;
  if (c.degree) c.model.D = c.degree;
  if (c.grid) c.model.G = c.grid;
  if (c.model.N < 64 || (c.model.N & (c.model.N - 1)) != 0) throw FormatError("--nodes must be a power of two >= 64");
  if (c.model.D < 1 || c.model.D > 60) throw FormatError("--degree must be in [1, 60]");
  if (c.model.G != 0) makeTruncatedHardy(c.model.D, c.model.G);
  if (c.scan < 8 || c.scan > 4096) throw FormatError("--scan must be in [8, 4096]");
  c.angles = c.alphaList.empty() ? std::vector<double>{std::numbers::pi / 2} : parseAngles(c.alphaList);
  if (c.format.empty()) c.format = (c.command == "measure" || c.command == "unitary") ? "json" : "csv";
  if (c.format != "csv" && c.format != "json") throw FormatError("--format must be csv or json");

  c.canonical = {{"command", c.command},
                 {"rif", toJson(c.phi)},
                 {"alpha", c.angles},
                 {"nodes", c.model.N},
                 {"degree", c.model.D},
                 {"grid", c.model.G},
                 {"scan", c.scan},
                 {"tolProfile", c.tolProfile},
                 {"format", c.format}};
  c.hash = hexHash(fnv1a64(c.canonical.dump()));
}

json meta(const RunConfig& c) {
  return {{"configHash", c.hash}, {"toolVersion", kToolVersion}, {"config", c.canonical}};
}

std::string csvHeader(const RunConfig& c, const std::string& what) {
  return what + "\nconfigHash " + c.hash + "\ntoolVersion " + kToolVersion;
}

class Writer {
 public:
  explicit Writer(fs::path dir) : dir_(std::move(dir)) {}
  void text(const std::string& name, const std::string& body) {
    fs::create_directories(dir_);
    std::ofstream f(dir_ / name, std::ios::binary);
    f << body;
    if (!f) throw std::runtime_error("failed to write " + (dir_ / name).string());
    std::cerr << "wrote " << (dir_ / name).string() << '\n';
  }
  void json_(const std::string& name, const json& j) { text(name, j.dump(2) + "\n"); }

 private:
  fs::path dir_;
};

cplx unimodular(double a) { return std::polar(1.0, a); }

// Splits the alpha list into generic values and warns about exceptional ones.
std::vector<double> genericAngles(const RunConfig& c, json& skipped) {
  std::vector<double> ok;
  skipped = json::array();
  for (double a : c.angles) {
    if (isExceptional(c.phi, unimodular(a))) {
      std::cerr << "warning: alpha = exp(i*" << a << ") is exceptional for this function; skipped\n";
      skipped.push_back(a);
    } else {
      ok.push_back(a);
    }
  }
  return ok;
}

int cmdLevelset(const RunConfig& c, Writer& w) {
  json skipped;
  const auto ok = genericAngles(c, skipped);
  if (ok.empty()) {
    std::cerr << "error: every alpha value is exceptional\n";
    return kAllExceptional;
  }
  std::vector<std::future<LevelSetBranches>> jobs;
  for (double a : ok)
    jobs.push_back(std::async(std::launch::async, [&, a] { return levelSetBranches(c.phi, unimodular(a), c.model.N); }));
  json files = json::array();
  for (size_t k = 0; k < ok.size(); ++k) {
    const LevelSetBranches ls = jobs[k].get();
    const std::string name = "levelset_" + std::to_string(k);
    if (c.format == "csv") {
      w.text(name + ".csv", levelSetCsv(ls, csvHeader(c, "level set alpha angle " + std::to_string(ok[k]))));
    } else {
      json pts = json::array();
      for (size_t j = 0; j < ls.branches.size(); ++j)
        for (int i = 0; i < ls.N; ++i)
          pts.push_back({argCentered(std::arg(ls.nodes[i])), argCentered(std::arg(ls.branches[j][i])), j});
      w.json_(name + ".json", {{"meta", meta(c)}, {"alpha", toJson(ls.alpha)}, {"points", pts}});
    }
    // closure of the level set: singular points approached by branch nodes, kept apart from the nodes
    json limits = json::array();
    const double reach = 4.0 * 2.0 * std::numbers::pi / ls.N;
    for (const TorusPoint& sp : c.phi.singular.points) {
      double d = std::numeric_limits<double>::infinity();
      for (const auto& br : ls.branches)
        for (int i = 0; i < ls.N; ++i) d = std::min(d, torusDistance(sp, TorusPoint{ls.nodes[i], br[i]}));
      if (d < reach) limits.push_back({argCentered(std::arg(sp.z1)), argCentered(std::arg(sp.z2))});
    }
    files.push_back({{"file", name + "." + c.format},
                     {"alphaAngle", ok[k]},
                     {"singularLimits", limits},
                     {"branches", ls.branches.size()},
                     {"continuityResidual", ls.continuityResidual},
                     {"crossings", ls.crossings.size()}});
  }
  w.json_("levelset.json", {{"meta", meta(c)}, {"outputs", files}, {"skippedExceptional", skipped}});
  return kPass;
}

int cmdMeasure(const RunConfig& c, Writer& w) {
  json skipped;
  const auto ok = genericAngles(c, skipped);
  if (ok.empty()) {
    std::cerr << "error: every alpha value is exceptional\n";
    return kAllExceptional;
  }
  ClarkOptions opt;
  opt.exclusionRadius = c.model.exclusionRadius;
  std::vector<std::future<ClarkMeasureQuad>> jobs;
  for (double a : ok)
    jobs.push_back(
        std::async(std::launch::async, [&, a] { return buildClarkMeasure(c.phi, unimodular(a), c.model.N, opt); }));
  json files = json::array();
  for (size_t k = 0; k < ok.size(); ++k) {
    const ClarkMeasureQuad mu = jobs[k].get();
    const std::string name = "measure_" + std::to_string(k);
    if (c.format == "json") {
      json j = toJson(mu);
      j["meta"] = meta(c);
      w.json_(name + ".json", j);
    } else {
      std::ostringstream s;
      s.precision(17);
      s << commentBlock(csvHeader(c, "Clark measure nodes")) << "theta1,theta2,mass,branch\n";
      for (const auto& n : mu.nodes)
        s << argCentered(std::arg(n.z1)) << ',' << argCentered(std::arg(n.z2)) << ',' << n.mass << ',' << n.branch
          << '\n';
      w.text(name + ".csv", s.str());
    }
    files.push_back({{"file", name + "." + c.format},
                     {"alphaAngle", ok[k]},
                     {"totalMass", totalMass(mu)},
                     {"expectedMass", massIdentity(c.phi, mu.alpha)},
                     {"excluded", mu.excluded.size()},
                     {"massDeficitEstimate", mu.massDeficitEstimate}});
  }
  w.json_("measure.json", {{"meta", meta(c)}, {"outputs", files}, {"skippedExceptional", skipped}});
  return kPass;
}

std::optional<double> firstGeneric(const RunConfig& c) {
  json skipped;
  const auto ok = genericAngles(c, skipped);
  if (ok.empty()) return std::nullopt;
  return ok.front();
}

int cmdUnitary(const RunConfig& c, Writer& w) {
  const auto a = firstGeneric(c);
  if (!a) {
    std::cerr << "error: the Clark unitaries need a generic alpha\n";
    return kAllExceptional;
  }
  const ClarkModel m = buildClarkModel(c.phi, unimodular(*a), c.model);
  for (int axis : {1, 2}) {
    TruncatedOperator op = axis == 1 ? m.ops.U1 : m.ops.U2;
    op.residuals["unitarity"] = m.residuals.at("unitarity" + std::to_string(axis));
    op.residuals["commutation"] = m.residuals.at("commutation");
    op.residuals["intertwining"] = m.residuals.at("intertwining" + std::to_string(axis));
    json j = toJson(op);
    j["meta"] = meta(c);
    j["alphaAngle"] = *a;
    w.json_("unitary_U" + std::to_string(axis) + ".json", j);
  }
  json res = json::object();
  for (const auto& [k, v] : m.residuals) res[k] = v;
  w.json_("unitary.json", {{"meta", meta(c)}, {"alphaAngle", *a}, {"residuals", res}});
  return kPass;
}

int cmdVerify(const RunConfig& c, Writer& w) {
  const auto a = firstGeneric(c);
  if (!a) {
    std::cerr << "error: verification needs a generic alpha\n";
    return kAllExceptional;
  }
  VerifyOptions opt;
  opt.model = c.model;
  opt.thresholds = c.thresholds;
  opt.scanGrid = c.scan;
  const VerifyReport r = runVerify(c.phi, unimodular(*a), opt);
  json j = r.toJson();
  j["meta"] = meta(c);
  j["alphaAngle"] = *a;
  w.json_("verify.json", j);
  for (const auto& ch : r.checks)
    std::cerr << (ch.pass ? "pass " : "FAIL ") << ch.name << " " << ch.value << " (threshold " << ch.threshold << ")\n";
  if (const Check* f = r.firstFailure()) {
    std::cerr << "verification failed: " << f->name << '\n';
    return kFail;
  }
  return kPass;
}

int cmdSpectrum(const RunConfig& c, Writer& w) {
  const double a = c.angles.front();
  if (isExceptional(c.phi, unimodular(a))) {
    std::cerr << "error: alpha = exp(i*" << a
              << ") is exceptional; the joint spectrum statement needs a generic alpha\n";
    return kAllExceptional;
  }
  const ClarkModel m = buildClarkModel(c.phi, unimodular(a), c.model);
  const NodeScan ns = nodeBasisScan(m, c.scan);
  w.text("spectrum_scan.csv", scanCsv(ns.scan, csvHeader(c, "Taylor scan of the node-basis Clark pair")));
  std::ostringstream s;
  s.precision(17);
  s << commentBlock(csvHeader(c, "level set nodes")) << "theta1,theta2,branch\n";
  for (const auto& n : m.mu.nodes)
    s << argCentered(std::arg(n.z1)) << ',' << argCentered(std::arg(n.z2)) << ',' << n.branch << '\n';
  w.text("spectrum_nodes.csv", s.str());
  json md = scanMetadata(ns.scan);
  md["meta"] = meta(c);
  md["alphaAngle"] = a;
  md["hausdorff"] = ns.hausdorff;
  md["bound"] = ns.bound;
  md["pairCommutation"] = ns.commutation;
  md["wideningRule"] = "10 x commutation residual of the node-basis pair";
  md["inputResiduals"] = {{"unitarity", m.residuals.at("unitarity")},
                          {"commutation", m.residuals.at("commutation")},
                          {"intertwining", m.residuals.at("intertwining")}};
  w.json_("spectrum.json", md);
  std::cerr << "Hausdorff distance " << ns.hausdorff << " (bound " << ns.bound << ")\n";
  return kPass;
}

int cmdExample(RunConfig c, Writer& w) {
  c.command = "levelset";
  c.format = "csv";
  resolve(c);
  const int e = cmdLevelset(c, w);
  if (e != kPass) return e;
  c.command = "measure";
  c.format = "json";
  resolve(c);
  if (const int e2 = cmdMeasure(c, w); e2 != kPass) return e2;
  c.command = "verify";
  // without --alpha the default angle list is exported but the profile's own alpha is verified
  if (c.verifyProfileAlpha && c.profile) {
    std::ostringstream a;
    a.precision(17);
    a << std::arg(c.profile->alpha);
    c.alphaList = a.str();
  }
  resolve(c);
  return cmdVerify(c, w);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clark measures, Clark unitaries and Taylor spectra for rational inner functions on the bidisk"};
  app.set_version_flag("--version", kToolVersion);
  app.set_config("--config", "", "TOML file mirroring the flags; flags override");
  app.require_subcommand(1);

  RunConfig c;
  std::string exampleName;
  app.add_option("--rif", c.rifSource, "RIF JSON file, inline JSON, or a bundled profile name");
  app.add_option("--alpha", c.alphaList, "comma separated angles a, alpha = exp(i a)");
  app.add_option("--nodes", c.nodes, "circle nodes N (power of two)");
  app.add_option("--degree", c.degree, "truncation degree D");
  app.add_option("--grid", c.grid, "boundary grid G (power of two >= 2D+2)");
  app.add_option("--scan", c.scan, "spectrum scan grid size");
  app.add_option("--tol-profile", c.tolProfile, "strict or singular")->check(CLI::IsMember({"strict", "singular"}));
  app.add_option("--out", c.out, "output directory");
  app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  for (const char* name : {"levelset", "measure", "unitary", "verify", "spectrum"})
    app.add_subcommand(name, std::string(name) + " pipeline")->fallthrough();
  auto* ex = app.add_subcommand("example", "run a bundled profile end to end")->fallthrough();
  ex->add_option("name", exampleName, "zw, fave or blaschke2")
      ->required()
      ->check(CLI::IsMember({"zw", "fave", "blaschke2"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  c.command = app.get_subcommands().front()->get_name();
  try {
    if (c.command == "example") {
      c.rifSource = exampleName;
      if (c.alphaList.empty()) {
        c.alphaList = "0.7853981633974483,1.5707963267948966,-1.5707963267948966";
        c.verifyProfileAlpha = true;
      }
    }
    resolve(c);  // validate before writing anything
  } catch (const Error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kUsage;
  }

  Writer w{fs::path(c.out)};
  try {
    if (c.command == "example") return cmdExample(c, w);
    if (c.command == "levelset") return cmdLevelset(c, w);
    if (c.command == "measure") return cmdMeasure(c, w);
    if (c.command == "unitary") return cmdUnitary(c, w);
    if (c.command == "verify") return cmdVerify(c, w);
    if (c.command == "spectrum") return cmdSpectrum(c, w);
  } catch (const ExceptionalAlphaError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kAllExceptional;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  }
  return kUsage;
}
