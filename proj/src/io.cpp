#include "bidisk/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "bidisk/errors.hpp"

namespace bidisk {

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hexHash(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json toJson(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complexFromJson(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw FormatError("expected a complex number [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json toJson(const BiPoly& p) {
  json c = json::array();
  for (int k = 0; k <= p.n1(); ++k)
    for (int l = 0; l <= p.n2(); ++l) c.push_back(toJson(p(k, l)));
  return {{"bidegree", {p.n1(), p.n2()}}, {"coeffs", c}};
}

BiPoly biPolyFromJson(const json& j) {
  if (!j.is_object() || !j.contains("bidegree") || !j.contains("coeffs"))
    throw FormatError("polynomial needs \"bidegree\" and \"coeffs\"");
  const json& bd = j["bidegree"];
  if (!bd.is_array() || bd.size() != 2 || !bd[0].is_number_integer() || !bd[1].is_number_integer())
    throw FormatError("bidegree must be [n1, n2]");
  const int n1 = bd[0].get<int>(), n2 = bd[1].get<int>();
  if (n1 < 0 || n2 < 0) throw FormatError("bidegree must be nonnegative");
  const json& c = j["coeffs"];
  if (!c.is_array() || c.size() != static_cast<size_t>(n1 + 1) * (n2 + 1))
    throw FormatError("coeffs length does not match bidegree");
  std::vector<cplx> v;
  v.reserve(c.size());
  for (const auto& e : c) v.push_back(complexFromJson(e));
  try {
    return BiPoly(n1, n2, v);
  } catch (const DomainError& e) {
    throw FormatError(std::string("polynomial: ") + e.what());
  }
}

json toJson(const Rif& phi) {
  return {{"p", toJson(phi.p)}, {"monomial", {phi.m1, phi.m2}}, {"phase", phi.phase}};
}

Rif rifFromJson(const json& j, const RifOptions& opt) {
  if (!j.is_object() || !j.contains("p")) throw FormatError("RIF needs \"p\"");
  std::pair<int, int> m{0, 0};
  if (j.contains("monomial")) {
    const json& mj = j["monomial"];
    if (!mj.is_array() || mj.size() != 2 || !mj[0].is_number_integer() || !mj[1].is_number_integer())
      throw FormatError("monomial must be [m1, m2]");
    m = {mj[0].get<int>(), mj[1].get<int>()};
    if (m.first < 0 || m.second < 0) throw FormatError("monomial powers must be nonnegative");
  }
  double phase = 0.0;
  if (j.contains("phase")) {
    if (!j["phase"].is_number()) throw FormatError("phase must be a number");
    phase = j["phase"].get<double>();
  }
  return makeRif(biPolyFromJson(j["p"]), m, phase, opt);
}

json loadJsonSource(const std::string& source) {
  std::string text = source;
  const auto first = source.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw FormatError("empty JSON source");
  if (source[first] != '{' && source[first] != '[') {
    std::ifstream in(source);
    if (!in) throw FormatError("cannot open " + source);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

json toJson(const BlaschkeProduct& b) {
  json z = json::array();
  for (const cplx& l : b.zeros) z.push_back(toJson(l));
  return {{"zeros", z}, {"m", b.m}, {"phase", b.phase}};
}

BlaschkeProduct blaschkeFromJson(const json& j) {
  if (!j.is_object() || !j.contains("zeros") || !j["zeros"].is_array())
    throw FormatError("Blaschke product needs a \"zeros\" array");
  std::vector<cplx> zs;
  for (const auto& e : j["zeros"]) zs.push_back(complexFromJson(e));
  int m = 0;
  double phase = 0.0;
  if (j.contains("m")) {
    if (!j["m"].is_number_integer()) throw FormatError("m must be an integer");
    m = j["m"].get<int>();
  }
  if (j.contains("phase")) {
    if (!j["phase"].is_number()) throw FormatError("phase must be a number");
    phase = j["phase"].get<double>();
  }
  try {
    return makeBlaschke(zs, m, phase);
  } catch (const DomainError& e) {
    throw FormatError(std::string("Blaschke product: ") + e.what());
  }
}

json toJson(const ClarkMeasureQuad& mu) {
  auto node = [](const ClarkNode& n) {
    return json{{"theta1", argCentered(std::arg(n.z1))},
                {"theta2", argCentered(std::arg(n.z2))},
                {"mass", n.mass},
                {"branch", n.branch}};
  };
  json nodes = json::array(), ex = json::array();
  for (const auto& n : mu.nodes) nodes.push_back(node(n));
  for (const auto& n : mu.excluded) ex.push_back(node(n));
  return {{"alpha", toJson(mu.alpha)}, {"nodes", nodes}, {"excluded", ex},
          {"massDeficitEstimate", mu.massDeficitEstimate}};
}

json toJson(const TruncatedOperator& op) {
  json m = json::array();
  for (Eigen::Index i = 0; i < op.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < op.matrix.cols(); ++j) m.push_back(toJson(op.matrix(i, j)));
  json r = json::object();
  for (const auto& [k, v] : op.residuals) r[k] = v;
  return {{"basis", op.basisRef}, {"dim", op.matrix.rows()}, {"matrix", m}, {"residuals", r}};
}

std::string commentBlock(const std::string& text) {
  std::ostringstream out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out << "# " << line << '\n';
  return out.str();
}

std::string levelSetCsv(const LevelSetBranches& ls, const std::string& header) {
  std::ostringstream out;
  out.precision(17);
  out << commentBlock(header) << "theta1,theta2,branch,alpha_re,alpha_im\n";
  for (size_t j = 0; j < ls.branches.size(); ++j)
    for (int i = 0; i < ls.N; ++i)
      out << argCentered(std::arg(ls.nodes[i])) << ',' << argCentered(std::arg(ls.branches[j][i])) << ',' << j
          << ',' << ls.alpha.real() << ',' << ls.alpha.imag() << '\n';
  return out.str();
}

std::string scanCsv(const SpectrumScan& s, const std::string& header) {
  std::ostringstream out;
  out.precision(17);
  out << commentBlock(header) << "theta1,theta2,inSpectrum\n";
  for (int i = 0; i < s.gridN; ++i)
    for (int j = 0; j < s.gridN; ++j) out << s.angles[i] << ',' << s.angles[j] << ',' << (s.at(i, j) ? 1 : 0) << '\n';
  return out.str();
}

json scanMetadata(const SpectrumScan& s) {
  return {{"gridN", s.gridN},         {"tol", s.tol},
          {"absTol", s.absTol},       {"widening", s.widening},
          {"evaluatedCells", s.evaluatedCells}, {"inputHash", s.inputHash},
          {"maskedCells", s.maskedAngles().size()}};
}

}  // namespace bidisk
