#include "koblab/json_io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <variant>

namespace koblab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double need_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) throw ConfigError(std::string("missing numeric field '") + key + "'");
  return j[key].get<double>();
}

int need_int(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw ConfigError(std::string("missing integer field '") + key + "'");
  return j[key].get<int>();
}

double parse_real(std::string_view s) {
  double x = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, x);
  if (ec != std::errc() || ptr != end) throw ConfigError("cannot parse number '" + std::string(s) + "'");
  return x;
}

}  // namespace

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(std::span<const cplx> z) {
  json a = json::array();
  for (const auto& x : z) a.push_back(to_json(x));
  return a;
}

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_string()) return parse_complex(j.get<std::string>());
  throw ConfigError("complex numbers are [re, im], a real number, or a string like \"1+2i\"");
}

CVec cvec_from_json(const json& j) {
  if (!j.is_array()) throw ConfigError("expected an array of complex numbers");
  CVec v;
  for (const auto& x : j) v.push_back(complex_from_json(x));
  return v;
}

cplx parse_complex(const std::string& raw) {
  std::string s;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw ConfigError("empty complex number");
  if (s.back() != 'i') return {parse_real(s), 0.0};
  s.pop_back();
  // split at the last sign that is not part of an exponent
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_part = [](std::string_view t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t.front() == '+' ? t.substr(1) : t);
  };
  if (split == std::string::npos) return {0.0, imag_part(s)};
  return {parse_real(std::string_view(s).substr(0, split)), imag_part(std::string_view(s).substr(split))};
}

CVec parse_cvec(const std::string& s) {
  CVec v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(parse_complex(item));
  if (v.empty()) throw ConfigError("empty coordinate list");
  return v;
}

Domain domain_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw ConfigError("domain needs a string field 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "disc") {
    const cplx c = j.contains("center") ? complex_from_json(j["center"]) : cplx(0.0, 0.0);
    return Domain::disc(c, need_number(j, "radius"));
  }
  if (kind == "annulus") {
    if (j.contains("R")) {
      const double R = need_number(j, "R");
      if (!(R > 1.0)) throw ConfigError("R must be > 1");
      return Domain::annulus(1.0 / std::sqrt(R), std::sqrt(R));
    }
    return Domain::annulus(need_number(j, "inner"), need_number(j, "outer"));
  }
  if (kind == "ball") {
    const int n = need_int(j, "n");
    const CVec c = j.contains("center") ? cvec_from_json(j["center"]) : CVec(static_cast<std::size_t>(std::max(n, 0)));
    return Domain::ball(n, c, need_number(j, "radius"));
  }
  if (kind == "polydisc") {
    if (!j.contains("radii") || !j["radii"].is_array()) throw ConfigError("polydisc needs 'radii'");
    return Domain::polydisc(j["radii"].get<std::vector<double>>());
  }
  if (kind == "tube_circle") return Domain::tube_circle(need_int(j, "n"), need_number(j, "r"));
  if (kind == "tube_sphere") return Domain::tube_sphere(need_int(j, "k"), need_number(j, "r"));
  throw ConfigError("unknown domain kind '" + kind + "'");
}

json domain_to_json(const Domain& d) {
  return std::visit(
      overloaded{[](const Disc& x) { return json{{"kind", "disc"}, {"center", to_json(x.center)}, {"radius", x.radius}}; },
                 [](const Annulus& x) { return json{{"kind", "annulus"}, {"inner", x.inner}, {"outer", x.outer}}; },
                 [](const Ball& x) {
                   return json{{"kind", "ball"}, {"n", x.n}, {"center", to_json(x.center)}, {"radius", x.radius}};
                 },
                 [](const Polydisc& x) { return json{{"kind", "polydisc"}, {"radii", x.radii}}; },
                 [](const TubeCircle& x) { return json{{"kind", "tube_circle"}, {"n", x.n}, {"r", x.r}}; },
                 [](const TubeSphere& x) { return json{{"kind", "tube_sphere"}, {"k", x.k}, {"r", x.r}}; },
                 [](const Generic& x) { return json{{"kind", "generic"}, {"label", x.label}, {"n", x.n}}; }},
      d.kind());
}

PolyMap polymap_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("map must be a JSON object");
  const int n_in = need_int(j, "n_in"), n_out = need_int(j, "n_out");
  if (!j.contains("terms") || !j["terms"].is_array()) throw ConfigError("map needs a 'terms' array");
  std::vector<PolyMap::Term> terms;
  for (const auto& t : j["terms"]) {
    if (!t.contains("idx") || !t.contains("coef")) throw ConfigError("each term needs 'idx' and 'coef'");
    terms.push_back({t["idx"].get<std::vector<int>>(), cvec_from_json(t["coef"])});
  }
  return PolyMap(n_in, n_out, std::move(terms));
}

json polymap_to_json(const PolyMap& f) {
  json terms = json::array();
  for (const auto& t : f.terms()) terms.push_back({{"idx", t.idx}, {"coef", to_json(t.coef)}});
  return {{"n_in", f.n_in()}, {"n_out", f.n_out()}, {"terms", terms}};
}

OptimizerBudget budget_from_json(const json& j, OptimizerBudget b) {
  if (!j.is_object()) throw ConfigError("budget must be a JSON object");
  if (j.contains("max_degree")) b.max_degree = j["max_degree"].get<int>();
  if (j.contains("restarts")) b.restarts = j["restarts"].get<int>();
  if (j.contains("max_iters")) b.max_iters = j["max_iters"].get<int>();
  if (j.contains("polish")) b.polish = j["polish"].get<int>();
  if (j.contains("boundary_angles")) b.boundary_angles = j["boundary_angles"].get<int>();
  if (j.contains("margin")) b.margin = j["margin"].get<double>();
  if (j.contains("seed")) b.seed = j["seed"].get<std::uint64_t>();
  b.validate();
  return b;
}

json budget_to_json(const OptimizerBudget& b) {
  return {{"max_degree", b.max_degree}, {"restarts", b.restarts},           {"max_iters", b.max_iters}, {"polish", b.polish},
          {"boundary_angles", b.boundary_angles}, {"margin", b.margin}, {"seed", b.seed}};
}

json load_json_arg(const std::string& arg) {
  try {
    if (!arg.empty() && arg.front() == '{') return json::parse(arg);
    std::ifstream in(arg);
    if (!in) throw ConfigError("cannot open '" + arg + "'");
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

json curve_to_json(const SampledCurve& c) {
  json pts = json::array();
  for (const auto& p : c.points()) pts.push_back(to_json(p.coords()));
  return {{"closed", c.closed()}, {"params", c.params()}, {"points", pts}};
}

json mesh_to_json(const SphereMeshMap& m) {
  json verts = json::array(), simp = json::array(), imgs = json::array();
  for (const auto& v : m.vertices()) verts.push_back(v);
  for (const auto& s : m.simplices()) {
    if (m.k() == 1)
      simp.push_back({s[0], s[1]});
    else
      simp.push_back(s);
  }
  for (const auto& p : m.images()) imgs.push_back(to_json(p.coords()));
  return {{"k", m.k()}, {"vertices", verts}, {"simplices", simp}, {"images", imgs}};
}

json report_to_json(const InvariantReport& r) {
  json j{{"value", r.value}, {"scale", r.scale}};
  j["lower_bound"] = r.lower_bound ? json(*r.lower_bound) : json(nullptr);
  j["certificate_parameter"] = r.certificate_parameter;
  j["evaluations"] = r.evaluations;
  if (!r.candidates.empty()) {
    json c = json::array();
    for (const auto& [param, value] : r.candidates) c.push_back({{"parameter", param}, {"value", value}});
    j["candidates"] = c;
  }
  if (r.curve) j["certificate"] = curve_to_json(*r.curve);
  if (r.mesh) j["certificate"] = mesh_to_json(*r.mesh);
  return j;
}

json report_to_json(const MeasureReport& r) {
  json sched = json::array();
  for (const auto& c : r.schedule) sched.push_back({{"epsilon", c.epsilon}, {"pieces", c.pieces.size()}, {"total", c.total}});
  return {{"k", r.k}, {"metric", metric_name(r.metric)}, {"scale", r.scale}, {"schedule", sched}, {"value", r.value}};
}

json report_to_json(const MonotonicityReport& r) {
  return {{"delta", r.delta},
          {"b_lower", r.b_lower},
          {"c_bound", r.c_bound},
          {"observed_ratio", r.observed_ratio},
          {"ratios", r.ratios}};
}

json report_to_json(const UniformMonotonicity& r) {
  return {{"c", r.c}, {"c_certified", r.c_certified}, {"delta", r.delta}, {"samples", r.samples}, {"ratios", r.ratios}};
}

json report_to_json(const FixedPointReport& r) {
  json limits = json::array();
  for (const auto& z : r.limits) limits.push_back(to_json(z));
  json iterates = json::array();
  for (const auto& z : r.iterates) iterates.push_back(to_json(z));
  return {{"z0", to_json(r.z0)},
          {"residual", r.residual},
          {"converged", r.converged},
          {"distinct_starts_agreement", r.distinct_starts_agreement},
          {"starts", r.starts.size()},
          {"steps", r.steps},
          {"limits", limits},
          {"image_margin", r.image_margin},
          {"c_certified", r.c_certified},
          {"c_sampled", r.c_sampled},
          {"kob_rates", r.kob_rates},
          {"tail_ratios", r.tail_ratios},
          {"max_tail_ratio", r.max_tail_ratio},
          {"tail_within_bound", r.tail_within_bound},
          {"comparability", {r.comparability_min, r.comparability_max}},
          {"iterates", iterates}};
}

json report_to_json(const DegreeCollapse& r) {
  json powers = json::array();
  for (const auto& [j, d] : r.power_degrees) powers.push_back({{"power", j}, {"degree", d}});
  return {{"degree", r.degree},
          {"power_degrees", powers},
          {"multiplicative", r.multiplicative},
          {"fixed_point", to_json(r.z0)},
          {"collapse_step", r.collapse_step ? json(*r.collapse_step) : json(nullptr)},
          {"collapse_radius", r.collapse_radius},
          {"target_margin", r.target_margin}};
}

}  // namespace koblab
