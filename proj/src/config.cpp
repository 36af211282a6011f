#include "nlskdv/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "nlskdv/error.hpp"

namespace nlskdv {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ValidationError(key + ": not a number: '" + text + "'");
  }
  return out;
}

long long parse_int(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  long long out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ValidationError(key + ": not an integer: '" + text + "'");
  }
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) throw ValidationError(key + ": empty list");
  return out;
}

std::vector<std::array<double, 4>> parse_quadruples(const std::string& text) {
  std::vector<std::array<double, 4>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (trim(item).empty()) continue;
    std::stringstream is(item);
    std::array<double, 4> q{};
    std::string tok;
    int k = 0;
    while (is >> tok) {
      if (k == 4) throw ValidationError("quadruples: more than four numbers in '" + item + "'");
      q[k++] = parse_double("quadruples", tok);
    }
    if (k != 4) throw ValidationError("quadruples: expected s1 t1 s2 t2 in '" + item + "'");
    out.push_back(q);
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"physics.alpha", [](RunConfig& c, const std::string& v) { c.alpha = parse_double("alpha", v); }},
      {"physics.tau1", [](RunConfig& c, const std::string& v) { c.tau1 = parse_double("tau1", v); }},
      {"physics.tau2", [](RunConfig& c, const std::string& v) { c.tau2 = parse_double("tau2", v); }},
      {"physics.p", [](RunConfig& c, const std::string& v) { c.p = Rational::parse(trim(v)); }},
      {"physics.q", [](RunConfig& c, const std::string& v) { c.q = parse_double("q", v); }},
      {"grid.L", [](RunConfig& c, const std::string& v) { c.L = parse_double("L", v); }},
      {"grid.n", [](RunConfig& c, const std::string& v) { c.n = static_cast<int>(parse_int("n", v)); }},
      {"solver.tol", [](RunConfig& c, const std::string& v) { c.tol = parse_double("tol", v); }},
      {"solver.max_iter",
       [](RunConfig& c, const std::string& v) { c.max_iter = static_cast<int>(parse_int("max_iter", v)); }},
      {"solver.continuation_step",
       [](RunConfig& c, const std::string& v) { c.continuation_step = parse_double("continuation_step", v); }},
      {"solver.stage_tol", [](RunConfig& c, const std::string& v) { c.stage_tol = parse_double("stage_tol", v); }},
      {"solver.leak_threshold",
       [](RunConfig& c, const std::string& v) { c.leak_threshold = parse_double("leak_threshold", v); }},
      {"problem.s", [](RunConfig& c, const std::string& v) { c.s = parse_double("s", v); }},
      {"problem.t", [](RunConfig& c, const std::string& v) { c.t = parse_double("t", v); }},
      {"sweep.s_min", [](RunConfig& c, const std::string& v) { c.s_min = parse_double("s_min", v); }},
      {"sweep.s_max", [](RunConfig& c, const std::string& v) { c.s_max = parse_double("s_max", v); }},
      {"sweep.s_count",
       [](RunConfig& c, const std::string& v) { c.s_count = static_cast<int>(parse_int("s_count", v)); }},
      {"sweep.t_min", [](RunConfig& c, const std::string& v) { c.t_min = parse_double("t_min", v); }},
      {"sweep.t_max", [](RunConfig& c, const std::string& v) { c.t_max = parse_double("t_max", v); }},
      {"sweep.t_count",
       [](RunConfig& c, const std::string& v) { c.t_count = static_cast<int>(parse_int("t_count", v)); }},
      {"evolve.dt", [](RunConfig& c, const std::string& v) { c.dt = parse_double("dt", v); }},
      {"evolve.T", [](RunConfig& c, const std::string& v) { c.T = parse_double("T", v); }},
      {"evolve.seed",
       [](RunConfig& c, const std::string& v) {
         const auto s = parse_int("seed", v);
         if (s < 0) throw ValidationError("seed must be non-negative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"evolve.epsilons", [](RunConfig& c, const std::string& v) { c.epsilons = parse_list("epsilons", v); }},
      {"evolve.sample_every",
       [](RunConfig& c, const std::string& v) { c.sample_every = static_cast<int>(parse_int("sample_every", v)); }},
      {"evolve.k_width", [](RunConfig& c, const std::string& v) { c.k_width = parse_double("k_width", v); }},
      {"verify.quadruples", [](RunConfig& c, const std::string& v) { c.quadruples = parse_quadruples(v); }},
      {"run.output_dir", [](RunConfig& c, const std::string& v) { c.output_dir = trim(v); }},
      {"run.workers",
       [](RunConfig& c, const std::string& v) { c.workers = static_cast<int>(parse_int("workers", v)); }},
  };
  return table;
}

}  // namespace

PhysParams RunConfig::params() const { return PhysParams(alpha, tau1, tau2, p, q); }

GridPtr RunConfig::grid() const { return make_grid(L, n); }

MinimizeOptions RunConfig::solver() const {
  MinimizeOptions o;
  o.tol = tol;
  o.max_iter = max_iter;
  o.continuation_step = continuation_step;
  o.stage_tol = stage_tol;
  o.leak_threshold = leak_threshold;
  return o;
}

int RunConfig::worker_count() const {
  if (workers > 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::filesystem::path RunConfig::output_path() const {
  std::filesystem::path out(output_dir);
  if (out.is_relative()) {
    if (const char* root = std::getenv("NLSKDV_OUTPUT_ROOT"); root && *root) {
      return std::filesystem::path(root) / out;
    }
  }
  return out;
}

void RunConfig::validate() const {
  auto finite = [](double x, const char* name) {
    if (!std::isfinite(x)) throw ValidationError(std::string(name) + " must be finite");
  };
  for (auto [x, name] : {std::pair{alpha, "alpha"}, {tau1, "tau1"}, {tau2, "tau2"}, {q, "q"},
                         {L, "L"}, {tol, "tol"}, {s, "s"}, {t, "t"}, {dt, "dt"}, {T, "T"},
                         {k_width, "k_width"}}) {
    finite(x, name);
  }
  params();  // PhysParams enforces the sign and exponent ranges
  grid();    // and Grid1D the grid shape
  require(tol > 0, "tol must be positive");
  require(max_iter > 0, "max_iter must be positive");
  require(stage_tol > 0, "stage_tol must be positive");
  require(leak_threshold > 0, "leak_threshold must be positive");
  require(s >= 0 && t >= 0, "s and t must be non-negative");
  require(s_min > 0 && s_max >= s_min && s_count >= 1, "sweep needs 0 < s_min <= s_max, s_count >= 1");
  require(t_min >= 0 && t_max >= t_min && t_count >= 1, "sweep needs 0 <= t_min <= t_max, t_count >= 1");
  require(dt > 0, "dt must be positive");
  require(T >= 0, "T must be non-negative");
  require(sample_every >= 1, "sample_every must be at least 1");
  require(k_width > 0, "k_width must be positive");
  for (double e : epsilons) require(std::isfinite(e) && e >= 0, "epsilons must be non-negative");
  require(!epsilons.empty(), "epsilons must not be empty");
  require(!output_dir.empty(), "output_dir must not be empty");
  require(workers >= 0, "workers must be non-negative");
}

nlohmann::json RunConfig::to_json() const {
  return {
      {"physics", {{"alpha", alpha}, {"tau1", tau1}, {"tau2", tau2},
                   {"p", {{"num", p.num}, {"den", p.den}}}, {"q", q}}},
      {"grid", {{"L", L}, {"n", n}}},
      {"solver", {{"tol", tol}, {"max_iter", max_iter}, {"continuation_step", continuation_step},
                  {"stage_tol", stage_tol}, {"leak_threshold", leak_threshold}}},
      {"problem", {{"s", s}, {"t", t}}},
      {"sweep", {{"s_min", s_min}, {"s_max", s_max}, {"s_count", s_count},
                 {"t_min", t_min}, {"t_max", t_max}, {"t_count", t_count}}},
      {"evolve", {{"dt", dt}, {"T", T}, {"seed", seed}, {"epsilons", epsilons},
                  {"sample_every", sample_every}, {"k_width", k_width}}},
      {"verify", {{"quadruples", quadruples}}},
      {"run", {{"output_dir", output_dir}, {"workers", workers}}},
  };
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    const auto& ph = j.at("physics");
    c.alpha = ph.at("alpha");
    c.tau1 = ph.at("tau1");
    c.tau2 = ph.at("tau2");
    c.p = Rational::make(ph.at("p").at("num"), ph.at("p").at("den"));
    c.q = ph.at("q");
    c.L = j.at("grid").at("L");
    c.n = j.at("grid").at("n");
    const auto& so = j.at("solver");
    c.tol = so.at("tol");
    c.max_iter = so.at("max_iter");
    c.continuation_step = so.at("continuation_step");
    c.stage_tol = so.at("stage_tol");
    c.leak_threshold = so.at("leak_threshold");
    c.s = j.at("problem").at("s");
    c.t = j.at("problem").at("t");
    const auto& sw = j.at("sweep");
    c.s_min = sw.at("s_min");
    c.s_max = sw.at("s_max");
    c.s_count = sw.at("s_count");
    c.t_min = sw.at("t_min");
    c.t_max = sw.at("t_max");
    c.t_count = sw.at("t_count");
    const auto& ev = j.at("evolve");
    c.dt = ev.at("dt");
    c.T = ev.at("T");
    c.seed = ev.at("seed");
    c.epsilons = ev.at("epsilons").get<std::vector<double>>();
    c.sample_every = ev.at("sample_every");
    c.k_width = ev.at("k_width");
    c.quadruples = j.at("verify").at("quadruples").get<std::vector<std::array<double, 4>>>();
    c.output_dir = j.at("run").at("output_dir");
    c.workers = j.at("run").at("workers");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config JSON: ") + e.what());
  }
  return c;
}

void RunConfig::set(const std::string& section, const std::string& key, const std::string& value) {
  const auto it = setters().find(section + "." + key);
  if (it == setters().end()) throw ValidationError("unknown config key [" + section + "] " + key);
  it->second(*this, value);
}

RunConfig RunConfig::from_ini(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("config file not found: " + path.string());
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ValidationError("malformed config " + path.string() + ": " + e.message() + " (line " +
                          std::to_string(e.line()) + ")");
  }
  RunConfig c;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ValidationError("config key outside a section: " + section);
    for (const auto& [key, value] : body) c.set(section, key, value.data());
  }
  return c;
}

}  // namespace nlskdv
