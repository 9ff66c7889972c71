#include "ricci_spectra/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "ricci_spectra/errors.hpp"

namespace ricci {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || text.empty())
    throw ConfigError("invalid value '" + text + "' for key '" + key + "'");
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) throw ConfigError("non-finite value for key '" + key + "'");
  }
  return value;
}

std::vector<PerturbationTerm> parse_terms(Model model, const std::string& text) {
  std::vector<PerturbationTerm> terms;
  for (const auto& item : split(text, ';')) {
    if (item.empty()) continue;
    const auto fields = split(item, ',');
    PerturbationTerm term;
    if (model == Model::Sphere) {
      if (fields.size() != 2) throw ConfigError("sphere perturbation term needs 'k,amp': '" + item + "'");
      term.kx = parse_number<int>("perturbation", fields[0]);
      term.amplitude = parse_number<double>("perturbation", fields[1]);
      if (term.kx < 0) throw ConfigError("sphere mode number must be nonnegative");
    } else {
      if (fields.size() != 3 && fields.size() != 4)
        throw ConfigError("torus perturbation term needs 'kx,ky,amp[,phase]': '" + item + "'");
      term.kx = parse_number<int>("perturbation", fields[0]);
      term.ky = parse_number<int>("perturbation", fields[1]);
      term.amplitude = parse_number<double>("perturbation", fields[2]);
      if (fields.size() == 4) term.phase = parse_number<double>("perturbation", fields[3]);
    }
    terms.push_back(term);
  }
  return terms;
}

const std::set<std::string> kKeys = {"model", "N", "M", "perturbation", "c", "flow_mode", "t_end",
                                     "dt_safety", "fd_sample_step", "output_path", "seed"};

}  // namespace

const char* to_string(Model model) { return model == Model::Sphere ? "sphere" : "torus"; }
const char* to_string(FlowMode mode) { return mode == FlowMode::Ricci ? "ricci" : "normalized"; }

std::vector<PerturbationTerm> random_perturbation(Model model, std::uint64_t seed, int terms, double amplitude) {
  Lcg rng(seed);
  std::vector<PerturbationTerm> out;
  for (int k = 0; k < terms; ++k) {
    PerturbationTerm term;
    if (model == Model::Sphere) {
      term.kx = 1 + static_cast<int>(rng.uniform() * 3.0);
    } else {
      do {
        term.kx = static_cast<int>(rng.uniform() * 5.0) - 2;
        term.ky = static_cast<int>(rng.uniform() * 5.0) - 2;
      } while (term.kx == 0 && term.ky == 0);
    }
    term.amplitude = (amplitude / terms) * (0.5 + 0.5 * rng.uniform());
    if (model == Model::Torus) term.phase = 2.0 * std::numbers::pi * rng.uniform();
    out.push_back(term);
  }
  return out;
}

Background Scenario::background() const {
  return model == Model::Sphere ? Background::round_sphere(n) : Background::flat_torus(n, m);
}

ConformalMetric Scenario::initial_metric() const {
  const Background bg = background();
  const bool sphere = model == Model::Sphere;
  ScalarField u = ScalarField::sample(bg, [&](double x, double y) {
    double v = 0.0;
    for (const auto& t : perturbation)
      v += sphere ? t.amplitude * std::cos(t.kx * x) : t.amplitude * std::cos(t.kx * x + t.ky * y + t.phase);
    return v;
  });
  return ConformalMetric(bg, std::move(u));
}

Scenario Scenario::refined(int factor) const {
  Scenario s = *this;
  s.n *= factor;
  s.m *= factor;
  return s;
}

double Scenario::sample_interval() const {
  const long intervals = std::max(2L, std::lround(t_end / fd_sample_step));
  return t_end / static_cast<double>(intervals);
}

Scenario parse_scenario(std::istream& in) {
  std::map<std::string, std::string> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    if (!kKeys.contains(key)) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (!values.emplace(key, value).second)
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
  }

  auto require = [&](const std::string& key) -> const std::string& {
    const auto it = values.find(key);
    if (it == values.end()) throw ConfigError("missing required key '" + key + "'");
    return it->second;
  };
  auto optional = [&](const std::string& key) -> const std::string* {
    const auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };

  Scenario s;
  const std::string& model = require("model");
  if (model == "sphere")
    s.model = Model::Sphere;
  else if (model == "torus")
    s.model = Model::Torus;
  else
    throw ConfigError("model must be 'sphere' or 'torus', got '" + model + "'");

  s.n = parse_number<int>("N", require("N"));
  s.m = s.model == Model::Sphere ? 1 : (optional("M") ? parse_number<int>("M", *optional("M")) : s.n);
  if (s.n < 3 || s.m < 1 || (s.model == Model::Torus && s.m < 3)) throw ConfigError("grid too small");
  if (s.model == Model::Sphere && optional("M")) throw ConfigError("key 'M' only applies to the torus");

  if (const auto* v = optional("c")) s.c = parse_number<double>("c", *v);
  if (const auto* v = optional("flow_mode")) {
    if (*v == "ricci")
      s.flow_mode = FlowMode::Ricci;
    else if (*v == "normalized")
      s.flow_mode = FlowMode::Normalized;
    else
      throw ConfigError("flow_mode must be 'ricci' or 'normalized', got '" + *v + "'");
  }
  s.t_end = parse_number<double>("t_end", require("t_end"));
  if (!(s.t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (const auto* v = optional("dt_safety")) s.dt_safety = parse_number<double>("dt_safety", *v);
  if (!(s.dt_safety > 0.0 && s.dt_safety <= 1.0)) throw ConfigError("dt_safety must lie in (0, 1]");
  s.fd_sample_step = s.t_end / 10.0;
  if (const auto* v = optional("fd_sample_step")) s.fd_sample_step = parse_number<double>("fd_sample_step", *v);
  if (!(s.fd_sample_step > 0.0) || s.fd_sample_step > s.t_end / 2.0)
    throw ConfigError("fd_sample_step must lie in (0, t_end/2]");
  if (const auto* v = optional("output_path")) s.output_path = *v;
  if (const auto* v = optional("seed")) s.seed = parse_number<std::uint64_t>("seed", *v);

  if (const auto* v = optional("perturbation"); v && *v != "none" && !v->empty()) {
    if (v->starts_with("random")) {
      const auto fields = split(*v, ':');
      if (fields.size() != 3 || fields[0] != "random")
        throw ConfigError("random perturbation must read random:<terms>:<amplitude>");
      const int terms = parse_number<int>("perturbation", fields[1]);
      const double amplitude = parse_number<double>("perturbation", fields[2]);
      if (terms < 1) throw ConfigError("random perturbation needs at least one term");
      s.perturbation = random_perturbation(s.model, s.seed, terms, amplitude);
    } else {
      s.perturbation = parse_terms(s.model, *v);
    }
  }

  // e^{2u} must start inside [0.1, 10].
  const ConformalMetric g = s.initial_metric();
  const double lo = std::exp(2.0 * g.u().min());
  const double hi = std::exp(2.0 * g.u().max());
  if (lo < 0.1 || hi > 10.0) throw ConfigError("perturbation too large: conformal factor leaves [0.1, 10]");
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  return parse_scenario(in);
}

}  // namespace ricci
