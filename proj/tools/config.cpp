#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "cli.hpp"
#include "dumenu/error.hpp"

namespace dumenu::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_plain(const std::string& text, const std::string& field) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw ConfigError(field + ": cannot parse '" + text + "' as a number");
  }
  return v;
}

std::size_t parse_count(const std::string& text, const std::string& field) {
  std::size_t v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw ConfigError(field + ": expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

OrderingMode parse_ordering(const std::string& text) {
  if (text == "more_averse_larger_loss" || text == "1") return OrderingMode::MoreAverseLargerLoss;
  if (text == "less_averse_larger_loss" || text == "2") return OrderingMode::LessAverseLargerLoss;
  throw ConfigError("ordering: unknown mode '" + text +
                    "' (more_averse_larger_loss | less_averse_larger_loss)");
}

void require_family(const FamilySpec& spec, const std::string& field,
                    std::initializer_list<const char*> known) {
  for (const char* k : known) {
    if (spec.family == k) return;
  }
  std::string list;
  for (const char* k : known) list += (list.empty() ? "" : " | ") + std::string(k);
  throw ConfigError(field + ": unknown family '" + spec.family + "' (" + list + ")");
}

TypeMeasure make_measure(const FamilySpec& spec, double lo, double hi) {
  if (spec.family == "uniform") return TypeMeasure::uniform(lo, hi);
  if (spec.family == "power") return TypeMeasure::power(lo, hi, spec.param("k", 1.0));
  return TypeMeasure::power_reflected(lo, hi, spec.param("k", 1.0));
}

}  // namespace

double FamilySpec::param(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

double parse_number(const std::string& raw, const std::string& field) {
  const std::string text = trim(raw);
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_plain(text, field);
  const double num = parse_plain(trim(text.substr(0, slash)), field);
  const double den = parse_plain(trim(text.substr(slash + 1)), field);
  if (den == 0.0) throw ConfigError(field + ": zero denominator in '" + text + "'");
  return num / den;
}

std::vector<double> parse_number_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_number(item, field));
  }
  return out;
}

ScenarioConfig builtin_config(const std::string& name) {
  ScenarioConfig c;
  c.name = name;
  if (name == "s1") return c;
  if (name == "s2") {
    c.eta = {"power", {{"k", 1.0}}};
    return c;
  }
  if (name == "s3") {
    c.agent = {"power", {{"a", 2.0}, {"b", -0.2}}};
    c.loss = {"power", {{"kappa", 2.0}}};
    c.ordering = OrderingMode::LessAverseLargerLoss;
    return c;
  }
  throw ConfigError("scenario: unknown built-in '" + name + "' (s1 | s2 | s3)");
}

ScenarioConfig parse_config(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }

  ScenarioConfig c;
  for (const auto& [key, value] : entries) {
    if (key == "scenario") c = builtin_config(value);
  }

  using Setter = std::function<void(const std::string&, const std::string&)>;
  auto number = [](double& dst) -> Setter {
    return [&dst](const std::string& k, const std::string& v) { dst = parse_number(v, k); };
  };
  auto count = [](std::size_t& dst) -> Setter {
    return [&dst](const std::string& k, const std::string& v) { dst = parse_count(v, k); };
  };
  auto family = [](FamilySpec& dst) -> Setter {
    return [&dst](const std::string&, const std::string& v) {
      dst.family = v;
      dst.params.clear();
    };
  };
  auto param = [](FamilySpec& dst, std::string name) -> Setter {
    return [&dst, name](const std::string& k, const std::string& v) {
      dst.params[name] = parse_number(v, k);
    };
  };

  const std::map<std::string, Setter> setters{
      {"scenario", [](const std::string&, const std::string&) {}},
      {"name", [&](const std::string&, const std::string& v) { c.name = v; }},
      {"types.lo", number(c.type_lo)},
      {"types.hi", number(c.type_hi)},
      {"types.count", count(c.type_count)},
      {"loss.cap", number(c.loss_cap)},
      {"loss.cells", count(c.loss_cells)},
      {"loss.family", family(c.loss)},
      {"loss.kappa", param(c.loss, "kappa")},
      {"mu.family", family(c.mu)},
      {"mu.k", param(c.mu, "k")},
      {"eta.family", family(c.eta)},
      {"eta.k", param(c.eta, "k")},
      {"agent.family", family(c.agent)},
      {"agent.a", param(c.agent, "a")},
      {"agent.b", param(c.agent, "b")},
      {"insurer.family", family(c.insurer)},
      {"insurer.beta", param(c.insurer, "beta")},
      {"alpha", number(c.alpha)},
      {"ordering", [&](const std::string&, const std::string& v) { c.ordering = parse_ordering(v); }},
      {"tol.ic", number(c.ic_tol)},
      {"tol.ir", number(c.ir_tol)},
      {"tol.tie", number(c.tie_tol)},
      {"seed", [&](const std::string& k, const std::string& v) { c.seed = parse_count(v, k); }},
      {"oracle.types", count(c.oracle_types)},
      {"oracle.cells", count(c.oracle_cells)},
      {"oracle.alphabet",
       [&](const std::string& k, const std::string& v) { c.oracle_alphabet = parse_number_list(v, k); }},
      {"workers",
       [&](const std::string& k, const std::string& v) {
         c.workers = static_cast<unsigned>(parse_count(v, k));
       }},
      {"dominance.trials", count(c.dominance_trials)},
      {"sweep.alphas",
       [&](const std::string& k, const std::string& v) { c.sweep_alphas = parse_number_list(v, k); }},
      {"out", [&](const std::string&, const std::string& v) { c.out_dir = v; }},
  };

  // family keys first so that their parameters survive regardless of line order
  for (const auto& [key, value] : entries) {
    if (key.ends_with(".family")) {
      const auto it = setters.find(key);
      if (it == setters.end()) throw ConfigError(key + ": unknown key");
      it->second(key, value);
    }
  }
  for (const auto& [key, value] : entries) {
    if (key.ends_with(".family")) continue;
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(key + ": unknown key");
    it->second(key, value);
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  return parse_config(in);
}

void validate(const ScenarioConfig& c) {
  auto fail = [](const std::string& field, const std::string& what) {
    throw ConfigError(field + ": " + what);
  };
  auto in_unit = [](double a) { return std::isfinite(a) && a >= 0.0 && a <= 1.0; };

  if (!in_unit(c.alpha)) {
    std::ostringstream os;
    os << "must lie in [0, 1], got " << c.alpha;
    fail("alpha", os.str());
  }
  if (!(std::isfinite(c.type_lo) && std::isfinite(c.type_hi) && c.type_lo < c.type_hi)) {
    fail("types.lo", "need finite types.lo < types.hi");
  }
  if (c.type_count < 3) fail("types.count", "need at least 3 type nodes");
  if (!(std::isfinite(c.loss_cap) && c.loss_cap > 0.0)) fail("loss.cap", "must be positive");
  if (c.loss_cells < 1) fail("loss.cells", "need at least 1 loss cell");

  require_family(c.mu, "mu.family", {"uniform", "power", "power_reflected"});
  require_family(c.eta, "eta.family", {"uniform", "power", "power_reflected"});
  require_family(c.agent, "agent.family", {"power", "identity"});
  require_family(c.insurer, "insurer.family", {"power", "identity"});
  require_family(c.loss, "loss.family", {"power", "uniform", "zero"});
  if (c.mu.param("k", 1.0) <= -1.0) fail("mu.k", "must exceed -1");
  if (c.eta.param("k", 1.0) <= -1.0) fail("eta.k", "must exceed -1");
  if (c.insurer.param("beta", 1.0) <= 0.0) fail("insurer.beta", "must be positive");
  if (c.agent.param("a", 1.0) <= 0.0) fail("agent.a", "must be positive");

  if (!(c.ic_tol > 0.0)) fail("tol.ic", "must be positive");
  if (!(c.ir_tol > 0.0)) fail("tol.ir", "must be positive");
  if (!(c.tie_tol >= 0.0)) fail("tol.tie", "must be non-negative");
  if (c.oracle_types < 1) fail("oracle.types", "need at least 1 type");
  if (c.oracle_cells < 1) fail("oracle.cells", "need at least 1 cell");
  if (c.oracle_alphabet.empty()) fail("oracle.alphabet", "empty slope alphabet");
  for (double a : c.oracle_alphabet) {
    if (!in_unit(a)) fail("oracle.alphabet", "entries must lie in [0, 1]");
  }
  for (double a : c.sweep_alphas) {
    if (!in_unit(a)) fail("sweep.alphas", "entries must lie in [0, 1]");
  }
}

Scenario build_scenario(const ScenarioConfig& c) {
  validate(c);
  const TypeGrid types(c.type_lo, c.type_hi, c.type_count);
  const LossGrid losses(c.loss_cap, c.loss_cells);

  const DistortionFamily agent = c.agent.family == "identity"
                                     ? DistortionFamily::identity()
                                     : DistortionFamily::power(c.agent.param("a", 1.0),
                                                               c.agent.param("b", 1.0));
  const InsurerDistortion insurer = c.insurer.family == "identity"
                                        ? InsurerDistortion::identity()
                                        : InsurerDistortion::power(c.insurer.param("beta", 1.0));
  LossFamily loss = LossFamily::zero(c.loss_cap);
  if (c.loss.family == "power") loss = LossFamily::power(c.loss_cap, c.loss.param("kappa", 1.0));
  if (c.loss.family == "uniform") loss = LossFamily::uniform(c.loss_cap);

  return Scenario(c.name, types, losses, make_measure(c.mu, c.type_lo, c.type_hi),
                  make_measure(c.eta, c.type_lo, c.type_hi), {agent, insurer, loss}, c.ordering);
}

}  // namespace dumenu::cli
