#include "dumenu/menus.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "dumenu/error.hpp"

namespace dumenu {

namespace {

constexpr double kGridTol = 1e-12;
constexpr double kSubmodularTol = 1e-12;

bool same_nodes(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > kGridTol * std::max(1.0, std::abs(a[i]))) return false;
  }
  return true;
}

TypeGrid type_grid_from_nodes(const std::vector<double>& nodes) {
  if (nodes.size() < 3) throw ParseError("menu needs at least 3 type nodes");
  TypeGrid grid(nodes.front(), nodes.back(), nodes.size());
  if (!same_nodes(grid.nodes(), nodes)) throw ParseError("menu type nodes are not uniform");
  return grid;
}

LossGrid loss_grid_from_nodes(const std::vector<double>& nodes) {
  if (nodes.size() < 2 || nodes.front() != 0.0) {
    throw ParseError("menu loss nodes must start at 0 and hold at least one cell");
  }
  LossGrid grid(nodes.back(), nodes.size() - 1);
  if (!same_nodes(grid.nodes(), nodes)) throw ParseError("menu loss nodes are not uniform");
  return grid;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

RetentionSchedule::RetentionSchedule(RowMatrix slopes) : slopes_(std::move(slopes)) {
  for (std::size_t i = 0; i < slopes_.rows(); ++i) validate_slopes(slopes_.row(i));
}

RetentionSchedule RetentionSchedule::constant(std::size_t types, std::size_t cells,
                                              double slope) {
  return RetentionSchedule(RowMatrix(types, cells, slope));
}

std::vector<double> RetentionSchedule::retention_row(std::size_t i, const LossGrid& grid) const {
  std::vector<double> out(cells() + 1, 0.0);
  for (std::size_t j = 0; j < cells(); ++j) out[j + 1] = out[j] + slopes_(i, j) * grid.width(j);
  return out;
}

Menu::Menu(TypeGrid types_, LossGrid losses_, RetentionSchedule retention_,
           PremiumSchedule premium_)
    : types(std::move(types_)),
      losses(std::move(losses_)),
      retention(std::move(retention_)),
      premium(std::move(premium_)) {
  if (retention.types() != types.size() || retention.cells() != losses.cells()) {
    throw GridMismatch("retention schedule dimensions differ from menu grids");
  }
  if (premium.premia.size() != types.size()) {
    throw GridMismatch("premium schedule length differs from type grid");
  }
  for (double p : premium.premia) {
    if (!std::isfinite(p)) throw ConfigError("premium schedule holds a non-finite entry");
  }
}

double Menu::premium_at(double theta) const {
  const auto& nodes = types.nodes();
  if (theta <= nodes.front()) return premium.premia.front();
  if (theta >= nodes.back()) return premium.premia.back();
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), theta);
  const std::size_t k = static_cast<std::size_t>(it - nodes.begin());
  const double w = (theta - nodes[k - 1]) / (nodes[k] - nodes[k - 1]);
  return (1.0 - w) * premium.premia[k - 1] + w * premium.premia[k];
}

void require_same_grids(const Menu& menu, const Scenario& scenario) {
  if (!same_nodes(menu.types.nodes(), scenario.types().nodes())) {
    throw GridMismatch("menu type grid differs from scenario type grid");
  }
  if (!same_nodes(menu.losses.nodes(), scenario.losses().nodes())) {
    throw GridMismatch("menu loss grid differs from scenario loss grid");
  }
}

PremiumSchedule premium_from_ic(const RetentionSchedule& retention, double p_base,
                                const Scenario& scenario) {
  const std::size_t n = scenario.types().size();
  const std::size_t m = scenario.losses().cells();
  if (retention.types() != n || retention.cells() != m) {
    throw GridMismatch("retention schedule dimensions differ from scenario grids");
  }
  const RowMatrix& phi = scenario.phi();
  const LossGrid& grid = scenario.losses();

  // p_k - p_{k-1} = 1/2 <phi_{k-1} + phi_k, r_{k-1} - r_k>: each term is >= 0 for
  // submodular r, so the schedule stays non-decreasing in floating point as well
  PremiumSchedule out;
  out.premia.resize(n);
  out.premia[0] = p_base;
  for (std::size_t k = 1; k < n; ++k) {
    double step = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double weight = 0.5 * (phi(k - 1, j) + phi(k, j));
      step += weight * (retention.slope(k - 1, j) - retention.slope(k, j)) * grid.width(j);
    }
    out.premia[k] = out.premia[k - 1] + step;
  }
  return out;
}

double max_ir_premium(double theta, SlopeRow r, const Scenario& scenario) {
  const LossGrid& grid = scenario.losses();
  if (r.size() != grid.cells()) throw GridMismatch("slope row length differs from loss grid");
  validate_slopes(r);
  const Preferences& prefs = scenario.prefs();
  double acc = 0.0;
  for (std::size_t j = 0; j < grid.cells(); ++j) {
    const double f = prefs.loss.value(theta, grid.midpoint(j));
    acc += (1.0 - prefs.agent.value(theta, f)) * (1.0 - r[j]) * grid.width(j);
  }
  return acc;
}

double agent_utility_at(const Menu& menu, const Scenario& scenario, std::size_t i,
                        std::size_t k) {
  return -menu.premium.premia[k] -
         cell_dot(scenario.phi().row(i), menu.retention.row(k), scenario.losses());
}

std::vector<double> agent_utilities(const Menu& menu, const Scenario& scenario) {
  require_same_grids(menu, scenario);
  std::vector<double> u(menu.types.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = agent_utility_at(menu, scenario, i, i);
  return u;
}

std::vector<double> insurer_utilities(const Menu& menu, const Scenario& scenario) {
  require_same_grids(menu, scenario);
  const LossGrid& grid = scenario.losses();
  std::vector<double> v(menu.types.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto psi = scenario.psi().row(i);
    const auto r = menu.retention.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < grid.cells(); ++j) acc += psi[j] * (1.0 - r[j]) * grid.width(j);
    v[i] = menu.premium.premia[i] - acc;
  }
  return v;
}

double aggregate_insurer_utility(const Menu& menu, const Scenario& scenario) {
  const std::vector<double> v = insurer_utilities(menu, scenario);
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += scenario.mu_mass()[i] * v[i];
  return acc;
}

SubmodularityReport check_submodular(const RetentionSchedule& retention, const TypeGrid& types,
                                     const LossGrid& losses) {
  if (retention.types() != types.size() || retention.cells() != losses.cells()) {
    throw GridMismatch("retention schedule dimensions differ from grids");
  }
  SubmodularityReport report;
  for (std::size_t i = 0; i + 1 < retention.types(); ++i) {
    for (std::size_t j = 0; j < retention.cells(); ++j) {
      const double gap = retention.slope(i + 1, j) - retention.slope(i, j);
      report.worst_gap = std::max(report.worst_gap, gap);
      if (gap > kSubmodularTol) {
        report.passed = false;
        report.violations.push_back({i, j, types[i], losses.midpoint(j), gap});
      }
    }
  }
  return report;
}

void write_menu_csv(const Menu& menu, std::ostream& out) {
  out << "theta,l,slope,retention,premium\n";
  for (std::size_t i = 0; i < menu.types.size(); ++i) {
    const std::vector<double> big_r = menu.retention.retention_row(i, menu.losses);
    for (std::size_t j = 0; j < menu.losses.cells(); ++j) {
      out << fmt(menu.types[i]) << ',' << fmt(menu.losses.nodes()[j + 1]) << ','
          << fmt(menu.retention.slope(i, j)) << ',' << fmt(big_r[j + 1]) << ','
          << fmt(menu.premium.premia[i]) << '\n';
    }
  }
}

Menu read_menu_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("menu CSV is empty");
  if (line.rfind("theta,l,slope,retention,premium", 0) != 0) {
    throw ParseError("menu CSV header must be theta,l,slope,retention,premium");
  }
  std::vector<double> thetas;
  std::vector<double> premia;
  std::vector<std::vector<double>> rows;
  std::vector<double> edges;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::istringstream ls(line);
    std::string cell;
    double v[5];
    for (int c = 0; c < 5; ++c) {
      if (!std::getline(ls, cell, ',')) {
        throw ParseError("menu CSV line " + std::to_string(line_no) + ": expected 5 columns");
      }
      try {
        std::size_t used = 0;
        v[c] = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw ParseError("menu CSV line " + std::to_string(line_no) + ": bad number '" + cell +
                         "'");
      }
    }
    if (thetas.empty() || v[0] != thetas.back()) {
      thetas.push_back(v[0]);
      premia.push_back(v[4]);
      rows.emplace_back();
    } else if (v[4] != premia.back()) {
      throw ParseError("menu CSV line " + std::to_string(line_no) +
                       ": premium changes within a type block");
    }
    rows.back().push_back(v[2]);
    if (rows.size() == 1) edges.push_back(v[1]);
  }
  if (thetas.empty()) throw ParseError("menu CSV has no rows");
  const std::size_t cells = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != cells) throw ParseError("menu CSV type blocks have unequal lengths");
  }
  std::vector<double> loss_nodes{0.0};
  loss_nodes.insert(loss_nodes.end(), edges.begin(), edges.end());
  RowMatrix slopes(rows.size(), cells);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy(rows[i].begin(), rows[i].end(), slopes.row(i).begin());
  }
  try {
    return Menu(type_grid_from_nodes(thetas), loss_grid_from_nodes(loss_nodes),
                RetentionSchedule(std::move(slopes)), PremiumSchedule{premia});
  } catch (const InvalidSlope& e) {
    throw ParseError(std::string("menu CSV: ") + e.what());
  }
}

nlohmann::json menu_to_json(const Menu& menu) {
  nlohmann::json j;
  j["theta_nodes"] = menu.types.nodes();
  j["loss_nodes"] = menu.losses.nodes();
  nlohmann::json slopes = nlohmann::json::array();
  for (std::size_t i = 0; i < menu.types.size(); ++i) {
    const auto r = menu.retention.row(i);
    slopes.push_back(std::vector<double>(r.begin(), r.end()));
  }
  j["slopes"] = std::move(slopes);
  j["premia"] = menu.premium.premia;
  return j;
}

Menu menu_from_json(const nlohmann::json& j) {
  try {
    for (const char* key : {"theta_nodes", "loss_nodes", "slopes", "premia"}) {
      if (!j.contains(key)) throw ParseError(std::string("menu JSON lacks '") + key + "'");
    }
    const auto thetas = j.at("theta_nodes").get<std::vector<double>>();
    const auto loss_nodes = j.at("loss_nodes").get<std::vector<double>>();
    const auto rows = j.at("slopes").get<std::vector<std::vector<double>>>();
    const auto premia = j.at("premia").get<std::vector<double>>();
    const TypeGrid types = type_grid_from_nodes(thetas);
    const LossGrid losses = loss_grid_from_nodes(loss_nodes);
    if (rows.size() != types.size()) throw ParseError("menu JSON slopes row count mismatch");
    RowMatrix slopes(rows.size(), losses.cells());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != losses.cells()) throw ParseError("menu JSON slopes column mismatch");
      std::copy(rows[i].begin(), rows[i].end(), slopes.row(i).begin());
    }
    return Menu(types, losses, RetentionSchedule(std::move(slopes)), PremiumSchedule{premia});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("menu JSON: ") + e.what());
  } catch (const InvalidSlope& e) {
    throw ParseError(std::string("menu JSON: ") + e.what());
  } catch (const GridMismatch& e) {
    throw ParseError(std::string("menu JSON: ") + e.what());
  } catch (const ConfigError& e) {
    throw ParseError(std::string("menu JSON: ") + e.what());
  }
}

}  // namespace dumenu
