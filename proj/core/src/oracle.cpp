#include "dumenu/oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "dumenu/error.hpp"
#include "dumenu/synthesis.hpp"
#include "dumenu/verification.hpp"

namespace dumenu {

double social_welfare(const Menu& menu, double alpha, const Scenario& scenario) {
  const std::vector<double> u = agent_utilities(menu, scenario);
  const std::vector<double> v = insurer_utilities(menu, scenario);
  double agents = 0.0;
  double insurer = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    agents += scenario.eta_mass()[i] * u[i];
    insurer += scenario.mu_mass()[i] * v[i];
  }
  return alpha * agents + (1.0 - alpha) * insurer;
}

double social_welfare_by_parts(const Menu& menu, double alpha, const Scenario& scenario) {
  require_same_grids(menu, scenario);
  const std::size_t n = menu.types.size();
  const LossGrid& losses = menu.losses;
  const auto& mass = scenario.mu_mass();

  const double anchor =
      menu.premium.premia[0] + cell_dot(scenario.phi().row(0), menu.retention.row(0), losses);
  double rent_term = 0.0;
  double base_term = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double jr = 0.0;
    for (std::size_t j = 0; j < losses.cells(); ++j) {
      jr += j_eta(menu.types[i], losses.midpoint(j), alpha, scenario) *
            menu.retention.slope(i, j) * losses.width(j);
    }
    rent_term += mass[i] * jr;
    base_term += mass[i] * cell_sum(scenario.psi().row(i), losses);
  }
  return (1.0 - 2.0 * alpha) * anchor - rent_term - (1.0 - alpha) * base_term;
}

SmallInstance SmallInstance::from(const Scenario& base, std::size_t type_count,
                                  std::size_t cell_count, std::vector<double> alphabet) {
  if (alphabet.empty()) throw ConfigError("oracle slope alphabet is empty");
  for (double a : alphabet) {
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("oracle slope alphabet must lie in [0, 1]");
  }
  const double size = std::pow(static_cast<double>(alphabet.size()),
                               static_cast<double>(type_count * cell_count));
  if (type_count > 4 || cell_count > 5 || size > kOracleCap) {
    char count[32];
    std::snprintf(count, sizeof count, "%.3g", size);
    throw InstanceTooLarge("oracle instance " + std::to_string(type_count) + "x" +
                           std::to_string(cell_count) + " has " + count +
                           " assignments (cap 2e6, at most 4 types and 5 cells)");
  }
  if (type_count == 0 || cell_count == 0) throw ConfigError("oracle instance needs >= 1 type and cell");
  const TypeGrid types = TypeGrid::coarse(base.types().lo(), base.types().hi(), type_count);
  const LossGrid losses(base.losses().cap(), cell_count);
  return SmallInstance{base.regrid(types, losses), std::move(alphabet)};
}

double SmallInstance::assignments() const {
  return std::pow(static_cast<double>(alphabet.size()),
                  static_cast<double>(scenario.types().size() * scenario.losses().cells()));
}

OracleResult enumerate_optimum(const SmallInstance& inst, double alpha, unsigned workers,
                               double tol) {
  if (inst.assignments() > kOracleCap) {
    throw InstanceTooLarge("oracle instance exceeds 2e6 assignments");
  }
  const auto start = std::chrono::steady_clock::now();
  const Scenario& sc = inst.scenario;
  const std::size_t n = sc.types().size();
  const std::size_t m = sc.losses().cells();
  const std::size_t cells = n * m;
  const std::size_t base = inst.alphabet.size();
  const auto total = static_cast<std::uint64_t>(std::llround(inst.assignments()));
  const bool anchor_cap = alpha <= 0.5;

  if (workers == 0) {
    workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
  }
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, total));

  struct Best {
    double welfare = -std::numeric_limits<double>::infinity();
    std::uint64_t index = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t feasible = 0;
  };
  std::vector<Best> partial(workers);

  auto decode = [&](std::uint64_t index) {
    RowMatrix slopes(n, m);
    for (std::size_t c = 0; c < cells; ++c) {
      slopes(c / m, c % m) = inst.alphabet[index % base];
      index /= base;
    }
    return slopes;
  };

  auto build = [&](std::uint64_t index) {
    RetentionSchedule retention(decode(index));
    const double p0 = anchor_cap ? max_ir_premium(sc.types()[0], retention.row(0), sc) : 0.0;
    PremiumSchedule premia = premium_from_ic(retention, p0, sc);
    return Menu(sc.types(), sc.losses(), std::move(retention), std::move(premia));
  };

  auto run = [&](unsigned w) {
    const std::uint64_t lo = total * w / workers;
    const std::uint64_t hi = total * (w + 1) / workers;
    Best& b = partial[w];
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      const Menu menu = build(idx);
      if (!verify_ic(menu, sc, tol).passed()) continue;
      if (!verify_ir(menu, sc, tol).passed()) continue;
      ++b.feasible;
      const double w_val = social_welfare(menu, alpha, sc);
      if (w_val > b.welfare) {
        b.welfare = w_val;
        b.index = idx;
      }
    }
  };

  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& t : pool) t.join();

  // Partitions are ordered by index, so strict '>' keeps the smallest index on ties.
  Best best;
  for (const Best& b : partial) {
    best.feasible += b.feasible;
    if (b.welfare > best.welfare) {
      best.welfare = b.welfare;
      best.index = b.index;
    }
  }

  OracleResult out;
  out.enumerated = total;
  out.feasible_count = best.feasible;
  if (best.feasible > 0) {
    const Menu argmax = build(best.index);
    out.max_welfare = best.welfare;
    out.argmax_index = best.index;
    out.argmax_slopes = argmax.retention.slopes();
    out.argmax_premia = argmax.premium.premia;
  } else {
    out.max_welfare = -std::numeric_limits<double>::infinity();
  }
  out.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace dumenu
