#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dumenu/scenario.hpp"

namespace dumenu {

inline constexpr std::size_t kDefaultTypeNodes = 41;
inline constexpr std::size_t kDefaultLossCells = 201;

/// Named reference scenarios on [0, 1] types and losses in [0, 1]:
///   s1  mu = eta uniform, g_theta(t) = t^(1+theta), g_In(t) = t, F_theta(l) = l^(1+theta)
///   s2  as s1 but eta has density 2 theta (survival ratio 1 + theta, boundary alpha 1/3)
///   s3  g_theta(t) = t^(2 - theta/5), F_theta(l) = l^(1 + 2 theta): less averse higher
///       types facing larger losses (alternative ordering)
/// Throws ConfigError for unknown names.
Scenario builtin_scenario(const std::string& name, std::size_t type_nodes = kDefaultTypeNodes,
                          std::size_t loss_cells = kDefaultLossCells);

std::vector<std::string> builtin_scenario_names();

}  // namespace dumenu
