#include "dumenu/builtin.hpp"

#include "dumenu/error.hpp"

namespace dumenu {

Scenario builtin_scenario(const std::string& name, std::size_t type_nodes,
                          std::size_t loss_cells) {
  TypeGrid types(0.0, 1.0, type_nodes);
  LossGrid losses(1.0, loss_cells);
  const LossFamily loss = LossFamily::power(1.0, 1.0);
  if (name == "s1") {
    return Scenario("s1", types, losses, TypeMeasure::uniform(0.0, 1.0),
                    TypeMeasure::uniform(0.0, 1.0),
                    {DistortionFamily::power(1.0, 1.0), InsurerDistortion::identity(), loss});
  }
  if (name == "s2") {
    return Scenario("s2", types, losses, TypeMeasure::uniform(0.0, 1.0),
                    TypeMeasure::power(0.0, 1.0, 1.0),
                    {DistortionFamily::power(1.0, 1.0), InsurerDistortion::identity(), loss});
  }
  if (name == "s3") {
    return Scenario("s3", types, losses, TypeMeasure::uniform(0.0, 1.0),
                    TypeMeasure::uniform(0.0, 1.0),
                    {DistortionFamily::power(2.0, -0.2), InsurerDistortion::identity(),
                     LossFamily::power(1.0, 2.0)},
                    OrderingMode::LessAverseLargerLoss);
  }
  throw ConfigError("unknown built-in scenario '" + name + "' (known: s1, s2, s3)");
}

std::vector<std::string> builtin_scenario_names() { return {"s1", "s2", "s3"}; }

}  // namespace dumenu
