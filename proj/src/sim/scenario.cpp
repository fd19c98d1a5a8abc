#include <fmt/format.h>

#include "linkstab/errors.hpp"
#include "linkstab/scenario_sim.hpp"

namespace linkstab {

const LinkPhase& LinkModel::phase_at(Iteration iteration) const {
  if (phases.empty()) throw ConfigError(fmt::format("link '{}' has no phases", name));
  Iteration end = 0;
  for (const auto& phase : phases) {
    end += phase.duration;
    if (iteration <= end) return phase;
  }
  return phases.back();
}

void Scenario::validate() const {
  params.validate();
  if (length < 1) throw ConfigError(fmt::format("scenario length must be >= 1, got {}", length));
  if (scale_base < 1) throw ConfigError(fmt::format("scale_base must be >= 1, got {}", scale_base));
  if (!(admission_threshold >= 0 && admission_threshold <= 1))
    throw ConfigError(fmt::format("admission threshold {} outside [0,1]", admission_threshold));
  if (models.size() != static_cast<std::size_t>(params.lines))
    throw ConfigError(fmt::format("scenario declares n={} but has {} link models", params.lines,
                                  models.size()));
  for (const auto& model : models) {
    if (!(model.bandwidth_mbps > 0))
      throw ConfigError(fmt::format("link '{}': bandwidth must be > 0", model.name));
    if (model.phases.empty()) throw ConfigError(fmt::format("link '{}' has no phases", model.name));
    for (const auto& phase : model.phases) {
      if (phase.duration < 1)
        throw ConfigError(fmt::format("link '{}': phase duration must be >= 1", model.name));
      if (const auto* b = std::get_if<BernoulliPhase>(&phase.behavior)) {
        if (!(b->success_probability >= 0 && b->success_probability <= 1))
          throw ConfigError(fmt::format("link '{}': probability {} outside [0,1]", model.name,
                                        b->success_probability));
      } else {
        const Tick t = std::get<FixedTickPhase>(phase.behavior).tick;
        if (t < 0 || t > params.ticks_per_iteration)
          throw ConfigError(fmt::format("link '{}': fixed tick {} outside 0..{}", model.name, t,
                                        params.ticks_per_iteration));
      }
    }
  }
}

std::vector<LineBinding> Scenario::line_bindings() const {
  std::vector<LineBinding> lines;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const auto& model = models[i];
    lines.push_back({static_cast<int>(i) + 1,
                     model.name.empty() ? fmt::format("line-{}", i + 1) : model.name, std::nullopt,
                     model.bandwidth_mbps});
  }
  return lines;
}

std::vector<ProbeTarget> Scenario::targets() const {
  std::vector<ProbeTarget> out;
  for (int t = 1; t <= params.ticks_per_iteration; ++t)
    out.push_back({fmt::format("http://sim.invalid/target-{}", t), fmt::format("target-{}", t)});
  return out;
}

std::vector<double> Scenario::bandwidths() const {
  std::vector<double> out;
  for (const auto& model : models) out.push_back(model.bandwidth_mbps);
  return out;
}

}  // namespace linkstab
