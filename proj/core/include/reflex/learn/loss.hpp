#pragma once

#include "reflex/dsl/validate.hpp"
#include "reflex/sim/dataset.hpp"
#include "reflex/sim/scenario.hpp"

namespace reflex::learn {

/// Mean over transitions of the squared one-step prediction error when the
/// script drives the agent from each demonstrated state. The state compared is
/// (x, y, body_yaw, head_yaw) with yaw differences wrapped.
double imitation_loss(const sim::Dataset& dataset, const dsl::CheckedScript& script,
                      const sim::Scenario& scenario);

}  // namespace reflex::learn
