#pragma once

#include "llmc/engine/engine.hpp"
#include "llmc/util/rng.hpp"

namespace llmc::baselines {

// One uniform draw from the declared domain of `type`.
concolic::Value draw_uniform(lang::Type type, const solver::DomainConfig& d,
                             util::Rng& rng);

// Draws inputs uniformly from the declared domains until the budget runs out.
void run_random(engine::CampaignState& state);

}  // namespace llmc::baselines
