#pragma once

#include "llmc/engine/engine.hpp"

namespace llmc::baselines {

// Branch distance d mapped into [0, 1); smaller is closer to flipping.
double normalized_branch_distance(int64_t d);

// Genetic search over the entry signature: tournament selection,
// single-point crossover, per-parameter mutation, elitism.
void run_ga(engine::CampaignState& state);

}  // namespace llmc::baselines
