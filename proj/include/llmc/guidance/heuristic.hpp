#pragma once

#include "llmc/guidance/oracle.hpp"

namespace llmc::guidance {

// Deterministic stand-in for a language model. Every decision rule is fixed:
//   prioritize: score = 2 * uncovered_direction_count - 0.1 * depth,
//               descending, ties by ascending frontier_id.
//   mutate:     linearize_product when the failing atom is nonlinear (the
//               variable occurring most often in its nonlinear products,
//               grounded at its most recent concrete value), then
//               widen_eq_to_range(radius 8) on positive equalities, then
//               drop_atom.
//   synthesize: boundary values harvested from source constants, cycled
//               round-robin across attempts with a per-parameter stagger.
class HeuristicOracle : public Oracle {
 public:
  std::string kind_name() const override { return "heuristic"; }
  GuidanceResponse prioritize(const GuidanceRequest& req,
                              const ValidationContext& ctx) override;
  GuidanceResponse mutate(const GuidanceRequest& req,
                          const ValidationContext& ctx) override;
  GuidanceResponse synthesize(const GuidanceRequest& req,
                              const ValidationContext& ctx) override;
};

}  // namespace llmc::guidance
