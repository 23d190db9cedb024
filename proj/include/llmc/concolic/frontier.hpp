#pragma once

#include <cstdint>
#include <set>
#include <tuple>
#include <vector>

#include "llmc/concolic/path.hpp"

namespace llmc::concolic {

enum class FrontierStatus { Pending, Solved, Unsat, Unknown, Retired };

std::string frontier_status_name(FrontierStatus st);

// An unexplored branch target: a path prefix plus one atom with its
// direction negated. The unit of work in the exploration queue.
struct Frontier {
  int64_t id = -1;
  PathCondition prefix;  // atoms strictly before the negated one
  Atom flip;             // the negated atom; flip.direction is the desired side
  int64_t discovered_at = 0;
  FrontierStatus status = FrontierStatus::Pending;
  int attempts = 0;

  int depth() const { return flip.depth; }
  int target_site() const { return flip.site; }
  bool target_direction() const { return flip.direction; }

  // The conjunction handed to the solver: prefix ∧ negated atom.
  PathCondition query_atoms() const;
};

// Creates frontiers from traces, deduplicating by
// (prefix path_id, flip site, flip direction) so repeated traces and loop
// revisits never re-enqueue known work. Owns all frontiers ever created;
// ids are dense and double as store indices.
class FrontierTracker {
 public:
  // One new frontier per novel negation, ordered by atom depth.
  std::vector<int64_t> harvest(const TraceResult& trace, int64_t discovered_at);

  Frontier& get(int64_t id) { return store_[static_cast<size_t>(id)]; }
  const Frontier& get(int64_t id) const { return store_[static_cast<size_t>(id)]; }
  const std::vector<Frontier>& all() const { return store_; }
  size_t size() const { return store_.size(); }

  std::vector<int64_t> pending_ids() const;

  // Enforces the monotone lifecycle pending -> {solved|unsat|unknown} -> retired.
  void set_status(int64_t id, FrontierStatus st);

 private:
  std::vector<Frontier> store_;
  std::set<std::tuple<util::Hash128, int, bool>> seen_;
};

}  // namespace llmc::concolic
