#include "llmc/baselines/ga.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "llmc/baselines/random_search.hpp"
#include "llmc/util/rng.hpp"

namespace llmc::baselines {

double normalized_branch_distance(int64_t d) {
  if (d <= 0) return 0.0;
  double v = static_cast<double>(d);
  return v / (v + 1.0);
}

namespace {

using Genome = std::vector<concolic::Value>;

struct Evaluated {
  Genome genome;
  double fitness = 0.0;
};

concolic::ConcreteInput to_input(const lang::FunctionDef& entry, const Genome& g) {
  concolic::ConcreteInput in;
  for (size_t i = 0; i < entry.params.size(); ++i)
    in[entry.params[i].name] = g[i];
  return in;
}

// Covered branch directions of the trace, plus proximity credit
// 1/(1+d) for each reached branch side the campaign has not covered yet.
double evaluate(engine::CampaignState& state, const lang::FunctionDef& entry,
                const Genome& g) {
  const auto& tr = state.execute(to_input(entry, g), "ga");
  int nb = state.program().num_branch_sites();

  double fit = 0.0;
  for (const auto& [site, dir] : tr.covered_directions)
    if (site < nb) fit += 1.0;

  std::map<std::pair<int, bool>, int64_t> nearest;
  for (const auto& a : tr.path) {
    if (a.guard || a.site >= nb) continue;
    bool want = !a.direction;
    if (state.direction_covered(a.site, want)) continue;
    int64_t d = want ? a.dist_true : a.dist_false;
    auto key = std::make_pair(a.site, want);
    auto it = nearest.find(key);
    if (it == nearest.end() || d < it->second) nearest[key] = d;
  }
  for (const auto& [key, d] : nearest)
    fit += 1.0 - normalized_branch_distance(d);
  return fit;
}

void mutate_value(concolic::Value& v, lang::Type type,
                  const solver::DomainConfig& dom, util::Rng& rng) {
  switch (type) {
    case lang::Type::Int: {
      if (rng.next_bool()) {
        int64_t delta = rng.next_in(1, 16);
        if (rng.next_bool()) delta = -delta;
        int64_t moved = std::get<int64_t>(v) + delta;
        v = std::clamp(moved, dom.int_lo, dom.int_hi);
      } else {
        v = rng.next_in(dom.int_lo, dom.int_hi);
      }
      break;
    }
    case lang::Type::Bool:
      v = !std::get<bool>(v);
      break;
    case lang::Type::Str: {
      std::string s = std::get<std::string>(v);
      uint64_t choice = rng.next_below(3);
      if (choice == 0 && !s.empty()) {
        size_t at = static_cast<size_t>(rng.next_below(s.size()));
        s[at] = static_cast<char>(rng.next_in(dom.alpha_lo, dom.alpha_hi));
      } else if (choice == 1 &&
                 static_cast<int>(s.size()) < dom.str_max_len) {
        s.push_back(static_cast<char>(rng.next_in(dom.alpha_lo, dom.alpha_hi)));
      } else if (!s.empty()) {
        s.pop_back();
      } else if (dom.str_max_len > 0) {
        s.push_back(static_cast<char>(rng.next_in(dom.alpha_lo, dom.alpha_hi)));
      }
      v = std::move(s);
      break;
    }
  }
}

}  // namespace

void run_ga(engine::CampaignState& state) {
  util::Rng rng(state.config().rng_seed);
  const auto& cfg = state.config();
  const auto& ga = cfg.ga;
  const lang::FunctionDef* entry = state.program().entry();
  const size_t nparams = entry->params.size();

  auto random_genome = [&] {
    Genome g;
    g.reserve(nparams);
    for (const auto& p : entry->params)
      g.push_back(draw_uniform(p.type, cfg.domains, rng));
    return g;
  };

  std::vector<Evaluated> pop;
  for (int i = 0; i < ga.population_size && state.budget_left(); ++i) {
    state.bump_iteration();
    Evaluated e{random_genome(), 0.0};
    e.fitness = evaluate(state, *entry, e.genome);
    pop.push_back(std::move(e));
  }

  auto tournament = [&]() -> const Evaluated& {
    const Evaluated* best = nullptr;
    for (int i = 0; i < ga.tournament_size; ++i) {
      const Evaluated& c = pop[rng.next_below(pop.size())];
      if (!best || c.fitness > best->fitness) best = &c;
    }
    return *best;
  };

  while (state.budget_left() && !pop.empty()) {
    std::vector<size_t> order(pop.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return pop[a].fitness > pop[b].fitness;
    });

    std::vector<Evaluated> next;
    for (int e = 0; e < ga.elitism && e < static_cast<int>(pop.size()); ++e)
      next.push_back({pop[order[static_cast<size_t>(e)]].genome, 0.0});

    while (static_cast<int>(next.size()) < ga.population_size) {
      Genome child = tournament().genome;
      if (nparams >= 2 && rng.next_unit() < ga.crossover_rate) {
        const Genome& other = tournament().genome;
        size_t cut = 1 + static_cast<size_t>(rng.next_below(nparams - 1));
        for (size_t i = cut; i < nparams; ++i) child[i] = other[i];
      }
      for (size_t i = 0; i < nparams; ++i)
        if (rng.next_unit() < ga.mutation_rate)
          mutate_value(child[i], entry->params[i].type, cfg.domains, rng);
      next.push_back({std::move(child), 0.0});
    }

    // Every member is (re)executed, so elite fitness tracks the shrinking
    // pool of uncovered directions instead of going stale.
    for (auto& e : next) {
      if (!state.budget_left()) return;
      state.bump_iteration();
      e.fitness = evaluate(state, *entry, e.genome);
    }
    pop = std::move(next);
  }
}

}  // namespace llmc::baselines
