#include "llmc/baselines/random_search.hpp"

#include "llmc/util/rng.hpp"

namespace llmc::baselines {

concolic::Value draw_uniform(lang::Type type, const solver::DomainConfig& d,
                             util::Rng& rng) {
  switch (type) {
    case lang::Type::Int:
      return rng.next_in(d.int_lo, d.int_hi);
    case lang::Type::Bool:
      return rng.next_bool();
    case lang::Type::Str: {
      int len = static_cast<int>(
          rng.next_below(static_cast<uint64_t>(d.str_max_len) + 1));
      std::string s;
      s.reserve(static_cast<size_t>(len));
      for (int i = 0; i < len; ++i)
        s.push_back(static_cast<char>(rng.next_in(d.alpha_lo, d.alpha_hi)));
      return s;
    }
  }
  return int64_t{0};
}

void run_random(engine::CampaignState& state) {
  util::Rng rng(state.config().rng_seed);
  const lang::FunctionDef* entry = state.program().entry();
  const auto& domains = state.config().domains;

  while (state.budget_left()) {
    state.bump_iteration();
    concolic::ConcreteInput input;
    for (const auto& p : entry->params)
      input[p.name] = draw_uniform(p.type, domains, rng);
    state.execute(input, "random");
  }
}

}  // namespace llmc::baselines
