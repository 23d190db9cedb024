#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include "llmc/guidance/cache.hpp"
#include "llmc/guidance/heuristic.hpp"
#include "llmc/guidance/oracle.hpp"
#include "llmc/guidance/transcript.hpp"
#include "llmc/guidance/types.hpp"
#include "llmc/guidance/validate.hpp"
#include "llmc/util/fsio.hpp"
#include "support/helpers.hpp"

using namespace llmc;
using namespace llmc::guidance;
namespace fs = std::filesystem;

namespace {

std::string tmp_dir() {
  std::string dir = llmc::testing::build_path("guidance_test_tmp");
  fs::create_directories(dir);
  return dir;
}

PrioritizeItem item(int id, int depth, int uncovered) {
  PrioritizeItem it;
  it.frontier_id = id;
  it.depth = depth;
  it.uncovered_direction_count = uncovered;
  return it;
}

GuidanceRequest prioritize_request(std::vector<PrioritizeItem> items) {
  GuidanceRequest req;
  req.kind = GuidanceKind::Prioritize;
  req.prioritize = std::move(items);
  return req;
}

ValidationContext ctx_for(const GuidanceRequest& req) {
  ValidationContext ctx;
  for (const auto& it : req.prioritize) ctx.frontier_ids.push_back(it.frontier_id);
  ctx.atom_count = static_cast<int>(req.mutate.atoms.size());
  ctx.signature = req.synthesize.signature;
  return ctx;
}

GuidanceRequest mutate_request(std::vector<std::string> atoms, int failing,
                               const std::string& status,
                               concolic::ConcreteInput recent = {}) {
  GuidanceRequest req;
  req.kind = GuidanceKind::Mutate;
  req.mutate.atoms = std::move(atoms);
  req.mutate.failing_atom_index = failing;
  req.mutate.status = status;
  req.mutate.recent_input = std::move(recent);
  return req;
}

}  // namespace

TEST_CASE("heuristic prioritize ranks by uncovered count then shallowness") {
  HeuristicOracle o;
  GuidanceRequest req = prioritize_request(
      {item(1, 10, 1), item(2, 0, 2), item(3, 20, 2), item(4, 0, 1)});
  GuidanceResponse r = o.prioritize(req, ctx_for(req));
  REQUIRE(r.valid);
  // Scores 20*uncovered - depth: id2=40, id3=20, id4=20, id1=10; the id3/id4
  // tie breaks by ascending frontier id.
  CHECK(r.ranking == std::vector<int>{2, 3, 4, 1});
}

TEST_CASE("heuristic mutate: nonlinear atoms get a grounding edit first") {
  HeuristicOracle o;
  GuidanceRequest req = mutate_request({"(> x 0)", "(= b (* a a))"}, 1, "unknown",
                                       {{"a", int64_t{5}}, {"b", int64_t{7}}});
  GuidanceResponse r = o.mutate(req, ctx_for(req));
  REQUIRE(r.valid);
  REQUIRE(r.edits.size() == 3);
  CHECK(r.edits[0].op == MutationEdit::Op::LinearizeProduct);
  CHECK(r.edits[0].index == 1);
  CHECK(r.edits[0].fix_var == "a");   // appears twice inside the product
  CHECK(r.edits[0].fix_value == 5);   // grounded at the recent concrete value
  CHECK(r.edits[1].op == MutationEdit::Op::WidenEqToRange);
  CHECK(r.edits[1].radius == 8);
  CHECK(r.edits[2].op == MutationEdit::Op::DropAtom);
}

TEST_CASE("heuristic mutate: the most frequent product variable wins") {
  HeuristicOracle o;
  GuidanceRequest req = mutate_request({"(= (* a b) (* b c))"}, 0, "unknown",
                                       {{"b", int64_t{-3}}});
  GuidanceResponse r = o.mutate(req, ctx_for(req));
  REQUIRE(r.valid);
  CHECK(r.edits[0].fix_var == "b");
  CHECK(r.edits[0].fix_value == -3);
}

TEST_CASE("heuristic mutate: drop is only offered after a timeout") {
  HeuristicOracle o;
  // unknown: a plain inequality has no structural repair, so drop remains.
  GuidanceRequest req = mutate_request({"(> x 3)"}, 0, "unknown");
  GuidanceResponse r = o.mutate(req, ctx_for(req));
  REQUIRE(r.valid);
  REQUIRE(r.edits.size() == 1);
  CHECK(r.edits[0].op == MutationEdit::Op::DropAtom);

  // unsat: dropping would re-pose a settled question; decline instead.
  req = mutate_request({"(> x 3)"}, 0, "unsat");
  r = o.mutate(req, ctx_for(req));
  CHECK(r.valid);
  CHECK(r.edits.empty());

  // unsat with an equality still earns the widening repair.
  req = mutate_request({"(= x 37)"}, 0, "unsat");
  r = o.mutate(req, ctx_for(req));
  REQUIRE(r.valid);
  REQUIRE(r.edits.size() == 1);
  CHECK(r.edits[0].op == MutationEdit::Op::WidenEqToRange);
}

TEST_CASE("heuristic mutate: string equality widens") {
  HeuristicOracle o;
  GuidanceRequest req = mutate_request({"(str.= s \"OPEN\")"}, 0, "unsat");
  GuidanceResponse r = o.mutate(req, ctx_for(req));
  REQUIRE(r.valid);
  REQUIRE(r.edits.size() == 1);
  CHECK(r.edits[0].op == MutationEdit::Op::WidenEqToRange);
}

TEST_CASE("heuristic mutate declines constant-only atoms") {
  HeuristicOracle o;
  GuidanceRequest req = mutate_request({"(< 1 2)"}, 0, "unknown");
  GuidanceResponse r = o.mutate(req, ctx_for(req));
  CHECK(r.valid);
  CHECK(r.edits.empty());
}

TEST_CASE("heuristic mutate rejects an out-of-range failing index") {
  HeuristicOracle o;
  GuidanceRequest req = mutate_request({"(> x 3)"}, 7, "unknown");
  CHECK(!o.mutate(req, ctx_for(req)).valid);
}

TEST_CASE("heuristic synthesize cycles boundary values across attempts") {
  HeuristicOracle o;
  GuidanceRequest req;
  req.kind = GuidanceKind::Synthesize;
  req.synthesize.signature = {{"x", lang::Type::Int}, {"s", lang::Type::Str}};
  req.synthesize.int_constants = {10, 37};
  req.synthesize.str_constants = {"KEY"};

  // Pool: 10, 11, 37, 38, 0, -1; strings: "KEY", "". The string parameter
  // sits one slot ahead of the int (per-parameter stagger).
  req.synthesize.attempt = 0;
  GuidanceResponse r = o.synthesize(req, ctx_for(req));
  REQUIRE(r.valid);
  CHECK(r.input.at("x") == concolic::Value{int64_t{10}});
  CHECK(r.input.at("s") == concolic::Value{std::string("")});

  req.synthesize.attempt = 1;
  r = o.synthesize(req, ctx_for(req));
  CHECK(r.input.at("x") == concolic::Value{int64_t{11}});
  CHECK(r.input.at("s") == concolic::Value{std::string("KEY")});

  req.synthesize.attempt = 4;
  r = o.synthesize(req, ctx_for(req));
  CHECK(r.input.at("x") == concolic::Value{int64_t{0}});

  req.synthesize.attempt = 5;
  r = o.synthesize(req, ctx_for(req));
  CHECK(r.input.at("x") == concolic::Value{int64_t{-1}});

  // One full lap later the pool repeats.
  req.synthesize.attempt = 6;
  r = o.synthesize(req, ctx_for(req));
  CHECK(r.input.at("x") == concolic::Value{int64_t{10}});
}

TEST_CASE("null oracle preserves order and offers nothing") {
  NullOracle o;
  GuidanceRequest req = prioritize_request({item(9, 0, 1), item(4, 0, 2)});
  GuidanceResponse r = o.prioritize(req, ctx_for(req));
  REQUIRE(r.valid);
  CHECK(r.ranking == std::vector<int>{9, 4});
  CHECK(!o.mutate(req, ctx_for(req)).valid);
  CHECK(!o.synthesize(req, ctx_for(req)).valid);
  CHECK(o.stats().calls == 3);
}

TEST_CASE("structural validation of rankings") {
  ValidationContext ctx;
  ctx.frontier_ids = {2, 5};

  GuidanceResponse r;
  r.kind = GuidanceKind::Prioritize;
  r.ranking = {5, 5, 99, 2};
  CHECK(validate_structural(r, ctx));
  CHECK(r.ranking == std::vector<int>{5, 2});  // deduped, unknowns dropped

  r.ranking = {99, 98};
  CHECK(!validate_structural(r, ctx));  // nothing known survives

  r.ranking = {};
  CHECK(!validate_structural(r, ctx));
}

TEST_CASE("structural validation of edit lists") {
  ValidationContext ctx;
  ctx.atom_count = 2;

  auto edit = [](MutationEdit::Op op, int index) {
    MutationEdit e;
    e.op = op;
    e.index = index;
    if (op == MutationEdit::Op::WidenEqToRange) e.radius = 4;
    if (op == MutationEdit::Op::LinearizeProduct) e.fix_var = "a";
    return e;
  };

  GuidanceResponse r;
  r.kind = GuidanceKind::Mutate;
  r.edits = {edit(MutationEdit::Op::DropAtom, -1),       // bad index
             edit(MutationEdit::Op::DropAtom, 5),        // bad index
             edit(MutationEdit::Op::DropAtom, 0),
             edit(MutationEdit::Op::WidenEqToRange, 1),
             edit(MutationEdit::Op::LinearizeProduct, 0),
             edit(MutationEdit::Op::ReplaceConst, 1)};   // over the cap
  CHECK(validate_structural(r, ctx));
  REQUIRE(r.edits.size() == 3);  // well-formed survivors, truncated to three
  CHECK(r.edits[0].op == MutationEdit::Op::DropAtom);
  CHECK(r.edits[1].op == MutationEdit::Op::WidenEqToRange);
  CHECK(r.edits[2].op == MutationEdit::Op::LinearizeProduct);

  // A widen without a positive radius is malformed.
  MutationEdit bad;
  bad.op = MutationEdit::Op::WidenEqToRange;
  bad.index = 0;
  bad.radius = 0;
  r.edits = {bad};
  CHECK(!validate_structural(r, ctx));  // only malformed content

  r.edits = {};
  CHECK(validate_structural(r, ctx));  // an explicit decline is legitimate
}

TEST_CASE("structural validation coerces synthesized inputs") {
  ValidationContext ctx;
  ctx.signature = {{"x", lang::Type::Int},
                   {"b", lang::Type::Bool},
                   {"s", lang::Type::Str}};

  GuidanceResponse r;
  r.kind = GuidanceKind::Synthesize;
  r.input = {{"x", std::string("42")},
             {"b", std::string("true")},
             {"s", std::string("ok")},
             {"extra", int64_t{1}}};
  CHECK(validate_structural(r, ctx));
  CHECK(r.input.size() == 3);  // extras dropped
  CHECK(r.input.at("x") == concolic::Value{int64_t{42}});
  CHECK(r.input.at("b") == concolic::Value{true});
  CHECK(r.input.at("s") == concolic::Value{std::string("ok")});

  r.input = {{"x", int64_t{1}}, {"b", true}};  // missing s
  CHECK(!validate_structural(r, ctx));
  CHECK(r.input.empty());

  r.input = {{"x", std::string("4x2")}, {"b", true}, {"s", std::string("")}};
  CHECK(!validate_structural(r, ctx));
}

TEST_CASE("parse_response handles well-formed, sloppy, and foreign output") {
  ValidationContext ctx;
  ctx.frontier_ids = {1, 2, 3};

  GuidanceResponse r =
      parse_response(GuidanceKind::Prioritize, R"({"ranking": [3, 1.0, 2.5, "x"]})", ctx);
  CHECK(r.valid);
  CHECK(r.ranking == std::vector<int>{3, 1});  // 2.5 and "x" are not ids
  CHECK(r.raw.find("2.5") != std::string::npos);

  r = parse_response(GuidanceKind::Prioritize, "Sure! I'd try frontier 3 first.", ctx);
  CHECK(!r.valid);
  CHECK(r.raw == "Sure! I'd try frontier 3 first.");

  ctx.atom_count = 1;
  r = parse_response(GuidanceKind::Mutate, R"({"edits": []})", ctx);
  CHECK(r.valid);  // explicit decline
  CHECK(r.edits.empty());

  r = parse_response(GuidanceKind::Mutate,
                     R"({"edits": [{"op": "garbage", "index": 0}]})", ctx);
  CHECK(!r.valid);  // nothing survived parsing: a foreign document

  r = parse_response(
      GuidanceKind::Mutate,
      R"({"edits": [{"op": "drop_atom", "index": 0, "rationale": "why"},
                    {"op": "garbage"}]})",
      ctx);
  CHECK(r.valid);
  REQUIRE(r.edits.size() == 1);
  CHECK(r.edits[0].op == MutationEdit::Op::DropAtom);
  CHECK(r.edits[0].rationale == "why");

  ctx.signature = {{"x", lang::Type::Int}, {"f", lang::Type::Bool}};
  r = parse_response(GuidanceKind::Synthesize,
                     R"({"input": {"x": 5.0, "f": true, "junk": null}})", ctx);
  CHECK(r.valid);
  CHECK(r.input.at("x") == concolic::Value{int64_t{5}});
  CHECK(r.input.at("f") == concolic::Value{true});
}

TEST_CASE("request ids are content hashes") {
  GuidanceRequest a = mutate_request({"(> x 3)"}, 0, "unknown");
  GuidanceRequest b = mutate_request({"(> x 3)"}, 0, "unknown");
  CHECK(a.request_id() == b.request_id());

  GuidanceRequest c = mutate_request({"(> x 3)"}, 0, "unsat");
  CHECK(!(a.request_id() == c.request_id()));

  GuidanceRequest d = mutate_request({"(> x 4)"}, 0, "unknown");
  CHECK(!(a.request_id() == d.request_id()));
}

TEST_CASE("responses round-trip through json") {
  GuidanceResponse r;
  r.kind = GuidanceKind::Mutate;
  r.valid = true;
  r.raw = "{\"edits\":[...]}";
  MutationEdit e;
  e.op = MutationEdit::Op::LinearizeProduct;
  e.index = 2;
  e.fix_var = "a";
  e.fix_value = -7;
  e.rationale = "ground a";
  r.edits.push_back(e);

  GuidanceResponse back = response_from_json(nlohmann::json::parse(r.to_json().dump()));
  CHECK(back.kind == GuidanceKind::Mutate);
  CHECK(back.valid);
  CHECK(back.raw == r.raw);
  REQUIRE(back.edits.size() == 1);
  CHECK(back.edits[0].op == MutationEdit::Op::LinearizeProduct);
  CHECK(back.edits[0].index == 2);
  CHECK(back.edits[0].fix_var == "a");
  CHECK(back.edits[0].fix_value == -7);

  GuidanceResponse syn;
  syn.kind = GuidanceKind::Synthesize;
  syn.valid = true;
  syn.input = {{"x", int64_t{3}}, {"b", false}, {"s", std::string("hi")}};
  back = response_from_json(nlohmann::json::parse(syn.to_json().dump()));
  CHECK(back.input == syn.input);

  CHECK_THROWS_AS(response_from_json(nlohmann::json::parse(R"({"weird": 1})")),
                  std::runtime_error);
}

TEST_CASE("cache stores, persists, and evicts corrupt lines") {
  std::string path = tmp_dir() + "/cache_roundtrip.jsonl";
  fs::remove(path);

  GuidanceRequest req = mutate_request({"(> x 3)"}, 0, "unknown");
  GuidanceResponse resp;
  resp.kind = GuidanceKind::Mutate;
  resp.valid = true;
  MutationEdit e;
  e.op = MutationEdit::Op::DropAtom;
  e.index = 0;
  resp.edits.push_back(e);

  {
    GuidanceCache cache(path);
    CHECK(cache.size() == 0);
    cache.store(req.request_id(), resp);
    CHECK(cache.size() == 1);
    auto hit = cache.lookup(req.request_id());
    REQUIRE(hit.has_value());
    CHECK(hit->edits.size() == 1);
  }

  // Corrupt the file: one broken line and one structurally foreign line.
  {
    std::ofstream out(path, std::ios::app);
    out << "{this is not json\n";
    out << R"({"request_id": "00ff", "response": {"weird": true}})" << "\n";
  }

  GuidanceCache reloaded(path);
  CHECK(reloaded.size() == 1);  // only the good entry survives
  CHECK(reloaded.lookup(req.request_id()).has_value());

  // Eviction rewrote the file: a fresh load sees no corruption either.
  std::string text = util::read_file(path);
  CHECK(text.find("not json") == std::string::npos);
  CHECK(text.find("\"weird\"") == std::string::npos);
}

namespace {

// Counting stand-in for a remote endpoint.
class StubOracle : public Oracle {
 public:
  struct Counters {
    int calls = 0;
  };
  StubOracle(Counters* c, bool valid) : counters_(c), valid_(valid) {}
  std::string kind_name() const override { return "stub"; }
  GuidanceResponse prioritize(const GuidanceRequest& req,
                              const ValidationContext& ctx) override {
    ++counters_->calls;
    GuidanceResponse r;
    r.kind = GuidanceKind::Prioritize;
    for (const auto& it : req.prioritize) r.ranking.push_back(it.frontier_id);
    if (valid_) validate_structural(r, ctx);
    return r;
  }
  GuidanceResponse mutate(const GuidanceRequest&, const ValidationContext&) override {
    ++counters_->calls;
    return {};
  }
  GuidanceResponse synthesize(const GuidanceRequest&, const ValidationContext&) override {
    ++counters_->calls;
    return {};
  }

 private:
  Counters* counters_;
  bool valid_;
};

}  // namespace

TEST_CASE("caching oracle serves repeats without consulting the inner oracle") {
  StubOracle::Counters counters;
  auto cache = std::make_shared<GuidanceCache>("");
  CachingOracle oracle(std::make_unique<StubOracle>(&counters, true), cache);

  GuidanceRequest req = prioritize_request({item(1, 0, 1), item(2, 3, 2)});
  ValidationContext ctx = ctx_for(req);

  GuidanceResponse first = oracle.prioritize(req, ctx);
  CHECK(first.valid);
  CHECK(counters.calls == 1);

  GuidanceResponse second = oracle.prioritize(req, ctx);
  CHECK(second.valid);
  CHECK(second.ranking == first.ranking);
  CHECK(counters.calls == 1);  // served from cache
  CHECK(oracle.stats().cache_hits == 1);

  // A different request misses.
  GuidanceRequest other = prioritize_request({item(7, 0, 1)});
  oracle.prioritize(other, ctx_for(other));
  CHECK(counters.calls == 2);
}

TEST_CASE("invalid responses are never cached") {
  StubOracle::Counters counters;
  auto cache = std::make_shared<GuidanceCache>("");
  CachingOracle oracle(std::make_unique<StubOracle>(&counters, false), cache);

  GuidanceRequest req = mutate_request({"(> x 3)"}, 0, "unknown");
  ValidationContext ctx = ctx_for(req);
  CHECK(!oracle.mutate(req, ctx).valid);
  CHECK(!oracle.mutate(req, ctx).valid);
  CHECK(counters.calls == 2);  // retried, not served from cache
  CHECK(cache->size() == 0);
}

TEST_CASE("cache path resolution order") {
  CHECK(resolve_cache_path("/explicit/path.jsonl") == "/explicit/path.jsonl");
  setenv("LLMC_CACHE_DIR", "/from/env", 1);
  CHECK(resolve_cache_path("") == "/from/env/guidance_cache.jsonl");
  CHECK(resolve_cache_path("/explicit/wins.jsonl") == "/explicit/wins.jsonl");
  unsetenv("LLMC_CACHE_DIR");
  CHECK(resolve_cache_path("").empty());
}

TEST_CASE("transcripts record once per request and replay byte-identically") {
  std::string path = tmp_dir() + "/transcript_roundtrip.jsonl";
  fs::remove(path);

  GuidanceRequest req = prioritize_request({item(1, 0, 2), item(2, 5, 1)});
  ValidationContext ctx = ctx_for(req);
  HeuristicOracle heuristic;
  GuidanceResponse resp = heuristic.prioritize(req, ctx);

  {
    TranscriptWriter w(path, "heuristic");
    w.record(req, resp);
    w.record(req, resp);  // duplicate: the file is a function of request_id
    CHECK(w.entries() == 1);
  }

  std::string text = util::read_file(path);
  CHECK(text.find("\"oracle\":\"heuristic\"") != std::string::npos);

  ReplayOracle replay(path, /*lenient=*/false);
  CHECK(replay.kind_name() == "replay");
  CHECK(replay.recorded_oracle_kind() == "heuristic");
  GuidanceResponse again = replay.prioritize(req, ctx);
  CHECK(again.valid);
  CHECK(again.ranking == resp.ranking);

  // Strict mode refuses requests outside the recording.
  GuidanceRequest unseen = prioritize_request({item(42, 0, 1)});
  CHECK_THROWS_AS(replay.prioritize(unseen, ctx_for(unseen)), ReplayMiss);
}

TEST_CASE("lenient replay falls back to the heuristic and counts it") {
  std::string path = tmp_dir() + "/transcript_lenient.jsonl";
  fs::remove(path);
  {
    TranscriptWriter w(path, "heuristic");
  }

  ReplayOracle replay(path, /*lenient=*/true);
  GuidanceRequest req = prioritize_request({item(3, 1, 2), item(9, 0, 1)});
  GuidanceResponse r = replay.prioritize(req, ctx_for(req));
  CHECK(r.valid);
  CHECK(r.ranking == std::vector<int>{3, 9});  // the heuristic's answer
  CHECK(replay.stats().fallbacks == 1);
}

TEST_CASE("corrupt transcripts are rejected at load") {
  std::string path = tmp_dir() + "/transcript_corrupt.jsonl";
  util::atomic_write_file(path, "{\"oracle\": \"heuristic\"}\nnot json at all\n");
  CHECK_THROWS_AS(ReplayOracle(path, false), std::runtime_error);

  util::atomic_write_file(path, "{\"oracle\": \"x\"}\n{\"request\": {}}\n");
  CHECK_THROWS_AS(ReplayOracle(path, false), std::runtime_error);
}

TEST_CASE("oracle factory wires kinds and rejects misconfiguration") {
  OracleConfig cfg;
  cfg.kind = "null";
  CHECK(make_oracle(cfg)->kind_name() == "null");
  cfg.kind = "heuristic";
  CHECK(make_oracle(cfg)->kind_name() == "heuristic");

  cfg.kind = "replay";
  cfg.transcript_path = "";
  CHECK_THROWS_AS(make_oracle(cfg), std::invalid_argument);

  cfg.kind = "remote";
  cfg.endpoint = "";
  CHECK_THROWS_AS(make_oracle(cfg), std::invalid_argument);

  cfg.kind = "delphi";
  CHECK_THROWS_AS(make_oracle(cfg), std::invalid_argument);
}
