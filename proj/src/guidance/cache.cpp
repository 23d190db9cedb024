#include "llmc/guidance/cache.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "llmc/util/fsio.hpp"

namespace llmc::guidance {

GuidanceCache::GuidanceCache(std::string path) : path_(std::move(path)) {
  if (path_.empty()) return;
  std::ifstream in(path_);
  if (!in) return;

  bool saw_corrupt = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("request_id") ||
        !j["request_id"].is_string() || !j.contains("response")) {
      saw_corrupt = true;
      continue;
    }
    try {
      entries_[j["request_id"].get<std::string>()] =
          response_from_json(j["response"]);
    } catch (const std::runtime_error&) {
      saw_corrupt = true;
    }
  }
  in.close();

  if (saw_corrupt) {
    // Evict: rewrite the file with only the entries that loaded cleanly.
    std::ostringstream out;
    for (const auto& [id, resp] : entries_) {
      nlohmann::ordered_json j;
      j["request_id"] = id;
      j["response"] = resp.to_json();
      out << j.dump() << "\n";
    }
    util::atomic_write_file(path_, out.str());
  }
}

std::optional<GuidanceResponse> GuidanceCache::lookup(const util::Hash128& id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = entries_.find(id.to_hex());
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void GuidanceCache::store(const util::Hash128& id, const GuidanceResponse& response) {
  std::lock_guard<std::mutex> lock(mu_);
  std::string key = id.to_hex();
  auto [it, inserted] = entries_.emplace(key, response);
  if (!inserted) return;
  if (path_.empty()) return;
  nlohmann::ordered_json j;
  j["request_id"] = key;
  j["response"] = response.to_json();
  std::ofstream out(path_, std::ios::app);
  out << j.dump() << "\n";
}

size_t GuidanceCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

std::string resolve_cache_path(const std::string& configured) {
  if (!configured.empty()) return configured;
  const char* dir = std::getenv("LLMC_CACHE_DIR");
  if (dir && *dir) return std::string(dir) + "/guidance_cache.jsonl";
  return {};
}

CachingOracle::CachingOracle(std::unique_ptr<Oracle> inner,
                             std::shared_ptr<GuidanceCache> cache)
    : inner_(std::move(inner)), cache_(std::move(cache)) {}

std::string CachingOracle::kind_name() const { return inner_->kind_name(); }

GuidanceResponse CachingOracle::serve(const GuidanceRequest& req,
                                      const ValidationContext& ctx) {
  ++stats_.calls;
  util::Hash128 id = req.request_id();
  if (auto hit = cache_->lookup(id)) {
    ++stats_.cache_hits;
    GuidanceResponse r = std::move(*hit);
    validate_structural(r, ctx);
    return r;
  }
  GuidanceResponse r;
  switch (req.kind) {
    case GuidanceKind::Prioritize: r = inner_->prioritize(req, ctx); break;
    case GuidanceKind::Mutate: r = inner_->mutate(req, ctx); break;
    case GuidanceKind::Synthesize: r = inner_->synthesize(req, ctx); break;
  }
  // Invalid responses (transport failures, malformed output) are not cached,
  // so a later run can retry them.
  if (r.valid) cache_->store(id, r);
  stats_.network_calls = inner_->stats().network_calls;
  stats_.fallbacks = inner_->stats().fallbacks;
  return r;
}

GuidanceResponse CachingOracle::prioritize(const GuidanceRequest& req,
                                           const ValidationContext& ctx) {
  return serve(req, ctx);
}

GuidanceResponse CachingOracle::mutate(const GuidanceRequest& req,
                                       const ValidationContext& ctx) {
  return serve(req, ctx);
}

GuidanceResponse CachingOracle::synthesize(const GuidanceRequest& req,
                                           const ValidationContext& ctx) {
  return serve(req, ctx);
}

}  // namespace llmc::guidance
