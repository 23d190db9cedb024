#include "llmc/guidance/transcript.hpp"

#include <ctime>
#include <fstream>

#include "llmc/guidance/heuristic.hpp"
#include "llmc/util/fsio.hpp"

namespace llmc::guidance {

namespace {

std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

}  // namespace

TranscriptWriter::TranscriptWriter(std::string path, const std::string& oracle_kind)
    : path_(std::move(path)) {
  nlohmann::ordered_json header;
  header["oracle"] = oracle_kind;
  header["created"] = iso_timestamp();
  buffer_ = header.dump() + "\n";
}

TranscriptWriter::~TranscriptWriter() {
  if (!path_.empty()) util::atomic_write_file(path_, buffer_);
}

void TranscriptWriter::record(const GuidanceRequest& req,
                              const GuidanceResponse& resp) {
  std::string id = req.request_id().to_hex();
  if (seen_.count(id)) return;
  seen_[id] = true;
  nlohmann::ordered_json line;
  nlohmann::ordered_json jreq = req.to_json();
  jreq["request_id"] = id;
  line["request"] = std::move(jreq);
  line["response"] = resp.to_json();
  buffer_ += line.dump() + "\n";
}

ReplayOracle::ReplayOracle(const std::string& transcript_path, bool lenient)
    : lenient_(lenient) {
  std::ifstream in(transcript_path);
  if (!in)
    throw std::runtime_error("cannot open transcript: " + transcript_path);

  std::string line;
  bool saw_header = false;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw std::runtime_error("transcript line " + std::to_string(lineno) +
                               " is not valid JSON");
    if (!saw_header) {
      saw_header = true;
      if (j.contains("oracle") && j["oracle"].is_string()) {
        recorded_kind_ = j["oracle"].get<std::string>();
        continue;
      }
      // No header: fall through and treat the line as an entry.
    }
    if (!j.contains("request") || !j.contains("response") ||
        !j["request"].is_object() || !j["request"].contains("request_id") ||
        !j["request"]["request_id"].is_string())
      throw std::runtime_error("transcript line " + std::to_string(lineno) +
                               " is not a request/response pair");
    std::string id = j["request"]["request_id"].get<std::string>();
    if (entries_.count(id)) continue;  // first recording wins
    entries_[id] = response_from_json(j["response"]);
  }

  if (lenient_) fallback_ = std::make_unique<HeuristicOracle>();
}

GuidanceResponse ReplayOracle::serve(const GuidanceRequest& req,
                                     const ValidationContext& ctx) {
  ++stats_.calls;
  std::string id = req.request_id().to_hex();
  auto it = entries_.find(id);
  if (it != entries_.end()) {
    GuidanceResponse r = it->second;
    validate_structural(r, ctx);
    return r;
  }
  if (!lenient_)
    throw ReplayMiss("no transcript entry for request " + id + " (" +
                     guidance_kind_name(req.kind) + ")");
  ++stats_.fallbacks;
  switch (req.kind) {
    case GuidanceKind::Prioritize: return fallback_->prioritize(req, ctx);
    case GuidanceKind::Mutate: return fallback_->mutate(req, ctx);
    case GuidanceKind::Synthesize: return fallback_->synthesize(req, ctx);
  }
  GuidanceResponse r;
  r.kind = req.kind;
  return r;
}

GuidanceResponse ReplayOracle::prioritize(const GuidanceRequest& req,
                                          const ValidationContext& ctx) {
  return serve(req, ctx);
}

GuidanceResponse ReplayOracle::mutate(const GuidanceRequest& req,
                                      const ValidationContext& ctx) {
  return serve(req, ctx);
}

GuidanceResponse ReplayOracle::synthesize(const GuidanceRequest& req,
                                          const ValidationContext& ctx) {
  return serve(req, ctx);
}

}  // namespace llmc::guidance
