#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace llmc::engine {

// Deterministic JSON-lines trail of everything a campaign does. Lines are
// buffered in memory (campaigns are desk-scale) and written out once at the
// end; tests inspect the buffer directly.
class EventLog {
 public:
  EventLog() = default;
  explicit EventLog(std::string path) : path_(std::move(path)) {}

  void emit(const nlohmann::ordered_json& event) {
    lines_.push_back(event.dump());
  }

  const std::vector<std::string>& lines() const { return lines_; }
  std::string text() const;

  // Atomic write when a path is configured; no-op otherwise.
  void flush() const;

 private:
  std::string path_;
  std::vector<std::string> lines_;
};

}  // namespace llmc::engine
