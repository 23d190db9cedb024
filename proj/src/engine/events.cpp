#include "llmc/engine/events.hpp"

#include "llmc/util/fsio.hpp"

namespace llmc::engine {

std::string EventLog::text() const {
  std::string out;
  for (const auto& line : lines_) {
    out += line;
    out += '\n';
  }
  return out;
}

void EventLog::flush() const {
  if (path_.empty()) return;
  util::atomic_write_file(path_, text());
}

}  // namespace llmc::engine
