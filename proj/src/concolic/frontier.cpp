#include "llmc/concolic/frontier.hpp"

#include <cstring>
#include <stdexcept>

namespace llmc::concolic {

util::Hash128 prefix_path_id(const PathCondition& atoms, size_t len) {
  std::vector<unsigned char> buf;
  buf.reserve(len * 5);
  for (size_t i = 0; i < len; ++i) {
    int32_t site = atoms[i].site;
    unsigned char rec[5];
    std::memcpy(rec, &site, 4);
    rec[4] = atoms[i].direction ? 1 : 0;
    buf.insert(buf.end(), rec, rec + 5);
  }
  return util::hash128(buf.data(), buf.size());
}

util::Hash128 path_id(const PathCondition& atoms) {
  return prefix_path_id(atoms, atoms.size());
}

std::string verdict_kind_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::Ok: return "ok";
    case VerdictKind::ErrorLabel: return "error-label";
    case VerdictKind::AssertFail: return "assert-fail";
    case VerdictKind::RuntimeError: return "runtime-error";
    case VerdictKind::BudgetExceeded: return "budget-exceeded";
  }
  return "unknown";
}

std::string Verdict::key() const {
  std::string k = verdict_kind_name(kind);
  switch (kind) {
    case VerdictKind::ErrorLabel:
    case VerdictKind::RuntimeError:
      return k + ":" + label;
    case VerdictKind::AssertFail:
      return k + ":site" + std::to_string(site);
    default:
      return k;
  }
}

std::string Verdict::describe() const {
  std::string d = key();
  if (kind != VerdictKind::Ok && line > 0)
    d += " at " + std::to_string(line) + ":" + std::to_string(col);
  return d;
}

std::string frontier_status_name(FrontierStatus st) {
  switch (st) {
    case FrontierStatus::Pending: return "pending";
    case FrontierStatus::Solved: return "solved";
    case FrontierStatus::Unsat: return "unsat";
    case FrontierStatus::Unknown: return "unknown";
    case FrontierStatus::Retired: return "retired";
  }
  return "?";
}

PathCondition Frontier::query_atoms() const {
  PathCondition q = prefix;
  q.push_back(flip);
  return q;
}

std::vector<int64_t> FrontierTracker::harvest(const TraceResult& trace,
                                              int64_t discovered_at) {
  std::vector<int64_t> created;
  for (size_t d = 0; d < trace.path.size(); ++d) {
    const Atom& a = trace.path[d];
    util::Hash128 prefix_id = prefix_path_id(trace.path, d);
    auto key = std::make_tuple(prefix_id, a.site, !a.direction);
    if (!seen_.insert(key).second) continue;
    Frontier f;
    f.id = static_cast<int64_t>(store_.size());
    f.prefix.assign(trace.path.begin(), trace.path.begin() + static_cast<long>(d));
    f.flip = a;
    f.flip.direction = !a.direction;
    f.discovered_at = discovered_at;
    created.push_back(f.id);
    store_.push_back(std::move(f));
  }
  return created;
}

std::vector<int64_t> FrontierTracker::pending_ids() const {
  std::vector<int64_t> out;
  for (const auto& f : store_)
    if (f.status == FrontierStatus::Pending) out.push_back(f.id);
  return out;
}

void FrontierTracker::set_status(int64_t id, FrontierStatus st) {
  auto rank = [](FrontierStatus s) {
    switch (s) {
      case FrontierStatus::Pending: return 0;
      case FrontierStatus::Retired: return 2;
      default: return 1;
    }
  };
  Frontier& f = get(id);
  if (rank(st) < rank(f.status) ||
      (rank(st) == rank(f.status) && st != f.status))
    throw std::logic_error("frontier status moved backwards");
  f.status = st;
}

}  // namespace llmc::concolic
