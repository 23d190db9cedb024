#include "llmc/solver/propagate.hpp"

#include <algorithm>
#include <limits>

namespace llmc::solver {

namespace {

using concolic::SymExpr;
using concolic::SymExprPtr;
using concolic::SymOp;

constexpr int64_t kMin = std::numeric_limits<int64_t>::min();
constexpr int64_t kMax = std::numeric_limits<int64_t>::max();

IntInterval top() { return {kMin, kMax}; }

int64_t clamp128(__int128 v) {
  if (v > kMax) return kMax;
  if (v < kMin) return kMin;
  return static_cast<int64_t>(v);
}

// Interval sum/difference; widens to TOP when an endpoint overflows int64,
// which stays sound because concrete arithmetic wraps inside int64.
IntInterval add_iv(const IntInterval& a, const IntInterval& b) {
  __int128 lo = static_cast<__int128>(a.lo) + b.lo;
  __int128 hi = static_cast<__int128>(a.hi) + b.hi;
  if (lo < kMin || hi > kMax) return top();
  return {static_cast<int64_t>(lo), static_cast<int64_t>(hi)};
}

IntInterval sub_iv(const IntInterval& a, const IntInterval& b) {
  __int128 lo = static_cast<__int128>(a.lo) - b.hi;
  __int128 hi = static_cast<__int128>(a.hi) - b.lo;
  if (lo < kMin || hi > kMax) return top();
  return {static_cast<int64_t>(lo), static_cast<int64_t>(hi)};
}

IntInterval neg_iv(const IntInterval& a) {
  __int128 lo = -static_cast<__int128>(a.hi);
  __int128 hi = -static_cast<__int128>(a.lo);
  if (lo < kMin || hi > kMax) return top();
  return {static_cast<int64_t>(lo), static_cast<int64_t>(hi)};
}

// Scale by a constant. Exact when c is known; products of two non-constant
// operands are deliberately opaque (TOP) elsewhere.
IntInterval mul_const_iv(const IntInterval& a, int64_t c) {
  if (c == 0) return {0, 0};
  __int128 x = static_cast<__int128>(a.lo) * c;
  __int128 y = static_cast<__int128>(a.hi) * c;
  __int128 lo = x < y ? x : y;
  __int128 hi = x < y ? y : x;
  if (lo < kMin || hi > kMax) return top();
  return {static_cast<int64_t>(lo), static_cast<int64_t>(hi)};
}

IntInterval div_const_iv(const IntInterval& a, int64_t c) {
  // c != 0; trunc division is monotone for fixed sign of c.
  int64_t x = concolic::trunc_div(a.lo, c);
  int64_t y = concolic::trunc_div(a.hi, c);
  return {std::min(x, y), std::max(x, y)};
}

const VarDomain* dom_of(const SymExpr& e, const DomainStore& doms) {
  return doms.find(e.str_val);
}

}  // namespace

StrShape StrShape::from_config(const DomainConfig& cfg) {
  StrShape s;
  s.min_len = 0;
  s.max_len = cfg.str_max_len;
  s.pos.assign(static_cast<size_t>(cfg.str_max_len),
               IntInterval{cfg.alpha_lo, cfg.alpha_hi});
  return s;
}

bool StrShape::contradiction() const {
  if (min_len > max_len || min_len < 0) return true;
  // A position required by every admitted length must be satisfiable.
  for (int i = 0; i < min_len; ++i)
    if (pos[static_cast<size_t>(i)].empty()) return true;
  // Lengths whose positions are unsatisfiable are excluded; if no length
  // survives the shape is empty.
  for (int len = min_len; len <= max_len; ++len) {
    bool ok = true;
    for (int i = 0; i < len; ++i)
      if (pos[static_cast<size_t>(i)].empty()) {
        ok = false;
        break;
      }
    if (ok) return false;
  }
  return true;
}

bool StrShape::admits(const std::string& s) const {
  int len = static_cast<int>(s.size());
  if (len < min_len || len > max_len) return false;
  for (int i = 0; i < len; ++i)
    if (!pos[static_cast<size_t>(i)].contains(static_cast<unsigned char>(s[static_cast<size_t>(i)])))
      return false;
  return true;
}

std::optional<std::string> StrShape::pinned() const {
  if (min_len != max_len) return std::nullopt;
  std::string s;
  for (int i = 0; i < min_len; ++i) {
    const IntInterval& p = pos[static_cast<size_t>(i)];
    if (!p.singleton()) return std::nullopt;
    s.push_back(static_cast<char>(p.lo));
  }
  return s;
}

bool StrShape::pin(const std::string& s) {
  if (!admits(s)) return false;
  int len = static_cast<int>(s.size());
  min_len = max_len = len;
  pos.resize(static_cast<size_t>(len));
  for (int i = 0; i < len; ++i) {
    auto c = static_cast<int64_t>(static_cast<unsigned char>(s[static_cast<size_t>(i)]));
    pos[static_cast<size_t>(i)] = {c, c};
  }
  return true;
}

bool VarDomain::contradiction() const {
  switch (type) {
    case lang::Type::Int: return iv.empty();
    case lang::Type::Bool: return !allow_false && !allow_true;
    case lang::Type::Str: return str.contradiction();
  }
  return true;
}

void DomainStore::add(const std::string& name, VarDomain d) {
  items_.emplace_back(name, std::move(d));
}

VarDomain* DomainStore::find(const std::string& name) {
  for (auto& [n, d] : items_)
    if (n == name) return &d;
  return nullptr;
}

const VarDomain* DomainStore::find(const std::string& name) const {
  for (const auto& [n, d] : items_)
    if (n == name) return &d;
  return nullptr;
}

DomainStore DomainStore::from_signature(const lang::FunctionDef& entry,
                                        const DomainConfig& cfg) {
  DomainStore ds;
  for (const auto& p : entry.params) {
    VarDomain d;
    d.type = p.type;
    switch (p.type) {
      case lang::Type::Int: d.iv = {cfg.int_lo, cfg.int_hi}; break;
      case lang::Type::Bool: break;
      case lang::Type::Str: d.str = StrShape::from_config(cfg); break;
    }
    ds.add(p.name, std::move(d));
  }
  return ds;
}

std::string solve_status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Sat: return "sat";
    case SolveStatus::Unsat: return "unsat";
    case SolveStatus::Unknown: return "unknown";
  }
  return "?";
}

std::string unknown_reason_name(UnknownReason r) {
  switch (r) {
    case UnknownReason::Budget: return "budget";
    case UnknownReason::Wallclock: return "wallclock";
    case UnknownReason::Unsupported: return "unsupported";
  }
  return "?";
}

AbsInt forward_int(const SymExprPtr& e, const DomainStore& doms) {
  switch (e->op) {
    case SymOp::IntConst: return {{e->int_val, e->int_val}, false};
    case SymOp::Var: {
      const VarDomain* d = dom_of(*e, doms);
      if (!d || d->type != lang::Type::Int) return {top(), false};
      return {d->iv, false};
    }
    case SymOp::Neg: {
      AbsInt k = forward_int(e->kids[0], doms);
      return {neg_iv(k.iv), k.traps};
    }
    case SymOp::Add: {
      AbsInt l = forward_int(e->kids[0], doms), r = forward_int(e->kids[1], doms);
      return {add_iv(l.iv, r.iv), l.traps || r.traps};
    }
    case SymOp::Sub: {
      AbsInt l = forward_int(e->kids[0], doms), r = forward_int(e->kids[1], doms);
      return {sub_iv(l.iv, r.iv), l.traps || r.traps};
    }
    case SymOp::Mul: {
      AbsInt l = forward_int(e->kids[0], doms), r = forward_int(e->kids[1], doms);
      bool traps = l.traps || r.traps;
      if (l.iv.singleton()) return {mul_const_iv(r.iv, l.iv.lo), traps};
      if (r.iv.singleton()) return {mul_const_iv(l.iv, r.iv.lo), traps};
      return {top(), traps};  // opaque product of two non-grounded operands
    }
    case SymOp::Div:
    case SymOp::Mod: {
      AbsInt l = forward_int(e->kids[0], doms), r = forward_int(e->kids[1], doms);
      bool traps = l.traps || r.traps;
      if (r.iv.singleton() && r.iv.lo == 0) return {top(), true};  // always traps
      if (r.iv.singleton()) {
        int64_t c = r.iv.lo;
        if (e->op == SymOp::Div) return {div_const_iv(l.iv, c), traps};
        int64_t m = c < 0 ? -(c + 1) : c - 1;  // |c| - 1 without overflow on c = INT64_MIN
        if (c == kMin) m = kMax;
        IntInterval out{-m, m};
        if (l.iv.lo >= 0) out.lo = 0;
        if (l.iv.hi <= 0) out.hi = 0;
        return {out, traps};
      }
      return {top(), traps};  // divisor not grounded: opaque (may trap)
    }
    case SymOp::StrLen: {
      const SymExprPtr& s = e->kids[0];
      if (s->op == SymOp::StrConst)
        return {{static_cast<int64_t>(s->str_val.size()),
                 static_cast<int64_t>(s->str_val.size())},
                false};
      const VarDomain* d = dom_of(*s, doms);
      if (!d || d->type != lang::Type::Str) return {top(), false};
      return {{d->str.min_len, d->str.max_len}, false};
    }
    case SymOp::CharAt: {
      const SymExprPtr& s = e->kids[0];
      AbsInt idx = forward_int(e->kids[1], doms);
      if (idx.traps) return {top(), true};
      if (s->op == SymOp::StrConst) {
        int64_t n = static_cast<int64_t>(s->str_val.size());
        IntInterval valid = idx.iv.intersect({0, n - 1});
        if (valid.empty()) return {top(), true};  // every index out of range
        IntInterval out{kMax, kMin};
        for (int64_t i = valid.lo; i <= valid.hi; ++i) {
          auto c = static_cast<int64_t>(
              static_cast<unsigned char>(s->str_val[static_cast<size_t>(i)]));
          out.lo = std::min(out.lo, c);
          out.hi = std::max(out.hi, c);
        }
        return {out, false};
      }
      const VarDomain* d = dom_of(*s, doms);
      if (!d || d->type != lang::Type::Str) return {top(), false};
      IntInterval valid = idx.iv.intersect({0, d->str.max_len - 1});
      if (valid.empty()) return {top(), true};
      if (valid.singleton())
        return {d->str.pos[static_cast<size_t>(valid.lo)], false};
      IntInterval out{kMax, kMin};
      for (int64_t i = valid.lo; i <= valid.hi; ++i) {
        const IntInterval& p = d->str.pos[static_cast<size_t>(i)];
        if (p.empty()) continue;
        out.lo = std::min(out.lo, p.lo);
        out.hi = std::max(out.hi, p.hi);
      }
      if (out.lo > out.hi) return {top(), true};
      return {out, false};
    }
    default:
      return {top(), false};
  }
}

namespace {

BoolSet bool_from(bool may_true, bool may_false) { return {may_true, may_false}; }

BoolSet cmp_forward(SymOp op, const IntInterval& l, const IntInterval& r) {
  if (l.empty() || r.empty()) return bool_from(false, false);
  switch (op) {
    case SymOp::Lt: return bool_from(l.lo < r.hi, l.hi >= r.lo);
    case SymOp::Le: return bool_from(l.lo <= r.hi, l.hi > r.lo);
    case SymOp::Gt: return bool_from(l.hi > r.lo, l.lo <= r.hi);
    case SymOp::Ge: return bool_from(l.hi >= r.lo, l.lo < r.hi);
    case SymOp::Eq: {
      bool overlap = !l.intersect(r).empty();
      bool forced = l.singleton() && r.singleton() && l.lo == r.lo;
      return bool_from(overlap, !forced);
    }
    case SymOp::Ne: {
      bool overlap = !l.intersect(r).empty();
      bool forced = l.singleton() && r.singleton() && l.lo == r.lo;
      return bool_from(!forced, overlap);
    }
    default: return bool_from(true, true);
  }
}

// Abstract value of a string expression: either a constant or a variable's
// shape (MiniLang has no string-producing operators).
struct AbsStr {
  const StrShape* shape = nullptr;
  const std::string* constant = nullptr;
};

AbsStr abs_str(const SymExprPtr& e, const DomainStore& doms) {
  AbsStr out;
  if (e->op == SymOp::StrConst) {
    out.constant = &e->str_val;
    return out;
  }
  const VarDomain* d = doms.find(e->str_val);
  if (d && d->type == lang::Type::Str) out.shape = &d->str;
  return out;
}

}  // namespace

BoolSet forward_bool(const SymExprPtr& e, const DomainStore& doms) {
  switch (e->op) {
    case SymOp::BoolConst: return bool_from(e->bool_val, !e->bool_val);
    case SymOp::Var: {
      const VarDomain* d = dom_of(*e, doms);
      if (!d || d->type != lang::Type::Bool) return bool_from(true, true);
      return bool_from(d->allow_true, d->allow_false);
    }
    case SymOp::Not: {
      BoolSet k = forward_bool(e->kids[0], doms);
      return bool_from(k.may_false, k.may_true);
    }
    case SymOp::And: {
      BoolSet l = forward_bool(e->kids[0], doms), r = forward_bool(e->kids[1], doms);
      return bool_from(l.may_true && r.may_true, l.may_false || r.may_false);
    }
    case SymOp::Or: {
      BoolSet l = forward_bool(e->kids[0], doms), r = forward_bool(e->kids[1], doms);
      return bool_from(l.may_true || r.may_true, l.may_false && r.may_false);
    }
    case SymOp::StrEq: {
      AbsStr a = abs_str(e->kids[0], doms), b = abs_str(e->kids[1], doms);
      if (a.constant && b.constant)
        return bool_from(*a.constant == *b.constant, *a.constant != *b.constant);
      if (a.constant || b.constant) {
        const std::string& c = a.constant ? *a.constant : *b.constant;
        const StrShape* sh = a.constant ? b.shape : a.shape;
        if (!sh) return bool_from(true, true);
        if (!sh->admits(c)) return bool_from(false, true);
        auto p = sh->pinned();
        if (p && *p == c) return bool_from(true, false);
        return bool_from(true, true);
      }
      if (a.shape && b.shape) {
        auto pa = a.shape->pinned(), pb = b.shape->pinned();
        if (pa && pb) return bool_from(*pa == *pb, *pa != *pb);
      }
      return bool_from(true, true);
    }
    case SymOp::Eq: case SymOp::Ne: case SymOp::Lt:
    case SymOp::Le: case SymOp::Gt: case SymOp::Ge: {
      AbsInt l = forward_int(e->kids[0], doms), r = forward_int(e->kids[1], doms);
      if (l.traps || r.traps) return bool_from(false, false);  // definite trap
      return cmp_forward(e->op, l.iv, r.iv);
    }
    default:
      return bool_from(true, true);
  }
}

namespace {

// Backward pass: narrow domains so that expression `e` can still take the
// required value/interval. Returns false on contradiction. Narrowing is
// conservative: when a rule cannot invert an operator it simply leaves the
// domains unchanged (sound; completeness comes from enumeration).
struct Narrower {
  DomainStore& doms;
  bool changed = false;

  bool narrow_var_int(const std::string& name, const IntInterval& req) {
    VarDomain* d = doms.find(name);
    if (!d || d->type != lang::Type::Int) return true;
    IntInterval next = d->iv.intersect(req);
    if (next.empty()) return false;
    if (!(next == d->iv)) {
      d->iv = next;
      changed = true;
    }
    return true;
  }

  bool assert_int(const concolic::SymExprPtr& e, IntInterval req) {
    if (req.empty()) return false;
    switch (e->op) {
      case SymOp::IntConst: return req.contains(e->int_val);
      case SymOp::Var: return narrow_var_int(e->str_val, req);
      case SymOp::Neg: return assert_int(e->kids[0], neg_iv(req));
      case SymOp::Add: {
        AbsInt l = forward_int(e->kids[0], doms), r = forward_int(e->kids[1], doms);
        if (!assert_int(e->kids[0], sub_iv(req, r.iv))) return false;
        return assert_int(e->kids[1], sub_iv(req, l.iv));
      }
      case SymOp::Sub: {
        AbsInt l = forward_int(e->kids[0], doms), r = forward_int(e->kids[1], doms);
        if (!assert_int(e->kids[0], add_iv(req, r.iv))) return false;
        return assert_int(e->kids[1], sub_iv(l.iv, req));
      }
      case SymOp::Mul: {
        AbsInt l = forward_int(e->kids[0], doms), r = forward_int(e->kids[1], doms);
        if (l.iv.singleton())
          return assert_mul_const(e->kids[1], l.iv.lo, req);
        if (r.iv.singleton())
          return assert_mul_const(e->kids[0], r.iv.lo, req);
        return true;  // opaque product: no backward narrowing by design
      }
      case SymOp::Div: {
        AbsInt r = forward_int(e->kids[1], doms);
        if (r.iv.singleton() && r.iv.lo != 0) {
          int64_t c = r.iv.lo;
          // l/c in req  =>  l in c*req widened by the truncation slack.
          IntInterval scaled = mul_const_iv(req, c);
          __int128 slack = c < 0 ? -static_cast<__int128>(c) - 1
                                 : static_cast<__int128>(c) - 1;
          IntInterval wide{clamp128(static_cast<__int128>(scaled.lo) - slack),
                           clamp128(static_cast<__int128>(scaled.hi) + slack)};
          return assert_int(e->kids[0], wide);
        }
        return true;
      }
      case SymOp::Mod:
        return true;  // no useful inverse; enumeration handles it
      case SymOp::StrLen: {
        const SymExprPtr& s = e->kids[0];
        if (s->op == SymOp::StrConst)
          return req.contains(static_cast<int64_t>(s->str_val.size()));
        VarDomain* d = doms.find(s->str_val);
        if (!d || d->type != lang::Type::Str) return true;
        int lo = static_cast<int>(std::max<int64_t>(req.lo, 0));
        int hi = static_cast<int>(std::min<int64_t>(req.hi, d->str.max_len));
        if (lo > d->str.min_len) {
          d->str.min_len = lo;
          changed = true;
        }
        if (hi < d->str.max_len) {
          d->str.max_len = hi;
          changed = true;
        }
        return !d->str.contradiction();
      }
      case SymOp::CharAt: {
        const SymExprPtr& s = e->kids[0];
        AbsInt idx = forward_int(e->kids[1], doms);
        // A satisfied atom implies the access did not trap.
        if (s->op == SymOp::StrConst) {
          int64_t n = static_cast<int64_t>(s->str_val.size());
          return !idx.iv.intersect({0, n - 1}).empty();
        }
        VarDomain* d = doms.find(s->str_val);
        if (!d || d->type != lang::Type::Str) return true;
        if (!assert_int(e->kids[1], {0, d->str.max_len - 1})) return false;
        idx = forward_int(e->kids[1], doms);
        int need_len = static_cast<int>(idx.iv.lo) + 1;
        if (need_len > d->str.min_len) {
          d->str.min_len = need_len;
          changed = true;
        }
        if (idx.iv.singleton()) {
          auto& p = d->str.pos[static_cast<size_t>(idx.iv.lo)];
          IntInterval next = p.intersect(req);
          if (next.empty()) return false;
          if (!(next == p)) {
            p = next;
            changed = true;
          }
        }
        return !d->str.contradiction();
      }
      default:
        return true;
    }
  }

  bool assert_mul_const(const concolic::SymExprPtr& e, int64_t c, IntInterval req) {
    if (c == 0) return req.contains(0);
    // v with c*v in req: v in [ceil(lo/c), floor(hi/c)] respecting sign.
    __int128 lo128 = req.lo, hi128 = req.hi;
    if (c < 0) {
      std::swap(lo128, hi128);
    }
    auto ceil_div = [](__int128 a, __int128 b) {
      __int128 q = a / b, r = a % b;
      if (r != 0 && ((a < 0) == (b < 0))) ++q;
      return q;
    };
    auto floor_div = [](__int128 a, __int128 b) {
      __int128 q = a / b, r = a % b;
      if (r != 0 && ((a < 0) != (b < 0))) --q;
      return q;
    };
    IntInterval out{clamp128(ceil_div(lo128, c)), clamp128(floor_div(hi128, c))};
    if (out.empty()) return false;
    return assert_int(e, out);
  }

  bool assert_cmp(SymOp op, const concolic::SymExprPtr& l, const concolic::SymExprPtr& r) {
    AbsInt li = forward_int(l, doms), ri = forward_int(r, doms);
    if (li.traps || ri.traps) return false;
    IntInterval lreq = li.iv, rreq = ri.iv;
    switch (op) {
      case SymOp::Lt:
        lreq.hi = clamp128(static_cast<__int128>(ri.iv.hi) - 1);
        rreq.lo = clamp128(static_cast<__int128>(li.iv.lo) + 1);
        break;
      case SymOp::Le:
        lreq.hi = ri.iv.hi;
        rreq.lo = li.iv.lo;
        break;
      case SymOp::Gt:
        lreq.lo = clamp128(static_cast<__int128>(ri.iv.lo) + 1);
        rreq.hi = clamp128(static_cast<__int128>(li.iv.hi) - 1);
        break;
      case SymOp::Ge:
        lreq.lo = ri.iv.lo;
        rreq.hi = li.iv.hi;
        break;
      case SymOp::Eq: {
        IntInterval both = li.iv.intersect(ri.iv);
        lreq = both;
        rreq = both;
        break;
      }
      case SymOp::Ne: {
        // Trim an endpoint when the other side is a singleton.
        if (ri.iv.singleton()) {
          if (li.iv.singleton() && li.iv.lo == ri.iv.lo) return false;
          if (li.iv.lo == ri.iv.lo)
            lreq.lo = clamp128(static_cast<__int128>(li.iv.lo) + 1);
          if (li.iv.hi == ri.iv.lo)
            lreq.hi = clamp128(static_cast<__int128>(li.iv.hi) - 1);
        }
        if (li.iv.singleton()) {
          if (ri.iv.lo == li.iv.lo)
            rreq.lo = clamp128(static_cast<__int128>(ri.iv.lo) + 1);
          if (ri.iv.hi == li.iv.lo)
            rreq.hi = clamp128(static_cast<__int128>(ri.iv.hi) - 1);
        }
        break;
      }
      default: break;
    }
    if (!assert_int(l, lreq)) return false;
    return assert_int(r, rreq);
  }

  bool assert_bool(const concolic::SymExprPtr& e, bool required) {
    switch (e->op) {
      case SymOp::BoolConst: return e->bool_val == required;
      case SymOp::Var: {
        VarDomain* d = doms.find(e->str_val);
        if (!d || d->type != lang::Type::Bool) return true;
        bool af = d->allow_false && !required;
        bool at = d->allow_true && required;
        if (af != d->allow_false || at != d->allow_true) {
          d->allow_false = af;
          d->allow_true = at;
          changed = true;
        }
        return af || at;
      }
      case SymOp::Not: return assert_bool(e->kids[0], !required);
      case SymOp::And: {
        if (required) {
          if (!assert_bool(e->kids[0], true)) return false;
          return assert_bool(e->kids[1], true);
        }
        BoolSet l = forward_bool(e->kids[0], doms), r = forward_bool(e->kids[1], doms);
        if (!l.may_false && !r.may_false) return false;
        if (!l.may_false) return assert_bool(e->kids[1], false);
        if (!r.may_false) return assert_bool(e->kids[0], false);
        return true;
      }
      case SymOp::Or: {
        if (!required) {
          if (!assert_bool(e->kids[0], false)) return false;
          return assert_bool(e->kids[1], false);
        }
        BoolSet l = forward_bool(e->kids[0], doms), r = forward_bool(e->kids[1], doms);
        if (!l.may_true && !r.may_true) return false;
        if (!l.may_true) return assert_bool(e->kids[1], true);
        if (!r.may_true) return assert_bool(e->kids[0], true);
        return true;
      }
      case SymOp::StrEq: {
        const SymExprPtr& a = e->kids[0];
        const SymExprPtr& b = e->kids[1];
        BoolSet now = forward_bool(e, doms);
        if (!now.admits(required)) return false;
        if (!required) return true;  // inequality: no useful narrowing
        auto pin_var = [&](const SymExprPtr& var, const std::string& c) {
          VarDomain* d = doms.find(var->str_val);
          if (!d || d->type != lang::Type::Str) return true;
          StrShape before = d->str;
          if (!d->str.pin(c)) return false;
          if (!(before == d->str)) changed = true;
          return true;
        };
        if (a->op == SymOp::StrConst && b->op == SymOp::StrConst)
          return a->str_val == b->str_val;
        if (a->op == SymOp::StrConst) return pin_var(b, a->str_val);
        if (b->op == SymOp::StrConst) return pin_var(a, b->str_val);
        // var == var: intersect shapes
        VarDomain* da = doms.find(a->str_val);
        VarDomain* db = doms.find(b->str_val);
        if (!da || !db) return true;
        StrShape& sa = da->str;
        StrShape& sb = db->str;
        StrShape na = sa, nb = sb;
        na.min_len = nb.min_len = std::max(sa.min_len, sb.min_len);
        na.max_len = nb.max_len = std::min(sa.max_len, sb.max_len);
        int common = std::min(na.max_len, nb.max_len);
        for (int i = 0; i < common; ++i) {
          IntInterval both = sa.pos[static_cast<size_t>(i)].intersect(
              sb.pos[static_cast<size_t>(i)]);
          na.pos[static_cast<size_t>(i)] = both;
          nb.pos[static_cast<size_t>(i)] = both;
        }
        if (!(na == sa)) {
          sa = na;
          changed = true;
        }
        if (!(nb == sb)) {
          sb = nb;
          changed = true;
        }
        return !sa.contradiction() && !sb.contradiction();
      }
      case SymOp::Eq: case SymOp::Ne: case SymOp::Lt:
      case SymOp::Le: case SymOp::Gt: case SymOp::Ge: {
        SymOp op = e->op;
        if (!required) {
          switch (op) {
            case SymOp::Eq: op = SymOp::Ne; break;
            case SymOp::Ne: op = SymOp::Eq; break;
            case SymOp::Lt: op = SymOp::Ge; break;
            case SymOp::Le: op = SymOp::Gt; break;
            case SymOp::Gt: op = SymOp::Le; break;
            case SymOp::Ge: op = SymOp::Lt; break;
            default: break;
          }
        }
        return assert_cmp(op, e->kids[0], e->kids[1]);
      }
      default:
        return true;
    }
  }
};

}  // namespace

bool propagate_into(const concolic::PathCondition& atoms, DomainStore& doms) {
  for (const auto& [name, d] : doms.items())
    if (d.contradiction()) return false;
  for (int round = 0; round < 100; ++round) {
    Narrower n{doms};
    for (const auto& atom : atoms) {
      BoolSet now = forward_bool(atom.expr, doms);
      if (!now.admits(atom.direction)) return false;
      if (!n.assert_bool(atom.expr, atom.direction)) return false;
    }
    for (const auto& [name, d] : doms.items())
      if (d.contradiction()) return false;
    if (!n.changed) break;
  }
  return true;
}

std::optional<DomainStore> propagate(const Query& query) {
  DomainStore doms = query.domains;
  if (!propagate_into(query.atoms, doms)) return std::nullopt;
  return doms;
}

}  // namespace llmc::solver
