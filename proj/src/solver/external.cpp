#include "llmc/solver/external.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <vector>

#include "llmc/solver/smtlib.hpp"
#include "llmc/solver/solve.hpp"
#include "llmc/util/sexpr.hpp"

namespace llmc::solver {

namespace {

using util::Sexp;

void harvest_define_funs(const Sexp& s, SmtModel& m) {
  if (!s.kids.empty() && s.kids[0].atom == "define-fun" && s.kids.size() >= 5) {
    const std::string& name = s.kids[1].atom;
    const Sexp& value = s.kids[4];
    if (value.is_atom() && (value.atom == "true" || value.atom == "false")) {
      m.bools[name] = value.atom == "true";
      return;
    }
    auto v = util::sexp_int(value);
    if (v) m.ints[name] = *v;
    return;
  }
  for (const auto& k : s.kids) harvest_define_funs(k, m);
}

}  // namespace

SmtModel parse_model(const std::string& text) {
  SmtModel m;
  util::SexpReader r(text);
  Sexp s;
  while (r.read(s)) harvest_define_funs(s, m);
  return m;
}

std::optional<concolic::ConcreteInput> assemble_model(
    const SmtModel& m, const DomainStore& domains,
    const std::vector<std::string>& vars) {
  concolic::ConcreteInput out;
  for (const auto& name : vars) {
    const VarDomain* d = domains.find(name);
    if (!d) return std::nullopt;
    switch (d->type) {
      case lang::Type::Int: {
        auto it = m.ints.find(name);
        if (it == m.ints.end()) return std::nullopt;
        out[name] = it->second;
        break;
      }
      case lang::Type::Bool: {
        auto it = m.bools.find(name);
        if (it == m.bools.end()) return std::nullopt;
        out[name] = it->second;
        break;
      }
      case lang::Type::Str: {
        auto lit = m.ints.find(name + "_len");
        if (lit == m.ints.end()) return std::nullopt;
        int64_t len = lit->second;
        if (len < 0 || len > d->str.max_len) return std::nullopt;
        std::string s;
        for (int64_t i = 0; i < len; ++i) {
          auto cit = m.ints.find(name + "_" + std::to_string(i));
          if (cit == m.ints.end()) return std::nullopt;
          if (cit->second < 0 || cit->second > 255) return std::nullopt;
          s.push_back(static_cast<char>(cit->second));
        }
        out[name] = std::move(s);
        break;
      }
    }
  }
  return out;
}

ExternalResult solve_external(const Query& query, const std::string& command,
                              int64_t wallclock_ms) {
  ExternalResult result;
  result.verdict = {SolveStatus::Unknown, {}, UnknownReason::Unsupported};

  std::string script = to_smtlib(query);

  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0) {
    result.process_error = true;
    return result;
  }
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    result.process_error = true;
    return result;
  }

  pid_t pid = fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
    result.process_error = true;
    return result;
  }
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }

  close(in_pipe[0]);
  close(out_pipe[1]);

  // The child may die before reading everything; a SIGPIPE here must not
  // kill the engine.
  struct sigaction ignore {};
  ignore.sa_handler = SIG_IGN;
  struct sigaction saved {};
  sigaction(SIGPIPE, &ignore, &saved);

  size_t written = 0;
  while (written < script.size()) {
    ssize_t n = write(in_pipe[1], script.data() + written, script.size() - written);
    if (n <= 0) break;
    written += static_cast<size_t>(n);
  }
  close(in_pipe[1]);

  auto deadline =
      std::chrono::steady_clock::now() + std::chrono::milliseconds(wallclock_ms);
  std::string output;
  bool timed_out = false;
  char buf[4096];
  for (;;) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                    deadline - std::chrono::steady_clock::now())
                    .count();
    if (left <= 0) {
      timed_out = true;
      break;
    }
    struct pollfd p {out_pipe[0], POLLIN, 0};
    int pr = poll(&p, 1, static_cast<int>(left));
    if (pr == 0) {
      timed_out = true;
      break;
    }
    if (pr < 0) break;
    ssize_t n = read(out_pipe[0], buf, sizeof buf);
    if (n <= 0) break;
    output.append(buf, static_cast<size_t>(n));
  }
  close(out_pipe[0]);

  if (timed_out) kill(pid, SIGKILL);
  int status = 0;
  waitpid(pid, &status, 0);
  sigaction(SIGPIPE, &saved, nullptr);

  result.raw_output = output;
  if (timed_out) {
    result.verdict = {SolveStatus::Unknown, {}, UnknownReason::Wallclock};
    return result;
  }
  if (WIFEXITED(status) && WEXITSTATUS(status) == 127) {
    result.process_error = true;
    return result;
  }

  // First non-empty line decides the verdict.
  size_t pos = output.find_first_not_of(" \t\r\n");
  if (pos == std::string::npos) {
    result.process_error = true;
    return result;
  }
  size_t eol = output.find('\n', pos);
  std::string head = output.substr(pos, eol == std::string::npos ? std::string::npos
                                                                 : eol - pos);
  while (!head.empty() && (head.back() == '\r' || head.back() == ' ')) head.pop_back();

  if (head == "unsat") {
    result.verdict = {SolveStatus::Unsat, {}, {}};
    return result;
  }
  if (head == "unknown") {
    result.verdict = {SolveStatus::Unknown, {}, UnknownReason::Unsupported};
    return result;
  }
  if (head != "sat") {
    result.process_error = true;
    return result;
  }

  SmtModel model = parse_model(eol == std::string::npos ? "" : output.substr(eol));
  auto input = assemble_model(model, query.domains, free_vars(query));
  if (!input || !check_model(query, *input)) {
    // Never trust an external model that fails verification.
    result.verdict = {SolveStatus::Unknown, {}, UnknownReason::Unsupported};
    return result;
  }
  result.verdict = {SolveStatus::Sat, std::move(*input), {}};
  return result;
}

}  // namespace llmc::solver
