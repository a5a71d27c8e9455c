#include <csignal>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <unordered_map>

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "tagcorrupt/corrupt.hpp"
#include "tagcorrupt/errors.hpp"

namespace tagcorrupt {

struct ExternalScorer::Process {
  pid_t pid = -1;
  FILE* to_child = nullptr;
  FILE* from_child = nullptr;
  std::unordered_map<std::string, double> cache;
};

ExternalScorer::ExternalScorer(const std::string& command) : proc_(std::make_unique<Process>()) {
  std::signal(SIGPIPE, SIG_IGN);
  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) throw IoError("cannot create scorer pipes");
  const pid_t pid = fork();
  if (pid < 0) throw IoError("cannot fork scorer process");
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  proc_->pid = pid;
  proc_->to_child = fdopen(in_pipe[1], "w");
  proc_->from_child = fdopen(out_pipe[0], "r");
  if (!proc_->to_child || !proc_->from_child) throw IoError("cannot open scorer streams");
}

ExternalScorer::~ExternalScorer() {
  if (!proc_) return;
  if (proc_->to_child) fclose(proc_->to_child);
  if (proc_->from_child) fclose(proc_->from_child);
  if (proc_->pid > 0) {
    int status = 0;
    waitpid(proc_->pid, &status, 0);
  }
}

double ExternalScorer::query(const std::string& source, ErrorTag tag, const std::string& target) {
  nlohmann::ordered_json j;
  j["source"] = source;
  j["tag"] = std::string(render_tag(tag));
  j["target"] = target;
  const std::string line = j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
  if (auto it = proc_->cache.find(line); it != proc_->cache.end()) return it->second;

  ++queries_;
  if (std::fputs(line.c_str(), proc_->to_child) < 0 || std::fputc('\n', proc_->to_child) == EOF ||
      std::fflush(proc_->to_child) != 0) {
    throw ScorerProtocolError("scorer process closed its input");
  }
  char* buf = nullptr;
  std::size_t cap = 0;
  const ssize_t got = getline(&buf, &cap, proc_->from_child);
  std::string reply = got > 0 ? std::string(buf, static_cast<std::size_t>(got)) : std::string();
  std::free(buf);
  if (got <= 0) throw ScorerProtocolError("scorer process ended without a reply");
  while (!reply.empty() && (reply.back() == '\n' || reply.back() == '\r' || reply.back() == ' ')) reply.pop_back();
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(reply.c_str(), &end);
  if (reply.empty() || end != reply.c_str() + reply.size() || errno == ERANGE) {
    throw ScorerProtocolError("non-numeric scorer reply: '" + reply + "'");
  }
  if (!std::isfinite(value) || value > 0) {
    throw ScorerProtocolError("scorer reply is not a finite log-probability: '" + reply + "'");
  }
  proc_->cache.emplace(line, value);
  return value;
}

double ExternalScorer::score_op(const SentenceContext& ctx, std::span<const EditOp> prior, const EditOp& next) {
  if (next.tag == ErrorTag::Self) return 0.0;
  const auto& src = ctx.source();
  const std::size_t start = prior.empty() ? 0 : prior.back().span_end;
  Tokens target(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(start));
  target.insert(target.end(), next.replacement.begin(), next.replacement.end());
  target.insert(target.end(), src.begin() + static_cast<std::ptrdiff_t>(next.span_end), src.end());
  return query(ctx.source_text(), next.tag, detokenize(target));
}

}  // namespace tagcorrupt
