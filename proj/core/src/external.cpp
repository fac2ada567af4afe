#include <cerrno>
#include <cstring>
#include <csignal>
#include <fcntl.h>
#include <sys/wait.h>
#include <thread>
#include <unistd.h>

#include "benchpress/io.hpp"
#include "benchpress/learners.hpp"

namespace benchpress::learn {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

StopToken StopToken::after(std::chrono::duration<double> timeout) {
  return StopToken(Clock::now() + std::chrono::duration_cast<Clock::duration>(timeout));
}

bool StopToken::stop_requested() const {
  if (flag_ && flag_->load(std::memory_order_relaxed)) return true;
  return deadline_ && Clock::now() >= *deadline_;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::TimedOut: return "timed_out";
    case Status::Failed: return "failed";
  }
  return "failed";
}

Status status_from_string(const std::string& s) {
  if (s == "ok") return Status::Ok;
  if (s == "timed_out") return Status::TimedOut;
  if (s == "failed") return Status::Failed;
  throw ParseError("unknown status '" + s + "'");
}

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_timeout(std::optional<double> timeout) {
  if (timeout && !(*timeout > 0.0)) throw InvalidArgument("timeout must be positive");
}

}  // namespace

LearnerResult with_timeout(std::optional<double> timeout, const std::function<LearnerOutput(const StopToken&)>& thunk) {
  check_timeout(timeout);
  const auto start = Clock::now();
  const StopToken stop = timeout ? StopToken::after(std::chrono::duration<double>(*timeout)) : StopToken();
  LearnerResult res;
  try {
    LearnerOutput out = thunk(stop);
    res.estimate = std::move(out.estimate);
    res.ntests = out.ntests;
    res.status = Status::Ok;
  } catch (const Cancelled&) {
    res.status = Status::TimedOut;
    res.diagnostic = "time limit of " + io::format_number(*timeout) + " s exceeded";
  } catch (const std::exception& e) {
    res.status = Status::Failed;
    res.diagnostic = e.what();
  }
  res.wall_time = seconds_since(start);
  return res;
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  out += '\'';
  return out;
}

std::string tail_of(const fs::path& log, std::size_t max_chars) {
  std::string text;
  try {
    text = io::read_file(log);
  } catch (const Error&) {
    return {};
  }
  while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) text.pop_back();
  if (text.size() > max_chars) text = "..." + text.substr(text.size() - max_chars);
  return text;
}

std::string trimmed_contents(const fs::path& path) {
  std::string s = io::read_file(path);
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

LearnerResult failed(std::string diagnostic, double wall) {
  LearnerResult r;
  r.status = Status::Failed;
  r.diagnostic = std::move(diagnostic);
  r.wall_time = wall;
  return r;
}

}  // namespace

std::string expand_command(const ExternalSpec& spec, const fs::path& data, const fs::path& adjmat, const fs::path& time,
                           const fs::path& ntests, std::uint64_t replicate) {
  const std::string& t = spec.command;
  std::string out;
  std::size_t pos = 0;
  while (pos < t.size()) {
    const std::size_t open = t.find('{', pos);
    if (open == std::string::npos) {
      out.append(t, pos, std::string::npos);
      break;
    }
    out.append(t, pos, open - pos);
    const std::size_t close = t.find('}', open);
    if (close == std::string::npos) throw InvalidArgument("unterminated placeholder in command: " + t);
    const std::string name = t.substr(open + 1, close - open - 1);
    if (name == "data")
      out += shell_quote(data.string());
    else if (name == "adjmat")
      out += shell_quote(adjmat.string());
    else if (name == "time")
      out += shell_quote(time.string());
    else if (name == "ntests")
      out += shell_quote(ntests.string());
    else if (name == "replicate")
      out += std::to_string(replicate);
    else if (auto it = spec.params.find(name); it != spec.params.end())
      out += it->second;
    else
      throw InvalidArgument("unknown placeholder {" + name + "} in command");
    pos = close + 1;
  }
  return out;
}

LearnerResult run_external(const ExternalSpec& spec, const fs::path& data_path, const fs::path& work_dir,
                           std::uint64_t replicate) {
  check_timeout(spec.timeout);
  const auto start = Clock::now();
  std::error_code ec;
  fs::create_directories(work_dir, ec);
  const fs::path dir = fs::absolute(work_dir);
  const fs::path adjmat = dir / "adjmat.csv", time = dir / "time.txt", ntests = dir / "ntests.txt",
                 log = dir / "plugin.log";
  for (const auto& f : {adjmat, time, ntests}) fs::remove(f, ec);

  std::string command;
  try {
    command = expand_command(spec, fs::absolute(data_path), adjmat, time, ntests, replicate);
  } catch (const Error& e) {
    return failed(e.what(), 0.0);
  }

  // Everything the child touches is prepared before fork.
  const std::string dir_s = dir.string(), log_s = log.string();
  const pid_t pid = ::fork();
  if (pid < 0) return failed(std::string("fork failed: ") + std::strerror(errno), 0.0);
  if (pid == 0) {
    ::setpgid(0, 0);
    if (::chdir(dir_s.c_str()) != 0) ::_exit(126);
    const int fd = ::open(log_s.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd >= 0) {
      ::dup2(fd, STDOUT_FILENO);
      ::dup2(fd, STDERR_FILENO);
      ::close(fd);
    }
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);

  const auto deadline = spec.timeout ? std::optional(start + std::chrono::duration_cast<Clock::duration>(
                                                                 std::chrono::duration<double>(*spec.timeout)))
                                     : std::nullopt;
  int wstatus = 0;
  while (true) {
    const pid_t r = ::waitpid(pid, &wstatus, WNOHANG);
    if (r == pid) break;
    if (r < 0 && errno != EINTR) return failed(std::string("waitpid failed: ") + std::strerror(errno), seconds_since(start));
    if (deadline && Clock::now() >= *deadline) {
      ::kill(-pid, SIGKILL);
      ::waitpid(pid, &wstatus, 0);
      LearnerResult res;
      res.status = Status::TimedOut;
      res.wall_time = seconds_since(start);
      res.diagnostic = "time limit of " + io::format_number(*spec.timeout) + " s exceeded; plugin killed";
      return res;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  const double wall = seconds_since(start);

  if (!WIFEXITED(wstatus) || WEXITSTATUS(wstatus) != 0) {
    std::string why = WIFEXITED(wstatus) ? "plugin exited with status " + std::to_string(WEXITSTATUS(wstatus))
                                         : "plugin killed by signal " + std::to_string(WTERMSIG(wstatus));
    const std::string tail = tail_of(log, 400);
    if (!tail.empty()) why += ": " + tail;
    return failed(why, wall);
  }

  for (const auto& f : {adjmat, time, ntests})
    if (!fs::exists(f)) return failed("plugin did not write " + f.string(), wall);

  LearnerResult res;
  res.wall_time = wall;
  try {
    res.estimate = io::read_adjmat(adjmat);
  } catch (const Error& e) {
    return failed(e.what(), wall);
  }
  const std::string time_text = trimmed_contents(time);
  const auto t = io::parse_number(time_text);
  if (!t || *t < 0) return failed(time.string() + ": expected a nonnegative number, found '" + time_text + "'", wall);
  res.wall_time = *t;

  const std::string n_text = trimmed_contents(ntests);
  if (n_text != "None") {
    const auto n = io::parse_number(n_text);
    if (!n || *n < 0 || *n != static_cast<double>(static_cast<std::int64_t>(*n)))
      return failed(ntests.string() + ": expected a count or None, found '" + n_text + "'", wall);
    res.ntests = static_cast<std::int64_t>(*n);
  }
  res.status = Status::Ok;
  return res;
}

}  // namespace benchpress::learn
