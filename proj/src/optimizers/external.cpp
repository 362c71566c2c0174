#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <mutex>
#include <sstream>
#include <string>

#include <fmt/core.h>

#include "gbench/error.hpp"
#include "gbench/optimizers.hpp"

namespace gbench {

namespace {

constexpr int kLineTimeoutMs = 60'000;
constexpr int kReapGraceMs = 2'000;

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

std::string real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}

struct ProtocolFailure {
  std::string reason;
};

class Child {
 public:
  explicit Child(const std::string& command) {
    int to_child[2], from_child[2];
    if (::pipe(to_child) != 0) {
      throw Error(ErrorKind::Io, fmt::format("pipe: {}", std::strerror(errno)));
    }
    if (::pipe(from_child) != 0) {
      ::close(to_child[0]);
      ::close(to_child[1]);
      throw Error(ErrorKind::Io, fmt::format("pipe: {}", std::strerror(errno)));
    }
    pid_ = ::fork();
    if (pid_ < 0) {
      for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) ::close(fd);
      throw Error(ErrorKind::Io, fmt::format("fork: {}", std::strerror(errno)));
    }
    if (pid_ == 0) {
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) ::close(fd);
      ::signal(SIGPIPE, SIG_DFL);
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    in_ = to_child[1];
    out_ = from_child[0];
  }

  Child(const Child&) = delete;
  Child& operator=(const Child&) = delete;

  ~Child() {
    close_input();
    if (out_ >= 0) ::close(out_);
    if (pid_ > 0 && !reaped_) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, nullptr, 0);
    }
  }

  void send(const std::string& line) {
    std::string data = line + "\n";
    std::size_t off = 0;
    while (off < data.size()) {
      const ssize_t n = ::write(in_, data.data() + off, data.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw ProtocolFailure{fmt::format("write to method failed: {}", std::strerror(errno))};
      }
      off += static_cast<std::size_t>(n);
    }
  }

  /// Next line without the terminator; nullopt at end of stream.
  std::optional<std::string> read_line() {
    for (;;) {
      if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      if (eof_) {
        if (buffer_.empty()) return std::nullopt;
        std::string line;
        line.swap(buffer_);
        return line;
      }
      pollfd p{out_, POLLIN, 0};
      const int ready = ::poll(&p, 1, kLineTimeoutMs);
      if (ready < 0) {
        if (errno == EINTR) continue;
        throw ProtocolFailure{fmt::format("poll failed: {}", std::strerror(errno))};
      }
      if (ready == 0) {
        throw ProtocolFailure{fmt::format("no reply within {} ms", kLineTimeoutMs)};
      }
      char chunk[4096];
      const ssize_t n = ::read(out_, chunk, sizeof chunk);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw ProtocolFailure{fmt::format("read failed: {}", std::strerror(errno))};
      }
      if (n == 0) {
        eof_ = true;
      } else {
        buffer_.append(chunk, static_cast<std::size_t>(n));
      }
    }
  }

  void close_input() {
    if (in_ >= 0) {
      ::close(in_);
      in_ = -1;
    }
  }

  /// Waits briefly for exit, kills otherwise. Returns the raw wait status.
  int reap() {
    close_input();
    int status = 0;
    for (int waited = 0; waited < kReapGraceMs; waited += 10) {
      const pid_t r = ::waitpid(pid_, &status, WNOHANG);
      if (r == pid_) {
        reaped_ = true;
        return status;
      }
      ::usleep(10'000);
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, &status, 0);
    reaped_ = true;
    return status;
  }

 private:
  pid_t pid_ = -1;
  int in_ = -1;
  int out_ = -1;
  std::string buffer_;
  bool eof_ = false;
  bool reaped_ = false;
};

std::vector<double> parse_point(std::string_view rest, std::size_t dimension) {
  std::vector<double> x;
  x.reserve(dimension);
  std::istringstream in{std::string(rest)};
  std::string token;
  while (in >> token) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(v)) {
      throw ProtocolFailure{fmt::format("bad coordinate '{}'", token)};
    }
    x.push_back(v);
  }
  if (x.size() != dimension) {
    throw ProtocolFailure{fmt::format("ASK carries {} coordinates, expected {}", x.size(), dimension)};
  }
  return x;
}

}  // namespace

RunTrace external_run(const std::string& command, const Problem& problem, std::uint64_t budget,
                      std::uint64_t seed, const std::string& method_id) {
  ignore_sigpipe();
  Stopwatch clock;
  Objective obj(problem, budget);
  std::string failure;

  {
    Child child(command);
    try {
      std::string init = fmt::format("INIT {} {} {}", problem.dimension(), budget, seed);
      for (double v : problem.lower()) init += " " + real(v);
      for (double v : problem.upper()) init += " " + real(v);
      child.send(init);

      bool stopped = false;
      bool done = false;
      while (!done) {
        auto line = child.read_line();
        if (!line) {
          if (!stopped) {
            throw ProtocolFailure{fmt::format("method exited after {} of {} evaluations without DONE",
                                              obj.used(), budget)};
          }
          break;
        }
        const std::string_view text(*line);
        if (text == "DONE") {
          done = true;
        } else if (text == "ASK" || text.starts_with("ASK ")) {
          if (stopped) {
            throw ProtocolFailure{fmt::format("overdraw: evaluation {} requested beyond budget {}",
                                              budget + 1, budget)};
          }
          const auto x = parse_point(text.substr(3), problem.dimension());
          const double f = obj(x);
          child.send("TELL " + real(f));
          if (obj.exhausted()) {
            child.send("STOP");
            stopped = true;
          }
        } else if (text.empty()) {
          continue;
        } else {
          throw ProtocolFailure{fmt::format("unexpected line '{}'", text.substr(0, 80))};
        }
      }
      const int status = child.reap();
      if (WIFSIGNALED(status)) {
        failure = fmt::format("method killed by signal {}", WTERMSIG(status));
      } else if (WIFEXITED(status) && WEXITSTATUS(status) != 0) {
        failure = fmt::format("method exited with status {}", WEXITSTATUS(status));
      }
    } catch (const ProtocolFailure& e) {
      failure = e.reason;
    }
  }

  RunTrace trace = obj.trace(method_id, seed, clock.seconds());
  if (!failure.empty()) {
    trace.failed = true;
    trace.failure = failure;
  }
  return trace;
}

}  // namespace gbench
