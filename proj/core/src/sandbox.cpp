// Copyright 2026 The AutoSafe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "autosafe/sandbox.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/stat.h>
#include <sys/syscall.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "autosafe/embedded_assets.hpp"
#include "autosafe/llm.hpp"
#include "autosafe/python_source.hpp"

namespace autosafe {

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::kOk:
      return "Ok";
    case Classification::kCrash:
      return "Crash";
    case Classification::kTimeout:
      return "Timeout";
    case Classification::kSetupError:
      return "SetupError";
  }
  return "Crash";
}

std::optional<Classification> parse_classification(std::string_view text) {
  for (auto c : {Classification::kOk, Classification::kCrash, Classification::kTimeout,
                 Classification::kSetupError}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

namespace {

std::string py_literal(std::string_view text) {
  return nlohmann::json(std::string(text))
      .dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string candidate_with_imports(const CandidateCode& code, const TaskSpec& task) {
  auto slice = python::extract_function(code.source, task.entry_point);
  std::string out;
  if (task.setup_imports) {
    for (const auto& module : *task.setup_imports) out += "import " + module + "\n";
  }
  return out + slice.source;
}

class FdCloser {
 public:
  FdCloser() = default;
  FdCloser(const FdCloser&) = delete;
  FdCloser& operator=(const FdCloser&) = delete;
  ~FdCloser() {
    for (int fd : fds_) {
      if (fd >= 0) ::close(fd);
    }
  }
  int add(int fd) {
    fds_.push_back(fd);
    return fd;
  }
  void close(int& fd) {
    if (fd < 0) return;
    ::close(fd);
    std::replace(fds_.begin(), fds_.end(), fd, -1);
    fd = -1;
  }

 private:
  std::vector<int> fds_;
};

class WorkdirGuard {
 public:
  explicit WorkdirGuard(std::filesystem::path path) : path_(std::move(path)) {}
  WorkdirGuard(const WorkdirGuard&) = delete;
  WorkdirGuard& operator=(const WorkdirGuard&) = delete;
  ~WorkdirGuard() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

void set_nonblocking(int fd) {
  int flags = ::fcntl(fd, F_GETFL);
  ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

// Reads what is available without blocking. Returns false at EOF.
bool drain(int fd, std::string& buffer, std::size_t keep) {
  char chunk[4096];
  while (true) {
    ssize_t n = ::read(fd, chunk, sizeof chunk);
    if (n > 0) {
      buffer.append(chunk, static_cast<std::size_t>(n));
      if (buffer.size() > 2 * keep) buffer.erase(0, buffer.size() - keep);
      continue;
    }
    if (n == 0) return false;
    if (errno == EINTR) continue;
    return errno == EAGAIN || errno == EWOULDBLOCK;
  }
}

int open_pidfd(pid_t pid) {
#ifdef SYS_pidfd_open
  return static_cast<int>(::syscall(SYS_pidfd_open, pid, 0));
#else
  (void)pid;
  return -1;
#endif
}

std::vector<std::string> child_environment(const std::filesystem::path& workdir) {
  const char* host_path = std::getenv("PATH");
  const std::string dir = workdir.string();
  return {
      std::string("PATH=") + (host_path ? host_path : "/usr/local/bin:/usr/bin:/bin"),
      "LANG=C.UTF-8",
      "HOME=" + dir,
      "TMPDIR=" + dir,
      "PYTHONHASHSEED=0",
      "PYTHONDONTWRITEBYTECODE=1",
      "PYTHONIOENCODING=utf-8",
      "PYTHONUTF8=1",
  };
}

std::vector<char*> as_argv(std::vector<std::string>& strings) {
  std::vector<char*> out;
  out.reserve(strings.size() + 1);
  for (auto& s : strings) out.push_back(s.data());
  out.push_back(nullptr);
  return out;
}

}  // namespace

std::string render_harness(std::string_view candidate_source, std::string_view entry_point,
                           HarnessMode mode, std::string_view tests_source) {
  return render_template(assets::k_harness,
                         {{"candidate_source", py_literal(candidate_source)},
                          {"entry_point", py_literal(entry_point)},
                          {"mode", py_literal(mode == HarnessMode::kFuzz ? "fuzz" : "functional")},
                          {"tests_source", py_literal(tests_source)}});
}

ProgramBundle assemble_program(const CandidateCode& code, const TaskSpec& task) {
  ProgramBundle bundle;
  bundle.source =
      render_harness(candidate_with_imports(code, task), task.entry_point, HarnessMode::kFuzz);
  bundle.entry_point = task.entry_point;
  return bundle;
}

ProgramBundle assemble_functional_program(const CandidateCode& code, const TaskSpec& task) {
  if (!task.functional_tests) throw ContractViolation("task has no functional tests");
  ProgramBundle bundle;
  bundle.source = render_harness(candidate_with_imports(code, task), task.entry_point,
                                 HarnessMode::kFunctional, *task.functional_tests);
  bundle.entry_point = task.entry_point;
  return bundle;
}

std::optional<std::string> find_executable(const std::string& name) {
  if (name.empty()) return std::nullopt;
  auto usable = [](const std::filesystem::path& p) {
    struct stat st {};
    return ::stat(p.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(p.c_str(), X_OK) == 0;
  };
  if (name.find('/') != std::string::npos) {
    std::filesystem::path p = std::filesystem::absolute(name);
    if (usable(p)) return p.string();
    return std::nullopt;
  }
  const char* path_env = std::getenv("PATH");
  std::string_view dirs = path_env ? path_env : "/usr/local/bin:/usr/bin:/bin";
  while (true) {
    std::size_t colon = dirs.find(':');
    std::string_view dir = dirs.substr(0, colon);
    std::filesystem::path candidate =
        std::filesystem::absolute(std::filesystem::path(dir.empty() ? "." : std::string(dir)) / name);
    if (usable(candidate)) return candidate.string();
    if (colon == std::string_view::npos) break;
    dirs.remove_prefix(colon + 1);
  }
  return std::nullopt;
}

Classification classify_exit(int wait_status) {
  if (WIFEXITED(wait_status)) {
    switch (WEXITSTATUS(wait_status)) {
      case kExitOk:
        return Classification::kOk;
      case kExitSetup:
        return Classification::kSetupError;
      default:
        return Classification::kCrash;
    }
  }
  return Classification::kCrash;
}

std::string utf8_tail(std::string_view text, std::size_t limit) {
  if (text.size() <= limit) return std::string(text);
  std::size_t start = text.size() - limit;
  while (start < text.size() && (static_cast<unsigned char>(text[start]) & 0xC0) == 0x80) {
    ++start;
  }
  return std::string(text.substr(start));
}

Sandbox::Sandbox(SandboxConfig config) : config_(std::move(config)) {
  if (config_.interpreter_cmd.empty()) throw SpawnError("empty interpreter command");
  if (config_.timeout.count() <= 0) throw ContractViolation("timeout must be positive");
  auto path = find_executable(config_.interpreter_cmd.front());
  if (!path) throw SpawnError("interpreter not found: " + config_.interpreter_cmd.front());
  interpreter_path_ = *path;
}

ExecutionResult Sandbox::execute(const ProgramBundle& bundle, const InputTuple& input) const {
  return execute(bundle, input, config_.timeout);
}

ExecutionResult Sandbox::execute(const ProgramBundle& bundle, const InputTuple& input,
                                 std::chrono::milliseconds limit) const {
  ExecutionResult result = execute_raw(bundle, encode_args(input) + "\n", limit);
  result.input = input;
  return result;
}

ExecutionResult Sandbox::execute_raw(const ProgramBundle& bundle, std::string_view stdin_text,
                                     std::chrono::milliseconds limit) const {
  using Clock = std::chrono::steady_clock;
  if (limit.count() <= 0) throw ContractViolation("execution limit must be positive");

  std::vector<std::string> cmd =
      bundle.interpreter_cmd.empty() ? config_.interpreter_cmd : bundle.interpreter_cmd;
  std::string exe = interpreter_path_;
  if (!bundle.interpreter_cmd.empty() && bundle.interpreter_cmd != config_.interpreter_cmd) {
    auto found = find_executable(cmd.front());
    if (!found) throw SpawnError("interpreter not found: " + cmd.front());
    exe = *found;
  }

  std::filesystem::path root = !bundle.workdir.empty()       ? bundle.workdir
                               : !config_.work_root.empty() ? config_.work_root
                                                            : std::filesystem::temp_directory_path();
  std::string tmpl = (root / "autosafe-XXXXXX").string();
  if (::mkdtemp(tmpl.data()) == nullptr) {
    throw Error("cannot create working directory under " + root.string() + ": " +
                std::strerror(errno));
  }
  WorkdirGuard workdir(tmpl);
  {
    std::ofstream program(workdir.path() / "program.py", std::ios::binary);
    program << bundle.source;
    if (!program) throw Error("cannot write program into " + workdir.path().string());
  }

  std::vector<std::string> args = cmd;
  args.front() = exe;
  args.push_back("program.py");
  std::vector<std::string> env = child_environment(workdir.path());
  std::vector<char*> argv = as_argv(args);
  std::vector<char*> envp = as_argv(env);
  const std::string dir = workdir.path().string();

  FdCloser fds;
  int in_pair[2];
  int err_pipe[2];
  int exec_pipe[2];
  // A socket for stdin so writes after the child exits fail with EPIPE
  // instead of raising SIGPIPE in this process.
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, in_pair) != 0 ||
      ::pipe2(err_pipe, O_CLOEXEC) != 0 || ::pipe2(exec_pipe, O_CLOEXEC) != 0) {
    throw SpawnError(std::string("pipe: ") + std::strerror(errno));
  }
  int in_parent = fds.add(in_pair[0]);
  int in_child = fds.add(in_pair[1]);
  int err_read = fds.add(err_pipe[0]);
  int err_write = fds.add(err_pipe[1]);
  int exec_read = fds.add(exec_pipe[0]);
  int exec_write = fds.add(exec_pipe[1]);
  int devnull = fds.add(::open("/dev/null", O_RDWR | O_CLOEXEC));
  ::shutdown(in_parent, SHUT_RD);

  const auto start = Clock::now();
  const auto deadline = start + limit;
  pid_t pid = ::fork();
  if (pid < 0) throw SpawnError(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(in_child, 0);
    ::dup2(devnull, 1);
    ::dup2(err_write, 2);
    sigset_t all;
    sigemptyset(&all);
    ::sigprocmask(SIG_SETMASK, &all, nullptr);
    ::signal(SIGPIPE, SIG_DFL);
    int err = 0;
    if (::chdir(dir.c_str()) != 0) {
      err = errno;
    } else {
      if (config_.child_hook) config_.child_hook();
      ::execve(exe.c_str(), argv.data(), envp.data());
      err = errno;
    }
    ssize_t ignored = ::write(exec_write, &err, sizeof err);
    (void)ignored;
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  fds.close(in_child);
  fds.close(err_write);
  fds.close(exec_write);
  fds.close(devnull);

  ExecutionResult result;
  int exec_errno = 0;
  ssize_t got;
  do {
    got = ::read(exec_read, &exec_errno, sizeof exec_errno);
  } while (got < 0 && errno == EINTR);
  if (got == static_cast<ssize_t>(sizeof exec_errno)) {
    int status = 0;
    ::waitpid(pid, &status, 0);
    result.classification = Classification::kSetupError;
    result.stderr_tail = "cannot start interpreter " + exe + ": " + std::strerror(exec_errno);
    result.duration = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
    return result;
  }

  set_nonblocking(in_parent);
  set_nonblocking(err_read);
  int pidfd = open_pidfd(pid);
  if (pidfd >= 0) fds.add(pidfd);

  std::string err_buf;
  std::size_t written = 0;
  bool timed_out = false;
  bool reaped = false;
  int status = 0;
  if (stdin_text.empty()) fds.close(in_parent);

  while (true) {
    if (::waitpid(pid, &status, WNOHANG) == pid) {
      reaped = true;
      break;
    }
    auto now = Clock::now();
    if (now >= deadline) {
      timed_out = true;
      break;
    }
    auto remaining = std::chrono::ceil<std::chrono::milliseconds>(deadline - now).count();
    int wait_ms = static_cast<int>(std::min<long long>(remaining, pidfd >= 0 ? 1000 : 10));

    pollfd pfds[3];
    nfds_t n = 0;
    int in_slot = -1, err_slot = -1;
    if (in_parent >= 0) {
      in_slot = static_cast<int>(n);
      pfds[n++] = {in_parent, POLLOUT, 0};
    }
    if (err_read >= 0) {
      err_slot = static_cast<int>(n);
      pfds[n++] = {err_read, POLLIN, 0};
    }
    if (pidfd >= 0) pfds[n++] = {pidfd, POLLIN, 0};
    int ready = ::poll(pfds, n, wait_ms);
    if (ready < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (in_slot >= 0 && pfds[in_slot].revents != 0) {
      ssize_t w = ::send(in_parent, stdin_text.data() + written, stdin_text.size() - written,
                         MSG_NOSIGNAL | MSG_DONTWAIT);
      if (w > 0) written += static_cast<std::size_t>(w);
      if (written == stdin_text.size() || (w < 0 && errno != EAGAIN && errno != EINTR)) {
        fds.close(in_parent);
      }
    }
    if (err_slot >= 0 && pfds[err_slot].revents != 0) {
      if (!drain(err_read, err_buf, kStderrTailLimit)) fds.close(err_read);
    }
  }

  // Take down the whole group either way: grandchildren must not outlive
  // the execution.
  ::kill(-pid, SIGKILL);
  if (!reaped) {
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
  }
  if (err_read >= 0) drain(err_read, err_buf, kStderrTailLimit);
  result.duration = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
  result.stderr_tail = utf8_tail(err_buf, kStderrTailLimit);
  if (timed_out) {
    result.classification = Classification::kTimeout;
    return result;
  }
  result.classification = classify_exit(status);
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.exit_code = -WTERMSIG(status);
  }
  return result;
}

}  // namespace autosafe
