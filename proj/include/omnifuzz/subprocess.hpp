// Copyright 2026 The Omnifuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <map>
#include <string>
#include <vector>

extern char** environ;

namespace omnifuzz {

struct CommandResult {
  int exit_code = -1;     // meaningful when term_signal == 0
  int term_signal = 0;    // nonzero if the direct child died by signal
  bool timed_out = false;
  bool spawn_failed = false;
  std::string spawn_error;
  std::string out;
  std::string err;
  std::int64_t duration_ms = 0;

  bool exited() const { return !spawn_failed && term_signal == 0; }

  // dash does not exec-optimize `sh -c "cmd"`, so a signaled grandchild
  // surfaces as shell exit 128+N. Fold that back into a signal number.
  int effective_signal() const {
    if (term_signal != 0) return term_signal;
    if (exit_code > 128 && exit_code <= 192) return exit_code - 128;
    return 0;
  }
};

namespace detail {

inline void append_capped(std::string& dst, const char* buf, ssize_t n, std::size_t cap) {
  if (dst.size() >= cap) return;
  std::size_t room = cap - dst.size();
  dst.append(buf, static_cast<std::size_t>(n) < room ? static_cast<std::size_t>(n) : room);
}

}  // namespace detail

// Run `shell_cmd` via /bin/sh -c in its own process group, capturing stdout
// and stderr (capped), killing the whole group when the timeout expires.
// `extra_env` is overlaid on the inherited environment.
inline CommandResult run_command(const std::string& shell_cmd,
                                 const std::map<std::string, std::string>& extra_env,
                                 std::chrono::milliseconds timeout,
                                 std::size_t capture_cap = 64 * 1024) {
  using clock = std::chrono::steady_clock;
  CommandResult res;

  int out_pipe[2] = {-1, -1};
  int err_pipe[2] = {-1, -1};
  if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0) {
    res.spawn_failed = true;
    res.spawn_error = std::string("pipe: ") + std::strerror(errno);
    return res;
  }

  // Build the environment before forking; setenv after fork is not safe.
  std::vector<std::string> env_strings;
  for (char** e = environ; *e != nullptr; ++e) {
    const char* eq = std::strchr(*e, '=');
    if (eq == nullptr) continue;
    std::string key(*e, static_cast<std::size_t>(eq - *e));
    if (extra_env.count(key) == 0) env_strings.emplace_back(*e);
  }
  for (const auto& [k, v] : extra_env) env_strings.push_back(k + "=" + v);
  std::vector<char*> envp;
  envp.reserve(env_strings.size() + 1);
  for (auto& s : env_strings) envp.push_back(s.data());
  envp.push_back(nullptr);

  const auto start = clock::now();
  pid_t pid = fork();
  if (pid < 0) {
    res.spawn_failed = true;
    res.spawn_error = std::string("fork: ") + std::strerror(errno);
    for (int fd : {out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) close(fd);
    return res;
  }

  if (pid == 0) {
    setpgid(0, 0);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    for (int fd : {out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) close(fd);
    const char* argv[] = {"sh", "-c", shell_cmd.c_str(), nullptr};
    execve("/bin/sh", const_cast<char**>(argv), envp.data());
    _exit(127);
  }

  setpgid(pid, pid);  // both sides set it to close the race
  close(out_pipe[1]);
  close(err_pipe[1]);

  const auto deadline = start + timeout;
  bool killed = false;
  std::array<pollfd, 2> fds = {{{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}}};
  std::array<bool, 2> open_fd = {true, true};
  char buf[4096];

  while (open_fd[0] || open_fd[1]) {
    auto now = clock::now();
    int wait_ms;
    if (!killed) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
      wait_ms = left > 0 ? static_cast<int>(left) : 0;
    } else {
      wait_ms = 500;  // post-kill drain grace
    }
    for (int i = 0; i < 2; ++i) fds[i].events = open_fd[i] ? POLLIN : 0;
    int rc = poll(fds.data(), fds.size(), wait_ms);
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (rc == 0) {
      if (killed) break;  // grace expired; stop draining
      res.timed_out = true;
      killed = true;
      kill(-pid, SIGKILL);
      kill(pid, SIGKILL);
      continue;
    }
    for (int i = 0; i < 2; ++i) {
      if (!open_fd[i] || (fds[i].revents & (POLLIN | POLLHUP | POLLERR)) == 0) continue;
      ssize_t n = read(fds[i].fd, buf, sizeof buf);
      if (n > 0) {
        detail::append_capped(i == 0 ? res.out : res.err, buf, n, capture_cap);
      } else if (n == 0 || (n < 0 && errno != EINTR && errno != EAGAIN)) {
        close(fds[i].fd);
        open_fd[i] = false;
      }
    }
  }
  for (int i = 0; i < 2; ++i)
    if (open_fd[i]) close(fds[i].fd);

  // EOF on both pipes does not imply exit; keep enforcing the deadline while
  // reaping (a child may close its streams and then hang).
  int status = 0;
  while (true) {
    pid_t reaped = waitpid(pid, &status, killed ? 0 : WNOHANG);
    if (reaped == pid) break;
    if (reaped < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (clock::now() >= deadline) {
      res.timed_out = true;
      killed = true;
      kill(-pid, SIGKILL);
      kill(pid, SIGKILL);
      continue;
    }
    struct timespec ts = {0, 2 * 1000 * 1000};
    nanosleep(&ts, nullptr);
  }
  // Sweep any stragglers the command left in its process group.
  kill(-pid, SIGKILL);

  res.duration_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - start).count();
  if (WIFEXITED(status)) {
    res.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    res.term_signal = WTERMSIG(status);
  }
  return res;
}

// Replace every `{input}` in a command template. Callers validate at config
// load that the placeholder occurs exactly once.
inline std::string substitute_input(const std::string& tmpl, const std::string& path) {
  std::string out;
  out.reserve(tmpl.size() + path.size());
  std::size_t pos = 0;
  static const std::string kPlaceholder = "{input}";
  while (true) {
    std::size_t hit = tmpl.find(kPlaceholder, pos);
    if (hit == std::string::npos) {
      out.append(tmpl, pos, std::string::npos);
      return out;
    }
    out.append(tmpl, pos, hit - pos);
    out.append(path);
    pos = hit + kPlaceholder.size();
  }
}

}  // namespace omnifuzz
