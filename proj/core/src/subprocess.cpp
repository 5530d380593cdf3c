#include "regrepair/subprocess.hpp"

#include "regrepair/errors.hpp"

extern "C" {
#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>
}

#include <cerrno>
#include <cstring>

namespace regrepair {

RunResult run_shell(const std::string& command,
                    const std::filesystem::path& cwd,
                    std::chrono::milliseconds timeout) {
    int pipe_fds[2];
    if (::pipe(pipe_fds) != 0) raise(Errc::IoFailure, "pipe: " + std::string(std::strerror(errno)));

    pid_t pid = ::fork();
    if (pid < 0) {
        ::close(pipe_fds[0]);
        ::close(pipe_fds[1]);
        raise(Errc::IoFailure, "fork: " + std::string(std::strerror(errno)));
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        ::close(pipe_fds[0]);
        ::dup2(pipe_fds[1], STDOUT_FILENO);
        ::dup2(pipe_fds[1], STDERR_FILENO);
        ::close(pipe_fds[1]);
        if (!cwd.empty() && ::chdir(cwd.c_str()) != 0) _exit(127);
        ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }

    ::close(pipe_fds[1]);
    RunResult result;
    auto deadline = std::chrono::steady_clock::now() + timeout;
    char buffer[4096];
    bool open = true;
    while (open) {
        auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
            deadline - std::chrono::steady_clock::now());
        if (remaining.count() <= 0) {
            result.timed_out = true;
            ::kill(-pid, SIGKILL);
            break;
        }
        struct pollfd pfd{pipe_fds[0], POLLIN, 0};
        int rc = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
        if (rc < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (rc == 0) continue;  // re-check deadline
        ssize_t n = ::read(pipe_fds[0], buffer, sizeof buffer);
        if (n > 0)
            result.output.append(buffer, static_cast<std::size_t>(n));
        else
            open = false;
    }
    // Drain whatever remains after a kill so the child can exit.
    if (result.timed_out) {
        ssize_t n;
        while ((n = ::read(pipe_fds[0], buffer, sizeof buffer)) > 0)
            result.output.append(buffer, static_cast<std::size_t>(n));
    }
    ::close(pipe_fds[0]);

    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
        result.signaled = true;
        result.signal_no = WTERMSIG(status);
        result.exit_code = 128 + result.signal_no;
    }
    return result;
}

}  // namespace regrepair
