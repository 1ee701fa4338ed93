#include "gtf/target.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>

#include "gtf/error.hpp"

namespace gtf {

uint32_t toy_probe_slot(uint32_t probe_id, size_t map_size) {
    uint64_t z = (probe_id + 0x9e3779b97f4a7c15ULL) * 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 31;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 29;
    return static_cast<uint32_t>(z & (map_size - 1));
}

// ---------------------------------------------------------------------------
// In-process toy target
// ---------------------------------------------------------------------------

struct ToyTargetAdapter::Sink : ProbeSink {
    CoverageMap* map;
    std::vector<uint32_t>* touched;
    void hit(uint32_t probe_id) override {
        uint32_t slot = toy_probe_slot(probe_id, map->size());
        if ((*map)[slot] == 0) touched->push_back(slot);
        map->hit(slot);
    }
};

ToyTargetAdapter::ToyTargetAdapter(size_t map_size) : map_(map_size) {}

StatementResult ToyTargetAdapter::run_statement(const std::string& statement) {
    // Per-statement map: zero only what the previous statement touched.
    for (uint32_t slot : touched_) map_.data()[slot] = 0;
    touched_.clear();

    Sink sink;
    sink.map = &map_;
    sink.touched = &touched_;
    ToyOutcome out = db_.execute(statement, sink);

    StatementResult res;
    res.status = out.status;
    res.crashed = out.crashed;
    res.asserted = out.assert_failed;
    if (out.crashed || out.assert_failed) res.crash_detail = out.bug_name;
    res.snapshot.reserve(touched_.size());
    for (uint32_t slot : touched_) res.snapshot.emplace_back(slot, map_[slot]);
    return res;
}

void ToyTargetAdapter::end_sequence() { db_.reset(); }

// ---------------------------------------------------------------------------
// External protocol target
// ---------------------------------------------------------------------------

PipeTargetAdapter::PipeTargetAdapter(std::vector<std::string> argv, std::string map_path,
                                     size_t map_size, int timeout_ms)
    : argv_(std::move(argv)),
      map_path_(std::move(map_path)),
      map_size_(map_size),
      timeout_ms_(timeout_ms),
      last_map_(map_size) {
    if (argv_.empty()) throw ConfigError("target command is empty");
    spawn();
}

PipeTargetAdapter::~PipeTargetAdapter() { kill_child(); }

void PipeTargetAdapter::spawn() {
    kill_child();
    int in_pipe[2], out_pipe[2];
    if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0)
        throw ProtocolError("pipe() failed spawning target");
    pid_t pid = fork();
    if (pid < 0) throw ProtocolError("fork() failed spawning target");
    if (pid == 0) {
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        close(in_pipe[0]);
        close(in_pipe[1]);
        close(out_pipe[0]);
        close(out_pipe[1]);
        setenv("GTF_MAP_PATH", map_path_.c_str(), 1);
        setenv("GTF_MAP_SIZE", std::to_string(map_size_).c_str(), 1);
        std::vector<char*> cargv;
        for (auto& a : argv_) cargv.push_back(a.data());
        cargv.push_back(nullptr);
        execvp(cargv[0], cargv.data());
        _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
    child_pid_ = pid;
    buffer_.clear();
}

void PipeTargetAdapter::kill_child() {
    if (child_pid_ > 0) {
        kill(child_pid_, SIGKILL);
        int status = 0;
        waitpid(child_pid_, &status, 0);
        child_pid_ = -1;
    }
    if (to_child_ >= 0) close(to_child_);
    if (from_child_ >= 0) close(from_child_);
    to_child_ = from_child_ = -1;
}

std::string PipeTargetAdapter::read_status_line() {
    auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms_);
    for (;;) {
        size_t nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return line;
        }
        auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                             deadline - std::chrono::steady_clock::now())
                             .count();
        if (remaining <= 0)
            throw TargetUnresponsiveError("target did not answer within " +
                                          std::to_string(timeout_ms_) + " ms");
        struct pollfd pfd{from_child_, POLLIN, 0};
        int rv = poll(&pfd, 1, static_cast<int>(remaining));
        if (rv < 0) throw ProtocolError("poll() failed reading target status");
        if (rv == 0)
            throw TargetUnresponsiveError("target did not answer within " +
                                          std::to_string(timeout_ms_) + " ms");
        char chunk[4096];
        ssize_t n = read(from_child_, chunk, sizeof(chunk));
        if (n < 0) throw ProtocolError("read() failed reading target status");
        if (n == 0) return "";  // EOF: child exited before the status line
        buffer_.append(chunk, static_cast<size_t>(n));
    }
}

StatementResult PipeTargetAdapter::run_statement(const std::string& statement) {
    if (child_pid_ < 0) spawn();
    std::string line = statement;
    line.push_back('\n');
    ssize_t written = write(to_child_, line.data(), line.size());
    if (written != static_cast<ssize_t>(line.size())) {
        // Broken pipe: the child died between statements; treat as crash.
    }

    StatementResult res;
    std::string status = read_status_line();
    if (status.empty()) {
        int wstatus = 0;
        waitpid(child_pid_, &wstatus, 0);
        child_pid_ = -1;
        if (WIFSIGNALED(wstatus)) {
            int sig = WTERMSIG(wstatus);
            res.asserted = sig == SIGABRT;
            res.crashed = !res.asserted;
            res.crash_detail = strsignal(sig) ? strsignal(sig) : std::to_string(sig);
        } else {
            res.crashed = true;
            res.crash_detail = "exit " + std::to_string(WEXITSTATUS(wstatus));
        }
    } else if (status == "OK") {
        res.status = ExecStatus::Ok;
    } else if (status == "SEM_ERR") {
        res.status = ExecStatus::SemanticError;
    } else if (status == "SYN_ERR") {
        res.status = ExecStatus::SyntaxError;
    } else {
        throw ProtocolError("unexpected status line from target: " + status);
    }

    last_map_ = read_map_file(map_path_, map_size_);
    const uint8_t* bytes = last_map_.data();
    for (size_t i = 0; i < last_map_.size(); ++i)
        if (bytes[i] != 0) res.snapshot.emplace_back(static_cast<uint32_t>(i), bytes[i]);
    return res;
}

void PipeTargetAdapter::end_sequence() {
    if (child_pid_ < 0) {
        spawn();
        return;
    }
    const char end[] = ";;END\n";
    ssize_t n = write(to_child_, end, sizeof(end) - 1);
    if (n != static_cast<ssize_t>(sizeof(end) - 1)) spawn();
}

// ---------------------------------------------------------------------------

std::vector<ExecOutcome> execute_sequence(TargetAdapter& target,
                                          const std::vector<std::string>& statements,
                                          VirginMap& virgin) {
    std::vector<ExecOutcome> outcomes;
    outcomes.reserve(statements.size());
    for (const auto& stmt : statements) {
        StatementResult res = target.run_statement(stmt);
        ExecOutcome out;
        out.status = res.status;
        out.crashed = res.crashed;
        out.asserted = res.asserted;
        out.crash_detail = std::move(res.crash_detail);
        out.snapshot = std::move(res.snapshot);
        out.new_coverage = virgin.fold_sparse(out.snapshot);
        bool stop = out.crashed || out.asserted;
        outcomes.push_back(std::move(out));
        if (stop) break;  // at most one crash per sequence; skip the rest
    }
    target.end_sequence();
    return outcomes;
}

}  // namespace gtf
