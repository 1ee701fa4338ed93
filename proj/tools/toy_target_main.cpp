// Standalone toy target speaking the fuzzer wire protocol: statements arrive
// on stdin one per line, `;;END` closes a sequence, a status line answers each
// statement on stdout, and the coverage map is rewritten to $GTF_MAP_PATH
// after every statement. Planted bugs raise real signals here.

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "gtf/coverage.hpp"
#include "gtf/target.hpp"
#include "gtf/toy_db.hpp"

namespace {

struct MapSink : gtf::ProbeSink {
    gtf::CoverageMap* map;
    void hit(uint32_t probe_id) override {
        map->hit(gtf::toy_probe_slot(probe_id, map->size()));
    }
};

}  // namespace

int main() {
    const char* map_path = std::getenv("GTF_MAP_PATH");
    if (!map_path || !*map_path) {
        std::fprintf(stderr, "GTF_MAP_PATH is not set\n");
        return 2;
    }
    size_t map_size = gtf::kDefaultMapSize;
    if (const char* sz = std::getenv("GTF_MAP_SIZE")) map_size = std::strtoull(sz, nullptr, 10);

    gtf::ToyDatabase db;
    gtf::CoverageMap map(map_size);
    MapSink sink;
    sink.map = &map;

    std::string line;
    while (std::getline(std::cin, line)) {
        if (line == ";;END") {
            db.reset();
            continue;
        }
        map.clear();
        gtf::ToyOutcome out = db.execute(line, sink);
        gtf::write_map_file(map_path, map);
        if (out.crashed || out.assert_failed) {
            // No status line: the harness sees the exit as the crash signal.
            std::fflush(stdout);
            std::signal(out.assert_failed ? SIGABRT : SIGSEGV, SIG_DFL);
            std::raise(out.assert_failed ? SIGABRT : SIGSEGV);
        }
        const char* status = out.status == gtf::ExecStatus::Ok ? "OK"
                             : out.status == gtf::ExecStatus::SemanticError ? "SEM_ERR"
                                                                            : "SYN_ERR";
        std::fprintf(stdout, "%s\n", status);
        std::fflush(stdout);
    }
    return 0;
}
