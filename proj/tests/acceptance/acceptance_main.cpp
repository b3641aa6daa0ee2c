#include <cstdio>
#include <cstdlib>
#include <string>

#include "rqm/acceptance.hpp"

int main(int argc, char** argv)
{
    rqm::AcceptanceOptions opts;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string key = argv[i];
        if (key == "--workers")
            opts.workers = std::atoi(argv[i + 1]);
        else if (key == "--repeat-workers")
            opts.repeat_workers = std::atoi(argv[i + 1]);
        else if (key == "--grid")
            opts.grid = std::atoi(argv[i + 1]);
        else if (key == "--artifacts")
            opts.artifact_dir = argv[i + 1];
        else {
            std::fprintf(stderr, "usage: acceptance [--workers N] [--repeat-workers N] [--grid N] [--artifacts DIR]\n");
            return 2;
        }
    }
    int failed = 0;
    rqm::run_acceptance(opts, [&](const rqm::CriterionResult& r) {
        std::printf("%s\n", rqm::format_result(r).c_str());
        std::fflush(stdout);
        if (!r.pass) ++failed;
    });
    std::printf("%s: %d of 8 criteria failed\n", failed ? "FAIL" : "PASS", failed);
    return failed ? 1 : 0;
}
