#include "torsimax/acceptance.hpp"

#include <cstdio>
#include <cstring>

int main(int argc, char** argv) {
    torsimax::AcceptanceOptions opt;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--fast") == 0) opt.fast = true;
    std::setvbuf(stdout, nullptr, _IONBF, 0);
    std::puts(torsimax::kConstantNote);
    int failed = 0;
    torsimax::run_acceptance(opt, [&](const torsimax::CriterionResult& r) {
        std::puts(r.line().c_str());
        failed += r.pass ? 0 : 1;
    });
    std::printf("%d of 14 criteria passed\n", 14 - failed);
    return failed == 0 ? 0 : 1;
}
