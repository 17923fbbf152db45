#include <cstdio>
#include <string>

#include "eacomm/classical.hpp"

using namespace eacomm;

int main(int argc, char** argv) {
    const std::string task = argc > 1 ? argv[1] : "T";
    GameFunctional functional = functional_S();
    if (task == "R") functional = functional_RAC(2, 4);
    else if (task == "T") functional = functional_RAC(3, 2);
    else if (task != "S") {
        std::fprintf(stderr, "usage: %s [R|S|T]\n", argv[0]);
        return 1;
    }
    std::printf("classical bounds for task %s (%d inputs, %d questions, %d outcomes)\n",
                task.c_str(), functional.scenario.nX, functional.scenario.nY,
                functional.scenario.nB);
    std::printf("%3s %12s %10s %12s\n", "d", "bound", "side", "strategies");
    for (int d = 1; d <= 6; ++d) {
        try {
            const BoundResult r = max_classical_value(functional, d, EnumerationSide::Auto, 2e7);
            std::printf("%3d %12.8f %10s %12llu\n", d, r.value, r.enumeratedSide.c_str(),
                        static_cast<unsigned long long>(r.count));
        } catch (const BudgetError&) {
            std::printf("%3d %12s %10s %12s\n", d, "-", "skipped", "over budget");
        }
    }
    return 0;
}
