#include <cstdio>

#include "eacomm/classical.hpp"
#include "eacomm/protocols.hpp"

using namespace eacomm;

int main() {
    struct Row {
        const char* name;
        GameFunctional functional;
        EAQProtocol protocol;
        double threshold;
    };
    const Row rows[] = {
        {"R", functional_RAC(2, 4), protocol_R(), 5.0 / 8.0},
        {"S", functional_S(), protocol_S(), 5.0},
        {"T", functional_RAC(3, 2), protocol_T(), 5.0 / 6.0},
    };
    std::printf("%-4s %12s %12s %12s %14s\n", "task", "quantum", "1-bit bound", "2-bit bound",
                "crit. visibility");
    for (const Row& row : rows) {
        const double quantum = evaluate(row.functional, behavior_from_protocol(row.protocol));
        const double oneBit = max_classical_value(row.functional, 2).value;
        const double twoBit = max_classical_value(row.functional, 4).value;
        const double vis = critical_visibility(row.protocol, row.functional, row.threshold);
        std::printf("%-4s %12.6f %12.6f %12.6f %14.6f\n", row.name, quantum, oneBit, twoBit, vis);
    }
    std::printf("\ncritical visibility is taken at the two-bit classical bound of each task\n");
    return 0;
}
