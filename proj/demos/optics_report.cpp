#include <cstdio>

#include "eacomm/optics.hpp"

using namespace eacomm;

int main() {
    std::printf("wave-plate settings against the analytic protocols\n");
    std::printf("%5s %4s %12s %10s %6s %s\n", "table", "row", "distance", "threshold", "pass",
                "note");
    for (const SettingsCheck& check : verify_settings_tables())
        std::printf("%5d %4d %12.3e %10.0e %6s %s\n", check.table, check.row, check.distance,
                    check.threshold, check.pass ? "yes" : "NO", check.note.c_str());

    std::printf("\nscore under Gaussian wave-plate angle jitter (200 samples per point)\n");
    std::printf("%6s %14s %14s %12s\n", "task", "sigma (deg)", "mean score", "std");
    for (char task : {'S', 'T'}) {
        for (double sigma : {0.0, 0.25, 0.5, 1.0, 2.0}) {
            const NoiseReport r = monte_carlo_angle_noise(task, sigma, 200, 7);
            std::printf("%6c %14.2f %14.6f %12.6f\n", task, sigma, r.mean, r.stddev);
        }
    }
    return 0;
}
