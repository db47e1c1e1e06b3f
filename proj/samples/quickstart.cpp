// Optimizes the four operators for a few states and prints which
// separability classes each state rules out.

#include "bell4/bell4.hpp"

#include <cmath>
#include <cstdio>

int main() {
    using namespace bell4;

    OptimizeConfig cfg;
    cfg.restarts = 16;

    const PureState ghz3 = PureState::normalize({1, 0, 0, 0, 0, 0, 0, 1});
    const struct {
        const char* name;
        DensityMatrix rho;
    } states[] = {
        {"|0000>", pure_to_density(PureState::basis("0000"))},
        {"GHZ4", pure_to_density(generalized_ghz(std::numbers::pi / 4))},
        {"gGHZ(0.1)", pure_to_density(generalized_ghz(0.1))},
        {"singlet x |00>", pure_to_density(schmidt_pair(std::numbers::pi / 4).tensor(PureState::basis("00")))},
        {"|0> x GHZ3", pure_to_density(PureState::basis("0").tensor(ghz3))},
    };

    for (const auto& s : states) {
        const auto report = classify(s.rho, cfg);
        std::printf("%-16s |D1..D4| = %.4f %.4f %.4f %.4f  omega = %.4f\n", s.name, report.violations[0],
                    report.violations[1], report.violations[2], report.violations[3], report.omega_max);
        std::printf("%-16s excluded:", "");
        for (const auto& c : report.excluded) std::printf(" %s", c.id().c_str());
        std::printf("%s\n", report.excluded.empty() ? " none" : "");
    }
}
