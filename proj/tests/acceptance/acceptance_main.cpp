#include <iostream>

#include "wva_app/acceptance.hpp"
#include "wva_app/config.hpp"

int main() {
    const wva::app::ScenarioConfig config;
    int failed = 0;
    wva::app::run_acceptance(config, [&](const wva::app::CriterionResult& r) {
        std::cout << wva::app::format_result(r) << " (" << r.seconds << " s)" << std::endl;
        if (!r.pass) ++failed;
    });
    std::cout << (failed == 0 ? "all 13 criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
    return failed == 0 ? 0 : 1;
}
