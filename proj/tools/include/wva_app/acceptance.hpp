#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wva_app/config.hpp"

namespace wva::app {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

std::string format_result(const CriterionResult& r);

// Runs every acceptance criterion; on_result is called as each one finishes.
std::vector<CriterionResult> run_acceptance(const ScenarioConfig& config,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace wva::app
