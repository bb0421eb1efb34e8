#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace plateforge {

// One line of the acceptance suite.
struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    double seconds = 0.0;
    double limit_seconds = 0.0;
    std::string detail;
};

// One property check of the element/assembly invariants.
struct PropertyResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<PropertyResult> run_property_suites(std::uint64_t seed = 7);

// Solid3D (linear thickness mode) against Plate2D sectional stiffness on random sections.
PropertyResult plane_stress_equivalence(int n_sections = 100, std::uint64_t seed = 11);

// Criteria 1..14 in order. A criterion passes when its checks pass and it finishes
// within its time limit. on_result is called as soon as a criterion completes.
std::vector<CriterionResult> run_acceptance(int threads = 1,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_criterion(const CriterionResult& r);

}  // namespace plateforge
