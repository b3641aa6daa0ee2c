#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rqm/bones.hpp"

namespace rqm {

struct AcceptanceOptions {
    int workers = 1;
    /// Worker count of the repeat run compared byte for byte in criterion 8.
    int repeat_workers = 4;
    Window window;
    int grid = 200;
    /// When non-empty, the artifacts of criteria 4 to 7 are written here.
    std::string artifact_dir;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

/// "PASS 4 transversality: ... (1.2 s)".
std::string format_result(const CriterionResult& r);

/// Runs criteria 1 to 8 in order, reporting each result as soon as it is known.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// Real parameters c with z^2 + c superattracting of exact period n, by sampling and bisection.
std::vector<double> superstable_polynomial_parameters(int n, int samples = 200000);

}  // namespace rqm
