#ifndef DERHAM_ACCEPTANCE_HPP
#define DERHAM_ACCEPTANCE_HPP

// End-to-end acceptance suite: ten checks driven by the golden file
// data/golden/acceptance.json and the documents in data/examples.

#include "derham/io.hpp"
#include "derham/quadrature.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace derham {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;  ///< what was measured, or expected vs actual on failure
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::filesystem::path data_dir;
    std::uint64_t seed = 0;
    QuadratureSpec quadrature;
};

/// Runs every item in order; a failing or throwing item never stops the others.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

io::Json acceptance_to_json(const std::vector<CriterionResult>& results);

}  // namespace derham

#endif
