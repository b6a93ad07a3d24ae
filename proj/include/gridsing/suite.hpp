#pragma once

// The acceptance suite: twelve checks run in order, none short-circuiting.

#include <string>
#include <vector>

#include "gridsing/config.hpp"
#include "gridsing/report.hpp"

namespace gridsing {

enum class Status { Pass, Fail, Skipped };
const char* to_string(Status s);

struct CriterionResult {
    int id = 0;
    std::string name;
    std::string anchor;
    Status status = Status::Fail;
    bool evidence = false;  ///< statistical rather than exact
    std::vector<std::string> warnings;
    Json details;
    double seconds = 0.0;  ///< wall time, never written to reports

    bool ok() const { return status != Status::Fail; }
};

inline constexpr int kCriteria = 12;

/// Runs one of criteria 1..11 (12 needs two full passes; see verify_all).
CriterionResult run_criterion(int id, const RunConfig& config);

struct SuiteResult {
    std::vector<CriterionResult> criteria;
    Json report;
    bool passed() const;
};

/// All twelve criteria. The determinism check reruns 1..11 and compares the
/// serialised results byte for byte.
SuiteResult verify_all(const RunConfig& config);

Json to_json(const CriterionResult& r);

}  // namespace gridsing
