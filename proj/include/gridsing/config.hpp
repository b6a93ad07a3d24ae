#pragma once

// Run configuration: flat "key = value" text grouped into [sections].

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "gridsing/domain.hpp"
#include "gridsing/grid.hpp"
#include "gridsing/rng.hpp"

namespace gridsing {

struct RunConfig {
    // [run]
    std::string domain;  ///< path; empty means the unit cube of dimension n
    std::string sigma = "sigma1";
    std::size_t n = 2;
    // [ranges]
    GridIndex t_max = 50;       ///< horizon shared by the t-indexed checks
    std::uint64_t s_max = 40;
    // [sampling]
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t samples = 1000000;     ///< Monte Carlo measure/integral estimates
    std::uint64_t point_samples = 10000; ///< pointwise probes
    // [tolerances]
    double quadrature_tol = 1e-8;
    double exhaustion_slack = 0.02;
    double cube_slack = 0.05;
    std::optional<double> m_sigma_override;
    // [output]
    std::string output_dir = "out";
    bool stamp = true;

    /// Throws InvalidArgument on non-positive tolerances or sizes.
    void validate() const;

    std::string to_text() const;
    static RunConfig parse(std::string_view text);
    static RunConfig load(const std::string& path);

    /// Loads the domain file, or the unit cube when none is set.
    Domain load_domain() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

}  // namespace gridsing
