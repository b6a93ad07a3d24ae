#pragma once

// Integrand families f_s(x, xi) built from a weight nu and a sequence psi_s,
// sampled checks of convexity and two-sided growth bounds, the bound check on
// psi_s over cubes, and the search for points where psi_s outgrows nu.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridsing/fields.hpp"
#include "gridsing/integrals.hpp"
#include "gridsing/sigma.hpp"

namespace gridsing {

enum class IntegrandForm { FieldPower, Custom };

using WeightFn = std::function<double(std::span<const double>)>;
using SequenceFn = std::function<double(std::uint64_t, std::span<const double>)>;
using CustomIntegrand = std::function<double(std::uint64_t, std::span<const double>, std::span<const double>)>;

struct IntegrandFamily {
    IntegrandForm form = IntegrandForm::FieldPower;
    double p = 2.0;
    double c1 = 1.0;
    double c2 = 2.0;
    WeightFn nu;
    SequenceFn psi;
    CustomIntegrand custom;         ///< used when form == Custom
    Domain region;                    ///< where x is sampled
    std::optional<FieldFamily> grid;  ///< psi_s = nu_{m+s} of this family, enables node-biased sampling
    std::string nu_description;

    void validate() const;
};

/// f_s = nu|xi|^p + nu^{(p-1)/p} psi_s^{1/p} |xi|^{p-1}, nu = mu_{nu_t0},
/// psi_s = nu_{m+s}.
IntegrandFamily field_integrand_family(const FieldFamily& family, GridIndex nu_t0, double p);

/// Throws OutsideDomain when x is outside the domain.
double eval_f(const IntegrandFamily& family, std::uint64_t s, std::span<const double> x, std::span<const double> xi);

struct ConditionCheck {
    std::string status;  ///< "consistent", "violated", "by construction"
    std::uint64_t samples = 0;
    std::uint64_t violations = 0;
    std::string detail;
};

struct AConditionsReport {
    ConditionCheck measurability;
    ConditionCheck convexity;
    ConditionCheck lower_bound;
    ConditionCheck upper_bound;
    double c1 = 1.0, c2 = 2.0;
    bool passed() const { return convexity.violations == 0 && lower_bound.violations == 0 && upper_bound.violations == 0; }
};

struct SampleOptions {
    std::uint64_t s_first = 1;
    std::uint64_t s_last = 40;
    std::uint64_t x_samples = 10000;
    double xi_min = 1e-3;   ///< |xi| drawn log-uniformly in [xi_min, xi_max]
    double xi_max = 1e3;
    std::uint64_t seed = 0xA11CE;
};

AConditionsReport check_a_conditions(const IntegrandFamily& family, const SampleOptions& opts = {});

struct CubeSeries {
    Box cube;
    double clipped_measure = 0.0;
    double bound = 0.0;  ///< M_sigma meas(Q cap Omega) (1 + slack)
    std::vector<double> values;  ///< integral of psi_s over Q cap Omega, s in the window
    std::vector<double> half_widths;
    double max_value = 0.0;
    bool passed = false;
};

struct BConditionsReport {
    ConditionCheck nonnegative;   ///< psi_s >= 1 from sigma >= 1 on [0,1]
    ConditionCheck integrable;    ///< closed-form L1 norms within M_sigma meas Omega
    double m_sigma = 0.0;
    double slack = 0.05;
    std::uint64_t s_first = 0, s_last = 0;
    std::vector<CubeSeries> cubes;
    bool passed() const;
};

/// psi_s = nu_{m+s}, b = M_sigma. Cube integrals are taken for s in
/// (s_max / 2, s_max].
BConditionsReport check_b_conditions(const FieldFamily& family, const std::vector<Box>& cubes, std::uint64_t s_max,
                                     double slack = 0.05, const CubeIntegralOptions& opts = {});

struct SandwichHit {
    std::uint64_t s = 0;
    std::vector<double> x;
    double ratio = 0.0;  ///< psi_s(x) / nu(x)
};

struct SandwichProbe {
    double lambda = 0.0;
    double derived_bound = 0.0;  ///< (4 lambda)^p
    std::vector<SandwichHit> hits;  ///< capped
    std::uint64_t hit_count = 0;
    std::optional<std::uint64_t> first_s;
    std::string note;
};

/// Searches (s, x) for psi_s(x) > (4 lambda)^p nu(x). Node-biased mode draws
/// x near a random node of X_{m+s} at log-uniform distance.
std::vector<SandwichProbe> sandwich_violation(const IntegrandFamily& family, const std::vector<double>& lambdas,
                                              const SampleOptions& opts, bool node_biased = true);

}  // namespace gridsing
