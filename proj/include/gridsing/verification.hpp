#pragma once

// Executable witnesses and statistical probes: the constructive local
// unboundedness witness, exhaustion by shrunk ball unions, pointwise
// unboundedness of nu_{m+t}, majorant search, and non-integrability ladders.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridsing/fields.hpp"
#include "gridsing/integrals.hpp"
#include "gridsing/montecarlo.hpp"

namespace gridsing {

struct WitnessReport {
    double target_C = 0.0;
    RationalVec center;           ///< z
    Rational rho0;                ///< radius of G
    GridIndex l = 0;
    GridNode node;                ///< y in X_{m+l}
    double delta = 0.0;
    double threshold = 0.0;       ///< (C + 1) l^2
    double region_radius = 0.0;   ///< delta / (2(m+l))
    double core_radius = 0.0;     ///< excluded around y
    double sampled_min = 0.0;     ///< min of mu_l over the samples of G'
    std::uint64_t samples = 0;
    std::uint64_t failures = 0;
    bool verified = false;
};

struct WitnessOptions {
    std::uint64_t samples = 10000;
    std::uint64_t seed = kDefaultSeed;
    std::size_t delta_samples = 64;     ///< log-spaced checks of sigma on (0, delta)
    double delta_span = 1e12;           ///< checks cover (delta / span, delta)
    std::size_t probe_floor = 200;      ///< delta is searched down to 2^-probe_floor
    std::size_t refine_steps = 40;      ///< geometric bisection steps after bracketing
};

/// Runs the constructive witness for the ball G = B(z, rho0) and level C.
/// Throws InvalidArgument when G is not inside the domain, ContainmentFailure
/// when the grid cube misses G, DeltaNotFound when sigma never exceeds
/// (C + 1) l^2 down to the probe floor.
WitnessReport witness_unboundedness(const FieldFamily& family, std::span<const Rational> z, const Rational& rho0,
                                    double C, const WitnessOptions& opts = {});

struct ExhaustionReport {
    std::uint64_t k = 1;
    double alpha = 0.0;
    double region_measure = 0.0;
    double bound = 0.0;   ///< alpha k^-n meas(region)
    double slack = 0.02;
    GridIndex t_first = 1;
    std::vector<MeasureEstimate> estimates;  ///< meas(region cap B_t^(k)), t = t_first..t_max
    std::vector<double> exact;               ///< meas of the ball union, for reference
    std::optional<GridIndex> satisfied_from;  ///< first t from which every estimate - CI >= bound (1 - slack)
};

/// Monte Carlo estimates of meas(region cap B_t^(k)) where B_t^(k) is the union
/// of balls of radius 1/(2(m+t)k) around X_{m+t}.
ExhaustionReport exhaustion_estimate(const FieldFamily& family, std::uint64_t k, const Domain& region,
                                     GridIndex t_max, std::uint64_t samples, std::uint64_t seed = kDefaultSeed,
                                     double slack = 0.02, GridIndex t_first = 1);

struct ResidualReport {
    std::uint64_t k = 1;
    std::vector<MeasureEstimate> table;  ///< residual after t = 1..t_max
    double exact_first = 0.0;            ///< meas Omega - meas B_1^(k)
    bool monotone = true;                ///< per-sample coverage never lost
    MeasureEstimate final() const { return table.empty() ? MeasureEstimate{} : table.back(); }
};

/// meas(Omega \ union_{t <= t_max} B_t^(k)) with the decay table.
ResidualReport exhaustion_residual(const FieldFamily& family, std::uint64_t k, GridIndex t_max,
                                   std::uint64_t samples, std::uint64_t seed = kDefaultSeed);

struct ProbeTable {
    GridIndex T = 0;
    std::vector<double> ladder;
    std::uint64_t samples = 0;
    /// fractions[t-1][r]: share of points with max_{s <= t} nu_{m+s}(x) > ladder[r].
    std::vector<std::vector<double>> fractions;
    bool monotone = true;
};

ProbeTable pointwise_unboundedness_probe(const FieldFamily& family, std::uint64_t samples, GridIndex T,
                                         const std::vector<double>& ladder, std::uint64_t seed = kDefaultSeed);

using Majorant = std::function<double(std::span<const double>)>;

struct MajorantViolation {
    GridIndex t = 0;
    std::vector<double> x;
    double field = 0.0;
    double candidate = 0.0;
};

struct MajorantReport {
    std::string candidate;
    GridIndex T = 0;
    std::uint64_t samples = 0;
    std::vector<double> density;  ///< per t: share of points with nu_{m+t} > psi
    std::optional<GridIndex> first_violation;
    std::vector<MajorantViolation> examples;  ///< capped
};

MajorantReport majorant_nonexistence_report(const FieldFamily& family, const Majorant& psi, std::string name,
                                            std::uint64_t samples, GridIndex T, std::uint64_t seed = kDefaultSeed);

/// Pointwise maximum of nu_{m+1}, ..., nu_{m+T0}.
Majorant max_of_fields(const FieldFamily& family, GridIndex T0);

struct SampledInequality {
    std::string name;
    std::uint64_t samples = 0;
    std::uint64_t violations = 0;
    /// Least sampled L = ln(1/rho) from which every deeper sample holds
    /// (rho < e^-L); empty when the deepest sample fails.
    std::optional<double> holds_from_L;
};

struct LadderRow {
    int j = 0;
    double eps = 0.0;
    double value = 0.0;
    double increment = 0.0;  ///< value minus previous row (0 for the first)
};

struct NonIntegrabilityReport {
    std::string transform;
    double lambda = 1.0;
    std::vector<LadderRow> ladder;
    QuadratureVerdict verdict = QuadratureVerdict::Inconclusive;  ///< int_0^1 sigma_* r^{n-1}
    bool strictly_increasing = false;
    std::uint64_t chain_samples = 0;
    std::uint64_t chain_violations = 0;  ///< points where (lambda-1) ln mu >= mu^{lambda-1}
    std::vector<SampledInequality> inequalities;  ///< loglog profile with LogPower only
};

enum class TransformKind { LogPower, Power };

/// For the loglog profile and F = [ln(e - 1 + s)]^lambda, samples
/// rho in (0, e^-e) log-log-uniformly and checks
///   F(sigma) > (ln 1/(4 rho))^lambda,
///   ln 1/(4 rho) > (1 - 2/e) ln 1/rho,
///   (ln ln 1/rho)^2 < (4/lambda^2) (ln 1/rho)^lambda,
///   sigma F(sigma) rho^{n-1} > (lambda^2/rho) (1 - 2/e)^lambda (ln 1/rho)^-1.
std::vector<SampledInequality> loglog_transform_inequalities(std::size_t n, double lambda,
                                                             std::uint64_t samples = 2000);

/// Shell integrals of sigma F(sigma) along eps = 2^-j for F = [ln(e - 1 + s)]^lambda
/// (LogPower) or F = s^{lambda - 1} (Power), plus for lambda > 1 the sampled
/// chain (lambda - 1) ln mu < mu^{lambda - 1} on mu_{chain_t}.
NonIntegrabilityReport non_Llambda_witness(const FieldFamily& family, double lambda, TransformKind kind,
                                           const std::vector<int>& ladder_j, std::uint64_t chain_samples = 1000,
                                           GridIndex chain_t = 5, std::uint64_t seed = kDefaultSeed);

}  // namespace gridsing
