#pragma once

// Closed-form integrals of nu_t and mu_t, ball and shell integrals, and the
// cube-restricted integral of nu_t (exact part plus Monte Carlo over balls that
// cross the cube boundary).

#include <cstdint>
#include <string>

#include "gridsing/fields.hpp"
#include "gridsing/montecarlo.hpp"
#include "gridsing/quadrature.hpp"

namespace gridsing {

struct NuIntegral {
    double value = 0.0;
    double ball_measure = 0.0;    ///< meas G_t
    double domain_measure = 0.0;  ///< meas Omega
    double radial = 0.0;          ///< int_0^1 sigma r^{n-1} dr
    double bound = 0.0;           ///< M_sigma meas Omega
    bool within_bound = false;
    std::string provenance;
};

/// sigma(1) meas(Omega \ G_t) + n I meas G_t. Propagates DivergentIntegral.
NuIntegral integral_nu_exact(const NuField& field, double tol = 1e-8);

/// kappa_n / (2t)^n * I for a node of X_t. Throws NodeNotInSet.
double integral_ball_exact(const NuField& field, const GridNode& y, double tol = 1e-8);

struct MuIntegral {
    double value = 0.0;
    double bound = 0.0;  ///< 2 M_sigma meas Omega
    bool within_bound = false;
    std::vector<double> terms;  ///< k^-2 * integral of nu_{m+k}
    std::string provenance;
};

MuIntegral integral_mu_exact(const MuField& field, double tol = 1e-8);

struct CubeIntegralOptions {
    std::size_t directions = 256;  ///< rays per straddling ball
    std::uint64_t seed = kDefaultSeed;
    double tol = 1e-8;
};

struct CubeIntegral {
    double exact_part = 0.0;      ///< constant level plus balls inside the cube
    MeasureEstimate mc_part;      ///< straddling balls
    double total = 0.0;
    double half_width = 0.0;
    double clipped_measure = 0.0;  ///< meas(Q cap Omega)
    std::size_t inside_balls = 0;
    std::size_t straddling_balls = 0;
    std::string provenance;
};

/// Integral of nu_t over Q cap Omega for an open axis-aligned box Q.
CubeIntegral integral_over_cube(const NuField& field, const Box& cube, const CubeIntegralOptions& opts = {});

struct ShellIntegral {
    double value = 0.0;
    double abs_error = 0.0;
    std::string provenance;
};

/// kappa_n / (2^n (m+1)^n) * int_eps^1 sigma_*(r) r^{n-1} dr, sigma_* = sigma F(sigma),
/// for a field of index t = m + 1.
ShellIntegral shell_integral(const NuField& field, const ProfileTransform& f, double eps, double tol = 1e-8);

}  // namespace gridsing
