#pragma once

// One-dimensional quadrature for radial integrals int_eps^1 sigma(r) r^{n-1} dr
// with a singular endpoint at 0: dyadic panels [2^-j-1, 2^-j], each integrated
// by an adaptive 16-point Gauss-Legendre rule checked against its two halves.

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "gridsing/sigma.hpp"

namespace gridsing {

enum class QuadratureVerdict { Converged, Divergent, Inconclusive };
const char* to_string(QuadratureVerdict v);

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    QuadratureVerdict verdict = QuadratureVerdict::Inconclusive;
    std::size_t panels = 0;
    /// Partial sums after each dyadic panel, outermost panel first.
    std::vector<double> partial_sums;
};

struct QuadratureOptions {
    double tol = 1e-8;                    ///< relative
    std::size_t panel_limit = 1000;       ///< deepest dyadic panel for eps = 0
    std::size_t divergence_levels = 10;   ///< consecutive slower-than-harmonic panels
    std::size_t geometric_levels = 3;     ///< consecutive contracting panels before the tail is trusted
    double geometric_ratio = 0.75;
    std::size_t max_bisections = 48;
};

/// Fixed-order Gauss-Legendre rule on [-1, 1].
class GaussLegendre {
  public:
    static constexpr std::size_t kOrder = 16;
    static const GaussLegendre& instance();

    const std::array<double, kOrder>& nodes() const { return nodes_; }
    const std::array<double, kOrder>& weights() const { return weights_; }

    double integrate(const std::function<double(double)>& f, double a, double b) const;

  private:
    GaussLegendre();
    std::array<double, kOrder> nodes_{};
    std::array<double, kOrder> weights_{};
};

struct IntervalEstimate {
    double value = 0.0;
    double abs_error = 0.0;
    bool converged = true;
};

/// Adaptive Gauss-Legendre on [a, b] to the given absolute tolerance.
IntervalEstimate integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                    std::size_t max_bisections = 48);

/// The radial integrand sigma(r) r^{n-1}, evaluated in log space.
double radial_integrand(const SigmaProfile& profile, std::size_t n, double rho);

/// int_lower^1 sigma(r) r^{n-1} dr. For lower = 0 the verdict is
/// Converged (geometric tail below tol), Divergent (panels decaying no faster
/// than harmonically over divergence_levels consecutive panels) or
/// Inconclusive. Throws InconclusiveTolerance only via radial_integral().
QuadratureResult radial_quadrature(const SigmaProfile& profile, std::size_t n, double lower,
                                   const QuadratureOptions& opts = {});

/// int_a^b sigma(r) r^{n-1} dr for 0 < a < b, breakpoints respected.
IntervalEstimate radial_segment(const SigmaProfile& profile, std::size_t n, double a, double b, double rel_tol = 1e-10);

struct RadialIntegral {
    double value = 0.0;
    double abs_error = 0.0;
    std::string provenance;
};

/// int_0^1 sigma(r) r^{n-1} dr: closed form when the profile has one, otherwise
/// radial_quadrature. Throws DivergentIntegral / InconclusiveTolerance.
RadialIntegral radial_integral(const SigmaProfile& profile, std::size_t n, double tol = 1e-8);

}  // namespace gridsing
