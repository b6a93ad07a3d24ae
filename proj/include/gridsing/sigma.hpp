#pragma once

// Singularity profiles sigma: [0, inf) -> (0, inf), the constant M_sigma, and
// sampled evidence for membership in the profile class (continuity, sigma >= 1
// on [0,1], blow-up at 0+, convergent radial integral).

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gridsing/expr.hpp"

namespace gridsing {

class SigmaProfile {
  public:
    /// Implementation hook for profile families. `log_value_at_log(L)` is
    /// log sigma(e^-L); builtins override it so that depths far below the
    /// smallest double stay representable.
    class Impl {
      public:
        virtual ~Impl() = default;
        virtual double value(double rho) const = 0;
        virtual double log_value(double rho) const;
        virtual double log_value_at_log(double log_inv_rho) const;
        /// log(sigma(e^-L) e^{-nL}) without forming n L when it cancels.
        virtual double log_radial_at_log(double log_inv_rho, std::size_t n) const;
        /// Closed form of int_0^eps sigma(r) r^{n-1} dr, +inf when divergent.
        virtual std::optional<double> radial_tail(double eps, std::size_t n) const;
    };

    SigmaProfile(std::string name, std::shared_ptr<const Impl> impl, std::vector<double> breakpoints = {});

    const std::string& name() const { return name_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    double operator()(double rho) const { return impl_->value(rho); }
    double log_value(double rho) const { return impl_->log_value(rho); }
    double log_value_at_log(double log_inv_rho) const { return impl_->log_value_at_log(log_inv_rho); }
    double log_radial_at_log(double log_inv_rho, std::size_t n) const { return impl_->log_radial_at_log(log_inv_rho, n); }
    std::optional<double> radial_tail(double eps, std::size_t n) const { return impl_->radial_tail(eps, n); }
    bool has_closed_form(std::size_t n) const { return radial_tail(1.0, n).has_value(); }

  private:
    std::string name_;
    std::shared_ptr<const Impl> impl_;
    std::vector<double> breakpoints_;
};

/// sigma1(0) = 1, sigma1(rho) = 1/rho.
SigmaProfile builtin_sigma1();
/// 4 rho^-n (ln 1/rho)^-1 (ln ln 1/rho)^-2 on (0, e^-e), 4 e^{ne-1} elsewhere.
SigmaProfile builtin_loglog(std::size_t n);
SigmaProfile builtin_constant(double c = 1.0);
/// rho^-s for rho > 0, 1 at rho = 0 (family used to calibrate divergence verdicts).
SigmaProfile builtin_power(double s);
/// sigma(rho) = rho: violates sigma >= 1 and the blow-up property.
SigmaProfile builtin_linear();

/// Profile given as a piecewise expression table, one "piece a b : expr" line
/// per half-open interval [a, b) (b may be "inf"), optional "at0 value" for
/// sigma(0) and "name id". Interior piece ends become breakpoints.
SigmaProfile profile_from_text(const std::string& text, const std::string& fallback_name = "file");
SigmaProfile load_profile(const std::string& path);

/// Resolves "sigma1", "loglog", "const", "power:<s>" or "file:<path>".
SigmaProfile profile_by_name(const std::string& id, std::size_t n);

/// Nondecreasing continuous F: (0, inf) -> (0, inf) with F(1) = 1.
class ProfileTransform {
  public:
    /// `log_of_log` maps log s to log F(s); it must agree with `apply`.
    ProfileTransform(std::string name, std::function<double(double)> apply,
                     std::function<double(double)> log_of_log);

    const std::string& name() const { return name_; }
    double operator()(double s) const { return apply_(s); }
    double log_apply_log(double log_s) const { return log_of_log_(log_s); }

    static ProfileTransform identity();
    /// F(s) = s^q.
    static ProfileTransform power(double q);
    /// F(s) = [ln(e - 1 + s)]^lambda.
    static ProfileTransform log_power(double lambda);
    static ProfileTransform from_expr(const Expr& expr);

  private:
    std::string name_;
    std::function<double(double)> apply_;
    std::function<double(double)> log_of_log_;
};

/// sigma* = sigma * F(sigma); inherits the breakpoints of sigma.
SigmaProfile transformed_profile(const SigmaProfile& base, const ProfileTransform& f);

struct MSigma {
    double value = 0.0;
    double sigma_at_1 = 0.0;
    double radial_integral = 0.0;
    std::size_t n = 0;
    std::string provenance;  ///< "exact" or "quadrature(tol)"
};

/// sigma(1) + n * int_0^1 sigma(r) r^{n-1} dr. Throws DivergentIntegral.
MSigma m_sigma(const SigmaProfile& profile, std::size_t n, double tol = 1e-8);

enum class Evidence { Consistent, Violated, Inconclusive };
const char* to_string(Evidence e);

struct ProbeConfig {
    std::size_t grid_points = 64;        ///< uniform samples of [0,1]
    std::size_t divergence_depth = 40;   ///< probe down to 2^-depth
    std::size_t refine_levels = 40;      ///< bisection levels of the continuity probe
    double continuity_tol = 1e-6;        ///< relative jump tolerated after refinement
    std::vector<double> bound_ladder{1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
    double quadrature_tol = 1e-8;
};

struct PropertyCheck {
    Evidence verdict = Evidence::Inconclusive;
    std::string detail;
    std::vector<double> violations;  ///< sample points where the property failed (capped)
};

struct MembershipReport {
    std::string profile;
    std::size_t n = 0;
    ProbeConfig probe;
    PropertyCheck continuity;
    PropertyCheck lower_bound;
    PropertyCheck blow_up;
    PropertyCheck integrable;

    bool consistent() const;
};

MembershipReport check_class_K(const SigmaProfile& profile, std::size_t n, const ProbeConfig& probe = {});

}  // namespace gridsing
