#include "gridsing/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gridsing/error.hpp"

namespace gridsing {

const char* to_string(QuadratureVerdict v) {
    switch (v) {
        case QuadratureVerdict::Converged: return "converged";
        case QuadratureVerdict::Divergent: return "divergent";
        case QuadratureVerdict::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

GaussLegendre::GaussLegendre() {
    constexpr std::size_t n = kOrder;
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes_[i] = -x;
        nodes_[n - 1 - i] = x;
        weights_[i] = w;
        weights_[n - 1 - i] = w;
    }
}

const GaussLegendre& GaussLegendre::instance() {
    static const GaussLegendre rule;
    return rule;
}

double GaussLegendre::integrate(const std::function<double(double)>& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < kOrder; ++i) sum += weights_[i] * f(mid + half * nodes_[i]);
    return half * sum;
}

namespace {

IntervalEstimate adaptive_step(const std::function<double(double)>& f, double a, double b, double whole,
                               double abs_tol, std::size_t depth_left, std::size_t& budget) {
    const auto& gl = GaussLegendre::instance();
    const double mid = 0.5 * (a + b);
    const double left = gl.integrate(f, a, mid);
    const double right = gl.integrate(f, mid, b);
    const double refined = left + right;
    const double err = std::abs(refined - whole);
    if (err <= abs_tol || depth_left == 0 || budget == 0 || !(mid > a && mid < b)) {
        return {refined, err, err <= abs_tol};
    }
    --budget;
    IntervalEstimate l = adaptive_step(f, a, mid, left, 0.5 * abs_tol, depth_left - 1, budget);
    IntervalEstimate r = adaptive_step(f, mid, b, right, 0.5 * abs_tol, depth_left - 1, budget);
    return {l.value + r.value, l.abs_error + r.abs_error, l.converged && r.converged};
}

}  // namespace

IntervalEstimate integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                    std::size_t max_bisections) {
    if (!(a < b)) return {0.0, 0.0, true};
    const double whole = GaussLegendre::instance().integrate(f, a, b);
    std::size_t budget = 4096;
    return adaptive_step(f, a, b, whole, abs_tol, max_bisections, budget);
}

double radial_integrand(const SigmaProfile& profile, std::size_t n, double rho) {
    const double power = static_cast<double>(n) - 1.0;
    if (rho > 1e-100) return profile(rho) * std::pow(rho, power);
    return std::exp(profile.log_value(rho) + power * std::log(rho));
}

IntervalEstimate radial_segment(const SigmaProfile& profile, std::size_t n, double a, double b, double rel_tol) {
    if (!(a < b)) return {0.0, 0.0, true};
    std::vector<double> cuts{a};
    for (double bp : profile.breakpoints()) {
        if (bp > a && bp < b) cuts.push_back(bp);
    }
    cuts.push_back(b);
    auto f = [&](double r) { return radial_integrand(profile, n, r); };
    IntervalEstimate total;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double rough = GaussLegendre::instance().integrate(f, cuts[i], cuts[i + 1]);
        const double abs_tol = rel_tol * std::max(std::abs(rough), std::numeric_limits<double>::min());
        IntervalEstimate piece = integrate_adaptive(f, cuts[i], cuts[i + 1], abs_tol);
        total.value += piece.value;
        total.abs_error += piece.abs_error;
        total.converged = total.converged && piece.converged;
    }
    return total;
}

QuadratureResult radial_quadrature(const SigmaProfile& profile, std::size_t n, double lower,
                                   const QuadratureOptions& opts) {
    if (!(lower >= 0.0 && lower < 1.0)) throw Error(ErrorCode::InvalidArgument, "lower limit must lie in [0, 1)");
    QuadratureResult res;
    double sum = 0.0;
    double err = 0.0;
    bool all_converged = true;
    std::vector<double> panels;
    std::size_t slow_run = 0;

    for (std::size_t j = 0;; ++j) {
        const double hi = std::ldexp(1.0, -static_cast<int>(j));
        double lo = std::ldexp(1.0, -static_cast<int>(j) - 1);
        const bool last = lower > 0.0 && lo <= lower;
        if (last) lo = lower;

        IntervalEstimate panel = radial_segment(profile, n, lo, hi, 0.1 * opts.tol);
        sum += panel.value;
        err += panel.abs_error;
        all_converged = all_converged && panel.converged;
        panels.push_back(panel.value);
        res.partial_sums.push_back(sum);
        res.panels = j + 1;

        if (last) {
            res.value = sum;
            res.abs_error_estimate = err;
            const bool within = err <= opts.tol * std::max(std::abs(sum), std::numeric_limits<double>::min());
            res.verdict = (all_converged || within) ? QuadratureVerdict::Converged : QuadratureVerdict::Inconclusive;
            return res;
        }
        if (lower > 0.0) continue;

        // Divergence: increments that shrink no faster than 1/j keep the
        // dyadic partial sums from being Cauchy.
        if (j >= 1) {
            const double prev = panels[j - 1];
            const bool slow = panel.value > 0.0 && panel.value * static_cast<double>(j + 1) >= prev * static_cast<double>(j);
            slow_run = slow ? slow_run + 1 : 0;
            if (slow_run >= opts.divergence_levels) {
                res.value = sum;
                res.abs_error_estimate = std::numeric_limits<double>::infinity();
                res.verdict = QuadratureVerdict::Divergent;
                return res;
            }
        }

        // Convergence: a geometric tail whose bound is below tolerance.
        if (j >= opts.geometric_levels) {
            bool geometric = true;
            double r_max = 0.0;
            for (std::size_t k = j + 1 - opts.geometric_levels; k <= j; ++k) {
                if (!(panels[k - 1] > 0.0) || panels[k] < 0.0) {
                    geometric = false;
                    break;
                }
                const double r = panels[k] / panels[k - 1];
                if (r > opts.geometric_ratio) {
                    geometric = false;
                    break;
                }
                r_max = std::max(r_max, r);
            }
            const bool zero_tail = panel.value == 0.0 && panels[j - 1] == 0.0 && j >= 8;
            if (geometric || zero_tail) {
                const double r_last = geometric ? panel.value / panels[j - 1] : 0.0;
                const double tail_est = geometric ? panel.value * r_last / (1.0 - r_last) : 0.0;
                const double tail_bound = geometric ? panel.value * r_max / (1.0 - r_max) : 0.0;
                const double total = sum + tail_est;
                const double total_err = err + (tail_bound - tail_est) + 1e-3 * tail_est;
                const double scale = std::max(std::abs(total), std::numeric_limits<double>::min());
                if (zero_tail || (tail_bound <= opts.tol * scale && total_err <= opts.tol * scale)) {
                    res.value = total;
                    res.abs_error_estimate = total_err;
                    res.verdict = QuadratureVerdict::Converged;
                    return res;
                }
            }
        }

        if (j + 1 >= opts.panel_limit) {
            res.value = sum;
            res.abs_error_estimate = std::numeric_limits<double>::infinity();
            res.verdict = QuadratureVerdict::Inconclusive;
            return res;
        }
    }
}

RadialIntegral radial_integral(const SigmaProfile& profile, std::size_t n, double tol) {
    if (auto closed = profile.radial_tail(1.0, n)) {
        if (!std::isfinite(*closed)) {
            throw Error(ErrorCode::DivergentIntegral, "radial integral of '" + profile.name() + "' diverges");
        }
        return {*closed, 0.0, "exact"};
    }
    QuadratureOptions opts;
    opts.tol = tol;
    QuadratureResult q = radial_quadrature(profile, n, 0.0, opts);
    std::ostringstream prov;
    prov << "quadrature(" << tol << ")";
    switch (q.verdict) {
        case QuadratureVerdict::Converged: return {q.value, q.abs_error_estimate, prov.str()};
        case QuadratureVerdict::Divergent:
            throw Error(ErrorCode::DivergentIntegral, "radial integral of '" + profile.name() + "' diverges");
        case QuadratureVerdict::Inconclusive: break;
    }
    throw Error(ErrorCode::InconclusiveTolerance,
                "radial integral of '" + profile.name() + "' neither converged nor diverged by the panel limit");
}

}  // namespace gridsing
