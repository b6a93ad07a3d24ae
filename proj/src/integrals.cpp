#include "gridsing/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gridsing/error.hpp"
#include "gridsing/grid.hpp"

namespace gridsing {

namespace {

double pow_int(double x, std::size_t n) {
    double r = 1.0;
    for (std::size_t i = 0; i < n; ++i) r *= x;
    return r;
}

// kappa_n / (2t)^n
double shell_factor(std::size_t n, GridIndex t) {
    return unit_ball_constants(n).sphere_area / pow_int(2.0 * static_cast<double>(t), n);
}

}  // namespace

NuIntegral integral_nu_exact(const NuField& field, double tol) {
    const FieldFamily& fam = field.family();
    const std::size_t n = fam.dim();
    const RadialIntegral radial = radial_integral(fam.profile(), n, tol);
    const double sigma1 = fam.profile()(1.0);
    const double ball = unit_ball_constants(n).ball_volume / pow_int(2.0 * static_cast<double>(field.t()), n);

    NuIntegral r;
    r.radial = radial.value;
    r.domain_measure = fam.domain_measure();
    r.ball_measure = static_cast<double>(field.nodes().count()) * ball;
    r.value = sigma1 * (r.domain_measure - r.ball_measure) + static_cast<double>(n) * radial.value * r.ball_measure;
    r.bound = (sigma1 + static_cast<double>(n) * radial.value) * r.domain_measure;
    r.within_bound = r.value <= r.bound;
    r.provenance = radial.provenance;
    return r;
}

double integral_ball_exact(const NuField& field, const GridNode& y, double tol) {
    if (y.t != field.t() || !field.nodes().contains(y.index)) {
        throw Error(ErrorCode::NodeNotInSet, "node is not in X_t for this field");
    }
    const std::size_t n = field.family().dim();
    return shell_factor(n, field.t()) * radial_integral(field.profile(), n, tol).value;
}

MuIntegral integral_mu_exact(const MuField& field, double tol) {
    MuIntegral r;
    std::string prov;
    double m_sigma_bound = 0.0;
    for (std::size_t k = 0; k < field.terms().size(); ++k) {
        const NuIntegral nu = integral_nu_exact(field.terms()[k], tol);
        const double kk = static_cast<double>(k + 1);
        r.terms.push_back(nu.value / (kk * kk));
        r.value += r.terms.back();
        m_sigma_bound = nu.bound;
        prov = nu.provenance;
    }
    r.bound = 2.0 * m_sigma_bound;
    r.within_bound = r.value <= r.bound;
    r.provenance = prov;
    return r;
}

namespace {

enum class BallPlacement { Inside, Outside, Straddling };

BallPlacement classify(const GridNode& y, const Rational& radius, const Box& cube) {
    const RationalVec c = y.coords();
    bool inside = true;
    for (std::size_t d = 0; d < c.size(); ++d) {
        if (c[d] + radius <= cube.lower[d] || c[d] - radius >= cube.upper[d]) return BallPlacement::Outside;
        if (c[d] - radius < cube.lower[d] || c[d] + radius > cube.upper[d]) inside = false;
    }
    return inside ? BallPlacement::Inside : BallPlacement::Straddling;
}

// int_v^1 sigma(r) r^{n-1} dr.
class UpperTail {
  public:
    UpperTail(const SigmaProfile& sigma, std::size_t n, double total, double tol)
        : sigma_(sigma), n_(n), total_(total), tol_(tol), closed_(sigma.has_closed_form(n)) {}

    double operator()(double v) const {
        if (v <= 0.0) return total_;
        if (v >= 1.0) return 0.0;
        if (closed_) return total_ - *sigma_.radial_tail(v, n_);
        QuadratureOptions opts;
        opts.tol = tol_;
        return radial_quadrature(sigma_, n_, v, opts).value;
    }

  private:
    const SigmaProfile& sigma_;
    std::size_t n_;
    double total_;
    double tol_;
    bool closed_;
};

}  // namespace

CubeIntegral integral_over_cube(const NuField& field, const Box& cube, const CubeIntegralOptions& opts) {
    const FieldFamily& fam = field.family();
    const std::size_t n = fam.dim();
    if (cube.dim() != n) throw Error(ErrorCode::InvalidArgument, "cube dimension does not match the domain");
    const double nd = static_cast<double>(n);
    const GridIndex t = field.t();
    const SigmaProfile& sigma = fam.profile();
    const double sigma1 = sigma(1.0);
    const RadialIntegral radial = radial_integral(sigma, n, opts.tol);
    const double ball = unit_ball_constants(n).ball_volume / pow_int(2.0 * static_cast<double>(t), n);
    const double factor = shell_factor(n, t);
    const UpperTail upper(sigma, n, radial.value, opts.tol);

    CubeIntegral r;
    r.clipped_measure = to_double(fam.domain().clipped_to(cube).measure());
    r.exact_part = sigma1 * r.clipped_measure;

    const Rational radius(1, 2 * static_cast<unsigned long>(t));
    const double radius_d = to_double(radius);
    std::vector<const GridNode*> straddling;
    for (const auto& y : field.nodes().nodes()) {
        switch (classify(y, radius, cube)) {
            case BallPlacement::Inside:
                ++r.inside_balls;
                r.exact_part += ball * (nd * radial.value - sigma1);
                break;
            case BallPlacement::Straddling: straddling.push_back(&y); break;
            case BallPlacement::Outside: break;
        }
    }
    r.straddling_balls = straddling.size();

    std::vector<double> lo(n), hi(n);
    for (std::size_t d = 0; d < n; ++d) {
        lo[d] = to_double(cube.lower[d]);
        hi[d] = to_double(cube.upper[d]);
    }
    const CounterRng rng(opts.seed, static_cast<std::uint32_t>(t));
    const std::size_t K = std::max<std::size_t>(opts.directions, 2);
    double mc_value = 0.0;
    double mc_var = 0.0;
    std::vector<double> theta(n);
    for (std::size_t b = 0; b < straddling.size(); ++b) {
        const std::vector<double> y = straddling[b]->coords_double();
        SampleStats stats;
        const double offset = rng.uniform(b * K, 0);
        for (std::size_t j = 0; j < K; ++j) {
            const std::uint64_t s = b * K + j;
            if (n == 2) {
                const double phi = 2.0 * std::numbers::pi * (static_cast<double>(j) + offset) / static_cast<double>(K);
                theta[0] = std::cos(phi);
                theta[1] = std::sin(phi);
            } else {
                double norm = 0.0;
                for (std::size_t d = 0; d < n; ++d) {
                    theta[d] = rng.normal(s, static_cast<std::uint32_t>(d + 1));
                    norm += theta[d] * theta[d];
                }
                norm = std::sqrt(norm);
                for (auto& v : theta) v /= norm;
            }
            double a = 0.0, c = radius_d;
            for (std::size_t d = 0; d < n && a < c; ++d) {
                if (theta[d] > 0.0) {
                    a = std::max(a, (lo[d] - y[d]) / theta[d]);
                    c = std::min(c, (hi[d] - y[d]) / theta[d]);
                } else if (theta[d] < 0.0) {
                    a = std::max(a, (hi[d] - y[d]) / theta[d]);
                    c = std::min(c, (lo[d] - y[d]) / theta[d]);
                } else if (!(y[d] > lo[d] && y[d] < hi[d])) {
                    c = a;
                }
            }
            double ray = 0.0;
            if (a < c) {
                const double ua = a / radius_d;
                const double ub = std::min(1.0, c / radius_d);
                ray = upper(ua) - upper(ub) - sigma1 * (pow_int(ub, n) - pow_int(ua, n)) / nd;
            }
            stats.add(factor * ray);
        }
        mc_value += stats.mean();
        mc_var += stats.variance() / static_cast<double>(K);
    }
    r.mc_part.value = mc_value;
    r.mc_part.half_width = 1.96 * std::sqrt(mc_var);
    r.mc_part.samples = straddling.size() * K;
    r.mc_part.seed = opts.seed;
    r.total = r.exact_part + r.mc_part.value;
    r.half_width = r.mc_part.half_width;
    r.provenance = straddling.empty() ? radial.provenance : r.mc_part.provenance();
    return r;
}

ShellIntegral shell_integral(const NuField& field, const ProfileTransform& f, double eps, double tol) {
    const FieldFamily& fam = field.family();
    if (field.t() != fam.m() + 1) throw Error(ErrorCode::InvalidArgument, "shell integral is defined for t = m + 1");
    if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::InvalidArgument, "shell radius must lie in (0, 1)");
    const std::size_t n = fam.dim();
    const SigmaProfile star = transformed_profile(fam.profile(), f);
    QuadratureOptions opts;
    opts.tol = tol;
    const QuadratureResult q = radial_quadrature(star, n, eps, opts);
    const double factor = shell_factor(n, field.t());
    std::ostringstream prov;
    prov << "quadrature(" << tol << ")";
    return {factor * q.value, factor * q.abs_error_estimate, prov.str()};
}

}  // namespace gridsing
