#include "gridsing/sigma.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "gridsing/error.hpp"
#include "gridsing/quadrature.hpp"

namespace gridsing {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double SigmaProfile::Impl::log_value(double rho) const { return std::log(value(rho)); }

double SigmaProfile::Impl::log_value_at_log(double log_inv_rho) const { return log_value(std::exp(-log_inv_rho)); }

double SigmaProfile::Impl::log_radial_at_log(double log_inv_rho, std::size_t n) const {
    return log_value_at_log(log_inv_rho) - static_cast<double>(n) * log_inv_rho;
}

std::optional<double> SigmaProfile::Impl::radial_tail(double, std::size_t) const { return std::nullopt; }

SigmaProfile::SigmaProfile(std::string name, std::shared_ptr<const Impl> impl, std::vector<double> breakpoints)
    : name_(std::move(name)), impl_(std::move(impl)), breakpoints_(std::move(breakpoints)) {
    std::sort(breakpoints_.begin(), breakpoints_.end());
}

namespace {

class Sigma1 final : public SigmaProfile::Impl {
  public:
    double value(double rho) const override { return rho > 0.0 ? 1.0 / rho : 1.0; }
    double log_value(double rho) const override { return rho > 0.0 ? -std::log(rho) : 0.0; }
    double log_value_at_log(double log_inv_rho) const override { return log_inv_rho; }
    std::optional<double> radial_tail(double eps, std::size_t n) const override {
        const double p = static_cast<double>(n) - 1.0;
        return std::pow(eps, p) / p;
    }
};

// rho^-s on (0, inf), 1 at 0.
class PowerProfile final : public SigmaProfile::Impl {
  public:
    explicit PowerProfile(double s) : s_(s) {}
    double value(double rho) const override { return rho > 0.0 ? std::pow(rho, -s_) : 1.0; }
    double log_value(double rho) const override { return rho > 0.0 ? -s_ * std::log(rho) : 0.0; }
    double log_value_at_log(double log_inv_rho) const override { return s_ * log_inv_rho; }
    std::optional<double> radial_tail(double eps, std::size_t n) const override {
        const double p = static_cast<double>(n) - s_;
        if (p <= 0.0) return kInf;
        return std::pow(eps, p) / p;
    }

  private:
    double s_;
};

class ConstantProfile final : public SigmaProfile::Impl {
  public:
    explicit ConstantProfile(double c) : c_(c) {}
    double value(double) const override { return c_; }
    double log_value(double) const override { return std::log(c_); }
    double log_value_at_log(double) const override { return std::log(c_); }
    std::optional<double> radial_tail(double eps, std::size_t n) const override {
        return c_ * std::pow(eps, static_cast<double>(n)) / static_cast<double>(n);
    }

  private:
    double c_;
};

class LinearProfile final : public SigmaProfile::Impl {
  public:
    double value(double rho) const override { return rho; }
    std::optional<double> radial_tail(double eps, std::size_t n) const override {
        const double p = static_cast<double>(n) + 1.0;
        return std::pow(eps, p) / p;
    }
};

// 4 rho^-n (ln 1/rho)^-1 (ln ln 1/rho)^-2 below e^-e, the matching constant above.
class LogLogProfile final : public SigmaProfile::Impl {
  public:
    explicit LogLogProfile(std::size_t n)
        : n_(static_cast<double>(n)), cap_(4.0 * std::exp(n_ * std::numbers::e - 1.0)),
          knee_(std::exp(-std::numbers::e)) {}

    double value(double rho) const override {
        if (rho <= 0.0 || rho >= knee_) return cap_;
        return std::exp(log_value(rho));
    }

    double log_value(double rho) const override {
        if (rho <= 0.0 || rho >= knee_) return std::log(cap_);
        return log_value_at_log(-std::log(rho));
    }

    double log_value_at_log(double big_l) const override {
        if (!(big_l > std::numbers::e)) return std::log(cap_);
        const double ll = std::log(big_l);
        return std::log(4.0) + n_ * big_l - std::log(big_l) - 2.0 * std::log(ll);
    }

    double log_radial_at_log(double big_l, std::size_t n) const override {
        const double nd = static_cast<double>(n);
        if (!(big_l > std::numbers::e)) return std::log(cap_) - nd * big_l;
        return std::log(4.0) + (n_ - nd) * big_l - std::log(big_l) - 2.0 * std::log(std::log(big_l));
    }

    // int_0^eps = 4 / ln ln(1/eps) below the knee (substitute u = ln ln 1/r);
    // the constant branch adds cap (eps^n - knee^n) / n.
    std::optional<double> radial_tail(double eps, std::size_t n) const override {
        if (static_cast<double>(n) != n_) return std::nullopt;
        if (eps <= 0.0) return 0.0;
        if (eps < knee_) return 4.0 / std::log(-std::log(eps));
        return 4.0 + cap_ * (std::pow(eps, n_) - std::pow(knee_, n_)) / n_;
    }

  private:
    double n_;
    double cap_;
    double knee_;
};

struct Piece {
    double lo, hi;
    Expr expr;
};

class TableProfile final : public SigmaProfile::Impl {
  public:
    TableProfile(std::vector<Piece> pieces, double at0, double n) : pieces_(std::move(pieces)), at0_(at0), n_(n) {}

    double value(double rho) const override {
        if (rho <= 0.0) return at0_;
        for (const auto& p : pieces_) {
            if (rho >= p.lo && rho < p.hi) return p.expr.eval(rho, n_);
        }
        return std::nan("");
    }

  private:
    std::vector<Piece> pieces_;
    double at0_;
    double n_;
};

class TransformedProfile final : public SigmaProfile::Impl {
  public:
    TransformedProfile(SigmaProfile base, ProfileTransform f) : base_(std::move(base)), f_(std::move(f)) {}

    double value(double rho) const override {
        const double s = base_(rho);
        return s * f_(s);
    }
    double log_value(double rho) const override {
        const double ls = base_.log_value(rho);
        return ls + f_.log_apply_log(ls);
    }
    double log_value_at_log(double big_l) const override {
        const double ls = base_.log_value_at_log(big_l);
        return ls + f_.log_apply_log(ls);
    }
    double log_radial_at_log(double big_l, std::size_t n) const override {
        return base_.log_radial_at_log(big_l, n) + f_.log_apply_log(base_.log_value_at_log(big_l));
    }
    std::optional<double> radial_tail(double eps, std::size_t n) const override {
        if (f_.name() == "identity") return base_.radial_tail(eps, n);
        return std::nullopt;
    }

  private:
    SigmaProfile base_;
    ProfileTransform f_;
};

double parse_bound(const std::string& tok) {
    if (tok == "inf") return kInf;
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw Error(ErrorCode::ParseError, "bad breakpoint '" + tok + "'");
    return v;
}

}  // namespace

SigmaProfile builtin_sigma1() { return SigmaProfile("sigma1", std::make_shared<Sigma1>()); }

SigmaProfile builtin_loglog(std::size_t n) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "loglog profile needs n >= 2");
    return SigmaProfile("loglog", std::make_shared<LogLogProfile>(n), {std::exp(-std::numbers::e)});
}

SigmaProfile builtin_constant(double c) {
    if (!(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "constant profile must be positive");
    std::ostringstream name;
    name << "const(" << c << ")";
    return SigmaProfile(name.str(), std::make_shared<ConstantProfile>(c));
}

SigmaProfile builtin_power(double s) {
    std::ostringstream name;
    name << "power(" << s << ")";
    return SigmaProfile(name.str(), std::make_shared<PowerProfile>(s));
}

SigmaProfile builtin_linear() { return SigmaProfile("linear", std::make_shared<LinearProfile>()); }

SigmaProfile profile_from_text(const std::string& text, const std::string& fallback_name) {
    std::istringstream is(text);
    std::string line;
    std::string name = fallback_name;
    double at0 = std::nan("");
    double n = 2.0;
    std::vector<Piece> pieces;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (key == "name") {
            ls >> name;
        } else if (key == "at0") {
            std::string v;
            ls >> v;
            at0 = Expr::parse(v).eval(0.0, n);
        } else if (key == "dim") {
            ls >> n;
        } else if (key == "piece") {
            std::string a, b, colon;
            if (!(ls >> a >> b >> colon) || colon != ":") {
                throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected 'piece a b : expr'");
            }
            std::string rest;
            std::getline(ls, rest);
            pieces.push_back(Piece{parse_bound(a), parse_bound(b), Expr::parse(rest)});
        } else {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    if (pieces.empty()) throw Error(ErrorCode::ParseError, "profile has no pieces");
    std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) { return x.lo < y.lo; });
    if (pieces.front().lo != 0.0) throw Error(ErrorCode::ParseError, "first piece must start at 0");
    std::vector<double> breakpoints;
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
        if (pieces[i].hi != pieces[i + 1].lo) throw Error(ErrorCode::ParseError, "pieces must be contiguous");
        breakpoints.push_back(pieces[i].hi);
    }
    if (std::isnan(at0)) at0 = pieces.front().expr.eval(0.0, n);
    return SigmaProfile(name, std::make_shared<TableProfile>(std::move(pieces), at0, n), std::move(breakpoints));
}

SigmaProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open profile file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return profile_from_text(ss.str(), path);
}

SigmaProfile profile_by_name(const std::string& id, std::size_t n) {
    if (id == "sigma1") return builtin_sigma1();
    if (id == "loglog") return builtin_loglog(n);
    if (id == "const") return builtin_constant(1.0);
    if (id.rfind("power:", 0) == 0) return builtin_power(std::stod(id.substr(6)));
    if (id.rfind("file:", 0) == 0) return load_profile(id.substr(5));
    throw Error(ErrorCode::InvalidArgument, "unknown profile '" + id + "'");
}

ProfileTransform::ProfileTransform(std::string name, std::function<double(double)> apply,
                                   std::function<double(double)> log_of_log)
    : name_(std::move(name)), apply_(std::move(apply)), log_of_log_(std::move(log_of_log)) {
    if (apply_(1.0) != 1.0) throw Error(ErrorCode::InvalidArgument, "transform must satisfy F(1) = 1");
    double prev = apply_(1e-6);
    for (int i = -59; i <= 60; ++i) {
        const double s = std::pow(10.0, 0.1 * i);
        const double v = apply_(s);
        if (!(v > 0.0) || v < prev) throw Error(ErrorCode::InvalidArgument, "transform must be positive and nondecreasing");
        prev = v;
    }
}

ProfileTransform ProfileTransform::identity() {
    return ProfileTransform("identity", [](double) { return 1.0; }, [](double) { return 0.0; });
}

ProfileTransform ProfileTransform::power(double q) {
    std::ostringstream name;
    name << "pow(" << q << ")";
    return ProfileTransform(name.str(), [q](double s) { return std::pow(s, q); },
                            [q](double log_s) { return q * log_s; });
}

ProfileTransform ProfileTransform::log_power(double lambda) {
    std::ostringstream name;
    name << "lnpow(" << lambda << ")";
    // ln(e - 1 + s) = 1 + log1p((s - 1)/e), exact 1 at s = 1.
    auto ln_shift = [](double s) { return 1.0 + std::log1p((s - 1.0) / std::numbers::e); };
    return ProfileTransform(
        name.str(), [lambda, ln_shift](double s) { return std::pow(ln_shift(s), lambda); },
        [lambda, ln_shift](double log_s) {
            if (log_s < 30.0) return lambda * std::log(ln_shift(std::exp(log_s)));
            // s huge: ln(e - 1 + s) = log_s + log1p((e - 1) e^-log_s).
            return lambda * std::log(log_s + std::log1p((std::numbers::e - 1.0) * std::exp(-log_s)));
        });
}

ProfileTransform ProfileTransform::from_expr(const Expr& expr) {
    return ProfileTransform(
        "expr(" + expr.source() + ")", [expr](double s) { return expr.eval(s, 0.0); },
        [expr](double log_s) { return std::log(expr.eval(std::exp(log_s), 0.0)); });
}

SigmaProfile transformed_profile(const SigmaProfile& base, const ProfileTransform& f) {
    return SigmaProfile(base.name() + "*" + f.name(), std::make_shared<TransformedProfile>(base, f), base.breakpoints());
}

MSigma m_sigma(const SigmaProfile& profile, std::size_t n, double tol) {
    RadialIntegral ri = radial_integral(profile, n, tol);
    MSigma m;
    m.n = n;
    m.sigma_at_1 = profile(1.0);
    m.radial_integral = ri.value;
    m.value = m.sigma_at_1 + static_cast<double>(n) * ri.value;
    m.provenance = ri.provenance;
    return m;
}

const char* to_string(Evidence e) {
    switch (e) {
        case Evidence::Consistent: return "consistent";
        case Evidence::Violated: return "violated";
        case Evidence::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

bool MembershipReport::consistent() const {
    return continuity.verdict == Evidence::Consistent && lower_bound.verdict == Evidence::Consistent &&
           blow_up.verdict == Evidence::Consistent && integrable.verdict == Evidence::Consistent;
}

namespace {

constexpr std::size_t kMaxViolations = 1000;

double rel_jump(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0}); }

PropertyCheck probe_continuity(const SigmaProfile& sigma, const ProbeConfig& probe) {
    PropertyCheck c;
    // Log-spaced cells over (2^-depth, 4], cut at breakpoints.
    std::vector<double> pts;
    const int depth = static_cast<int>(probe.divergence_depth);
    for (int k = -4 * depth; k <= 8; ++k) pts.push_back(std::ldexp(1.0, 0) * std::pow(2.0, 0.25 * k));
    const auto& bps = sigma.breakpoints();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double a = pts[i], b = pts[i + 1];
        bool crosses = false;
        for (double bp : bps) crosses = crosses || (bp > a && bp < b);
        if (crosses) continue;
        double fa = sigma(a), fb = sigma(b);
        for (std::size_t lvl = 0; lvl < probe.refine_levels; ++lvl) {
            const double mid = 0.5 * (a + b);
            const double fm = sigma(mid);
            if (rel_jump(fa, fm) >= rel_jump(fm, fb)) {
                b = mid;
                fb = fm;
            } else {
                a = mid;
                fa = fm;
            }
        }
        if (rel_jump(fa, fb) > probe.continuity_tol && c.violations.size() < kMaxViolations) {
            c.violations.push_back(0.5 * (a + b));
        }
    }
    for (double bp : bps) {
        if (bp <= 0.0) continue;
        const double h = 1e-9;
        if (rel_jump(sigma(bp * (1.0 - h)), sigma(bp * (1.0 + h))) > probe.continuity_tol) c.violations.push_back(bp);
    }
    c.verdict = c.violations.empty() ? Evidence::Consistent : Evidence::Violated;
    std::ostringstream os;
    os << "refined " << probe.refine_levels << " levels on quarter-octave cells; "
       << bps.size() << " breakpoint(s) checked by two-sided limits; " << c.violations.size() << " jump(s)";
    c.detail = os.str();
    return c;
}

PropertyCheck probe_lower_bound(const SigmaProfile& sigma, const ProbeConfig& probe) {
    PropertyCheck c;
    std::vector<double> pts{0.0};
    for (std::size_t i = 1; i <= probe.grid_points; ++i) {
        pts.push_back(static_cast<double>(i) / static_cast<double>(probe.grid_points));
    }
    for (std::size_t j = 1; j <= probe.divergence_depth; ++j) pts.push_back(std::ldexp(1.0, -static_cast<int>(j)));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (double r : pts) {
        if (!(sigma(r) >= 1.0) && c.violations.size() < kMaxViolations) c.violations.push_back(r);
    }
    c.verdict = c.violations.empty() ? Evidence::Consistent : Evidence::Violated;
    std::ostringstream os;
    os << pts.size() << " samples of [0,1]; " << c.violations.size() << " below 1";
    c.detail = os.str();
    return c;
}

PropertyCheck probe_blow_up(const SigmaProfile& sigma, const ProbeConfig& probe) {
    PropertyCheck c;
    std::vector<double> values;
    for (std::size_t j = 1; j <= probe.divergence_depth; ++j) values.push_back(sigma(std::ldexp(1.0, -static_cast<int>(j))));
    std::size_t exceeded = 0;
    for (double bound : probe.bound_ladder) {
        // "Eventually above": the deepest quarter of the probe stays above the rung.
        const std::size_t from = values.size() - std::max<std::size_t>(1, values.size() / 4);
        bool above = true;
        for (std::size_t j = from; j < values.size(); ++j) above = above && values[j] > bound;
        if (above) {
            ++exceeded;
        } else if (c.violations.size() < kMaxViolations) {
            c.violations.push_back(bound);
        }
    }
    c.verdict = exceeded == probe.bound_ladder.size() ? Evidence::Consistent : Evidence::Violated;
    std::ostringstream os;
    os << "sigma(2^-" << probe.divergence_depth << ") = " << values.back() << "; " << exceeded << "/"
       << probe.bound_ladder.size() << " ladder rungs eventually exceeded";
    c.detail = os.str();
    return c;
}

PropertyCheck probe_integrable(const SigmaProfile& sigma, std::size_t n, const ProbeConfig& probe) {
    PropertyCheck c;
    QuadratureOptions opts;
    opts.tol = probe.quadrature_tol;
    QuadratureResult q = radial_quadrature(sigma, n, 0.0, opts);
    std::ostringstream os;
    os << "quadrature " << to_string(q.verdict) << " after " << q.panels << " panels, value " << q.value;
    if (q.verdict == QuadratureVerdict::Converged) {
        c.verdict = Evidence::Consistent;
    } else if (q.verdict == QuadratureVerdict::Divergent) {
        c.verdict = Evidence::Violated;
    } else if (auto total = sigma.radial_tail(1.0, n); total && std::isfinite(*total)) {
        // Slowly converging profile: check the closed-form tail against quadrature of [eps, 1].
        const double eps = std::ldexp(1.0, -20);
        QuadratureResult head = radial_quadrature(sigma, n, eps, opts);
        const double tail = *sigma.radial_tail(eps, n);
        const double mismatch = std::abs(head.value + tail - *total) / std::abs(*total);
        os << "; closed form " << *total << " vs quadrature[2^-20,1] + tail = " << head.value + tail
           << " (rel. mismatch " << mismatch << ")";
        c.verdict = (head.verdict == QuadratureVerdict::Converged && mismatch <= 10 * probe.quadrature_tol)
                        ? Evidence::Consistent
                        : Evidence::Inconclusive;
    } else {
        c.verdict = Evidence::Inconclusive;
    }
    c.detail = os.str();
    return c;
}

}  // namespace

MembershipReport check_class_K(const SigmaProfile& profile, std::size_t n, const ProbeConfig& probe) {
    MembershipReport r;
    r.profile = profile.name();
    r.n = n;
    r.probe = probe;
    r.continuity = probe_continuity(profile, probe);
    r.lower_bound = probe_lower_bound(profile, probe);
    r.blow_up = probe_blow_up(profile, probe);
    r.integrable = probe_integrable(profile, n, probe);
    return r;
}

}  // namespace gridsing
