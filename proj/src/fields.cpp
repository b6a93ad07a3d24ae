#include "gridsing/fields.hpp"

#include <cmath>
#include <limits>

#include "gridsing/error.hpp"

namespace gridsing {

FieldFamily::FieldFamily(Domain domain, SigmaProfile profile, GridIndex m)
    : domain_(std::make_shared<const Domain>(std::move(domain))), profile_(std::move(profile)), m_(m),
      domain_measure_(to_double(domain_->measure())), cache_(std::make_shared<Cache>()) {
    if (m_ < 1) throw Error(ErrorCode::InvalidArgument, "m must be >= 1");
}

FieldFamily::FieldFamily(Domain domain, SigmaProfile profile)
    : FieldFamily(domain, std::move(profile), minimal_m(domain)) {}

std::shared_ptr<const NodeSet> FieldFamily::nodes(GridIndex t) const {
    {
        std::lock_guard lock(cache_->mu);
        if (auto it = cache_->sets.find(t); it != cache_->sets.end()) return it->second;
    }
    auto set = std::make_shared<const NodeSet>(enumerate_nodes(*domain_, t));
    std::lock_guard lock(cache_->mu);
    return cache_->sets.emplace(t, std::move(set)).first->second;
}

NuField::NuField(FieldFamily family, GridIndex t) : family_(std::move(family)), t_(t) {
    if (t_ <= family_.m()) throw Error(ErrorCode::InvalidArgument, "field index t must exceed m");
    nodes_ = family_.nodes(t_);
    if (nodes_->empty()) throw Error(ErrorCode::InvalidArgument, "X_t is empty; m is not admissible for this domain");
}

double NuField::value_at_scaled_radius(double u) const {
    const auto& sigma = family_.profile();
    return u < 1.0 ? sigma(u) : sigma(1.0);
}

NuField::Location NuField::locate(std::span<const Rational> x) const {
    if (x.size() != family_.dim() || !family_.domain().contains(x)) {
        throw Error(ErrorCode::OutsideDomain, "evaluation point outside the domain");
    }
    const std::size_t n = x.size();
    const Rational tt(Integer(static_cast<unsigned long>(t_)));
    std::vector<std::int64_t> index(n);
    Rational dist_sq = 0;
    Location loc;
    for (std::size_t d = 0; d < n; ++d) {
        const Integer k = round_half_up(Rational(x[d] * tt));
        index[d] = k.get_si();
        const Rational diff = x[d] - Rational(k) / tt;
        dist_sq += diff * diff;
        const double dd = to_double(diff);
        loc.dist_sq += dd * dd;
    }
    const Rational radius_sq(1, 4 * static_cast<unsigned long>(t_) * static_cast<unsigned long>(t_));
    loc.in_ball = dist_sq < radius_sq && nodes_->contains(index);
    loc.at_node = loc.in_ball && dist_sq == 0;
    return loc;
}

FieldValue NuField::eval(std::span<const Rational> x) const {
    const Location loc = locate(x);
    const auto& sigma = family_.profile();
    if (loc.at_node) return {sigma(0.0), true};
    if (loc.in_ball) return {sigma(2.0 * static_cast<double>(t_) * std::sqrt(loc.dist_sq)), false};
    return {sigma(1.0), false};
}

FieldValue NuField::eval(std::span<const double> x) const {
    RationalVec q;
    q.reserve(x.size());
    for (double v : x) q.push_back(from_double(v));
    const Location loc = locate(q);
    const auto& sigma = family_.profile();
    if (loc.at_node) return {sigma(0.0), true};
    if (!loc.in_ball) return {sigma(1.0), false};
    // Same arithmetic as the batch kernels, so both paths give identical values.
    const double td = static_cast<double>(t_);
    double acc = 0.0;
    for (double v : x) {
        const double s = v * td;
        const double diff = s - std::nearbyint(s);
        acc = acc + diff * diff;
    }
    return {value_at_scaled_radius(2.0 * std::sqrt(acc)), false};
}

void NuField::scaled_radius_batch(const simd::PointBatch& points, std::vector<double>& u) const {
    simd::NearestNodes nn;
    simd::nearest_node(points, static_cast<double>(t_), nn);
    u.resize(points.count);
    std::vector<std::int64_t> idx(points.dim);
    for (std::size_t i = 0; i < points.count; ++i) {
        u[i] = std::numeric_limits<double>::infinity();
        if (nn.scaled[i] < 1.0) {
            for (std::size_t d = 0; d < points.dim; ++d) idx[d] = static_cast<std::int64_t>(nn.index[d * points.count + i]);
            if (nodes_->contains(idx)) u[i] = nn.scaled[i];
        }
    }
}

void NuField::eval_batch(const simd::PointBatch& points, std::vector<double>& values,
                         std::vector<std::uint8_t>& singular) const {
    std::vector<double> u;
    scaled_radius_batch(points, u);
    values.resize(points.count);
    singular.resize(points.count);
    const auto& sigma = family_.profile();
    const double outside = sigma(1.0);
    for (std::size_t i = 0; i < points.count; ++i) {
        singular[i] = u[i] == 0.0;
        values[i] = u[i] < 1.0 ? sigma(u[i]) : outside;
    }
}

MuField::MuField(FieldFamily family, GridIndex t) : family_(std::move(family)), t_(t) {
    if (t_ < 1) throw Error(ErrorCode::InvalidArgument, "mu index must be >= 1");
    terms_.reserve(t_);
    for (GridIndex k = 1; k <= t_; ++k) terms_.emplace_back(family_, family_.m() + k);
}

FieldValue MuField::eval(std::span<const double> x) const {
    RationalVec q;
    q.reserve(x.size());
    for (double v : x) q.push_back(from_double(v));
    return eval(std::span<const Rational>(q));
}

FieldValue MuField::eval(std::span<const Rational> x) const {
    FieldValue acc;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        const FieldValue v = terms_[k].eval(x);
        const double kk = static_cast<double>(k + 1);
        acc.value += v.value / (kk * kk);
        acc.singular = acc.singular || v.singular;
    }
    return acc;
}

void MuField::eval_batch(const simd::PointBatch& points, std::vector<double>& values,
                         std::vector<std::uint8_t>& singular) const {
    values.assign(points.count, 0.0);
    singular.assign(points.count, 0);
    std::vector<double> v;
    std::vector<std::uint8_t> s;
    for (std::size_t k = 0; k < terms_.size(); ++k) {
        terms_[k].eval_batch(points, v, s);
        const double kk = static_cast<double>(k + 1);
        for (std::size_t i = 0; i < points.count; ++i) {
            values[i] += v[i] / (kk * kk);
            singular[i] = singular[i] | s[i];
        }
    }
}

PowerView::PowerView(MuField field, double lambda) : field_(std::move(field)), lambda_(lambda) {
    if (!(lambda_ > 1.0)) throw Error(ErrorCode::InvalidArgument, "power transform needs lambda > 1");
}

FieldValue PowerView::eval(std::span<const double> x) const {
    FieldValue v = field_.eval(x);
    v.value = apply(v.value, lambda_);
    return v;
}

}  // namespace gridsing
