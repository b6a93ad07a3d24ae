#include "gridsing/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gridsing/error.hpp"

namespace gridsing {

RationalVec GridNode::coords() const {
    RationalVec c;
    c.reserve(index.size());
    for (auto k : index) {
        Rational q(Integer(static_cast<long>(k)), Integer(static_cast<unsigned long>(t)));
        q.canonicalize();
        c.push_back(q);
    }
    return c;
}

std::vector<double> GridNode::coords_double() const {
    std::vector<double> c;
    c.reserve(index.size());
    for (auto k : index) c.push_back(static_cast<double>(k) / static_cast<double>(t));
    return c;
}

Box GridNode::cube() const {
    RationalVec c = coords();
    return make_cube(c, Rational(1, static_cast<unsigned long>(t)));
}

NodeSet::NodeSet(GridIndex t, std::size_t dim, std::vector<GridNode> nodes)
    : t_(t), dim_(dim), nodes_(std::move(nodes)) {
    std::sort(nodes_.begin(), nodes_.end());
    if (nodes_.empty()) return;
    mask_lo_ = nodes_.front().index;
    std::vector<std::int64_t> hi = nodes_.front().index;
    for (const auto& n : nodes_) {
        for (std::size_t d = 0; d < dim_; ++d) {
            mask_lo_[d] = std::min(mask_lo_[d], n.index[d]);
            hi[d] = std::max(hi[d], n.index[d]);
        }
    }
    mask_extent_.resize(dim_);
    std::size_t cells = 1;
    for (std::size_t d = 0; d < dim_; ++d) {
        mask_extent_[d] = hi[d] - mask_lo_[d] + 1;
        cells *= static_cast<std::size_t>(mask_extent_[d]);
    }
    mask_.assign(cells, 0);
    for (const auto& n : nodes_) {
        std::size_t flat = 0;
        for (std::size_t d = 0; d < dim_; ++d) {
            flat = flat * static_cast<std::size_t>(mask_extent_[d]) + static_cast<std::size_t>(n.index[d] - mask_lo_[d]);
        }
        mask_[flat] = 1;
    }
}

bool NodeSet::contains(std::span<const std::int64_t> index) const {
    if (mask_.empty()) return false;
    std::size_t flat = 0;
    for (std::size_t d = 0; d < dim_; ++d) {
        std::int64_t off = index[d] - mask_lo_[d];
        if (off < 0 || off >= mask_extent_[d]) return false;
        flat = flat * static_cast<std::size_t>(mask_extent_[d]) + static_cast<std::size_t>(off);
    }
    return mask_[flat] != 0;
}

namespace {

// Index range [lo, hi] of k with the closed cube [(2k-1)/(2t), (2k+1)/(2t)]
// inside the closed interval [a, b], i.e. open cube inside open interval.
std::pair<std::int64_t, std::int64_t> cube_index_range(const Rational& a, const Rational& b, GridIndex t) {
    Rational tt(Integer(static_cast<unsigned long>(t)));
    Integer lo = ceil(Rational(tt * a + Rational(1, 2)));
    Integer hi = floor(Rational(tt * b - Rational(1, 2)));
    return {lo.get_si(), hi.get_si()};
}

}  // namespace

NodeSet enumerate_nodes(const Domain& domain, GridIndex t) {
    if (t < 1) throw Error(ErrorCode::InvalidArgument, "grid index must be >= 1");
    const std::size_t n = domain.dim();
    const Box bb = domain.bounding_box();

    std::vector<std::int64_t> lo(n), hi(n);
    for (std::size_t d = 0; d < n; ++d) {
        auto [l, h] = cube_index_range(bb.lower[d], bb.upper[d], t);
        if (l > h) return NodeSet(t, n, {});
        lo[d] = l;
        hi[d] = h;
    }

    // Per-box index ranges: a candidate inside one of them is certainly admissible.
    struct Range {
        std::vector<std::int64_t> lo, hi;
    };
    std::vector<Range> box_ranges;
    for (const auto& b : domain.boxes()) {
        Range r{std::vector<std::int64_t>(n), std::vector<std::int64_t>(n)};
        for (std::size_t d = 0; d < n; ++d) {
            auto [l, h] = cube_index_range(b.lower[d], b.upper[d], t);
            r.lo[d] = l;
            r.hi[d] = h;
        }
        box_ranges.push_back(std::move(r));
    }
    const bool single_box = domain.boxes().size() == 1;

    std::vector<GridNode> nodes;
    std::vector<std::int64_t> k = lo;
    while (true) {
        bool admitted = false;
        for (const auto& r : box_ranges) {
            bool inside = true;
            for (std::size_t d = 0; d < n && inside; ++d) inside = r.lo[d] <= k[d] && k[d] <= r.hi[d];
            if (inside) {
                admitted = true;
                break;
            }
        }
        if (!admitted && !single_box) {
            GridNode candidate{t, k};
            admitted = domain.contains_open_box(candidate.cube());
        }
        if (admitted) nodes.push_back(GridNode{t, k});

        std::size_t d = n;
        while (d > 0) {
            --d;
            if (++k[d] <= hi[d]) break;
            k[d] = lo[d];
            if (d == 0) return NodeSet(t, n, std::move(nodes));
        }
    }
}

GridIndex minimal_m(const Domain& domain, GridIndex search_limit) {
    if (search_limit < 1) throw Error(ErrorCode::InvalidArgument, "search_limit must be >= 1");
    // A box with smallest side a contains a cube of side a; every t > n/a then
    // has an admissible node, so only t <= floor(n/a) needs enumeration.
    Rational widest = domain.boxes().front().min_side();
    for (const auto& b : domain.boxes()) {
        Rational s = b.min_side();
        if (widest < s) widest = s;
    }
    Rational bound = Rational(static_cast<unsigned long>(domain.dim())) / widest;
    Integer certified = floor(bound);
    GridIndex last_empty = 0;
    for (GridIndex t = 1; Integer(static_cast<unsigned long>(t)) <= certified; ++t) {
        if (t > search_limit) throw Error(ErrorCode::SearchExhausted, "no m within search limit");
        if (enumerate_nodes(domain, t).empty()) last_empty = t;
    }
    GridIndex m = std::max<GridIndex>(1, last_empty);
    if (m > search_limit) throw Error(ErrorCode::SearchExhausted, "no m within search limit");
    return m;
}

bool BallUnion::pairwise_disjoint() const {
    if (centers.size() < 2) return true;
    const GridIndex t = centers.front().t;
    for (const auto& c : centers) {
        if (c.t != t) throw Error(ErrorCode::InvalidArgument, "ball centers from different grids");
    }
    // Distinct nodes of one grid are at least 1/t apart.
    if (2 * radius <= Rational(1, static_cast<unsigned long>(t))) return true;
    Rational tt(Integer(static_cast<unsigned long>(t)));
    Rational min_sq = 4 * radius * radius * tt * tt;  // (2r)^2 in index units
    for (std::size_t i = 0; i < centers.size(); ++i) {
        for (std::size_t j = i + 1; j < centers.size(); ++j) {
            Integer sq = 0;
            for (std::size_t d = 0; d < centers[i].index.size(); ++d) {
                Integer diff(static_cast<long>(centers[i].index[d] - centers[j].index[d]));
                sq += diff * diff;
            }
            if (Rational(sq) < min_sq) return false;
        }
    }
    return true;
}

BallUnion grid_balls(const NodeSet& nodes) { return shrunk_balls(nodes, 1); }

BallUnion shrunk_balls(const NodeSet& nodes, std::uint64_t k) {
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "shrink factor must be >= 1");
    BallUnion bu;
    bu.centers = nodes.nodes();
    bu.radius = Rational(1, static_cast<unsigned long>(2 * nodes.t() * k));
    return bu;
}

double ball_union_measure(const BallUnion& bu, std::size_t dim) {
    if (bu.centers.empty()) return 0.0;
    const double r = to_double(bu.radius);
    return static_cast<double>(bu.centers.size()) * std::pow(r, static_cast<double>(dim)) *
           unit_ball_constants(dim).ball_volume;
}

UnitBallConstants unit_ball_constants(std::size_t dim) {
    if (dim < kMinDim) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 2");
    const double n = static_cast<double>(dim);
    double ball = std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
    UnitBallConstants c{ball, n * ball, std::ldexp(ball, -static_cast<int>(dim))};
    return c;
}

}  // namespace gridsing
