#include "gridsing/domain.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "gridsing/error.hpp"

namespace gridsing {

Rational Box::volume() const {
    Rational v = 1;
    for (std::size_t i = 0; i < dim(); ++i) v *= upper[i] - lower[i];
    return v;
}

Rational Box::min_side() const {
    Rational s = upper[0] - lower[0];
    for (std::size_t i = 1; i < dim(); ++i) {
        Rational side = upper[i] - lower[i];
        if (side < s) s = side;
    }
    return s;
}

bool Box::contains(std::span<const Rational> x) const {
    for (std::size_t i = 0; i < dim(); ++i) {
        if (!(lower[i] < x[i] && x[i] < upper[i])) return false;
    }
    return true;
}

bool Box::contains(std::span<const double> x) const {
    // Compare exactly: the double is promoted, never the bound rounded.
    for (std::size_t i = 0; i < dim(); ++i) {
        Rational xi(x[i]);
        if (!(lower[i] < xi && xi < upper[i])) return false;
    }
    return true;
}

bool Box::contains_box(const Box& other) const {
    for (std::size_t i = 0; i < dim(); ++i) {
        if (other.lower[i] < lower[i] || upper[i] < other.upper[i]) return false;
    }
    return true;
}

Box make_cube(std::span<const Rational> center, const Rational& side) {
    Box b;
    Rational half = side / 2;
    for (const auto& c : center) {
        b.lower.push_back(c - half);
        b.upper.push_back(c + half);
    }
    return b;
}

BoxIntersection intersect(const Box& a, const Box& b) {
    BoxIntersection r;
    r.box.lower.resize(a.dim());
    r.box.upper.resize(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        r.box.lower[i] = a.lower[i] < b.lower[i] ? b.lower[i] : a.lower[i];
        r.box.upper[i] = a.upper[i] < b.upper[i] ? a.upper[i] : b.upper[i];
        if (!(r.box.lower[i] < r.box.upper[i])) return r;
    }
    r.nonempty = true;
    return r;
}

namespace {

// A box whose faces may individually be open or closed; the residual of an
// open box minus open boxes keeps the removed boxes' boundary faces.
struct Interval {
    Rational lo, hi;
    bool lo_closed = false;
    bool hi_closed = false;

    bool empty() const {
        if (lo < hi) return false;
        return !(lo == hi && lo_closed && hi_closed);
    }
};

using Piece = std::vector<Interval>;

bool piece_empty(const Piece& p) {
    for (const auto& iv : p) {
        if (iv.empty()) return true;
    }
    return false;
}

// Raises the lower end of iv to `bound` (closed or open) if that tightens it.
void clip_lower(Interval& iv, const Rational& bound, bool closed) {
    if (iv.lo < bound) {
        iv.lo = bound;
        iv.lo_closed = closed;
    } else if (iv.lo == bound) {
        iv.lo_closed = iv.lo_closed && closed;
    }
}

void clip_upper(Interval& iv, const Rational& bound, bool closed) {
    if (bound < iv.hi) {
        iv.hi = bound;
        iv.hi_closed = closed;
    } else if (iv.hi == bound) {
        iv.hi_closed = iv.hi_closed && closed;
    }
}

// Appends (piece \ open box b) to out as disjoint pieces.
void subtract(const Piece& piece, const Box& b, std::vector<Piece>& out) {
    Piece rest = piece;
    for (std::size_t d = 0; d < piece.size(); ++d) {
        Piece below = rest;
        clip_upper(below[d], b.lower[d], true);
        if (!piece_empty(below)) out.push_back(std::move(below));

        Piece above = rest;
        clip_lower(above[d], b.upper[d], true);
        if (!piece_empty(above)) out.push_back(std::move(above));

        clip_lower(rest[d], b.lower[d], false);
        clip_upper(rest[d], b.upper[d], false);
        if (piece_empty(rest)) return;
    }
    // What is left of `rest` lies inside b and is removed.
}

Rational inclusion_exclusion(const std::vector<Box>& boxes, std::size_t start, const Box& acc) {
    Rational total = 0;
    for (std::size_t j = start; j < boxes.size(); ++j) {
        BoxIntersection ix = intersect(acc, boxes[j]);
        if (!ix.nonempty) continue;
        Rational v = ix.box.volume();
        Rational deeper = inclusion_exclusion(boxes, j + 1, ix.box);
        total += v - deeper;
    }
    return total;
}

}  // namespace

Domain::Domain(std::size_t dim, std::vector<Box> boxes) : dim_(dim), boxes_(std::move(boxes)) {
    if (dim_ < kMinDim || dim_ > kMaxDim) {
        throw Error(ErrorCode::InvalidArgument,
                    "dimension must be in [" + std::to_string(kMinDim) + ", " + std::to_string(kMaxDim) + "]");
    }
    for (const auto& b : boxes_) {
        if (b.lower.size() != dim_ || b.upper.size() != dim_) {
            throw Error(ErrorCode::InvalidArgument, "box dimension mismatch");
        }
        for (std::size_t i = 0; i < dim_; ++i) {
            if (!(b.lower[i] < b.upper[i])) throw Error(ErrorCode::InvalidArgument, "box side must be positive");
        }
    }
}

Rational Domain::measure() const {
    // sum_j vol(B_j) - vol(B_j ∩ (B_{j+1} ∪ ...)) recursively; pruned on empty overlaps.
    Rational total = 0;
    for (std::size_t j = 0; j < boxes_.size(); ++j) {
        total += boxes_[j].volume() - inclusion_exclusion(boxes_, j + 1, boxes_[j]);
    }
    return total;
}

Box Domain::bounding_box() const {
    if (boxes_.empty()) throw Error(ErrorCode::InvalidArgument, "empty domain has no bounding box");
    Box bb = boxes_.front();
    for (const auto& b : boxes_) {
        for (std::size_t i = 0; i < dim_; ++i) {
            if (b.lower[i] < bb.lower[i]) bb.lower[i] = b.lower[i];
            if (bb.upper[i] < b.upper[i]) bb.upper[i] = b.upper[i];
        }
    }
    return bb;
}

bool Domain::contains(std::span<const Rational> x) const {
    for (const auto& b : boxes_) {
        if (b.contains(x)) return true;
    }
    return false;
}

bool Domain::contains(std::span<const double> x) const {
    for (const auto& b : boxes_) {
        if (b.contains(x)) return true;
    }
    return false;
}

bool Domain::contains_open_box(const Box& q) const {
    for (const auto& b : boxes_) {
        if (b.contains_box(q)) return true;
    }
    std::vector<Piece> residual;
    Piece start(q.dim());
    for (std::size_t d = 0; d < q.dim(); ++d) start[d] = Interval{q.lower[d], q.upper[d], false, false};
    residual.push_back(std::move(start));
    for (const auto& b : boxes_) {
        std::vector<Piece> next;
        for (const auto& p : residual) subtract(p, b, next);
        residual = std::move(next);
        if (residual.empty()) return true;
    }
    return residual.empty();
}

Domain Domain::clipped_to(const Box& q) const {
    Domain out;
    out.dim_ = dim_;
    for (const auto& b : boxes_) {
        BoxIntersection ix = intersect(b, q);
        if (ix.nonempty) out.boxes_.push_back(std::move(ix.box));
    }
    return out;
}

std::string Domain::to_text() const {
    std::ostringstream os;
    os << "dim " << dim_ << "\n";
    for (const auto& b : boxes_) {
        os << "box";
        for (const auto& v : b.lower) os << ' ' << to_string(v);
        os << " :";
        for (const auto& v : b.upper) os << ' ' << to_string(v);
        os << "\n";
    }
    return os.str();
}

Domain Domain::parse(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string line;
    std::size_t dim = 0;
    std::vector<Box> boxes;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (key == "dim") {
            if (!(ls >> dim)) throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": bad dim");
        } else if (key == "box") {
            if (dim == 0) throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": box before dim");
            Box b;
            std::string tok;
            bool upper = false;
            while (ls >> tok) {
                if (tok == ":") {
                    upper = true;
                    continue;
                }
                (upper ? b.upper : b.lower).push_back(parse_rational(tok));
            }
            if (b.lower.size() != dim || b.upper.size() != dim) {
                throw Error(ErrorCode::ParseError,
                            "line " + std::to_string(lineno) + ": expected " + std::to_string(dim) +
                                " lower and upper coordinates");
            }
            boxes.push_back(std::move(b));
        } else {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    if (boxes.empty()) throw Error(ErrorCode::ParseError, "domain has no boxes");
    return Domain(dim, std::move(boxes));
}

Domain Domain::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open domain file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

Domain Domain::unit_cube(std::size_t dim) {
    Box b;
    b.lower.assign(dim, Rational(0));
    b.upper.assign(dim, Rational(1));
    return Domain(dim, {b});
}

namespace {

// Smallest double >= q.
double round_up(const Rational& q) {
    double d = q.get_d();
    while (Rational(d) < q) d = std::nextafter(d, std::numeric_limits<double>::infinity());
    while (true) {
        double below = std::nextafter(d, -std::numeric_limits<double>::infinity());
        if (Rational(below) >= q) d = below;
        else break;
    }
    return d;
}

// Largest double <= q.
double round_down(const Rational& q) { return -round_up(Rational(-q)); }

}  // namespace

DoubleMembership::DoubleMembership(const Domain& domain) : dim_(domain.dim()) {
    for (const auto& b : domain.boxes()) {
        std::vector<Bound> lo, hi;
        for (std::size_t d = 0; d < dim_; ++d) {
            const double l = round_up(b.lower[d]);
            const double h = round_down(b.upper[d]);
            lo.push_back({l, Rational(l) == b.lower[d]});
            hi.push_back({h, Rational(h) == b.upper[d]});
        }
        lower_.push_back(std::move(lo));
        upper_.push_back(std::move(hi));
    }
}

bool DoubleMembership::contains(const double* coords, std::size_t stride) const {
    for (std::size_t b = 0; b < lower_.size(); ++b) {
        bool inside = true;
        for (std::size_t d = 0; d < dim_ && inside; ++d) {
            const double x = coords[d * stride];
            const Bound& lo = lower_[b][d];
            const Bound& hi = upper_[b][d];
            inside = (lo.exact ? x > lo.value : x >= lo.value) && (hi.exact ? x < hi.value : x <= hi.value);
        }
        if (inside) return true;
    }
    return false;
}

}  // namespace gridsing
