#pragma once

// Bounded domains given as finite unions of open axis-aligned rational boxes.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gridsing/rational.hpp"

namespace gridsing {

inline constexpr std::size_t kMinDim = 2;
inline constexpr std::size_t kMaxDim = 8;

/// Open box prod_i (lower[i], upper[i]).
struct Box {
    RationalVec lower;
    RationalVec upper;

    std::size_t dim() const { return lower.size(); }
    Rational volume() const;
    Rational min_side() const;
    bool contains(std::span<const Rational> x) const;
    bool contains(std::span<const double> x) const;
    bool contains_box(const Box& other) const;  ///< open-in-open inclusion
};

/// Open cube centred at `center` with the given side length: |x_i - c_i| < side/2.
Box make_cube(std::span<const Rational> center, const Rational& side);

/// Intersection of two open boxes; empty optional-like result signalled by `nonempty == false`.
struct BoxIntersection {
    Box box;
    bool nonempty = false;
};
BoxIntersection intersect(const Box& a, const Box& b);

class Domain {
  public:
    Domain() = default;
    /// Validates: dim in [2, 8], every box has that dimension and positive sides.
    Domain(std::size_t dim, std::vector<Box> boxes);

    std::size_t dim() const { return dim_; }
    const std::vector<Box>& boxes() const { return boxes_; }

    /// Exact Lebesgue measure by inclusion-exclusion over box overlaps.
    Rational measure() const;

    /// Smallest box containing every box of the domain.
    Box bounding_box() const;

    bool contains(std::span<const Rational> x) const;
    bool contains(std::span<const double> x) const;

    /// Exact set containment of an open box in the union (open box subtraction).
    bool contains_open_box(const Box& q) const;

    /// The domain clipped to an open box (boxes intersected, empties dropped).
    /// The result may have no boxes; it is then not a valid Domain for most
    /// operations but still reports measure zero.
    Domain clipped_to(const Box& q) const;

    bool empty() const { return boxes_.empty(); }

    /// Text form: "dim n" then one "box lo_1 .. lo_n : hi_1 .. hi_n" line per box.
    std::string to_text() const;
    static Domain parse(std::string_view text);
    static Domain load(const std::string& path);

    /// (0,1)^n.
    static Domain unit_cube(std::size_t dim);

  private:
    std::size_t dim_ = 0;
    std::vector<Box> boxes_;
};

/// Exact point-in-domain test for double coordinates without rational
/// promotion: bounds are replaced by the nearest doubles on the inner side.
class DoubleMembership {
  public:
    explicit DoubleMembership(const Domain& domain);
    /// Point i of a structure-of-arrays batch with `stride` points per coordinate.
    bool contains(const double* coords, std::size_t stride) const;

  private:
    struct Bound {
        double value;
        bool exact;  ///< bound is representable; comparison must then be strict
    };
    std::size_t dim_ = 0;
    std::vector<std::vector<Bound>> lower_, upper_;  // per box, per axis
};

}  // namespace gridsing
