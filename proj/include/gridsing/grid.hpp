#pragma once

// Periodic grids Y_t, admissible node sets X_t, and unions of node-centred balls.

#include <cstdint>
#include <span>
#include <vector>

#include "gridsing/domain.hpp"
#include "gridsing/rational.hpp"

namespace gridsing {

using GridIndex = std::uint64_t;

/// Node y of the grid of spacing 1/t, stored as the integer vector t*y.
struct GridNode {
    GridIndex t = 1;
    std::vector<std::int64_t> index;

    RationalVec coords() const;
    std::vector<double> coords_double() const;
    /// Open cube of side 1/t centred at the node.
    Box cube() const;

    friend bool operator==(const GridNode&, const GridNode&) = default;
    friend auto operator<=>(const GridNode& a, const GridNode& b) { return a.index <=> b.index; }
};

/// Nodes of the grid whose cube lies in the domain, in lexicographic order.
class NodeSet {
  public:
    NodeSet() = default;
    NodeSet(GridIndex t, std::size_t dim, std::vector<GridNode> nodes);

    GridIndex t() const { return t_; }
    std::size_t dim() const { return dim_; }
    std::size_t count() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }
    const std::vector<GridNode>& nodes() const { return nodes_; }

    /// O(1) membership of the node with integer index t*y.
    bool contains(std::span<const std::int64_t> index) const;

  private:
    GridIndex t_ = 0;
    std::size_t dim_ = 0;
    std::vector<GridNode> nodes_;
    // Dense occupancy mask over the index bounding box of the nodes.
    std::vector<std::int64_t> mask_lo_;
    std::vector<std::int64_t> mask_extent_;
    std::vector<std::uint8_t> mask_;
};

/// All y with t*y integral and Q_t(y) inside the domain (exact containment).
NodeSet enumerate_nodes(const Domain& domain, GridIndex t);

/// Least m >= 1 such that X_t is nonempty for every t > m.
/// Throws SearchExhausted when m would exceed `search_limit`.
GridIndex minimal_m(const Domain& domain, GridIndex search_limit = 1000);

/// Union of open balls of one common radius around nodes of one grid.
struct BallUnion {
    std::vector<GridNode> centers;
    Rational radius;

    /// Pairwise center distance > 2 * radius (exact).
    bool pairwise_disjoint() const;
};

/// G_t: balls of radius 1/(2t) around X_t.
BallUnion grid_balls(const NodeSet& nodes);
/// Shrunk union: balls of radius 1/(2 t k) around the nodes of X_t.
BallUnion shrunk_balls(const NodeSet& nodes, std::uint64_t k);

double ball_union_measure(const BallUnion& bu, std::size_t dim);

struct UnitBallConstants {
    double ball_volume;   ///< meas B(0,1)
    double sphere_area;   ///< kappa_n = n * meas B(0,1)
    double alpha;         ///< 2^-n * meas B(0,1)
};

UnitBallConstants unit_ball_constants(std::size_t dim);

}  // namespace gridsing
