#pragma once

// The singular fields nu_t (sigma(1) off the node balls, sigma(2t|x-y|) inside
// the ball around node y) and their weighted partial sums mu_t.

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "gridsing/domain.hpp"
#include "gridsing/grid.hpp"
#include "gridsing/sigma.hpp"
#include "gridsing/simd/kernels.hpp"

namespace gridsing {

struct FieldValue {
    double value = 0.0;
    bool singular = false;  ///< x coincided with a node; value is sigma(0)
};

/// (sigma, domain, m) with lazily enumerated node sets shared by all fields
/// built from it. Copies share the cache; safe for concurrent use.
class FieldFamily {
  public:
    FieldFamily(Domain domain, SigmaProfile profile, GridIndex m);
    /// m chosen as the minimal admissible index of the domain.
    FieldFamily(Domain domain, SigmaProfile profile);

    const Domain& domain() const { return *domain_; }
    const SigmaProfile& profile() const { return profile_; }
    GridIndex m() const { return m_; }
    std::size_t dim() const { return domain_->dim(); }
    double domain_measure() const { return domain_measure_; }

    /// X_t, enumerated once per t.
    std::shared_ptr<const NodeSet> nodes(GridIndex t) const;

  private:
    struct Cache {
        std::mutex mu;
        std::map<GridIndex, std::shared_ptr<const NodeSet>> sets;
    };
    std::shared_ptr<const Domain> domain_;
    SigmaProfile profile_;
    GridIndex m_;
    double domain_measure_;
    std::shared_ptr<Cache> cache_;
};

class NuField {
  public:
    /// Requires t > m and X_t nonempty.
    NuField(FieldFamily family, GridIndex t);

    const FieldFamily& family() const { return family_; }
    GridIndex t() const { return t_; }
    const NodeSet& nodes() const { return *nodes_; }
    const SigmaProfile& profile() const { return family_.profile(); }
    double ball_radius() const { return 0.5 / static_cast<double>(t_); }

    /// Exact classification (double promoted to rational). Throws OutsideDomain.
    FieldValue eval(std::span<const double> x) const;
    FieldValue eval(std::span<const Rational> x) const;

    /// Batch evaluation through the SIMD nearest-node kernel. Points must lie
    /// in the domain; this is not re-checked.
    void eval_batch(const simd::PointBatch& points, std::vector<double>& values, std::vector<std::uint8_t>& singular) const;

    /// u = 2t|x - y| for the node ball containing each point, +inf off G_t.
    void scaled_radius_batch(const simd::PointBatch& points, std::vector<double>& u) const;

    /// Value from the scaled radius u = 2t|x - y| (u >= 1: outside the ball).
    double value_at_scaled_radius(double u) const;

  private:
    struct Location {
        bool in_ball = false;
        bool at_node = false;
        double dist_sq = 0.0;  ///< |x - y|^2 from the exact difference
    };
    Location locate(std::span<const Rational> x) const;

    FieldFamily family_;
    GridIndex t_;
    std::shared_ptr<const NodeSet> nodes_;
};

/// sum_{k=1}^t k^-2 nu_{m+k}.
class MuField {
  public:
    MuField(FieldFamily family, GridIndex t);

    const FieldFamily& family() const { return family_; }
    GridIndex t() const { return t_; }
    const std::vector<NuField>& terms() const { return terms_; }

    FieldValue eval(std::span<const double> x) const;
    FieldValue eval(std::span<const Rational> x) const;
    void eval_batch(const simd::PointBatch& points, std::vector<double>& values, std::vector<std::uint8_t>& singular) const;

  private:
    FieldFamily family_;
    GridIndex t_;
    std::vector<NuField> terms_;
};

/// Pointwise view mu^{1/lambda} for lambda > 1.
class PowerView {
  public:
    PowerView(MuField field, double lambda);

    double lambda() const { return lambda_; }
    const MuField& base() const { return field_; }
    FieldValue eval(std::span<const double> x) const;
    static double apply(double mu_value, double lambda) { return std::pow(mu_value, 1.0 / lambda); }

  private:
    MuField field_;
    double lambda_;
};

}  // namespace gridsing
