#pragma once

// Finite discrete distributions on product alphabets.
//
// All tables are stored row-major. For a pair distribution the first axis is
// X (rows) and the second is Y (columns); for a k-way tensor the last axis
// varies fastest. Symbols carrying zero marginal mass are pruned at
// construction, so every marginal held by a JointDist or KJointDist is
// strictly positive. The pre-pruning alphabet is remembered so that
// distributions can still be compared on their original alphabets.

#include <cstddef>
#include <span>
#include <vector>

namespace ribbonkit {

class JointDist {
public:
    /// Normalizes, prunes zero-mass rows/columns and caches marginals.
    /// Throws NonFinite, NegativeEntry or ZeroTotalMass.
    static JointDist validate(std::size_t rows, std::size_t cols, std::span<const double> table);
    static JointDist validate(const std::vector<std::vector<double>>& table);

    std::size_t nx() const noexcept { return nx_; }
    std::size_t ny() const noexcept { return ny_; }
    double operator()(std::size_t x, std::size_t y) const noexcept { return p_[x * ny_ + y]; }
    std::span<const double> table() const noexcept { return p_; }
    std::span<const double> px() const noexcept { return px_; }
    std::span<const double> py() const noexcept { return py_; }

    /// Original alphabet sizes and the original index of each kept symbol.
    std::size_t full_nx() const noexcept { return full_nx_; }
    std::size_t full_ny() const noexcept { return full_ny_; }
    std::span<const std::size_t> x_support() const noexcept { return x_support_; }
    std::span<const std::size_t> y_support() const noexcept { return y_support_; }

    /// The same distribution with the roles of X and Y exchanged.
    JointDist transpose() const;

    /// Row of the channel P(y|x).
    std::vector<double> channel_row(std::size_t x) const;

private:
    JointDist() = default;

    std::size_t nx_ = 0;
    std::size_t ny_ = 0;
    std::size_t full_nx_ = 0;
    std::size_t full_ny_ = 0;
    std::vector<double> p_;
    std::vector<double> px_;
    std::vector<double> py_;
    std::vector<std::size_t> x_support_;
    std::vector<std::size_t> y_support_;
};

/// Probability tensor over X_1 x ... x X_k (k >= 2), row-major.
class KJointDist {
public:
    static KJointDist validate(std::vector<std::size_t> shape, std::span<const double> table);

    std::size_t k() const noexcept { return shape_.size(); }
    std::span<const std::size_t> shape() const noexcept { return shape_; }
    std::span<const double> table() const noexcept { return p_; }
    std::span<const double> marginal(std::size_t agent) const { return marginals_.at(agent); }

    /// Probability of a full index tuple.
    double at(std::span<const std::size_t> index) const;

    /// Decode a flat offset into per-agent symbols.
    std::vector<std::size_t> unflatten(std::size_t offset) const;

private:
    KJointDist() = default;

    std::vector<std::size_t> shape_;
    std::vector<double> p_;
    std::vector<std::vector<double>> marginals_;
};

struct Divergence {
    double value = 0.0;  // nats
};

/// DSBS(alpha): uniform X, Y = X xor Ber(alpha).
JointDist dsbs(double alpha);

/// Binary triple whose pairwise marginals are DSBS(ez) for (X,Y), DSBS(ey)
/// for (X,Z) and DSBS(ex) for (Y,Z).
KJointDist dsbs_triple(double ex, double ey, double ez);

/// Product distribution; entry [(x1,x2),(y1,y2)] = d1[x1,y1] * d2[x2,y2],
/// with the combined index x1 * nx2 + x2.
JointDist tensor(const JointDist& d1, const JointDist& d2);

/// Half the L1 distance, measured on the original (pre-pruning) alphabets.
double total_variation(const JointDist& d1, const JointDist& d2);

/// D(mu || nu) in nats for probability vectors mu and nu. Throws
/// SupportViolation when mu is not absolutely continuous with respect to nu.
Divergence kl(std::span<const double> mu, std::span<const double> nu);

/// Ent(Z) = E[Z log Z] - E[Z] log E[Z] with 0 log 0 = 0. Weights are
/// rescaled to sum to one.
double ent_functional(std::span<const double> weights, std::span<const double> values);

/// Pair view of a tensor: rows index the agents in subset_a, columns the
/// agents in subset_b, each flattened row-major in ascending agent order.
/// Agent indices are zero-based.
JointDist group(const KJointDist& kd, std::span<const std::size_t> subset_a,
                std::span<const std::size_t> subset_b);

/// group(kd, {i}, {j}).
JointDist pairwise_marginal(const KJointDist& kd, std::size_t i, std::size_t j);

}  // namespace ribbonkit
