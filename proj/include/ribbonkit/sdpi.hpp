#pragma once

// Strong data-processing constant for relative entropy and its relation to
// the ribbon slopes near p = 1 and p = +-infinity.

#include <span>
#include <vector>

#include "ribbonkit/dist.hpp"
#include "ribbonkit/ribbon.hpp"
#include "ribbonkit/search_config.hpp"

namespace ribbonkit {

struct SStarResult {
    double value_lo = 0.0;  // attained at witness_rx
    double value_hi = 0.0;  // search estimate of the supremum, including the limit at P_X
    double local_limit = 0.0;  // rho_m^2: the ratio's limit as R_X -> P_X along the best direction
    std::vector<double> witness_rx;
};

/// R_Y(y) = sum_x P(y|x) R_X(x).
std::vector<double> push_forward(const JointDist& d, std::span<const double> rx);

/// D(R_Y || P_Y) / D(R_X || P_X). Throws OutOfRange when rx equals P_X.
double kl_ratio(const JointDist& d, std::span<const double> rx);

/// sup over R_X != P_X of kl_ratio. Grid over the simplex (201 points for
/// |X| = 2, 41 per dimension for |X| = 3) plus multistart ascent; points
/// within L1 distance 1e-4 of P_X are excluded. Throws ConstantX when X
/// has a single symbol.
SStarResult s_star(const JointDist& d, const SearchConfig& cfg = {});

/// Ent(E[g(Y)|X]) / Ent(g(Y)). Throws ConstantG when g is constant.
double ent_ratio(const JointDist& d, std::span<const double> g);

struct LimitEntry {
    double p = 0.0;
    Bracket s;
    double deviation = 0.0;  // max distance from the reference to either bracket end
};

struct LimitReport {
    double reference = 0.0;
    std::vector<LimitEntry> entries;
    double max_deviation = 0.0;
    /// Deviations do not grow (beyond 1e-3) as p approaches the limit.
    /// Advisory only: the limits carry no convergence rate.
    bool pass = false;
};

/// s_p at p = 1 +- eps against s*(Y;X). eps values must lie in (0, 0.5].
LimitReport check_limit_p_to_1(const JointDist& d, std::span<const double> eps_list, const SearchConfig& cfg = {},
                               double tol = 1e-5);

/// s_p at each p (|p| >= 4) against s*(X;Y).
LimitReport check_limit_p_to_inf(const JointDist& d, std::span<const double> p_list, const SearchConfig& cfg = {},
                                 double tol = 1e-5);

/// Second-order bounds on ||Z||_{1+u} for Z >= 0 with E Z = 1, K = max Z:
///   1 + u Ent(Z) - u^2 L1(K) <= ||Z||_{1+u} <= 1 + u Ent(Z) + u^2 L0(K)
/// with L0(K) = max{K^u, 1}/2 * max_{0<=z<=K} z log^2 z and
///      L1(K) = m + m^2/2, m = max_{0<=z<=K} |z log z|.
struct NormSandwich {
    double lower = 0.0;
    double norm = 0.0;
    double upper = 0.0;
    double l0 = 0.0;
    double l1 = 0.0;
};

NormSandwich norm_sandwich(std::span<const double> weights, std::span<const double> z, double u);

}  // namespace ribbonkit
