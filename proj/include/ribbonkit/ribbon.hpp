#pragma once

// p-norms for every real p, Hoelder conjugates, and numerical membership
// tests for the hypercontractivity ribbon of a pair distribution.
//
// A pair (p, q) is tested in one of two regimes:
//   forward  1 <= q <= p, p > 1:  ||E[g(Y)|X]||_p <= ||g(Y)||_q  for all g
//   reverse  p <= q <= 1, p < 1:  ||E[g(Y)|X]||_p >= ||g(Y)||_q  for all g > 0
// Violations are certified by a witness g that can be re-evaluated; passes
// are the outcome of a finite search and carry no global guarantee.

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "ribbonkit/dist.hpp"
#include "ribbonkit/search_config.hpp"

namespace ribbonkit {

/// A witness must violate the tested inequality by more than this.
inline constexpr double kWitnessMargin = 1e-9;
/// Slacks above -kSearchNoiseFloor are indistinguishable from rounding.
inline constexpr double kSearchNoiseFloor = 1e-13;

/// (sum_i w_i |v_i|^p)^(1/p); exp(sum_i w_i log|v_i|) for p = 0. Entries with
/// zero weight are ignored; for p <= 0 any zero value with positive weight
/// gives 0.
double p_norm(std::span<const double> values, std::span<const double> weights, double p);

/// p / (p - 1), with 0 mapped to 0. Throws ConjugateOfOne for p = 1.
double holder_conjugate(double p);

/// E[g(Y) | X = x] for every x.
std::vector<double> cond_exp(const JointDist& d, std::span<const double> g);

enum class Verdict { PassNumerical, FailWitnessed };

struct RibbonVerdict {
    Verdict status = Verdict::PassNumerical;
    std::optional<std::vector<double>> witness_g;  // normalized to ||g||_q = 1
    double slack = 0.0;                            // worst signed margin found
};

enum class BracketKind { WitnessLoSearchHi, WitnessHiSearchLo, SearchBoth, Exact };

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    BracketKind kind = BracketKind::SearchBoth;

    double width() const noexcept { return hi - lo; }
    bool contains(double v, double tol = 0.0) const noexcept { return v >= lo - tol && v <= hi + tol; }
};

/// Signed margin of the ribbon inequality at g, after scaling g to unit
/// q-norm: ||g||_q - ||E[g|X]||_p (forward) or ||E[g|X]||_p - ||g||_q
/// (reverse). Negative means g violates membership of (p, q).
double ribbon_slack(const JointDist& d, double p, double q, std::span<const double> g);

/// Searches strictly positive g for a violation of (p, q) membership. With
/// stop_at_witness the search returns as soon as a certifying g is found.
/// Throws RegimeError when (p, q) lies in neither regime.
RibbonVerdict is_hypercontractive(const JointDist& d, double p, double q, const SearchConfig& cfg = {},
                                  bool stop_at_witness = false);

/// Result of locating the non-trivial ribbon boundary at a fixed p.
struct RibbonBoundary {
    Bracket bracket;
    double raw_lo = 0.0;  // bracket before clamping
    double raw_hi = 0.0;
    /// Last probe at which the search saw no violation above the noise
    /// floor, in the bracket's units. The bracket's search side extends this
    /// by half a resolution step.
    double search_edge = 0.0;
    std::optional<double> witness_q;  // q of the certified side, when one exists
    std::vector<double> witness_g;
};

/// Bracket on q*_p: the infimum of admissible q >= 1 for p > 1, the supremum
/// of admissible q <= 1 for p < 1. The certified side is lo for p > 1 and hi
/// for p < 1. Throws RegimeError for p = 1.
RibbonBoundary q_star(const JointDist& d, double p, double tol = 1e-5, const SearchConfig& cfg = {});

/// Bracket on s_p = (q*_p - 1) / (p - 1), clamped to [0, 1]. Its lower end
/// is always the certified one.
RibbonBoundary s_p(const JointDist& d, double p, double tol = 1e-5, const SearchConfig& cfg = {});

enum class Direction { Forward, Reverse };

/// Two-function Hoelder-contraction inequality on a target table Q:
///   sum lambda_u mu_v Q(u,v)  <=  ||lambda||_{p'} ||mu||_q   (forward)
///   sum lambda_u mu_v Q(u,v)  >=  ||lambda||_{p'} ||mu||_q   (reverse)
/// Returns LHS - RHS (forward) or RHS - LHS (reverse); a positive value
/// means this instantiation rules out (p, q) for Q. Reverse mode requires
/// strictly positive weights (NonPositiveWeights).
double two_function_check(const JointDist& q_dist, std::span<const double> lambdas, std::span<const double> mus,
                          double p, double q, Direction direction);

}  // namespace ribbonkit
