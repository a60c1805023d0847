#pragma once

// Hoelder-contraction regions for k agents. (p_1, ..., p_k) with p_i >= 1
// belongs to H(X_1; ...; X_k) when
//     E[prod_i f_i(X_i)] <= prod_i ||f_i(X_i)||_{p_i}   for all f_i.
// Only the diagonal (p, ..., p) is searched; the tests below decide single
// points of it.

#include <optional>
#include <vector>

#include "ribbonkit/dist.hpp"
#include "ribbonkit/feasibility.hpp"
#include "ribbonkit/ribbon.hpp"
#include "ribbonkit/search_config.hpp"

namespace ribbonkit {

struct DiagVerdict {
    double p = 0.0;
    Verdict status = Verdict::PassNumerical;
    /// One function per agent; the last is the optimal response to the others.
    std::optional<std::vector<std::vector<double>>> witness;
    /// 1 - (best ratio E[prod f_i] / prod ||f_i||_p found). Negative means
    /// (p, ..., p) is outside H.
    double slack = 0.0;
};

/// Tests (p, ..., p) for p >= 1. Three binary agents use the (f, g) sweep
/// f(x) = 1 + f (x = 1), 1 - f (x = 0), g likewise, over [-1, 1]^2 at
/// cfg.grid_resolution points per axis (default 201); the ratio is
/// ||E[f(X) g(Y) | Z]||_{p'} / (||f||_p ||g||_p). Other shapes use a
/// multistart ascent. A ratio above 1 + kWitnessMargin is a FAIL.
/// Throws RegimeError for p < 1.
DiagVerdict holder_diag_test(const KJointDist& kd, double p, const SearchConfig& cfg = {});

/// Signed violation of prod_i ||f_i||_p >= E[prod f_i], relative to the
/// right-hand side: E[prod f_i] / prod ||f_i||_p - 1.
double holder_violation(const KJointDist& kd, const std::vector<std::vector<double>>& f, double p);

struct DiagThreshold {
    /// lo carries a witness (FAIL), hi is the smallest p that passed the search.
    Bracket bracket;
    /// hi itself failed: the threshold lies above the probed range, and
    /// bracket.hi is +infinity.
    bool saturated = false;
    std::vector<std::vector<double>> witness;  // violating tuple at bracket.lo
};

/// Bisection for inf{p >= 1 : (p, ..., p) in H} on [lo, hi] down to width
/// tol. Throws OutOfRange unless 1 <= lo < hi and tol > 0, and
/// BracketNotStraddling when lo already passes.
DiagThreshold diag_threshold(const KJointDist& kd, double lo, double hi, double tol = 1e-4,
                             const SearchConfig& cfg = {});

/// E[prod_i delta(X_i)] - prod_i ||delta(X_i)||_p with one delta applied to
/// every agent. Positive means (p, ..., p) is outside H. Throws
/// NonPositiveDelta and ShapeMismatch.
double delta_function_check(const KJointDist& kd, const std::vector<double>& delta, double p);

/// E[prod f_i] >= prod ||f_i||_{p_i} - 1e-12 for exponents with every
/// p_i < 1 and nonzero, exactly one positive, and sum 1/p_i = 1 to 1e-9.
/// Throws ExponentConstraintViolation, ShapeMismatch or NegativeValue.
bool reverse_holder_check(const KJointDist& kd, const std::vector<std::vector<double>>& f,
                          const std::vector<double>& p);

/// Ratio grid for three binary agents. ratio[i * resolution + j] belongs to
/// g = axis[i] (row) and f = axis[j] (column), axis running from -1 to 1.
struct RatioContour {
    double p = 0.0;
    int resolution = 0;
    std::vector<double> axis;
    std::vector<double> ratio;
    double max_value = 0.0;
    double argmax_f = 0.0;
    double argmax_g = 0.0;

    double at(int gi, int fj) const { return ratio[static_cast<std::size_t>(gi * resolution + fj)]; }
};

/// Throws UnsupportedShape unless kd is three binary agents, RegimeError
/// for p < 1 and OutOfRange for resolution < 2.
RatioContour ratio_contour(const KJointDist& kd, double p, int resolution = 201);

struct GroupCertificate {
    std::vector<std::size_t> first;   // zero-based agents
    std::vector<std::size_t> second;
    Certificate certificate;
};

/// certify_maxcorr on every ordered pair of disjoint nonempty agent sets.
/// Throws ShapeMismatch when the agent counts differ.
std::vector<GroupCertificate> pairwise_certify(const KJointDist& source, const KJointDist& target);

/// Binary triple whose mass depends only on the number of ones:
/// w[j] is the probability of each outcome with j ones.
KJointDist weight_symmetric_triple(double w0, double w1, double w2, double w3);

/// Weights of a pair of binary triples: the source has a0 on 000 and a2 on
/// each outcome with two ones; the target has b0, b1, b2, b3 on outcomes
/// with zero to three ones. The target's pairwise marginals equal the
/// source's after each coordinate passes independently through a Z channel
/// (1 -> 0 with probability gamma).
struct ZChannelPair {
    double a0 = 0.0, a2 = 0.0, gamma = 0.0;
    double b0 = 0.0, b1 = 0.0, b2 = 0.0, b3 = 0.0;
};

/// a2 = (1 - a0) / 3, b1 = a0 + 2 a2 gamma + a2 gamma^2 - b0,
/// b2 = a2 (1 - gamma^2) - b1, b3 = a2 (1 - gamma)^2 - b2.
ZChannelPair z_channel_pair(double a0, double gamma, double b0);

}  // namespace ribbonkit
