#pragma once

#include <optional>
#include <vector>

#include "ribbonkit/dist.hpp"
#include "ribbonkit/search_config.hpp"

namespace ribbonkit {

enum class MaxCorrMethod { Svd, BinaryFormula, BruteForce };

/// Zero-mean, unit-variance functions f on X and g on Y with E[f g] = value.
struct MaxCorrWitness {
    std::vector<double> f;
    std::vector<double> g;
};

struct MaxCorrResult {
    double value = 0.0;      // clamped to [0, 1]
    double raw_value = 0.0;  // before clamping
    MaxCorrMethod method = MaxCorrMethod::Svd;
    std::optional<MaxCorrWitness> witness;
    bool overshoot = false;  // raw second singular value exceeded 1 + 1e-9
};

/// Maximal correlation as the second singular value of
/// Q[x,y] = p[x,y] / sqrt(px[x] py[y]). Returns 0 without a witness when
/// either alphabet has a single symbol.
MaxCorrResult rho_m(const JointDist& d);

/// sqrt(max(0, -1 + sum p^2 / (px py))); valid when either side is binary.
double rho_m_binary_formula(const JointDist& d);

/// Alternating conditional-expectation maximization from cfg.multistarts
/// random starts. The returned value is attained by the returned witness.
/// Used as an independent check on rho_m.
MaxCorrResult rho_m_bruteforce(const JointDist& d, const SearchConfig& cfg = {});

/// E[f(X) g(Y)] under d.
double correlation(const JointDist& d, std::span<const double> f, std::span<const double> g);

}  // namespace ribbonkit
