#pragma once

// Impossibility certificates for simulating a target pair distribution from
// i.i.d. copies of a source pair without communication, and the (c, d)
// region grids for binary targets against a DSBS source.
//
// A certificate never claims that a simulation is possible: the only
// verdicts are IMPOSSIBLE and INCONCLUSIVE.

#include <optional>
#include <string>
#include <vector>

#include "ribbonkit/dist.hpp"
#include "ribbonkit/search_config.hpp"

namespace ribbonkit {

/// Smallest margin accepted as a certificate.
inline constexpr double kCertificateMargin = 1e-6;

enum class CertVerdict { Impossible, Inconclusive };
enum class Mechanism { MaxCorr, RibbonWitness, DsbsClosedForm };

/// One comparison of the source's s_p upper bound with the target's
/// certified s_p lower bound. p = 1 marks the comparison of s*(Y;X) with
/// s*(V;U), the limits of both slopes as p -> 1.
struct SlopeComparison {
    double p = 0.0;
    double source_upper = 0.0;
    bool source_exact = false;
    double target_lower = 0.0;
    double margin = 0.0;              // target_lower - source_upper
    std::optional<double> witness_q;  // q at which witness_g violates the target
    std::vector<double> witness_g;
    std::vector<double> witness_r;    // p = 1 only: the input law attaining target_lower
};

struct CertificateDetails {
    double source_value = 0.0;  // the quantity compared for the source
    double target_value = 0.0;
    bool source_exact = true;   // false when the source side is a search estimate
    std::vector<SlopeComparison> per_p;
    std::string note;
};

struct Certificate {
    CertVerdict verdict = CertVerdict::Inconclusive;
    Mechanism mechanism = Mechanism::MaxCorr;
    std::optional<double> p_used;
    double margin = 0.0;
    CertificateDetails details;
};

/// IMPOSSIBLE iff rho_m(target) - rho_m(source) > kCertificateMargin.
Certificate certify_maxcorr(const JointDist& source, const JointDist& target);

/// {-10, -4, -2, -0.5, 0, 0.5, 1.5, 2, 4, 10}.
std::vector<double> default_p_grid();

/// Compares, for every p in p_grid, an upper bound on s_p(source) with a
/// witness-certified lower bound on s_p(target). The source bound is the
/// closed form (1 - 2 alpha)^2 when the source is a DSBS and the search
/// bracket's upper end otherwise. With with_sstar the comparison is also
/// made at the p -> 1 limit, where the slopes become s*(Y;X) and s*(V;U).
/// Throws RegimeError when p_grid contains 1.
Certificate certify_ribbon(const JointDist& source, const JointDist& target,
                           const std::vector<double>& p_grid = default_p_grid(), const SearchConfig& cfg = {},
                           bool with_sstar = true);

/// The crossover alpha when d is a DSBS (2x2, symmetric to 1e-12, uniform
/// marginals).
std::optional<double> detect_dsbs(const JointDist& d);

/// Binary target with Q(U=1) = s, Q(V=1|U=0) = c, Q(V=0|U=1) = d.
JointDist binary_target(double s, double c, double d);

enum class RegionLabel { Red, Green, Blue };

/// Labels for a DSBS(eps) source. labels[i * resolution + j] belongs to
/// c = axis[i], d = axis[j]. RED: rho_m rules the target out; GREEN: only
/// the ribbon slope at p does; BLUE: not proven impossible.
struct RegionGrid {
    double eps = 0.0;
    double s = 0.0;
    double p = 0.0;
    int resolution = 0;
    std::vector<double> axis;
    std::vector<RegionLabel> labels;

    RegionLabel at(int i, int j) const { return labels[static_cast<std::size_t>(i * resolution + j)]; }
    std::size_t count(RegionLabel label) const;
};

/// Throws OutOfRange unless 0 < eps < 0.5, 0 < s < 1, p != 1 and
/// resolution >= 2.
RegionGrid region_grid(double eps, double s, double p, int resolution, const SearchConfig& cfg = {});

std::string_view to_string(CertVerdict v) noexcept;
std::string_view to_string(Mechanism m) noexcept;
std::string_view to_string(RegionLabel l) noexcept;

}  // namespace ribbonkit
