#include "ribbonkit/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ribbonkit/error.hpp"
#include "ribbonkit/maxcorr.hpp"
#include "ribbonkit/parallel.hpp"
#include "ribbonkit/ribbon.hpp"
#include "ribbonkit/sdpi.hpp"

namespace ribbonkit {

Certificate certify_maxcorr(const JointDist& source, const JointDist& target) {
    Certificate cert;
    cert.mechanism = Mechanism::MaxCorr;
    cert.details.source_value = rho_m(source).value;
    cert.details.target_value = rho_m(target).value;
    cert.details.source_exact = true;
    cert.margin = cert.details.target_value - cert.details.source_value;
    cert.verdict = cert.margin > kCertificateMargin ? CertVerdict::Impossible : CertVerdict::Inconclusive;
    return cert;
}

std::vector<double> default_p_grid() { return {-10.0, -4.0, -2.0, -0.5, 0.0, 0.5, 1.5, 2.0, 4.0, 10.0}; }

std::optional<double> detect_dsbs(const JointDist& d) {
    if (d.nx() != 2 || d.ny() != 2) return std::nullopt;
    constexpr double kTol = 1e-12;
    if (std::abs(d(0, 1) - d(1, 0)) > kTol || std::abs(d(0, 0) - d(1, 1)) > kTol) return std::nullopt;
    if (std::abs(d.px()[0] - 0.5) > kTol || std::abs(d.py()[0] - 0.5) > kTol) return std::nullopt;
    return d(0, 1) + d(1, 0);
}

Certificate certify_ribbon(const JointDist& source, const JointDist& target, const std::vector<double>& p_grid,
                           const SearchConfig& cfg, bool with_sstar) {
    for (double p : p_grid)
        if (p == 1.0) throw Error(ErrorCode::RegimeError, "p = 1 is not a ribbon exponent");

    const auto alpha = detect_dsbs(source);
    const double closed_form = alpha ? (1.0 - 2.0 * *alpha) * (1.0 - 2.0 * *alpha) : 0.0;

    std::vector<SlopeComparison> rows(p_grid.size() + (with_sstar ? 1 : 0));
    parallel_for(rows.size(), [&](std::size_t i) {
        SlopeComparison& row = rows[i];
        if (i == p_grid.size()) {
            row.p = 1.0;
            const JointDist tt = target.transpose();
            if (tt.nx() >= 2) {
                const auto t = s_star(tt, cfg);
                row.target_lower = t.value_lo;
                row.witness_r = t.witness_rx;
            }
            if (alpha) {
                row.source_upper = closed_form;
                row.source_exact = true;
            } else {
                const JointDist st = source.transpose();
                row.source_upper = st.nx() >= 2 ? s_star(st, cfg).value_hi : 0.0;
            }
        } else {
            row.p = p_grid[i];
            const auto t = s_p(target, row.p, cfg.tol, cfg);
            row.target_lower = t.bracket.lo;
            if (t.witness_q) {
                row.witness_q = t.witness_q;
                row.witness_g = t.witness_g;
            }
            if (alpha) {
                row.source_upper = closed_form;
                row.source_exact = true;
            } else {
                row.source_upper = s_p(source, row.p, cfg.tol, cfg).bracket.hi;
            }
        }
        row.margin = row.target_lower - row.source_upper;
    });

    Certificate cert;
    cert.mechanism = alpha ? Mechanism::DsbsClosedForm : Mechanism::RibbonWitness;
    cert.details.source_exact = alpha.has_value();
    cert.margin = -std::numeric_limits<double>::infinity();
    for (const auto& row : rows) {
        if (row.margin > cert.margin) {
            cert.margin = row.margin;
            cert.p_used = row.p;
            cert.details.source_value = row.source_upper;
            cert.details.target_value = row.target_lower;
        }
    }
    if (rows.empty()) cert.margin = 0.0;
    cert.verdict = cert.margin > kCertificateMargin ? CertVerdict::Impossible : CertVerdict::Inconclusive;
    if (!alpha) cert.details.note = "source slopes are search estimates; the verdict is numerical";
    if (cert.p_used && *cert.p_used == 1.0) {
        if (!cert.details.note.empty()) cert.details.note += "; ";
        cert.details.note += "p = 1 compares the limiting slopes s*(Y;X) and s*(V;U)";
    }
    cert.details.per_p = std::move(rows);
    return cert;
}

JointDist binary_target(double s, double c, double d) {
    const std::vector<double> t{(1.0 - s) * (1.0 - c), (1.0 - s) * c, s * d, s * (1.0 - d)};
    return JointDist::validate(2, 2, t);
}

std::size_t RegionGrid::count(RegionLabel label) const { return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label)); }

RegionGrid region_grid(double eps, double s, double p, int resolution, const SearchConfig& cfg) {
    if (!(eps > 0.0 && eps < 0.5)) throw Error(ErrorCode::OutOfRange, "eps must lie in (0, 0.5)");
    if (!(s > 0.0 && s < 1.0)) throw Error(ErrorCode::OutOfRange, "s must lie in (0, 1)");
    if (!std::isfinite(p) || p == 1.0) throw Error(ErrorCode::OutOfRange, "p must be finite and differ from 1");
    if (resolution < 2) throw Error(ErrorCode::OutOfRange, "resolution must be at least 2");

    RegionGrid grid;
    grid.eps = eps;
    grid.s = s;
    grid.p = p;
    grid.resolution = resolution;
    grid.axis.resize(static_cast<std::size_t>(resolution));
    for (int i = 0; i < resolution; ++i) grid.axis[static_cast<std::size_t>(i)] = static_cast<double>(i) / (resolution - 1);
    grid.labels.assign(static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution), RegionLabel::Blue);

    const double rho_source = 1.0 - 2.0 * eps;
    const double slope_source = rho_source * rho_source;
    // A violation just above the source slope certifies s_p(target) > s_p(source).
    const double q_probe = 1.0 + std::min(slope_source + kCertificateMargin, 1.0) * (p - 1.0);

    parallel_for(grid.labels.size(), [&](std::size_t cell) {
        const double c = grid.axis[cell / static_cast<std::size_t>(resolution)];
        const double d = grid.axis[cell % static_cast<std::size_t>(resolution)];
        const JointDist target = binary_target(s, c, d);
        if (rho_m_binary_formula(target) - rho_source > kCertificateMargin) {
            grid.labels[cell] = RegionLabel::Red;
            return;
        }
        if (target.nx() < 2 || target.ny() < 2) return;
        const auto v = is_hypercontractive(target, p, q_probe, cfg, true);
        if (v.status == Verdict::FailWitnessed) grid.labels[cell] = RegionLabel::Green;
    });
    return grid;
}

std::string_view to_string(CertVerdict v) noexcept {
    return v == CertVerdict::Impossible ? "IMPOSSIBLE" : "INCONCLUSIVE";
}

std::string_view to_string(Mechanism m) noexcept {
    switch (m) {
        case Mechanism::MaxCorr: return "MAXCORR";
        case Mechanism::RibbonWitness: return "RIBBON_WITNESS";
        case Mechanism::DsbsClosedForm: return "DSBS_CLOSED_FORM";
    }
    return "?";
}

std::string_view to_string(RegionLabel l) noexcept {
    switch (l) {
        case RegionLabel::Red: return "RED";
        case RegionLabel::Green: return "GREEN";
        case RegionLabel::Blue: return "BLUE";
    }
    return "?";
}

}  // namespace ribbonkit
