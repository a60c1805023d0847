#include "ribbonkit/sdpi.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "ribbonkit/detail/rng.hpp"
#include "ribbonkit/error.hpp"
#include "ribbonkit/maxcorr.hpp"

namespace ribbonkit {

namespace {

constexpr double kExclusionL1 = 1e-4;

double l1_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

class SStarSearch {
public:
    SStarSearch(const JointDist& d, const SearchConfig& cfg) : d_(d), cfg_(cfg) {}

    // Ratio at rx, or -inf inside the exclusion ball.
    double value(std::span<const double> rx) {
        if (l1_distance(rx, d_.px()) < kExclusionL1) return -std::numeric_limits<double>::infinity();
        const double den = kl(rx, d_.px()).value;
        if (!(den > 0.0)) return -std::numeric_limits<double>::infinity();
        const auto ry = push_forward(d_, rx);
        const double v = kl(ry, d_.py()).value / den;
        if (v > best_.value_lo || best_.witness_rx.empty()) {
            best_.value_lo = v;
            best_.witness_rx.assign(rx.begin(), rx.end());
        }
        return v;
    }

    SStarResult run() {
        const std::size_t nx = d_.nx();
        std::vector<std::pair<double, std::vector<double>>> seeds;

        const auto mc = rho_m(d_);
        best_.local_limit = mc.value * mc.value;
        if (mc.witness) {
            const auto& f = mc.witness->f;
            double mean_abs = 0.0, max_abs = 0.0;
            for (std::size_t x = 0; x < nx; ++x) {
                mean_abs += d_.px()[x] * std::abs(f[x]);
                max_abs = std::max(max_abs, std::abs(f[x]));
            }
            // R_X = P_X (1 + t f) at a few L1 radii on both sides of P_X.
            for (double radius : {2e-4, 1e-3, 1e-2, 1e-1}) {
                for (double sign : {1.0, -1.0}) {
                    const double t = std::min(radius / mean_abs, 0.99 / max_abs);
                    std::vector<double> rx(nx);
                    for (std::size_t x = 0; x < nx; ++x) rx[x] = d_.px()[x] * (1.0 + sign * t * f[x]);
                    seeds.emplace_back(value(rx), rx);
                }
            }
        }

        if (nx == 2) {
            for (int i = 0; i <= 200; ++i) {
                const double r = i / 200.0;
                const std::vector<double> rx{r, 1.0 - r};
                seeds.emplace_back(value(rx), rx);
            }
        } else if (nx == 3) {
            const int steps = cfg_.grid_resolution > 0 ? cfg_.grid_resolution - 1 : 40;
            for (int a = 0; a <= steps; ++a) {
                for (int b = 0; a + b <= steps; ++b) {
                    const std::vector<double> rx{static_cast<double>(a) / steps, static_cast<double>(b) / steps,
                                                 static_cast<double>(steps - a - b) / steps};
                    seeds.emplace_back(value(rx), rx);
                }
            }
        }

        std::sort(seeds.begin(), seeds.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        const int starts = std::max(cfg_.multistarts, 1);
        for (int s = 0; s < starts; ++s) {
            std::vector<double> u(nx);
            if (static_cast<std::size_t>(s) < seeds.size() && s < starts / 2) {
                for (std::size_t x = 0; x < nx; ++x) u[x] = std::log(std::max(seeds[static_cast<std::size_t>(s)].second[x], 1e-12));
            } else {
                auto gen = detail::start_rng(cfg_.seed, static_cast<std::uint64_t>(s));
                for (double& v : u) v = detail::uniform(gen, -3.0, 3.0);
            }
            ascend(std::move(u));
        }

        best_.value_lo = std::clamp(best_.value_lo, 0.0, 1.0);
        best_.value_hi = std::clamp(std::max(best_.value_lo, best_.local_limit), best_.value_lo, 1.0);
        return best_;
    }

private:
    double at(const std::vector<double>& u, std::vector<double>& rx) {
        const double top = *std::max_element(u.begin(), u.end());
        double z = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            rx[i] = std::exp(u[i] - top);
            z += rx[i];
        }
        for (double& v : rx) v /= z;
        return value(rx);
    }

    void ascend(std::vector<double> u) {
        const std::size_t n = u.size();
        std::vector<double> rx(n), grad(n), trial(n);
        double current = at(u, rx);
        if (!std::isfinite(current)) return;
        double step = 0.5;
        constexpr double h = 1e-6;
        for (int it = 0; it < cfg_.max_iters; ++it) {
            double norm = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double keep = u[j];
                u[j] = keep + h;
                const double up = at(u, rx);
                u[j] = keep - h;
                const double down = at(u, rx);
                u[j] = keep;
                grad[j] = (std::isfinite(up) && std::isfinite(down)) ? (up - down) / (2.0 * h) : 0.0;
                norm += grad[j] * grad[j];
            }
            norm = std::sqrt(norm);
            if (!(norm > 1e-300)) break;
            bool moved = false;
            while (step >= 1e-12) {
                for (std::size_t j = 0; j < n; ++j) trial[j] = std::clamp(u[j] + step * grad[j] / norm, -40.0, 40.0);
                const double v = at(trial, rx);
                if (v > current) {
                    moved = v - current > 1e-16;
                    current = v;
                    u.swap(trial);
                    step = std::min(2.0 * step, 4.0);
                    break;
                }
                step *= 0.5;
            }
            if (!moved) break;
        }
    }

    const JointDist& d_;
    const SearchConfig& cfg_;
    SStarResult best_;
};

double endpoint_deviation(const Bracket& b, double reference) {
    return std::max(std::abs(b.lo - reference), std::abs(b.hi - reference));
}

// Deviations, ordered from farthest to nearest the limit, may not grow by
// more than the noise floor.
bool shrinking(const std::vector<double>& ordered) {
    constexpr double kNoise = 1e-3;
    for (std::size_t i = 1; i < ordered.size(); ++i)
        if (ordered[i] > ordered[i - 1] + kNoise) return false;
    return true;
}

}  // namespace

std::vector<double> push_forward(const JointDist& d, std::span<const double> rx) {
    if (rx.size() != d.nx()) throw Error(ErrorCode::ShapeMismatch, "R_X must have one entry per X symbol");
    std::vector<double> ry(d.ny(), 0.0);
    for (std::size_t x = 0; x < d.nx(); ++x)
        for (std::size_t y = 0; y < d.ny(); ++y) ry[y] += d(x, y) / d.px()[x] * rx[x];
    return ry;
}

double kl_ratio(const JointDist& d, std::span<const double> rx) {
    const double den = kl(rx, d.px()).value;
    if (!(den > 0.0)) throw Error(ErrorCode::OutOfRange, "R_X coincides with P_X");
    return kl(push_forward(d, rx), d.py()).value / den;
}

SStarResult s_star(const JointDist& d, const SearchConfig& cfg) {
    if (d.nx() < 2) throw Error(ErrorCode::ConstantX, "X takes a single value");
    SStarSearch search(d, cfg);
    return search.run();
}

double ent_ratio(const JointDist& d, std::span<const double> g) {
    if (g.size() != d.ny()) throw Error(ErrorCode::ShapeMismatch, "g must have one value per Y symbol");
    const double den = ent_functional(d.py(), g);
    if (!(den > 0.0)) throw Error(ErrorCode::ConstantG, "g is constant under P_Y");
    const auto ce = cond_exp(d, g);
    return ent_functional(d.px(), ce) / den;
}

LimitReport check_limit_p_to_1(const JointDist& d, std::span<const double> eps_list, const SearchConfig& cfg,
                               double tol) {
    for (double e : eps_list)
        if (!(e > 0.0 && e <= 0.5)) throw Error(ErrorCode::OutOfRange, "eps must lie in (0, 0.5]");
    LimitReport report;
    const JointDist t = d.transpose();
    report.reference = t.nx() >= 2 ? s_star(t, cfg).value_lo : 0.0;

    std::vector<double> eps(eps_list.begin(), eps_list.end());
    std::sort(eps.begin(), eps.end(), std::greater<>());
    std::vector<double> per_eps;
    for (double e : eps) {
        double worst = 0.0;
        for (double p : {1.0 + e, 1.0 - e}) {
            const auto b = s_p(d, p, tol, cfg).bracket;
            const double dev = endpoint_deviation(b, report.reference);
            report.entries.push_back({p, b, dev});
            worst = std::max(worst, dev);
        }
        per_eps.push_back(worst);
        report.max_deviation = std::max(report.max_deviation, worst);
    }
    report.pass = shrinking(per_eps);
    return report;
}

LimitReport check_limit_p_to_inf(const JointDist& d, std::span<const double> p_list, const SearchConfig& cfg,
                                 double tol) {
    for (double p : p_list)
        if (!(std::abs(p) >= 4.0)) throw Error(ErrorCode::OutOfRange, "|p| must be at least 4");
    LimitReport report;
    report.reference = d.nx() >= 2 ? s_star(d, cfg).value_lo : 0.0;

    // Each sign of p approaches the limit separately.
    std::vector<double> ps(p_list.begin(), p_list.end());
    std::sort(ps.begin(), ps.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    std::vector<double> pos, neg;
    for (double p : ps) {
        const auto b = s_p(d, p, tol, cfg).bracket;
        const double dev = endpoint_deviation(b, report.reference);
        report.entries.push_back({p, b, dev});
        (p > 0.0 ? pos : neg).push_back(dev);
        report.max_deviation = std::max(report.max_deviation, dev);
    }
    report.pass = shrinking(pos) && shrinking(neg);
    return report;
}

NormSandwich norm_sandwich(std::span<const double> weights, std::span<const double> z, double u) {
    if (weights.size() != z.size()) throw Error(ErrorCode::ShapeMismatch, "weights/values length");
    if (!(u > 0.0)) throw Error(ErrorCode::OutOfRange, "u must be positive");
    double k = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i] < 0.0) throw Error(ErrorCode::NegativeValue, "Z must be nonnegative");
        if (weights[i] > 0.0) k = std::max(k, z[i]);
    }
    // Both maximands vanish at 0 and 1; their interior critical points are
    // e^-2 (z log^2 z) and e^-1 (|z log z|), so the maxima over [0, K] are
    // attained at K or at the critical point when it lies inside.
    auto zlog2 = [](double v) { return v > 0.0 ? v * std::log(v) * std::log(v) : 0.0; };
    auto abszlog = [](double v) { return v > 0.0 ? std::abs(v * std::log(v)) : 0.0; };
    const double max_zlog2 = std::max(zlog2(k), zlog2(std::min(k, std::exp(-2.0))));
    const double max_abszlog = std::max(abszlog(k), abszlog(std::min(k, std::exp(-1.0))));

    NormSandwich out;
    out.l0 = 0.5 * std::max(std::pow(k, u), 1.0) * max_zlog2;
    out.l1 = max_abszlog + 0.5 * max_abszlog * max_abszlog;
    const double ent = ent_functional(weights, z);
    out.norm = p_norm(z, weights, 1.0 + u);
    out.lower = 1.0 + u * ent - u * u * out.l1;
    out.upper = 1.0 + u * ent + u * u * out.l0;
    return out;
}

}  // namespace ribbonkit
