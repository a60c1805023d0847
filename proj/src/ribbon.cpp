#include "ribbonkit/ribbon.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "ribbonkit/detail/rng.hpp"
#include "ribbonkit/error.hpp"
#include "ribbonkit/maxcorr.hpp"

namespace ribbonkit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log ||v||_p, or -inf when the norm is zero.
double log_norm(std::span<const double> values, std::span<const double> weights, double p) {
    if (p == 0.0) {
        double acc = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (weights[i] <= 0.0) continue;
            const double a = std::abs(values[i]);
            if (a == 0.0) return kNegInf;
            acc += weights[i] * std::log(a);
        }
        return acc;
    }
    // log-sum-exp over p*log|v| keeps large |p| finite.
    double top = kNegInf;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        const double a = std::abs(values[i]);
        if (a == 0.0) {
            if (p < 0.0) return kNegInf;
            continue;
        }
        top = std::max(top, p * std::log(a));
    }
    if (top == kNegInf) return kNegInf;
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        const double a = std::abs(values[i]);
        if (a == 0.0) continue;
        acc += weights[i] * std::exp(p * std::log(a) - top);
    }
    return (top + std::log(acc)) / p;
}

enum class Regime { Trivial, Forward, Reverse };

Regime regime_of(double p, double q) {
    if (p == q) return Regime::Trivial;
    if (p > 1.0 && q >= 1.0 && q <= p) return Regime::Forward;
    if (p < 1.0 && q <= 1.0 && q >= p) return Regime::Reverse;
    throw Error(ErrorCode::RegimeError, "(p, q) = (" + std::to_string(p) + ", " + std::to_string(q) +
                                            ") lies in neither the forward nor the reverse wedge");
}

// Evaluates the normalized slack for one fixed (p, q).
class SlackEvaluator {
public:
    SlackEvaluator(const JointDist& d, double p, double q) : d_(d), p_(p), q_(q), forward_(p > 1.0), ce_(d.nx()) {}

    double operator()(std::span<const double> g) {
        for (std::size_t x = 0; x < d_.nx(); ++x) {
            double acc = 0.0;
            for (std::size_t y = 0; y < d_.ny(); ++y) acc += d_(x, y) * g[y];
            ce_[x] = acc / d_.px()[x];
        }
        const double lhs = log_norm(ce_, d_.px(), p_);
        const double rhs = log_norm(g, d_.py(), q_);
        if (lhs == kNegInf && rhs == kNegInf) return 0.0;
        const double diff = lhs - rhs;
        // ratio - 1 computed without cancellation
        const double excess = std::expm1(diff);
        return forward_ ? -excess : excess;
    }

    std::size_t ny() const { return d_.ny(); }

private:
    const JointDist& d_;
    double p_;
    double q_;
    bool forward_;
    std::vector<double> ce_;
};

struct Candidate {
    double slack = std::numeric_limits<double>::infinity();
    std::vector<double> g;
};

class WorstCaseSearch {
public:
    WorstCaseSearch(const JointDist& d, double p, double q, const SearchConfig& cfg, double stop_below,
                    std::span<const double> psi)
        : eval_(d, p, q), cfg_(cfg), stop_below_(stop_below), psi_(psi.begin(), psi.end()), ny_(d.ny()) {}

    Candidate run() {
        if (ny_ == 1) {
            best_.slack = 0.0;
            best_.g = {1.0};
            return best_;
        }
        if (ny_ == 2) {
            binary_sweep();
        } else {
            simplex_grid();
            if (done()) return best_;
            direction_line();
            if (done()) return best_;
            descents();
        }
        return best_;
    }

private:
    bool done() const { return best_.slack < stop_below_; }

    double consider(std::span<const double> g) {
        const double s = eval_(g);
        if (s < best_.slack) {
            best_.slack = s;
            best_.g.assign(g.begin(), g.end());
        }
        return s;
    }

    // g = (1 + t, 1 - t) over a fine grid, followed by a golden-section
    // refinement around the best grid point.
    void binary_sweep() {
        constexpr int kPoints = 10000;
        constexpr double kEdge = 1.0 - 1e-9;
        const double step = 2.0 * kEdge / (kPoints - 1);
        double g[2];
        double best_t = 0.0;
        double best_s = std::numeric_limits<double>::infinity();
        for (int i = 0; i < kPoints; ++i) {
            const double t = -kEdge + step * i;
            g[0] = 1.0 + t;
            g[1] = 1.0 - t;
            const double s = consider(g);
            if (s < best_s) {
                best_s = s;
                best_t = t;
            }
            if (done()) return;
        }
        auto f = [&](double t) {
            g[0] = 1.0 + t;
            g[1] = 1.0 - t;
            return consider(g);
        };
        double a = std::max(-kEdge, best_t - step), b = std::min(kEdge, best_t + step);
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - phi * (b - a), e = a + phi * (b - a);
        double fc = f(c), fe = f(e);
        for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
            if (fc < fe) {
                b = e;
                e = c;
                fe = fc;
                c = b - phi * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = e;
                fc = fe;
                e = a + phi * (b - a);
                fe = f(e);
            }
        }
    }

    int grid_resolution() const {
        if (cfg_.grid_resolution > 0) return cfg_.grid_resolution;
        if (ny_ <= 3) return 41;
        if (ny_ == 4) return 15;
        if (ny_ <= 6) return 7;
        return 4;
    }

    // All points of the simplex with coordinates k_i / (R - 1); zero
    // coordinates are lifted to 1e-9 so g stays strictly positive.
    void simplex_grid() {
        const int steps = grid_resolution() - 1;
        std::vector<int> comp(ny_, 0);
        std::vector<double> g(ny_);
        std::vector<std::pair<double, std::vector<double>>> scored;
        // Enumerate compositions of `steps` into ny_ nonnegative parts.
        std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
            if (done()) return;
            if (i + 1 == ny_) {
                comp[i] = left;
                for (std::size_t j = 0; j < ny_; ++j)
                    g[j] = std::max(static_cast<double>(comp[j]) / std::max(steps, 1), 1e-9);
                const double s = consider(g);
                scored.emplace_back(s, g);
                return;
            }
            for (int v = 0; v <= left; ++v) {
                comp[i] = v;
                rec(i + 1, left - v);
            }
        };
        rec(0, steps);
        const std::size_t keep = std::min<std::size_t>(scored.size(), static_cast<std::size_t>(std::max(cfg_.multistarts, 0)) / 2);
        std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
        seeds_.clear();
        for (std::size_t i = 0; i < keep; ++i) seeds_.push_back(scored[i].second);
    }

    // g = 1 + t * psi / max|psi|: the direction along which the ribbon
    // inequality is tight to second order around constant g.
    void direction_line() {
        if (psi_.size() != ny_) return;
        double scale = 0.0;
        for (double v : psi_) scale = std::max(scale, std::abs(v));
        if (scale == 0.0) return;
        constexpr int kPoints = 2001;
        constexpr double kEdge = 1.0 - 1e-9;
        std::vector<double> g(ny_);
        for (int i = 0; i < kPoints; ++i) {
            const double t = -kEdge + 2.0 * kEdge * i / (kPoints - 1);
            for (std::size_t j = 0; j < ny_; ++j) g[j] = 1.0 + t * psi_[j] / scale;
            consider(g);
            if (done()) return;
        }
        seeds_.push_back(best_.g);
    }

    void descents() {
        const int starts = std::max(cfg_.multistarts, 0);
        for (int s = 0; s < starts && !done(); ++s) {
            std::vector<double> u(ny_);
            if (static_cast<std::size_t>(s) < seeds_.size()) {
                for (std::size_t j = 0; j < ny_; ++j) u[j] = std::log(seeds_[static_cast<std::size_t>(s)][j]);
            } else {
                auto gen = detail::start_rng(cfg_.seed, static_cast<std::uint64_t>(s));
                for (double& v : u) v = detail::uniform(gen, -2.0, 2.0);
            }
            descend(u);
        }
    }

    double at(const std::vector<double>& u, std::vector<double>& g) {
        for (std::size_t j = 0; j < ny_; ++j) g[j] = std::exp(u[j]);
        return consider(g);
    }

    // Steepest descent in log-coordinates with a numerically estimated
    // gradient and step halving down to 1e-12.
    void descend(std::vector<double> u) {
        std::vector<double> g(ny_), grad(ny_), trial(ny_);
        double value = at(u, g);
        double step = 0.5;
        constexpr double h = 1e-6;
        for (int it = 0; it < cfg_.max_iters && !done(); ++it) {
            double norm = 0.0;
            for (std::size_t j = 0; j < ny_; ++j) {
                const double keep = u[j];
                u[j] = keep + h;
                const double up = at(u, g);
                u[j] = keep - h;
                const double down = at(u, g);
                u[j] = keep;
                grad[j] = (up - down) / (2.0 * h);
                norm += grad[j] * grad[j];
            }
            norm = std::sqrt(norm);
            if (!(norm > 1e-300)) break;
            bool moved = false;
            while (step >= 1e-12) {
                for (std::size_t j = 0; j < ny_; ++j) trial[j] = std::clamp(u[j] - step * grad[j] / norm, -50.0, 50.0);
                const double v = at(trial, g);
                if (v < value) {
                    const double gain = value - v;
                    u.swap(trial);
                    value = v;
                    step = std::min(step * 2.0, 4.0);
                    moved = gain > 1e-17;
                    break;
                }
                step *= 0.5;
            }
            if (!moved) break;
        }
    }

    SlackEvaluator eval_;
    const SearchConfig& cfg_;
    double stop_below_;
    std::vector<double> psi_;
    std::size_t ny_;
    Candidate best_;
    std::vector<std::vector<double>> seeds_;
};

std::vector<double> top_direction(const JointDist& d) {
    const auto mc = rho_m(d);
    if (mc.witness) return mc.witness->g;
    return {};
}

std::vector<double> unit_q_norm(std::vector<double> g, std::span<const double> py, double q) {
    const double n = p_norm(g, py, q);
    if (n > 0.0 && std::isfinite(n))
        for (double& v : g) v /= n;
    return g;
}

struct SlopeProbe {
    double s;
    double slack;
    std::vector<double> g;
};

// Bisection on the slope s = (q - 1) / (p - 1) in [0, 1]. Membership fails
// below s_p and holds at and above it, in both regimes.
RibbonBoundary slope_boundary(const JointDist& d, double p, double tol_q, const SearchConfig& cfg) {
    if (p == 1.0 || !std::isfinite(p)) throw Error(ErrorCode::RegimeError, "the boundary is undefined at p = 1");
    if (!(tol_q > 0.0)) throw Error(ErrorCode::OutOfRange, "tolerance must be positive");
    const double span = std::abs(p - 1.0);
    const double tol_s = 0.5 * tol_q / span;
    const auto psi = top_direction(d);

    std::vector<SlopeProbe> probes;
    auto probe = [&](double s) -> const SlopeProbe& {
        const double q = 1.0 + s * (p - 1.0);
        SlopeProbe rec{s, 0.0, {}};
        if (s < 1.0 && q != p) {
            WorstCaseSearch search(d, p, q, cfg, -kWitnessMargin, psi);
            auto c = search.run();
            rec.slack = c.slack;
            rec.g = std::move(c.g);
        }
        probes.push_back(std::move(rec));
        return probes.back();
    };
    auto violated = [](const SlopeProbe& r) { return r.slack < -kSearchNoiseFloor; };
    auto certified = [](const SlopeProbe& r) { return r.slack < -kWitnessMargin; };

    // Edge of detectable violation.
    double edge = 0.0;
    if (violated(probe(0.0))) {
        double a = 0.0, b = 1.0;
        while (b - a > tol_s) {
            const double m = 0.5 * (a + b);
            if (violated(probe(m)))
                a = m;
            else
                b = m;
        }
        edge = b;
    }

    // Edge of certified violation, seeded from the probes seen so far.
    std::optional<std::size_t> cert;
    double c_hi = edge;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        if (certified(probes[i])) {
            if (!cert || probes[i].s > probes[*cert].s) cert = i;
        }
    }
    if (cert) {
        for (const auto& r : probes)
            if (!certified(r) && r.s > probes[*cert].s) c_hi = std::min(c_hi, r.s);
        double a = probes[*cert].s;
        while (c_hi - a > tol_s) {
            const double m = 0.5 * (a + c_hi);
            const auto& r = probe(m);
            if (certified(r)) {
                a = m;
                cert = probes.size() - 1;
            } else {
                c_hi = m;
            }
        }
    }

    RibbonBoundary out;
    const double lo_s = cert ? probes[*cert].s : 0.0;
    const double hi_s = std::max(lo_s, edge + tol_s);
    out.raw_lo = lo_s;
    out.raw_hi = hi_s;
    out.bracket = {std::clamp(lo_s, 0.0, 1.0), std::clamp(hi_s, 0.0, 1.0), BracketKind::WitnessLoSearchHi};
    out.search_edge = edge;
    if (cert) {
        out.witness_q = 1.0 + probes[*cert].s * (p - 1.0);
        out.witness_g = unit_q_norm(probes[*cert].g, d.py(), *out.witness_q);
    }
    return out;
}

}  // namespace

double p_norm(std::span<const double> values, std::span<const double> weights, double p) {
    if (values.size() != weights.size()) throw Error(ErrorCode::ShapeMismatch, "values/weights length");
    return std::exp(log_norm(values, weights, p));
}

double holder_conjugate(double p) {
    if (p == 1.0) throw Error(ErrorCode::ConjugateOfOne, "1 has no finite Hoelder conjugate");
    if (p == 0.0) return 0.0;
    return p / (p - 1.0);
}

std::vector<double> cond_exp(const JointDist& d, std::span<const double> g) {
    if (g.size() != d.ny()) throw Error(ErrorCode::ShapeMismatch, "g must have one value per Y symbol");
    std::vector<double> out(d.nx(), 0.0);
    for (std::size_t x = 0; x < d.nx(); ++x) {
        for (std::size_t y = 0; y < d.ny(); ++y) out[x] += d(x, y) * g[y];
        out[x] /= d.px()[x];
    }
    return out;
}

double ribbon_slack(const JointDist& d, double p, double q, std::span<const double> g) {
    if (g.size() != d.ny()) throw Error(ErrorCode::ShapeMismatch, "g must have one value per Y symbol");
    if (regime_of(p, q) == Regime::Trivial) return 0.0;
    SlackEvaluator eval(d, p, q);
    return eval(g);
}

RibbonVerdict is_hypercontractive(const JointDist& d, double p, double q, const SearchConfig& cfg,
                                  bool stop_at_witness) {
    RibbonVerdict v;
    if (regime_of(p, q) == Regime::Trivial) return v;
    const auto psi = top_direction(d);
    WorstCaseSearch search(d, p, q, cfg,
                           stop_at_witness ? -kWitnessMargin : -std::numeric_limits<double>::infinity(), psi);
    auto worst = search.run();
    v.slack = worst.slack;
    if (worst.slack < -kWitnessMargin) {
        v.status = Verdict::FailWitnessed;
        v.witness_g = unit_q_norm(std::move(worst.g), d.py(), q);
    }
    return v;
}

RibbonBoundary q_star(const JointDist& d, double p, double tol, const SearchConfig& cfg) {
    auto b = slope_boundary(d, p, tol, cfg);
    auto to_q = [p](double s) { return 1.0 + s * (p - 1.0); };
    RibbonBoundary out = b;
    if (p > 1.0) {
        out.bracket = {to_q(b.bracket.lo), to_q(b.bracket.hi), BracketKind::WitnessLoSearchHi};
        out.raw_lo = to_q(b.raw_lo);
        out.raw_hi = to_q(b.raw_hi);
    } else {
        out.bracket = {to_q(b.bracket.hi), to_q(b.bracket.lo), BracketKind::WitnessHiSearchLo};
        out.raw_lo = to_q(b.raw_hi);
        out.raw_hi = to_q(b.raw_lo);
    }
    out.search_edge = to_q(b.search_edge);
    return out;
}

RibbonBoundary s_p(const JointDist& d, double p, double tol, const SearchConfig& cfg) {
    return slope_boundary(d, p, tol, cfg);
}

double two_function_check(const JointDist& q_dist, std::span<const double> lambdas, std::span<const double> mus,
                          double p, double q, Direction direction) {
    if (lambdas.size() != q_dist.nx() || mus.size() != q_dist.ny())
        throw Error(ErrorCode::ShapeMismatch, "weights must match the target alphabets");
    if (direction == Direction::Reverse) {
        for (double v : lambdas)
            if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveWeights, "reverse mode needs positive lambda");
        for (double v : mus)
            if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveWeights, "reverse mode needs positive mu");
    }
    double lhs = 0.0;
    for (std::size_t u = 0; u < q_dist.nx(); ++u)
        for (std::size_t v = 0; v < q_dist.ny(); ++v) lhs += lambdas[u] * mus[v] * q_dist(u, v);
    const double rhs = p_norm(lambdas, q_dist.px(), holder_conjugate(p)) * p_norm(mus, q_dist.py(), q);
    return direction == Direction::Forward ? lhs - rhs : rhs - lhs;
}

}  // namespace ribbonkit
