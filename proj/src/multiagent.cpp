#include "ribbonkit/multiagent.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <tuple>

#include "ribbonkit/detail/rng.hpp"
#include "ribbonkit/error.hpp"
#include "ribbonkit/parallel.hpp"

namespace ribbonkit {

namespace {

bool is_binary_triple(const KJointDist& kd) {
    return kd.k() == 3 && kd.shape()[0] == 2 && kd.shape()[1] == 2 && kd.shape()[2] == 2;
}

// Flat offsets decoded once per call.
std::vector<std::vector<std::size_t>> all_indices(const KJointDist& kd) {
    std::vector<std::vector<std::size_t>> out(kd.table().size());
    for (std::size_t o = 0; o < out.size(); ++o) out[o] = kd.unflatten(o);
    return out;
}

// E[prod_{i<k-1} f_i | X_{k-1} = z] for every z.
std::vector<double> cond_product(const KJointDist& kd, const std::vector<std::vector<std::size_t>>& idx,
                                 const std::vector<std::vector<double>>& f) {
    const std::size_t last = kd.k() - 1;
    const auto pz = kd.marginal(last);
    std::vector<double> c(pz.size(), 0.0);
    const auto table = kd.table();
    for (std::size_t o = 0; o < table.size(); ++o) {
        if (table[o] == 0.0) continue;
        double prod = table[o];
        for (std::size_t i = 0; i < last; ++i) prod *= f[i][idx[o][i]];
        c[idx[o][last]] += prod;
    }
    for (std::size_t z = 0; z < c.size(); ++z) c[z] /= pz[z];
    return c;
}

// ||c||_{p'} for the conjugate of p >= 1 (sup norm at p = 1).
double conjugate_norm(std::span<const double> c, std::span<const double> w, double p) {
    if (p == 1.0) {
        double m = 0.0;
        for (std::size_t z = 0; z < c.size(); ++z)
            if (w[z] > 0.0) m = std::max(m, std::abs(c[z]));
        return m;
    }
    return p_norm(c, w, holder_conjugate(p));
}

// The last agent's function attaining ||c||_{p'} in E[c h] <= ||c||_{p'} ||h||_p.
std::vector<double> best_response(std::span<const double> c, std::span<const double> w, double p) {
    std::vector<double> h(c.size(), 0.0);
    double scale = 0.0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return std::vector<double>(c.size(), 1.0);
    if (p == 1.0) {
        std::size_t arg = 0;
        for (std::size_t z = 0; z < c.size(); ++z)
            if (w[z] > 0.0 && std::abs(c[z]) > std::abs(c[arg])) arg = z;
        h[arg] = c[arg] > 0.0 ? 1.0 : -1.0;
        return h;
    }
    const double e = holder_conjugate(p) - 1.0;
    for (std::size_t z = 0; z < c.size(); ++z) {
        const double a = std::abs(c[z]) / scale;
        h[z] = (c[z] < 0.0 ? -1.0 : 1.0) * std::pow(a, e);
    }
    return h;
}

double binary_ratio(const KJointDist& kd, double p, double f, double g) {
    const std::vector<std::vector<double>> fg{{1.0 - f, 1.0 + f}, {1.0 - g, 1.0 + g}};
    const auto t = kd.table();
    const auto pz = kd.marginal(2);
    double c[2] = {0.0, 0.0};
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            for (std::size_t z = 0; z < 2; ++z) c[z] += t[x * 4 + y * 2 + z] * fg[0][x] * fg[1][y];
    c[0] /= pz[0];
    c[1] /= pz[1];
    const double num = conjugate_norm(c, pz, p);
    return num / (p_norm(fg[0], kd.marginal(0), p) * p_norm(fg[1], kd.marginal(1), p));
}

std::vector<double> sweep_axis(int resolution) {
    std::vector<double> axis(static_cast<std::size_t>(resolution));
    for (int i = 0; i < resolution; ++i) axis[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / (resolution - 1);
    return axis;
}

// Best ratio over functions of the first k-1 agents, found by multistart
// ascent on positive functions in log coordinates.
std::pair<double, std::vector<std::vector<double>>> search_ratio(const KJointDist& kd, double p,
                                                                 const SearchConfig& cfg) {
    const std::size_t k = kd.k();
    const auto idx = all_indices(kd);
    std::vector<std::size_t> offsets{0};
    for (std::size_t i = 0; i + 1 < k; ++i) offsets.push_back(offsets.back() + kd.shape()[i]);
    const std::size_t dim = offsets.back();

    auto unpack = [&](const std::vector<double>& u) {
        std::vector<std::vector<double>> f(k - 1);
        for (std::size_t i = 0; i + 1 < k; ++i)
            for (std::size_t a = offsets[i]; a < offsets[i + 1]; ++a) f[i].push_back(std::exp(u[a]));
        return f;
    };
    auto log_ratio = [&](const std::vector<double>& u) {
        const auto f = unpack(u);
        double v = std::log(conjugate_norm(cond_product(kd, idx, f), kd.marginal(k - 1), p));
        for (std::size_t i = 0; i + 1 < k; ++i) v -= std::log(p_norm(f[i], kd.marginal(i), p));
        return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
    };

    const int starts = std::max(cfg.multistarts, 1);
    std::vector<double> best_value(static_cast<std::size_t>(starts), -std::numeric_limits<double>::infinity());
    std::vector<std::vector<double>> best_u(static_cast<std::size_t>(starts));
    parallel_for(static_cast<std::size_t>(starts), [&](std::size_t s) {
        auto gen = detail::start_rng(cfg.seed, s);
        std::vector<double> u(dim);
        // Even starts are near-indicator sign patterns, odd starts are diffuse.
        for (double& v : u) v = (s % 2 == 0) ? (gen() & 1 ? 0.0 : -6.0) : detail::uniform(gen, -2.0, 2.0);
        double current = log_ratio(u);
        double step = 0.5;
        constexpr double h = 1e-6;
        std::vector<double> grad(dim), trial(dim);
        for (int it = 0; it < cfg.max_iters && std::isfinite(current); ++it) {
            double norm = 0.0;
            for (std::size_t j = 0; j < dim; ++j) {
                const double keep = u[j];
                u[j] = keep + h;
                const double up = log_ratio(u);
                u[j] = keep - h;
                const double down = log_ratio(u);
                u[j] = keep;
                grad[j] = (std::isfinite(up) && std::isfinite(down)) ? (up - down) / (2.0 * h) : 0.0;
                norm += grad[j] * grad[j];
            }
            norm = std::sqrt(norm);
            if (!(norm > 1e-300)) break;
            bool moved = false;
            while (step >= 1e-12) {
                for (std::size_t j = 0; j < dim; ++j) trial[j] = std::clamp(u[j] + step * grad[j] / norm, -30.0, 30.0);
                const double v = log_ratio(trial);
                if (v > current) {
                    moved = v - current > 1e-15;
                    current = v;
                    u.swap(trial);
                    step = std::min(2.0 * step, 4.0);
                    break;
                }
                step *= 0.5;
            }
            if (!moved) break;
        }
        best_value[s] = current;
        best_u[s] = u;
    });
    std::size_t arg = 0;
    for (std::size_t s = 1; s < best_value.size(); ++s)
        if (best_value[s] > best_value[arg]) arg = s;
    return {std::exp(best_value[arg]), unpack(best_u[arg])};
}

}  // namespace

double holder_violation(const KJointDist& kd, const std::vector<std::vector<double>>& f, double p) {
    if (f.size() != kd.k()) throw Error(ErrorCode::ShapeMismatch, "one function per agent is required");
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i].size() != kd.shape()[i]) throw Error(ErrorCode::ShapeMismatch, "function length differs from alphabet");
    const auto idx = all_indices(kd);
    const auto t = kd.table();
    double lhs = 0.0;
    for (std::size_t o = 0; o < t.size(); ++o) {
        double prod = t[o];
        for (std::size_t i = 0; i < f.size(); ++i) prod *= f[i][idx[o][i]];
        lhs += prod;
    }
    double rhs = 1.0;
    for (std::size_t i = 0; i < f.size(); ++i) rhs *= p_norm(f[i], kd.marginal(i), p);
    if (!(rhs > 0.0)) return -1.0;
    return lhs / rhs - 1.0;
}

DiagVerdict holder_diag_test(const KJointDist& kd, double p, const SearchConfig& cfg) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorCode::RegimeError, "the diagonal test needs finite p >= 1");
    DiagVerdict out;
    out.p = p;

    double best = 0.0;
    std::vector<std::vector<double>> fs;
    if (is_binary_triple(kd)) {
        const int res = cfg.grid_resolution > 0 ? cfg.grid_resolution : 201;
        if (res < 2) throw Error(ErrorCode::OutOfRange, "resolution must be at least 2");
        const auto axis = sweep_axis(res);
        double bf = 0.0, bg = 0.0;
        best = -1.0;
        for (double g : axis) {
            for (double f : axis) {
                const double r = binary_ratio(kd, p, f, g);
                if (r > best) {
                    best = r;
                    bf = f;
                    bg = g;
                }
            }
        }
        fs = {{1.0 - bf, 1.0 + bf}, {1.0 - bg, 1.0 + bg}};
    } else {
        std::tie(best, fs) = search_ratio(kd, p, cfg);
    }

    out.slack = 1.0 - best;
    if (best > 1.0 + kWitnessMargin) {
        const auto c = cond_product(kd, all_indices(kd), fs);
        fs.push_back(best_response(c, kd.marginal(kd.k() - 1), p));
        if (holder_violation(kd, fs, p) > kWitnessMargin) {
            out.status = Verdict::FailWitnessed;
            out.witness = std::move(fs);
        }
    }
    return out;
}

DiagThreshold diag_threshold(const KJointDist& kd, double lo, double hi, double tol, const SearchConfig& cfg) {
    if (!(lo >= 1.0 && lo < hi && std::isfinite(hi))) throw Error(ErrorCode::OutOfRange, "need 1 <= lo < hi");
    if (!(tol > 0.0)) throw Error(ErrorCode::OutOfRange, "tol must be positive");

    DiagThreshold out;
    out.bracket.kind = BracketKind::WitnessLoSearchHi;
    auto at_lo = holder_diag_test(kd, lo, cfg);
    if (at_lo.status == Verdict::PassNumerical)
        throw Error(ErrorCode::BracketNotStraddling, "the lower end already passes");
    auto at_hi = holder_diag_test(kd, hi, cfg);
    if (at_hi.status == Verdict::FailWitnessed) {
        out.bracket.lo = hi;
        out.bracket.hi = std::numeric_limits<double>::infinity();
        out.saturated = true;
        out.witness = std::move(*at_hi.witness);
        return out;
    }
    out.witness = std::move(*at_lo.witness);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        auto v = holder_diag_test(kd, mid, cfg);
        if (v.status == Verdict::FailWitnessed) {
            lo = mid;
            out.witness = std::move(*v.witness);
        } else {
            hi = mid;
        }
    }
    out.bracket.lo = lo;
    out.bracket.hi = hi;
    return out;
}

double delta_function_check(const KJointDist& kd, const std::vector<double>& delta, double p) {
    for (double v : delta)
        if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveDelta, "delta must be strictly positive");
    for (std::size_t i = 0; i < kd.k(); ++i)
        if (kd.shape()[i] != delta.size()) throw Error(ErrorCode::ShapeMismatch, "delta length differs from an alphabet");
    const auto idx = all_indices(kd);
    const auto t = kd.table();
    double lhs = 0.0;
    for (std::size_t o = 0; o < t.size(); ++o) {
        double prod = t[o];
        for (std::size_t i = 0; i < kd.k(); ++i) prod *= delta[idx[o][i]];
        lhs += prod;
    }
    double rhs = 1.0;
    for (std::size_t i = 0; i < kd.k(); ++i) rhs *= p_norm(delta, kd.marginal(i), p);
    return lhs - rhs;
}

bool reverse_holder_check(const KJointDist& kd, const std::vector<std::vector<double>>& f,
                          const std::vector<double>& p) {
    if (p.size() != kd.k()) throw Error(ErrorCode::ShapeMismatch, "one exponent per agent is required");
    int positive = 0;
    double inv_sum = 0.0;
    for (double pi : p) {
        if (!(pi < 1.0) || pi == 0.0 || !std::isfinite(pi))
            throw Error(ErrorCode::ExponentConstraintViolation, "exponents must be nonzero and below 1");
        if (pi > 0.0) ++positive;
        inv_sum += 1.0 / pi;
    }
    if (positive != 1) throw Error(ErrorCode::ExponentConstraintViolation, "exactly one exponent must be positive");
    if (std::abs(inv_sum - 1.0) > 1e-9)
        throw Error(ErrorCode::ExponentConstraintViolation, "reciprocal exponents must sum to 1");
    if (f.size() != kd.k()) throw Error(ErrorCode::ShapeMismatch, "one function per agent is required");
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i].size() != kd.shape()[i]) throw Error(ErrorCode::ShapeMismatch, "function length differs from alphabet");
        for (double v : f[i])
            if (v < 0.0) throw Error(ErrorCode::NegativeValue, "functions must be nonnegative");
    }
    const auto idx = all_indices(kd);
    const auto t = kd.table();
    double lhs = 0.0;
    for (std::size_t o = 0; o < t.size(); ++o) {
        double prod = t[o];
        for (std::size_t i = 0; i < f.size(); ++i) prod *= f[i][idx[o][i]];
        lhs += prod;
    }
    double rhs = 1.0;
    for (std::size_t i = 0; i < f.size(); ++i) rhs *= p_norm(f[i], kd.marginal(i), p[i]);
    return lhs >= rhs - 1e-12;
}

RatioContour ratio_contour(const KJointDist& kd, double p, int resolution) {
    if (!is_binary_triple(kd)) throw Error(ErrorCode::UnsupportedShape, "contours need three binary agents");
    if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorCode::RegimeError, "contours need finite p >= 1");
    if (resolution < 2) throw Error(ErrorCode::OutOfRange, "resolution must be at least 2");
    RatioContour out;
    out.p = p;
    out.resolution = resolution;
    out.axis = sweep_axis(resolution);
    const auto n = static_cast<std::size_t>(resolution);
    out.ratio.resize(n * n);
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) out.ratio[i * n + j] = binary_ratio(kd, p, out.axis[j], out.axis[i]);
    });
    std::size_t arg = 0;
    for (std::size_t c = 1; c < out.ratio.size(); ++c)
        if (out.ratio[c] > out.ratio[arg]) arg = c;
    out.max_value = out.ratio[arg];
    out.argmax_g = out.axis[arg / n];
    out.argmax_f = out.axis[arg % n];
    return out;
}

std::vector<GroupCertificate> pairwise_certify(const KJointDist& source, const KJointDist& target) {
    if (source.k() != target.k()) throw Error(ErrorCode::ShapeMismatch, "source and target have different agent counts");
    const std::size_t k = source.k();
    const std::size_t full = std::size_t{1} << k;
    auto members = [k](std::size_t mask) {
        std::vector<std::size_t> m;
        for (std::size_t i = 0; i < k; ++i)
            if (mask >> i & 1) m.push_back(i);
        return m;
    };
    std::vector<GroupCertificate> out;
    for (std::size_t a = 1; a < full; ++a) {
        for (std::size_t b = 1; b < full; ++b) {
            if (a & b) continue;
            GroupCertificate gc;
            gc.first = members(a);
            gc.second = members(b);
            gc.certificate = certify_maxcorr(group(source, gc.first, gc.second), group(target, gc.first, gc.second));
            out.push_back(std::move(gc));
        }
    }
    return out;
}

KJointDist weight_symmetric_triple(double w0, double w1, double w2, double w3) {
    const double w[4] = {w0, w1, w2, w3};
    std::vector<double> t(8);
    for (std::size_t o = 0; o < 8; ++o) t[o] = w[std::popcount(o)];
    return KJointDist::validate({2, 2, 2}, t);
}

ZChannelPair z_channel_pair(double a0, double gamma, double b0) {
    ZChannelPair z;
    z.a0 = a0;
    z.gamma = gamma;
    z.b0 = b0;
    z.a2 = (1.0 - a0) / 3.0;
    z.b1 = a0 + 2.0 * z.a2 * gamma + z.a2 * gamma * gamma - b0;
    z.b2 = z.a2 * (1.0 - gamma * gamma) - z.b1;
    z.b3 = z.a2 * (1.0 - gamma) * (1.0 - gamma) - z.b2;
    return z;
}

}  // namespace ribbonkit
