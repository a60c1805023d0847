#include "ribbonkit/maxcorr.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

#include "ribbonkit/detail/rng.hpp"
#include "ribbonkit/error.hpp"

namespace ribbonkit {

namespace {

// Center and scale v to zero mean / unit variance under w. Returns the
// pre-scaling standard deviation (0 when v is constant).
double standardize(std::vector<double>& v, std::span<const double> w) {
    double mean = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) mean += w[i] * v[i];
    double var = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] -= mean;
        var += w[i] * v[i] * v[i];
    }
    const double sd = std::sqrt(var);
    if (sd > 0.0)
        for (double& x : v) x /= sd;
    return sd;
}

}  // namespace

double correlation(const JointDist& d, std::span<const double> f, std::span<const double> g) {
    if (f.size() != d.nx() || g.size() != d.ny()) throw Error(ErrorCode::ShapeMismatch, "witness length");
    double c = 0.0;
    for (std::size_t x = 0; x < d.nx(); ++x)
        for (std::size_t y = 0; y < d.ny(); ++y) c += d(x, y) * f[x] * g[y];
    return c;
}

MaxCorrResult rho_m(const JointDist& d) {
    MaxCorrResult out;
    out.method = MaxCorrMethod::Svd;
    if (d.nx() == 1 || d.ny() == 1) return out;

    Eigen::MatrixXd q(d.nx(), d.ny());
    for (std::size_t x = 0; x < d.nx(); ++x)
        for (std::size_t y = 0; y < d.ny(); ++y)
            q(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) =
                d(x, y) / std::sqrt(d.px()[x] * d.py()[y]);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(q, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (std::abs(sv(0) - 1.0) > 1e-9) {
        throw Error(ErrorCode::NonFinite, "top singular value " + std::to_string(sv(0)) +
                                              " != 1; the table escaped validation");
    }
    out.raw_value = sv.size() > 1 ? sv(1) : 0.0;
    out.overshoot = out.raw_value > 1.0 + 1e-9;
    out.value = std::clamp(out.raw_value, 0.0, 1.0);

    MaxCorrWitness w;
    w.f.resize(d.nx());
    w.g.resize(d.ny());
    for (std::size_t x = 0; x < d.nx(); ++x) w.f[x] = svd.matrixU()(static_cast<Eigen::Index>(x), 1) / std::sqrt(d.px()[x]);
    for (std::size_t y = 0; y < d.ny(); ++y) w.g[y] = svd.matrixV()(static_cast<Eigen::Index>(y), 1) / std::sqrt(d.py()[y]);
    const double sf = standardize(w.f, d.px());
    const double sg = standardize(w.g, d.py());
    if (sf > 0.0 && sg > 0.0) {
        if (correlation(d, w.f, w.g) < 0.0)
            for (double& v : w.g) v = -v;
        out.witness = std::move(w);
    }
    return out;
}

double rho_m_binary_formula(const JointDist& d) {
    if (d.nx() != 2 && d.ny() != 2) {
        if (d.nx() == 1 || d.ny() == 1) return 0.0;
        throw Error(ErrorCode::NotBinary, "neither side is binary");
    }
    double s = -1.0;
    for (std::size_t x = 0; x < d.nx(); ++x)
        for (std::size_t y = 0; y < d.ny(); ++y) s += d(x, y) * d(x, y) / (d.px()[x] * d.py()[y]);
    return std::sqrt(std::max(0.0, s));
}

MaxCorrResult rho_m_bruteforce(const JointDist& d, const SearchConfig& cfg) {
    if (d.nx() * d.ny() > 64) throw Error(ErrorCode::OutOfRange, "brute force limited to nx*ny <= 64");
    MaxCorrResult best;
    best.method = MaxCorrMethod::BruteForce;
    if (d.nx() == 1 || d.ny() == 1) return best;

    bool any_converged = false;
    for (int start = 0; start < std::max(1, cfg.multistarts); ++start) {
        auto gen = detail::start_rng(cfg.seed, static_cast<std::uint64_t>(start));
        std::vector<double> f(d.nx()), g(d.ny());
        for (double& v : f) v = detail::uniform(gen, -1.0, 1.0);
        if (standardize(f, d.px()) == 0.0) continue;

        double value = 0.0, previous = -1.0;
        bool converged = false;
        for (int it = 0; it < cfg.max_iters; ++it) {
            // g <- E[f(X) | Y], f <- E[g(Y) | X]
            std::fill(g.begin(), g.end(), 0.0);
            for (std::size_t x = 0; x < d.nx(); ++x)
                for (std::size_t y = 0; y < d.ny(); ++y) g[y] += d(x, y) * f[x] / d.py()[y];
            if (standardize(g, d.py()) < 1e-14) {
                value = 0.0;
                converged = true;
                break;
            }
            std::fill(f.begin(), f.end(), 0.0);
            for (std::size_t x = 0; x < d.nx(); ++x)
                for (std::size_t y = 0; y < d.ny(); ++y) f[x] += d(x, y) * g[y] / d.px()[x];
            if (standardize(f, d.px()) < 1e-14) {
                value = 0.0;
                converged = true;
                break;
            }
            value = correlation(d, f, g);
            if (std::abs(value - previous) < 1e-15) {
                converged = true;
                break;
            }
            previous = value;
        }
        any_converged = any_converged || converged;
        if (converged && (!best.witness || value > best.value)) {
            best.value = value;
            best.raw_value = value;
            best.witness = MaxCorrWitness{f, g};
        }
    }
    if (!any_converged)
        throw Error(ErrorCode::BudgetExceeded, "no start converged within " + std::to_string(cfg.max_iters) + " iterations");
    if (best.value == 0.0) best.witness.reset();
    best.value = std::clamp(best.value, 0.0, 1.0);
    return best;
}

}  // namespace ribbonkit
