#pragma once

// Reference computations for the tests. Each one is written from the
// definition, without calling into the library's numerics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using Table = std::vector<std::vector<double>>;

inline std::vector<double> row_sums(const Table& t) {
    std::vector<double> r;
    for (const auto& row : t) {
        double s = 0.0;
        for (double v : row) s += v;
        r.push_back(s);
    }
    return r;
}

inline std::vector<double> col_sums(const Table& t) {
    std::vector<double> c(t[0].size(), 0.0);
    for (const auto& row : t)
        for (std::size_t j = 0; j < row.size(); ++j) c[j] += row[j];
    return c;
}

inline Table normalized(Table t) {
    double s = 0.0;
    for (const auto& row : t)
        for (double v : row) s += v;
    for (auto& row : t)
        for (double& v : row) v /= s;
    return t;
}

/// Plain power-mean definition; p = 0 is the weighted geometric mean.
inline double p_norm(const std::vector<double>& v, const std::vector<double>& w, double p) {
    if (p == 0.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (w[i] == 0.0) continue;
            if (v[i] == 0.0) return 0.0;
            s += w[i] * std::log(std::abs(v[i]));
        }
        return std::exp(s);
    }
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (w[i] == 0.0) continue;
        if (v[i] == 0.0 && p < 0.0) return 0.0;
        s += w[i] * std::pow(std::abs(v[i]), p);
    }
    return std::pow(s, 1.0 / p);
}

inline double kl(const std::vector<double>& mu, const std::vector<double>& nu) {
    double d = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (mu[i] > 0.0) d += mu[i] * std::log(mu[i] / nu[i]);
    return d;
}

inline double ent(const std::vector<double>& w, const std::vector<double>& z) {
    double m = 0.0, zl = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        m += w[i] * z[i];
        if (z[i] > 0.0) zl += w[i] * z[i] * std::log(z[i]);
    }
    return zl - m * std::log(m);
}

/// Second singular value of p / sqrt(px py) by power iteration on B = Q^T Q
/// with the top singular direction sqrt(py) projected out.
inline double rho_m(const Table& t_in) {
    const Table t = normalized(t_in);
    const auto px = row_sums(t);
    const auto py = col_sums(t);
    const std::size_t nx = t.size(), ny = py.size();
    std::vector<double> top(ny);
    for (std::size_t j = 0; j < ny; ++j) top[j] = std::sqrt(py[j]);
    auto apply = [&](const std::vector<double>& v) {
        std::vector<double> u(nx, 0.0), out(ny, 0.0);
        for (std::size_t i = 0; i < nx; ++i)
            for (std::size_t j = 0; j < ny; ++j) u[i] += t[i][j] / std::sqrt(px[i] * py[j]) * v[j];
        for (std::size_t i = 0; i < nx; ++i)
            for (std::size_t j = 0; j < ny; ++j) out[j] += t[i][j] / std::sqrt(px[i] * py[j]) * u[i];
        return out;
    };
    auto deflate = [&](std::vector<double>& v) {
        double d = 0.0;
        for (std::size_t j = 0; j < ny; ++j) d += v[j] * top[j];
        for (std::size_t j = 0; j < ny; ++j) v[j] -= d * top[j];
    };
    std::vector<double> v(ny);
    for (std::size_t j = 0; j < ny; ++j) v[j] = 1.0 + 0.37 * static_cast<double>(j * j) - 0.11 * static_cast<double>(j);
    deflate(v);
    double lambda = 0.0;
    for (int it = 0; it < 20000; ++it) {
        double n = 0.0;
        for (double x : v) n += x * x;
        n = std::sqrt(n);
        if (n < 1e-300) return 0.0;
        for (double& x : v) x /= n;
        auto w = apply(v);
        deflate(w);
        double next = 0.0;
        for (std::size_t j = 0; j < ny; ++j) next += w[j] * v[j];
        v = w;
        if (it > 50 && std::abs(next - lambda) < 1e-16) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return std::sqrt(std::max(lambda, 0.0));
}

/// ||E[g|X]||_p against ||g||_q from the definition; the ribbon slack with g
/// scaled to unit q-norm.
inline double ribbon_slack(const Table& t_in, double p, double q, const std::vector<double>& g) {
    const Table t = normalized(t_in);
    const auto px = row_sums(t);
    const auto py = col_sums(t);
    std::vector<double> ce(t.size(), 0.0);
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < py.size(); ++j) ce[i] += t[i][j] / px[i] * g[j];
    const double lhs = p_norm(ce, px, p);
    const double rhs = p_norm(g, py, q);
    return p > 1.0 ? (rhs - lhs) / rhs : (lhs - rhs) / rhs;
}

inline Table random_table(std::mt19937_64& gen, std::size_t nx, std::size_t ny) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    Table t(nx, std::vector<double>(ny));
    for (auto& row : t)
        for (double& v : row) v = u(gen);
    return normalized(t);
}

inline std::vector<double> flat(const Table& t) {
    std::vector<double> f;
    for (const auto& row : t) f.insert(f.end(), row.begin(), row.end());
    return f;
}

}  // namespace oracle
