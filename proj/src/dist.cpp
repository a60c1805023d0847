#include "ribbonkit/dist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ribbonkit/error.hpp"

namespace ribbonkit {

namespace {

void check_entries(std::span<const double> table) {
    for (double v : table) {
        if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "table entry is not finite");
        if (v < 0.0) throw Error(ErrorCode::NegativeEntry, "table entry " + std::to_string(v) + " < 0");
    }
}

double checked_total(std::span<const double> table) {
    check_entries(table);
    const double total = std::accumulate(table.begin(), table.end(), 0.0);
    if (!(total > 0.0)) throw Error(ErrorCode::ZeroTotalMass, "table sums to zero");
    return total;
}

}  // namespace

JointDist JointDist::validate(std::size_t rows, std::size_t cols, std::span<const double> table) {
    if (rows == 0 || cols == 0 || table.size() != rows * cols) {
        throw Error(ErrorCode::ShapeMismatch, "table of size " + std::to_string(table.size()) +
                                                  " does not match " + std::to_string(rows) + "x" +
                                                  std::to_string(cols));
    }
    const double total = checked_total(table);

    std::vector<double> row_mass(rows, 0.0), col_mass(cols, 0.0);
    for (std::size_t x = 0; x < rows; ++x) {
        for (std::size_t y = 0; y < cols; ++y) {
            row_mass[x] += table[x * cols + y];
            col_mass[y] += table[x * cols + y];
        }
    }

    JointDist d;
    d.full_nx_ = rows;
    d.full_ny_ = cols;
    for (std::size_t x = 0; x < rows; ++x)
        if (row_mass[x] > 0.0) d.x_support_.push_back(x);
    for (std::size_t y = 0; y < cols; ++y)
        if (col_mass[y] > 0.0) d.y_support_.push_back(y);
    d.nx_ = d.x_support_.size();
    d.ny_ = d.y_support_.size();

    d.p_.resize(d.nx_ * d.ny_);
    for (std::size_t i = 0; i < d.nx_; ++i)
        for (std::size_t j = 0; j < d.ny_; ++j)
            d.p_[i * d.ny_ + j] = table[d.x_support_[i] * cols + d.y_support_[j]] / total;

    d.px_.assign(d.nx_, 0.0);
    d.py_.assign(d.ny_, 0.0);
    for (std::size_t i = 0; i < d.nx_; ++i) {
        for (std::size_t j = 0; j < d.ny_; ++j) {
            d.px_[i] += d.p_[i * d.ny_ + j];
            d.py_[j] += d.p_[i * d.ny_ + j];
        }
    }
    return d;
}

JointDist JointDist::validate(const std::vector<std::vector<double>>& table) {
    if (table.empty()) throw Error(ErrorCode::ShapeMismatch, "empty table");
    const std::size_t cols = table.front().size();
    std::vector<double> flat;
    flat.reserve(table.size() * cols);
    for (const auto& row : table) {
        if (row.size() != cols) throw Error(ErrorCode::ShapeMismatch, "ragged table");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return validate(table.size(), cols, flat);
}

JointDist JointDist::transpose() const {
    JointDist t;
    t.nx_ = ny_;
    t.ny_ = nx_;
    t.full_nx_ = full_ny_;
    t.full_ny_ = full_nx_;
    t.px_ = py_;
    t.py_ = px_;
    t.x_support_ = y_support_;
    t.y_support_ = x_support_;
    t.p_.resize(p_.size());
    for (std::size_t x = 0; x < nx_; ++x)
        for (std::size_t y = 0; y < ny_; ++y) t.p_[y * nx_ + x] = p_[x * ny_ + y];
    return t;
}

std::vector<double> JointDist::channel_row(std::size_t x) const {
    std::vector<double> row(ny_);
    for (std::size_t y = 0; y < ny_; ++y) row[y] = p_[x * ny_ + y] / px_[x];
    return row;
}

KJointDist KJointDist::validate(std::vector<std::size_t> shape, std::span<const double> table) {
    if (shape.size() < 2) throw Error(ErrorCode::ShapeMismatch, "need at least two agents");
    std::size_t cells = 1;
    for (std::size_t n : shape) {
        if (n == 0) throw Error(ErrorCode::ShapeMismatch, "zero-sized axis");
        cells *= n;
    }
    if (cells != table.size()) {
        throw Error(ErrorCode::ShapeMismatch, "shape product " + std::to_string(cells) +
                                                  " != table size " + std::to_string(table.size()));
    }
    const double total = checked_total(table);
    const std::size_t k = shape.size();

    std::vector<std::size_t> strides(k, 1);
    for (std::size_t i = k - 1; i > 0; --i) strides[i - 1] = strides[i] * shape[i];

    std::vector<std::vector<double>> mass(k);
    for (std::size_t i = 0; i < k; ++i) mass[i].assign(shape[i], 0.0);
    for (std::size_t off = 0; off < cells; ++off)
        for (std::size_t i = 0; i < k; ++i) mass[i][(off / strides[i]) % shape[i]] += table[off];

    // Map every kept symbol to its new index; pruned symbols map to npos.
    constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<std::vector<std::size_t>> remap(k);
    KJointDist kd;
    kd.shape_.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        remap[i].assign(shape[i], npos);
        std::size_t next = 0;
        for (std::size_t s = 0; s < shape[i]; ++s)
            if (mass[i][s] > 0.0) remap[i][s] = next++;
        kd.shape_[i] = next;
    }

    std::vector<std::size_t> new_strides(k, 1);
    for (std::size_t i = k - 1; i > 0; --i) new_strides[i - 1] = new_strides[i] * kd.shape_[i];
    kd.p_.assign(new_strides[0] * kd.shape_[0], 0.0);
    for (std::size_t off = 0; off < cells; ++off) {
        if (table[off] == 0.0) continue;
        std::size_t dst = 0;
        for (std::size_t i = 0; i < k; ++i) dst += remap[i][(off / strides[i]) % shape[i]] * new_strides[i];
        kd.p_[dst] = table[off] / total;
    }

    kd.marginals_.resize(k);
    for (std::size_t i = 0; i < k; ++i) kd.marginals_[i].assign(kd.shape_[i], 0.0);
    for (std::size_t off = 0; off < kd.p_.size(); ++off)
        for (std::size_t i = 0; i < k; ++i)
            kd.marginals_[i][(off / new_strides[i]) % kd.shape_[i]] += kd.p_[off];
    return kd;
}

double KJointDist::at(std::span<const std::size_t> index) const {
    if (index.size() != shape_.size()) throw Error(ErrorCode::ShapeMismatch, "index arity");
    std::size_t off = 0;
    for (std::size_t i = 0; i < shape_.size(); ++i) {
        if (index[i] >= shape_[i]) throw Error(ErrorCode::IndexOutOfRange, "symbol out of range");
        off = off * shape_[i] + index[i];
    }
    return p_[off];
}

std::vector<std::size_t> KJointDist::unflatten(std::size_t offset) const {
    std::vector<std::size_t> idx(shape_.size());
    for (std::size_t i = shape_.size(); i-- > 0;) {
        idx[i] = offset % shape_[i];
        offset /= shape_[i];
    }
    return idx;
}

JointDist dsbs(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw Error(ErrorCode::OutOfRange, "dsbs parameter must lie in [0,1]");
    const double same = (1.0 - alpha) / 2.0;
    const double diff = alpha / 2.0;
    const double table[] = {same, diff, diff, same};
    return JointDist::validate(2, 2, table);
}

KJointDist dsbs_triple(double ex, double ey, double ez) {
    for (double e : {ex, ey, ez})
        if (!(e >= 0.0 && e <= 0.5)) throw Error(ErrorCode::OutOfRange, "triple parameters must lie in [0,1/2]");
    const double m000 = (2.0 - ex - ey - ez) / 4.0;
    const double m001 = (ex + ey - ez) / 4.0;
    const double m010 = (ex - ey + ez) / 4.0;
    const double m011 = (-ex + ey + ez) / 4.0;
    for (double m : {m001, m010, m011})
        if (m < 0.0) throw Error(ErrorCode::TriangleViolation, "parameters violate the triangle inequality");
    // Index order (x,y,z) with z fastest.
    const double table[] = {m000, m001, m010, m011, m011, m010, m001, m000};
    return KJointDist::validate({2, 2, 2}, table);
}

JointDist tensor(const JointDist& d1, const JointDist& d2) {
    const std::size_t nx = d1.nx() * d2.nx();
    const std::size_t ny = d1.ny() * d2.ny();
    std::vector<double> t(nx * ny);
    for (std::size_t x1 = 0; x1 < d1.nx(); ++x1)
        for (std::size_t x2 = 0; x2 < d2.nx(); ++x2)
            for (std::size_t y1 = 0; y1 < d1.ny(); ++y1)
                for (std::size_t y2 = 0; y2 < d2.ny(); ++y2)
                    t[(x1 * d2.nx() + x2) * ny + (y1 * d2.ny() + y2)] = d1(x1, y1) * d2(x2, y2);
    return JointDist::validate(nx, ny, t);
}

namespace {

std::vector<double> embed(const JointDist& d) {
    std::vector<double> full(d.full_nx() * d.full_ny(), 0.0);
    for (std::size_t i = 0; i < d.nx(); ++i)
        for (std::size_t j = 0; j < d.ny(); ++j)
            full[d.x_support()[i] * d.full_ny() + d.y_support()[j]] = d(i, j);
    return full;
}

}  // namespace

double total_variation(const JointDist& d1, const JointDist& d2) {
    if (d1.full_nx() != d2.full_nx() || d1.full_ny() != d2.full_ny())
        throw Error(ErrorCode::ShapeMismatch, "alphabets differ");
    const auto a = embed(d1);
    const auto b = embed(d2);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
    return std::clamp(0.5 * sum, 0.0, 1.0);
}

namespace {

// t log t - t + 1, accurate near t = 1.
double bregman_xlogx(double t) {
    if (t <= 0.0) return 1.0;
    const double u = t - 1.0;
    return t * std::log1p(u) - u;
}

}  // namespace

Divergence kl(std::span<const double> mu, std::span<const double> nu) {
    if (mu.size() != nu.size()) throw Error(ErrorCode::ShapeMismatch, "kl arguments differ in length");
    // Summed as nonnegative terms so that nearby arguments do not cancel.
    // The two masses are taken to agree; rounding in either total is not
    // allowed to leak into tiny divergences.
    double d = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (nu[i] <= 0.0) {
            if (mu[i] > 0.0) throw Error(ErrorCode::SupportViolation, "mu has mass outside the support of nu");
            continue;
        }
        d += nu[i] * bregman_xlogx(mu[i] / nu[i]);
    }
    return {std::max(d, 0.0)};
}

double ent_functional(std::span<const double> weights, std::span<const double> values) {
    if (weights.size() != values.size()) throw Error(ErrorCode::ShapeMismatch, "weights/values length");
    double mass = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0.0) throw Error(ErrorCode::NegativeValue, "Ent needs nonnegative values");
        if (weights[i] <= 0.0) continue;
        mass += weights[i];
        mean += weights[i] * values[i];
    }
    if (!(mean > 0.0)) return 0.0;
    mean /= mass;
    double ent = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (weights[i] > 0.0) ent += weights[i] / mass * mean * bregman_xlogx(values[i] / mean);
    return std::max(ent, 0.0);
}

JointDist group(const KJointDist& kd, std::span<const std::size_t> subset_a,
                std::span<const std::size_t> subset_b) {
    if (subset_a.empty() || subset_b.empty()) throw Error(ErrorCode::EmptySubset, "group needs nonempty subsets");
    const std::size_t k = kd.k();
    std::vector<int> role(k, 0);
    for (std::size_t i : subset_a) {
        if (i >= k) throw Error(ErrorCode::IndexOutOfRange, "agent index " + std::to_string(i));
        if (role[i] != 0) throw Error(ErrorCode::OverlappingSubsets, "repeated agent");
        role[i] = 1;
    }
    for (std::size_t i : subset_b) {
        if (i >= k) throw Error(ErrorCode::IndexOutOfRange, "agent index " + std::to_string(i));
        if (role[i] != 0) throw Error(ErrorCode::OverlappingSubsets, "agent in both subsets");
        role[i] = 2;
    }

    std::vector<std::size_t> a(subset_a.begin(), subset_a.end());
    std::vector<std::size_t> b(subset_b.begin(), subset_b.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const auto shape = kd.shape();
    std::size_t rows = 1, cols = 1;
    for (std::size_t i : a) rows *= shape[i];
    for (std::size_t i : b) cols *= shape[i];

    std::vector<double> t(rows * cols, 0.0);
    const auto table = kd.table();
    for (std::size_t off = 0; off < table.size(); ++off) {
        const auto idx = kd.unflatten(off);
        std::size_t r = 0, c = 0;
        for (std::size_t i : a) r = r * shape[i] + idx[i];
        for (std::size_t i : b) c = c * shape[i] + idx[i];
        t[r * cols + c] += table[off];
    }
    return JointDist::validate(rows, cols, t);
}

JointDist pairwise_marginal(const KJointDist& kd, std::size_t i, std::size_t j) {
    const std::size_t a[] = {i};
    const std::size_t b[] = {j};
    return group(kd, a, b);
}

}  // namespace ribbonkit
