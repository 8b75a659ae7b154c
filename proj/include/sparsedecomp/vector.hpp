// Dense real vectors, norms, sparsity predicates, and the canonical
// reduction (sign stripping + stable descending sort) used by the
// decomposition engine.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "sparsedecomp/errors.hpp"

namespace sparsedecomp {

// Fixed-length sequence of finite reals. Length is set at construction.
class Vector {
public:
    Vector() = default;

    explicit Vector(std::size_t n, double fill = 0.0) : entries_(n, fill) {
        if (n == 0) throw PreconditionViolated("Vector: length must be >= 1");
        check_finite();
    }

    explicit Vector(std::vector<double> entries) : entries_(std::move(entries)) {
        if (entries_.empty()) throw PreconditionViolated("Vector: length must be >= 1");
        check_finite();
    }

    Vector(std::initializer_list<double> entries) : Vector(std::vector<double>(entries)) {}

    std::size_t size() const { return entries_.size(); }
    double operator[](std::size_t i) const { return entries_[i]; }
    double& operator[](std::size_t i) { return entries_[i]; }

    const std::vector<double>& entries() const { return entries_; }

    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    bool operator==(const Vector& other) const { return entries_ == other.entries_; }

private:
    void check_finite() const {
        for (double x : entries_)
            if (!std::isfinite(x))
                throw PreconditionViolated("Vector: entries must be finite");
    }

    std::vector<double> entries_;
};

inline double l1_norm(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += std::fabs(x);
    return s;
}

inline double l2_norm(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double linf_norm(const Vector& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

// Default numerical-zero threshold, relative to the vector's scale.
inline double default_zero_tol(const Vector& v) {
    return 1e-12 * std::max(1.0, linf_norm(v));
}

inline bool is_k_sparse(const Vector& v, int k, double zero_tol) {
    if (k < 0) throw PreconditionViolated("is_k_sparse: k must be >= 0");
    int nonzero = 0;
    for (double x : v)
        if (std::fabs(x) > zero_tol) ++nonzero;
    return nonzero <= k;
}

inline bool is_k_sparse(const Vector& v, int k) {
    return is_k_sparse(v, k, default_zero_tol(v));
}

// Sorted set of column/component indices (0-based internally).
struct SupportSet {
    std::vector<int> indices;

    SupportSet() = default;
    explicit SupportSet(std::vector<int> idx) : indices(std::move(idx)) {
        if (!std::is_sorted(indices.begin(), indices.end()) ||
            std::adjacent_find(indices.begin(), indices.end()) != indices.end())
            throw PreconditionViolated("SupportSet: indices must be strictly increasing");
    }

    std::size_t size() const { return indices.size(); }
    bool operator==(const SupportSet& o) const { return indices == o.indices; }
    bool operator<(const SupportSet& o) const {
        return std::lexicographical_compare(indices.begin(), indices.end(),
                                            o.indices.begin(), o.indices.end());
    }
    bool disjoint_from(const SupportSet& o) const {
        std::size_t a = 0, b = 0;
        while (a < indices.size() && b < o.indices.size()) {
            if (indices[a] == o.indices[b]) return false;
            if (indices[a] < o.indices[b]) ++a; else ++b;
        }
        return true;
    }
};

inline SupportSet support_of(const Vector& v, double zero_tol) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (std::fabs(v[i]) > zero_tol) idx.push_back(static_cast<int>(i));
    return SupportSet(std::move(idx));
}

// A vector reduced to the nonnegative, descending-sorted form:
// magnitudes[i] = |v[permutation[i]]|, signs recorded per original
// position (zeros get +1 so the reduction is a pure function).
struct CanonicalVector {
    Vector magnitudes;          // sorted descending, nonnegative
    std::vector<int> signs;     // +1 / -1, indexed by original position
    std::vector<int> permutation;  // permutation[i] = original index of magnitudes[i]
    int zero_count = 0;         // entries with |v| <= zero_tol
};

// Stable sort: ties keep ascending original index, which makes repeated
// runs byte-identical.
inline CanonicalVector canonicalize(const Vector& v, double zero_tol) {
    const std::size_t n = v.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::fabs(v[a]) > std::fabs(v[b]);
    });

    CanonicalVector c;
    c.signs.resize(n);
    c.permutation = order;
    std::vector<double> mags(n);
    for (std::size_t i = 0; i < n; ++i) {
        mags[i] = std::fabs(v[order[i]]);
        if (mags[i] <= zero_tol) ++c.zero_count;
    }
    for (std::size_t i = 0; i < n; ++i) c.signs[i] = v[i] < 0.0 ? -1 : +1;
    c.magnitudes = Vector(std::move(mags));
    return c;
}

inline CanonicalVector canonicalize(const Vector& v) {
    return canonicalize(v, default_zero_tol(v));
}

// Applies the inverse permutation and the recorded signs to w. With
// w = c.magnitudes this reproduces the original vector bit-for-bit.
inline Vector decanonicalize(const CanonicalVector& c, const Vector& w) {
    const std::size_t n = c.permutation.size();
    if (w.size() != n)
        throw DimensionMismatch("decanonicalize: length mismatch");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int orig = c.permutation[i];
        // Avoid manufacturing -0.0 when a negative sign meets a zeroed entry.
        out[orig] = w[i] == 0.0 ? 0.0 : c.signs[orig] * w[i];
    }
    return Vector(std::move(out));
}

}  // namespace sparsedecomp
