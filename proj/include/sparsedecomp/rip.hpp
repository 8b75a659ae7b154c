// Exact restricted isometry and restricted orthogonality constants by
// exhaustive support enumeration. delta_k is the worst extreme-eigenvalue
// deviation of any k-column Gram matrix; theta_{k,k'} is the largest
// spectral norm of any disjoint cross-Gram block. NP-hard in general, so
// everything is guarded by an enumeration budget.
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "sparsedecomp/combinatorics.hpp"
#include "sparsedecomp/errors.hpp"
#include "sparsedecomp/jacobi.hpp"
#include "sparsedecomp/matrix.hpp"
#include "sparsedecomp/rng.hpp"
#include "sparsedecomp/vector.hpp"

namespace sparsedecomp {

struct RipOptions {
    std::uint64_t max_supports = 1'000'000;
    std::uint64_t max_pairs = 100'000'000;
    double eigen_tol = 1e-12;

    // SPARSEDECOMP_BUDGET=<N> overrides the support budget; the pair
    // budget keeps the default 100x ratio.
    static RipOptions from_env() {
        RipOptions opts;
        if (const char* env = std::getenv("SPARSEDECOMP_BUDGET")) {
            char* end = nullptr;
            const unsigned long long value = std::strtoull(env, &end, 10);
            if (end != env && value > 0) {
                opts.max_supports = value;
                opts.max_pairs = value > UINT64_MAX / 100 ? UINT64_MAX : value * 100;
            }
        }
        return opts;
    }
};

struct DeltaResult {
    double delta = 0.0;
    SupportSet witness;
};

struct ThetaResult {
    double theta = 0.0;
    SupportSet witness_t;
    SupportSet witness_t_prime;
};

struct RipReport {
    int k = 0;
    int k_prime = 0;
    double delta = 0.0;
    double theta = 0.0;
    SupportSet delta_witness;
    std::pair<SupportSet, SupportSet> theta_witness;
    double condition_value = 0.0;  // delta + theta
    bool condition_holds = false;  // condition_value < 1
};

inline DeltaResult delta_k(const Matrix& phi, int k,
                           const RipOptions& opts = RipOptions::from_env()) {
    const int p = static_cast<int>(phi.cols());
    if (k < 1 || k > p)
        throw PreconditionViolated("delta_k: need 1 <= k <= p");
    if (binomial_capped(p, k, opts.max_supports) > opts.max_supports)
        throw BudgetExceeded("delta_k: C(p, k) exceeds the enumeration budget");

    DeltaResult best;
    best.delta = -1.0;
    for (CombinationIterator it(p, k); !it.done(); it.advance()) {
        const SupportSet support(it.current());
        const auto [lo, hi] = sym_eigen_extremes(gram_submatrix(phi, support), opts.eigen_tol);
        const double candidate = std::max(hi - 1.0, 1.0 - lo);
        if (candidate > best.delta) {
            best.delta = candidate;
            best.witness = support;
        }
    }
    // max(hi - 1, 1 - lo) >= (hi - lo) / 2 >= 0 on every support
    best.delta = std::max(best.delta, 0.0);
    return best;
}

namespace detail {

inline double spectral_norm(const Matrix& x, double eigen_tol) {
    // sigma_max via the symmetrized square; avoids a separate SVD kernel.
    const std::size_t c = x.cols();
    Matrix square(c, c);
    for (std::size_t a = 0; a < c; ++a)
        for (std::size_t b = a; b < c; ++b) {
            double s = 0.0;
            for (std::size_t r = 0; r < x.rows(); ++r) s += x(r, a) * x(r, b);
            square(a, b) = s;
            square(b, a) = s;
        }
    const double lambda_max = sym_eigen_extremes(square, eigen_tol).second;
    return std::sqrt(std::max(lambda_max, 0.0));
}

}  // namespace detail

inline ThetaResult theta_kk(const Matrix& phi, int k, int k_prime,
                            const RipOptions& opts = RipOptions::from_env()) {
    const int p = static_cast<int>(phi.cols());
    if (k < 1 || k_prime < 1)
        throw PreconditionViolated("theta_kk: need k, k' >= 1");
    if (k + k_prime > p)
        throw PreconditionViolated("theta_kk: need k + k' <= p");
    const std::uint64_t outer = binomial_capped(p, k, opts.max_pairs);
    const std::uint64_t inner = binomial_capped(p - k, k_prime, opts.max_pairs);
    if (outer > opts.max_pairs / std::max<std::uint64_t>(inner, 1))
        throw BudgetExceeded("theta_kk: support-pair count exceeds the enumeration budget");

    ThetaResult best;
    best.theta = -1.0;
    const bool symmetric = k == k_prime;
    std::vector<int> complement;
    complement.reserve(p - k);

    for (CombinationIterator ti(p, k); !ti.done(); ti.advance()) {
        const SupportSet t(ti.current());
        complement.clear();
        for (int j = 0, a = 0; j < p; ++j) {
            if (a < k && t.indices[a] == j) { ++a; continue; }
            complement.push_back(j);
        }
        for (CombinationIterator si(p - k, k_prime); !si.done(); si.advance()) {
            std::vector<int> mapped(k_prime);
            for (int b = 0; b < k_prime; ++b) mapped[b] = complement[si.current()[b]];
            // theta(T, T') = theta(T', T): visit each unordered pair once.
            if (symmetric && mapped[0] < t.indices[0]) continue;
            const SupportSet t_prime(std::move(mapped));
            const double candidate =
                detail::spectral_norm(cross_gram(phi, t, t_prime), opts.eigen_tol);
            if (candidate > best.theta) {
                best.theta = candidate;
                best.witness_t = t;
                best.witness_t_prime = t_prime;
            }
        }
    }
    best.theta = std::max(best.theta, 0.0);
    return best;
}

inline RipReport rip_report(const Matrix& phi, int k,
                            const RipOptions& opts = RipOptions::from_env()) {
    const int p = static_cast<int>(phi.cols());
    if (2 * k > p)
        throw PreconditionViolated("rip_report: need 2k <= p");
    const DeltaResult d = delta_k(phi, k, opts);
    const ThetaResult t = theta_kk(phi, k, k, opts);

    RipReport report;
    report.k = k;
    report.k_prime = k;
    report.delta = d.delta;
    report.theta = t.theta;
    report.delta_witness = d.witness;
    report.theta_witness = {t.witness_t, t.witness_t_prime};
    report.condition_value = d.delta + t.theta;
    report.condition_holds = report.condition_value < 1.0;
    return report;
}

// Places coefficients onto the given support of a length-p vector.
inline Vector embed_on_support(std::size_t p, const SupportSet& support,
                               const Vector& coefficients) {
    if (support.size() != coefficients.size())
        throw DimensionMismatch("embed_on_support: size mismatch");
    Vector out(p, 0.0);
    for (std::size_t i = 0; i < support.size(); ++i)
        out[support.indices[i]] = coefficients[i];
    return out;
}

// Draws random k-sparse unit vectors and checks the two-sided isometry
// inequality against the given delta. A sampling cross-check, not a
// certificate: soundness comes from the exhaustive computation.
inline bool verify_rip_by_sampling(const Matrix& phi, int k, double delta,
                                   int trials, std::uint64_t seed) {
    const std::size_t p = phi.cols();
    if (k < 1 || static_cast<std::size_t>(k) > p)
        throw PreconditionViolated("verify_rip_by_sampling: need 1 <= k <= p");
    Xoshiro256pp rng(seed);
    const double lower = delta < 1.0 ? std::sqrt(1.0 - delta) : 0.0;
    const double upper = std::sqrt(1.0 + delta);

    std::vector<int> pool(p);
    for (int trial = 0; trial < trials; ++trial) {
        for (std::size_t i = 0; i < p; ++i) pool[i] = static_cast<int>(i);
        for (int i = 0; i < k; ++i) {
            const std::size_t j = i + rng.next_below(p - i);
            std::swap(pool[i], pool[j]);
        }
        Vector c(p, 0.0);
        double norm_sq = 0.0;
        do {
            norm_sq = 0.0;
            for (int i = 0; i < k; ++i) {
                const double g = rng.next_normal();
                c[pool[i]] = g;
                norm_sq += g * g;
            }
        } while (norm_sq < 1e-24);
        const double norm = std::sqrt(norm_sq);
        for (int i = 0; i < k; ++i) c[pool[i]] /= norm;

        const double image = l2_norm(phi.multiply(c));
        if (image < lower - 1e-10 || image > upper + 1e-10) return false;
    }
    return true;
}

}  // namespace sparsedecomp
