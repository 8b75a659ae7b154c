// Constructive convex k-sparse decomposition with invariant l1 norm.
//
// Given ||v||_1 <= C and ||v||_inf <= C/k, the vector is expanded into a
// convex combination of k-sparse vectors, each with the same l1 norm as v
// and entries bounded by C/k. One expansion step splits a vector with m
// strictly positive entries (in canonical nonnegative form) into k+1
// children with m-1 positive entries each; recursion reaches k-sparse
// leaves after exactly m-k levels. Leaves sharing a support are merged,
// which caps the number of terms at C(n, k).
#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "sparsedecomp/combinatorics.hpp"
#include "sparsedecomp/errors.hpp"
#include "sparsedecomp/vector.hpp"

namespace sparsedecomp {

struct DecompositionInput {
    Vector v;
    int k = 1;
    double capacity = 0.0;  // the C of the two hypotheses

    DecompositionInput(Vector v_in, int k_in, double capacity_in)
        : v(std::move(v_in)), k(k_in), capacity(capacity_in) {
        if (k < 1 || static_cast<std::size_t>(k) > v.size())
            throw PreconditionViolated("DecompositionInput: need 1 <= k <= n");
        if (!(capacity > 0.0))
            throw PreconditionViolated("DecompositionInput: capacity must be positive");
        const double slack = 1.0 + 1e-12;
        if (l1_norm(v) > capacity * slack)
            throw PreconditionViolated("DecompositionInput: ||v||_1 exceeds capacity");
        if (linf_norm(v) > capacity / k * slack)
            throw PreconditionViolated("DecompositionInput: ||v||_inf exceeds capacity/k");
    }
};

// One weighted k-sparse summand.
struct SparseTerm {
    double weight = 0.0;
    Vector vector;
};

struct Decomposition {
    DecompositionInput input;
    std::vector<SparseTerm> terms;
};

// The k+1 children of one expansion step, children[0] first.
struct ExpansionStep {
    std::vector<Vector> children;
    std::vector<double> weights;  // k+1 convex weights, same order as children
    std::vector<double> etas;     // C/k - u(head_j), j = 1..k
    std::vector<double> lambdas;  // etas normalized to sum 1
};

struct DecomposeOptions {
    double zero_tol = -1.0;        // < 0: use default_zero_tol(v)
    std::uint64_t term_budget = 0; // 0: C(n, k)
    double prune_below = 0.0;      // drop terms below this weight, renormalize
    bool merge_per_level = false;  // merge equal-support nodes at every level
};

// Smallest capacity satisfying both hypotheses for v and k.
inline double default_capacity(const Vector& v, int k) {
    if (k < 1 || static_cast<std::size_t>(k) > v.size())
        throw PreconditionViolated("default_capacity: need 1 <= k <= n");
    const double c = std::max(l1_norm(v), k * linf_norm(v));
    if (c == 0.0)
        throw PreconditionViolated("default_capacity: zero vector has no positive capacity");
    return c;
}

namespace detail {

struct RawExpansion {
    std::vector<std::vector<double>> children;
    std::vector<double> weights;
    std::vector<double> etas;
    std::vector<double> lambdas;
};

// Applies the expansion formulas to u with an explicit choice of the k
// "head" positions (ordered by descending value) and the pivot position
// holding the smallest strictly positive entry. All positions refer to
// the same index space as u, so supports never need re-permuting.
inline RawExpansion apply_expansion(const std::vector<double>& u,
                                  const std::vector<int>& head, int pivot,
                                  int k, double capacity) {
    const double bound = capacity / k;
    const double piv = u[pivot];

    RawExpansion out;
    out.etas.resize(k);
    double eta_sum = 0.0;
    for (int t = 0; t < k; ++t) {
        double eta = bound - u[head[t]];
        if (eta < 0.0) {
            if (eta < -1e-11 * std::max(1.0, bound))
                throw PreconditionViolated("expand: entry exceeds capacity/k");
            eta = 0.0;  // entry equals C/k up to roundoff
        }
        out.etas[t] = eta;
        eta_sum += eta;
    }
    if (eta_sum <= 0.0)
        throw PreconditionViolated("expand: sum of etas is not positive "
                                   "(||u||_1 > C or ||u||_inf > C/k)");

    out.lambdas.resize(k);
    for (int t = 0; t < k; ++t) out.lambdas[t] = out.etas[t] / eta_sum;

    // children[0]: every head position gains lambda_j * piv, pivot zeroed.
    // children[t]: same, except head[t-1] is zeroed and its grown value
    // moves onto the pivot position.
    out.children.assign(k + 1, u);
    auto& g0 = out.children[0];
    for (int t = 0; t < k; ++t) g0[head[t]] += out.lambdas[t] * piv;
    g0[pivot] = 0.0;

    out.weights.resize(k + 1);
    double tail_weight = 0.0;
    for (int t = 1; t <= k; ++t) {
        const int h = head[t - 1];
        auto& g = out.children[t];
        for (int j = 0; j < k; ++j)
            if (j != t - 1) g[head[j]] += out.lambdas[j] * piv;
        const double grown = u[h] + out.lambdas[t - 1] * piv;
        g[h] = 0.0;
        g[pivot] = grown;
        out.weights[t] = out.lambdas[t - 1] * piv / grown;
        tail_weight += out.weights[t];
    }

    double y0 = 1.0 - tail_weight;
    if (y0 < 0.0 || y0 > 1.0) {
        if (y0 < -1e-12 || y0 > 1.0 + 1e-12)
            throw InternalError("expand: leading weight outside [0, 1]");
        y0 = y0 < 0.0 ? 0.0 : 1.0;
    }
    out.weights[0] = y0;
    return out;
}

// Head = k largest positive entries (value desc, index asc on ties);
// pivot = smallest positive entry (largest index on ties). This matches
// the ordering a stable descending sort would produce.
inline void select_head_and_pivot(const std::vector<double>& u,
                                  const std::vector<int>& positive, int k,
                                  std::vector<int>& head, int& pivot) {
    std::vector<int> order = positive;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return u[a] > u[b]; });
    head.assign(order.begin(), order.begin() + k);
    pivot = order.back();
}

struct SupportAccumulator {
    double weight_sum = 0.0;
    std::vector<double> weighted_vec;
};

using SupportMap = std::map<std::vector<int>, SupportAccumulator>;

inline void accumulate_leaf(SupportMap& acc, const std::vector<int>& support,
                            double weight, const std::vector<double>& vec,
                            std::uint64_t budget) {
    auto it = acc.find(support);
    if (it == acc.end()) {
        if (acc.size() >= budget)
            throw TermBudgetExceeded("decompose: distinct-support budget exceeded");
        it = acc.emplace(support, SupportAccumulator{0.0,
                         std::vector<double>(vec.size(), 0.0)}).first;
    }
    it->second.weight_sum += weight;
    for (std::size_t i = 0; i < vec.size(); ++i)
        it->second.weighted_vec[i] += weight * vec[i];
}

inline void expand_depth_first(const std::vector<double>& u,
                               const std::vector<int>& positive, double weight,
                               int k, double capacity, std::uint64_t budget,
                               SupportMap& acc) {
    if (static_cast<int>(positive.size()) <= k) {
        accumulate_leaf(acc, positive, weight, u, budget);
        return;
    }
    std::vector<int> head;
    int pivot = -1;
    select_head_and_pivot(u, positive, k, head, pivot);
    const RawExpansion step = apply_expansion(u, head, pivot, k, capacity);

    for (int t = 0; t <= k; ++t) {
        if (step.weights[t] == 0.0) continue;
        const int removed = t == 0 ? pivot : head[t - 1];
        std::vector<int> child_positive;
        child_positive.reserve(positive.size() - 1);
        for (int idx : positive)
            if (idx != removed) child_positive.push_back(idx);
        expand_depth_first(step.children[t], child_positive, weight * step.weights[t],
                           k, capacity, budget, acc);
    }
}

// Breadth-first variant that merges equal-support nodes after every
// level; every node at one level has the same positive count.
inline SupportMap expand_level_merged(const std::vector<double>& u0,
                                      const std::vector<int>& positive0, int k,
                                      double capacity, std::uint64_t budget) {
    SupportMap frontier;
    accumulate_leaf(frontier, positive0, 1.0, u0, UINT64_MAX / 2);
    std::size_t m = positive0.size();

    while (static_cast<int>(m) > k) {
        SupportMap next;
        for (const auto& [positive, node] : frontier) {
            std::vector<double> u(node.weighted_vec);
            for (double& x : u) x /= node.weight_sum;
            std::vector<int> head;
            int pivot = -1;
            select_head_and_pivot(u, positive, k, head, pivot);
            const RawExpansion step = apply_expansion(u, head, pivot, k, capacity);
            for (int t = 0; t <= k; ++t) {
                if (step.weights[t] == 0.0) continue;
                const int removed = t == 0 ? pivot : head[t - 1];
                std::vector<int> child_positive;
                child_positive.reserve(positive.size() - 1);
                for (int idx : positive)
                    if (idx != removed) child_positive.push_back(idx);
                accumulate_leaf(next, child_positive, node.weight_sum * step.weights[t],
                                step.children[t],
                                static_cast<int>(m) - 1 <= k ? budget : UINT64_MAX / 2);
            }
        }
        frontier = std::move(next);
        --m;
    }
    return frontier;
}

}  // namespace detail

// One expansion step on a vector already in canonical form: sorted
// descending, nonnegative, with m > k strictly positive leading entries.
inline ExpansionStep expand_step(const Vector& u, int k, double capacity) {
    const std::size_t n = u.size();
    if (k < 1)
        throw PreconditionViolated("expand_step: k must be >= 1");
    if (!(capacity > 0.0))
        throw PreconditionViolated("expand_step: capacity must be positive");
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (u[i] < 0.0)
            throw PreconditionViolated("expand_step: entries must be nonnegative");
        if (i + 1 < n && u[i] < u[i + 1])
            throw PreconditionViolated("expand_step: entries must be sorted descending");
        if (u[i] > 0.0) m = i + 1;
    }
    if (m <= static_cast<std::size_t>(k))
        throw PreconditionViolated("expand_step: need more than k positive entries");
    const double slack = 1.0 + 1e-12;
    if (l1_norm(u) > capacity * slack)
        throw PreconditionViolated("expand_step: ||u||_1 exceeds capacity");
    if (u[0] > capacity / k * slack)
        throw PreconditionViolated("expand_step: ||u||_inf exceeds capacity/k");

    std::vector<int> head(k);
    std::iota(head.begin(), head.end(), 0);
    const detail::RawExpansion raw =
        detail::apply_expansion(u.entries(), head, static_cast<int>(m) - 1, k, capacity);

    ExpansionStep step;
    step.children.reserve(k + 1);
    for (auto& c : raw.children) step.children.emplace_back(c);
    step.weights = raw.weights;
    step.etas = raw.etas;
    step.lambdas = raw.lambdas;
    return step;
}

inline Decomposition decompose(const DecompositionInput& input,
                               const DecomposeOptions& options = {}) {
    const Vector& v = input.v;
    const int k = input.k;
    const std::size_t n = v.size();
    const double zero_tol =
        options.zero_tol >= 0.0 ? options.zero_tol : default_zero_tol(v);

    const CanonicalVector canonical = canonicalize(v, zero_tol);
    const std::size_t positive_count = n - canonical.zero_count;

    Decomposition result{input, {}};
    if (positive_count <= static_cast<std::size_t>(k)) {
        result.terms.push_back({1.0, v});
        return result;
    }

    const std::uint64_t budget = options.term_budget > 0
        ? options.term_budget
        : binomial_capped(n, static_cast<std::uint64_t>(k));

    // Entries at or below zero_tol ride along unchanged through every
    // expansion; they are excluded from the positive set and from
    // support keys, so reconstruction stays exact without inflating the
    // support count.
    std::vector<int> positive(positive_count);
    std::iota(positive.begin(), positive.end(), 0);

    detail::SupportMap merged;
    if (options.merge_per_level) {
        merged = detail::expand_level_merged(canonical.magnitudes.entries(), positive,
                                             k, input.capacity, budget);
    } else {
        detail::expand_depth_first(canonical.magnitudes.entries(), positive, 1.0,
                                   k, input.capacity, budget, merged);
    }

    std::vector<SparseTerm> terms;
    terms.reserve(merged.size());
    for (const auto& [support, node] : merged) {
        if (node.weight_sum == 0.0) continue;
        std::vector<double> w(node.weighted_vec);
        for (double& x : w) x /= node.weight_sum;
        terms.push_back({node.weight_sum, decanonicalize(canonical, Vector(std::move(w)))});
    }

    if (options.prune_below > 0.0) {
        std::vector<SparseTerm> kept;
        double total = 0.0;
        for (auto& t : terms)
            if (t.weight >= options.prune_below) {
                total += t.weight;
                kept.push_back(std::move(t));
            }
        if (kept.empty() || total <= 0.0)
            throw PreconditionViolated("decompose: prune threshold removed every term");
        for (auto& t : kept) t.weight /= total;
        terms = std::move(kept);
    }

    // Deterministic output order: lexicographic on the original-space support.
    std::sort(terms.begin(), terms.end(), [&](const SparseTerm& a, const SparseTerm& b) {
        return support_of(a.vector, zero_tol) < support_of(b.vector, zero_tol);
    });

    result.terms = std::move(terms);
    return result;
}

// Recomputed residuals for every contract a decomposition must satisfy.
// Independent of the construction path: only reads the finished terms.
struct DecompositionCheck {
    double reconstruction_residual = 0.0;  // ||sum x_t w_t - v||_inf
    double weight_sum_residual = 0.0;      // |sum x_t - 1|
    double min_weight = 0.0;
    double max_l1_deviation = 0.0;         // max_t | ||w_t||_1 - ||v||_1 |
    double max_linf_excess = 0.0;          // max_t ||w_t||_inf - C/k
    int max_support_size = 0;
    std::uint64_t distinct_supports = 0;
    std::uint64_t support_limit = 0;

    bool reconstruction_ok = false;
    bool weights_ok = false;
    bool sparsity_ok = false;
    bool l1_ok = false;
    bool linf_ok = false;
    bool support_count_ok = false;

    bool pass() const {
        return reconstruction_ok && weights_ok && sparsity_ok && l1_ok && linf_ok &&
               support_count_ok;
    }

    std::string summary() const {
        std::string out;
        const auto note = [&out](bool ok, const char* label) {
            if (ok) return;
            if (!out.empty()) out += ", ";
            out += label;
        };
        note(reconstruction_ok, "reconstruction");
        note(weights_ok, "weights");
        note(sparsity_ok, "sparsity");
        note(l1_ok, "l1 invariance");
        note(linf_ok, "linf bound");
        note(support_count_ok, "support count");
        return out.empty() ? "ok" : "failed: " + out;
    }
};

inline DecompositionCheck verify_decomposition(const Decomposition& d) {
    const Vector& v = d.input.v;
    const int k = d.input.k;
    const double bound = d.input.capacity / k;
    const double zero_tol = default_zero_tol(v);
    const double v_l1 = l1_norm(v);

    DecompositionCheck check;
    check.support_limit =
        binomial_capped(v.size(), static_cast<std::uint64_t>(k));

    std::vector<double> sum(v.size(), 0.0);
    double weight_sum = 0.0;
    double min_weight = d.terms.empty() ? 0.0 : d.terms.front().weight;
    std::map<std::vector<int>, int> supports;
    for (const auto& term : d.terms) {
        weight_sum += term.weight;
        min_weight = std::min(min_weight, term.weight);
        for (std::size_t i = 0; i < v.size(); ++i)
            sum[i] += term.weight * term.vector[i];
        check.max_l1_deviation =
            std::max(check.max_l1_deviation, std::fabs(l1_norm(term.vector) - v_l1));
        check.max_linf_excess =
            std::max(check.max_linf_excess, linf_norm(term.vector) - bound);
        const SupportSet s = support_of(term.vector, zero_tol);
        check.max_support_size = std::max(check.max_support_size, static_cast<int>(s.size()));
        ++supports[s.indices];
    }
    double residual = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        residual = std::max(residual, std::fabs(sum[i] - v[i]));

    check.reconstruction_residual = residual;
    check.weight_sum_residual = std::fabs(weight_sum - 1.0);
    check.min_weight = min_weight;
    check.distinct_supports = supports.size();

    check.reconstruction_ok = residual <= 1e-10 * std::max(1.0, linf_norm(v));
    check.weights_ok = check.weight_sum_residual <= 1e-10 && min_weight >= -1e-12;
    check.sparsity_ok = check.max_support_size <= k;
    check.l1_ok = check.max_l1_deviation <= 1e-10 * std::max(v_l1, 1e-300);
    check.linf_ok = check.max_linf_excess <= 1e-10 * bound;
    check.support_count_ok = check.distinct_supports <= check.support_limit;
    return check;
}

// l2 instance of the norm-comparison consequence: the decomposition
// gives ||v||_2 <= sum x_t ||w_t||_2 <= C / sqrt(k).
inline bool l2_bound_check(const DecompositionInput& input) {
    const Decomposition d = decompose(input);
    double mixture = 0.0;
    for (const auto& term : d.terms) mixture += term.weight * l2_norm(term.vector);
    const double ceiling = input.capacity / std::sqrt(static_cast<double>(input.k));
    return l2_norm(input.v) <= mixture + 1e-10 && mixture <= ceiling + 1e-10;
}

}  // namespace sparsedecomp
