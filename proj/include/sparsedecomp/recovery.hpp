// Basis pursuit: min ||gamma||_1 subject to Phi gamma = y, solved as an
// LP through the standard nonnegative split gamma = u - w. Also hosts the
// inequality-chain diagnostic that replays the recovery argument on a
// concrete instance: minimality, decomposition of the off-support error,
// and the (1 - delta) <= theta contradiction.
#pragma once

#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "sparsedecomp/decomposition.hpp"
#include "sparsedecomp/errors.hpp"
#include "sparsedecomp/matrix.hpp"
#include "sparsedecomp/simplex.hpp"
#include "sparsedecomp/vector.hpp"

namespace sparsedecomp {

struct LpFailure : Error {
    LpStatus status;
    LpFailure(LpStatus s, const std::string& msg) : Error(msg), status(s) {}
};

struct RecoveryResult {
    Vector beta_hat;
    double residual = 0.0;  // ||Phi beta_hat - y||_inf
    double l1_value = 0.0;
    bool has_reference = false;
    bool exact = false;  // meaningful only when has_reference
    LpStatus lp_status = LpStatus::Optimal;
    int lp_iterations = 0;
};

inline LpProblem build_bp_lp(const Matrix& phi, const Vector& y) {
    if (y.size() != phi.rows())
        throw DimensionMismatch("build_bp_lp: y length must match matrix rows");
    const std::size_t n = phi.rows(), p = phi.cols();
    Matrix constraints(n, 2 * p);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < p; ++c) {
            constraints(r, c) = phi(r, c);
            constraints(r, p + c) = -phi(r, c);
        }
    return LpProblem(Vector(2 * p, 1.0), std::move(constraints), y);
}

inline RecoveryResult recover(const Matrix& phi, const Vector& y,
                              const std::optional<Vector>& reference = std::nullopt,
                              double tol = 1e-6, int max_iters = 10000) {
    if (reference && reference->size() != phi.cols())
        throw DimensionMismatch("recover: reference length must match matrix cols");
    const LpSolution sol = simplex_solve(build_bp_lp(phi, y), max_iters);
    if (sol.status != LpStatus::Optimal)
        throw LpFailure(sol.status,
                        std::string("recover: LP terminated with status ") +
                            to_string(sol.status));

    const std::size_t p = phi.cols();
    std::vector<double> beta(p);
    for (std::size_t i = 0; i < p; ++i) beta[i] = sol.x[i] - sol.x[p + i];

    RecoveryResult result;
    result.beta_hat = Vector(std::move(beta));
    const Vector image = phi.multiply(result.beta_hat);
    double residual = 0.0;
    for (std::size_t r = 0; r < y.size(); ++r)
        residual = std::max(residual, std::fabs(image[r] - y[r]));
    result.residual = residual;
    result.l1_value = l1_norm(result.beta_hat);
    result.lp_status = sol.status;
    result.lp_iterations = sol.iterations;
    if (reference) {
        result.has_reference = true;
        double err = 0.0;
        for (std::size_t i = 0; i < p; ++i)
            err = std::max(err, std::fabs(result.beta_hat[i] - (*reference)[i]));
        result.exact = err <= tol;
    }
    return result;
}

// Indices of the k largest |h| entries (ties by lower index), then the rest.
inline std::pair<SupportSet, SupportSet> top_k_split(const Vector& h, int k) {
    if (k < 0 || static_cast<std::size_t>(k) > h.size())
        throw PreconditionViolated("top_k_split: need 0 <= k <= length");
    std::vector<int> order(h.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::fabs(h[a]) > std::fabs(h[b]);
    });
    std::vector<int> top(order.begin(), order.begin() + k);
    std::vector<int> rest(order.begin() + k, order.end());
    std::sort(top.begin(), top.end());
    std::sort(rest.begin(), rest.end());
    return {SupportSet(std::move(top)), SupportSet(std::move(rest))};
}

// Replays the recovery argument on one instance. The caller supplies the
// exact constants delta = delta_k and theta = theta_{k,k} of phi.
struct ProofChainReport {
    bool h_is_zero = true;
    double h_linf = 0.0;
    double ht_l1 = 0.0, ht_l2 = 0.0, hs_l1 = 0.0;

    bool minimality_ok = true;    // ||h_S||_1 <= ||h_T||_1
    bool decomposition_ok = true; // h_S admitted a valid decomposition
    double max_summand_l2 = 0.0;
    bool summand_l2_ok = true;    // every ||w_j||_2 <= ||h_T||_2
    bool rip_lower_ok = true;     // (1-delta)||h_T||^2 <= ||Phi h_T||^2
    bool feasibility_link_ok = true;  // ||Phi h_T||^2 = |<Phi h_T, Phi h_S>|
    bool triangle_ok = true;      // |<...>| <= sum x_j |<Phi h_T, Phi w_j>|
    bool theta_pairs_ok = true;   // each |<Phi h_T, Phi w_j>| <= theta ||h_T|| ||w_j||
    bool contradiction_ok = true; // h != 0 only with (1-delta) <= theta

    bool pass() const {
        return minimality_ok && decomposition_ok && summand_l2_ok && rip_lower_ok &&
               feasibility_link_ok && triangle_ok && theta_pairs_ok && contradiction_ok;
    }
};

inline ProofChainReport proof_chain_check(const Matrix& phi, const Vector& beta,
                                          const Vector& beta_hat, int k,
                                          double delta, double theta) {
    const std::size_t p = phi.cols();
    if (beta.size() != p || beta_hat.size() != p)
        throw DimensionMismatch("proof_chain_check: vector lengths must match cols");
    constexpr double kTol = 1e-8;

    std::vector<double> diff(p);
    for (std::size_t i = 0; i < p; ++i) diff[i] = beta_hat[i] - beta[i];
    const Vector h(std::move(diff));

    ProofChainReport report;
    report.h_linf = linf_norm(h);
    report.h_is_zero = report.h_linf <= 1e-8 * std::max(1.0, linf_norm(beta));

    const auto [t_set, s_set] = top_k_split(h, k);
    Vector h_t(p, 0.0), h_s(p, 0.0);
    for (int i : t_set.indices) h_t[i] = h[i];
    for (int i : s_set.indices) h_s[i] = h[i];

    report.ht_l1 = l1_norm(h_t);
    report.ht_l2 = l2_norm(h_t);
    report.hs_l1 = l1_norm(h_s);
    report.minimality_ok = report.hs_l1 <= report.ht_l1 + kTol;

    // The chain replays the "suppose h != 0" branch of the argument; a
    // numerically zero h leaves nothing to check.
    if (report.h_is_zero) return report;

    // Decompose the off-support error with the capacity the argument
    // prescribes: C = ||h_T||_1, so ||h_S||_inf <= C/k holds by the
    // top-k choice of T. The max absorbs LP-termination rounding in
    // ||h_S||_1 <= ||h_T||_1; a real violation still trips minimality_ok.
    std::vector<SparseTerm> terms;
    try {
        const double cap = std::max(report.ht_l1, report.hs_l1);
        const Decomposition d = decompose(DecompositionInput(h_s, k, cap));
        terms = d.terms;
    } catch (const PreconditionViolated&) {
        report.decomposition_ok = false;
        return report;
    }

    const Vector phi_ht = phi.multiply(h_t);
    const Vector phi_hs = phi.multiply(h_s);
    const double phi_ht_sq = std::inner_product(phi_ht.begin(), phi_ht.end(),
                                                phi_ht.begin(), 0.0);
    const double ht_sq = report.ht_l2 * report.ht_l2;
    report.rip_lower_ok = (1.0 - delta) * ht_sq <= phi_ht_sq + kTol;

    const double inner = std::fabs(std::inner_product(phi_ht.begin(), phi_ht.end(),
                                                      phi_hs.begin(), 0.0));
    // ||Phi h_T||^2 = |<Phi h_T, Phi h_S>| uses Phi h = 0, which holds
    // only up to the LP feasibility residual; checked at a looser 1e-6.
    report.feasibility_link_ok =
        std::fabs(phi_ht_sq - inner) <= 1e-6 * std::max(1.0, phi_ht_sq);

    double mixture = 0.0;
    for (const auto& term : terms) {
        const double summand_l2 = l2_norm(term.vector);
        report.max_summand_l2 = std::max(report.max_summand_l2, summand_l2);
        const Vector phi_w = phi.multiply(term.vector);
        const double pair = std::fabs(std::inner_product(phi_ht.begin(), phi_ht.end(),
                                                         phi_w.begin(), 0.0));
        if (pair > theta * report.ht_l2 * summand_l2 + kTol) report.theta_pairs_ok = false;
        mixture += term.weight * pair;
    }
    report.summand_l2_ok = report.max_summand_l2 <= report.ht_l2 + kTol;
    report.triangle_ok = inner <= mixture + kTol;

    if (!report.h_is_zero)
        report.contradiction_ok = (1.0 - delta) * ht_sq <= theta * ht_sq + kTol;
    return report;
}

}  // namespace sparsedecomp
