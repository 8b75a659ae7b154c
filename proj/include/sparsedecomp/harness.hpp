// End-to-end verification harness: generates measurement ensembles and
// sparse signals, computes exact RIP constants, runs l1 recovery, and
// checks that delta_k + theta_{k,k} < 1 implies exact recovery on every
// instance tried.
#pragma once

#include <cstdint>
#include <ctime>
#include <optional>
#include <string>
#include <vector>

#include "sparsedecomp/errors.hpp"
#include "sparsedecomp/io.hpp"
#include "sparsedecomp/matrix.hpp"
#include "sparsedecomp/recovery.hpp"
#include "sparsedecomp/rip.hpp"
#include "sparsedecomp/rng.hpp"
#include "sparsedecomp/vector.hpp"

namespace sparsedecomp {

enum class Ensemble { Gaussian, PartialOrthonormal, UserFile };

inline std::string to_string(Ensemble e) {
    switch (e) {
        case Ensemble::Gaussian: return "gaussian";
        case Ensemble::PartialOrthonormal: return "partial_orthonormal";
        case Ensemble::UserFile: return "user_file";
    }
    return "?";
}

inline Ensemble ensemble_from_string(const std::string& s) {
    if (s == "gaussian") return Ensemble::Gaussian;
    if (s == "partial_orthonormal") return Ensemble::PartialOrthonormal;
    if (s == "user_file") return Ensemble::UserFile;
    throw IoError("unknown ensemble: '" + s + "'");
}

struct ExperimentConfig {
    int n = 0;  // measurements
    int p = 0;  // ambient dimension
    int k = 0;  // sparsity level
    Ensemble ensemble = Ensemble::Gaussian;
    std::string matrix_file;  // for user_file only
    int num_matrices = 1;
    int num_signals = 1;
    std::uint64_t seed = 0;
    double recovery_tol = 1e-6;
    RipOptions rip_options = RipOptions::from_env();

    void validate() const {
        if (n < 1 || p < 1 || k < 1)
            throw PreconditionViolated("config: n, p, k must be positive");
        if (n > p) throw PreconditionViolated("config: need n <= p");
        if (2 * k > p)
            throw PreconditionViolated("config: need 2k <= p so disjoint supports exist");
        if (num_matrices < 1 || num_signals < 1)
            throw PreconditionViolated("config: need at least one matrix and one signal");
        if (ensemble == Ensemble::UserFile && matrix_file.empty())
            throw PreconditionViolated("config: user_file ensemble needs matrix_file");
    }
};

// n x p with iid standard normal entries, then columns scaled to unit l2.
inline Matrix gen_gaussian_matrix(int n, int p, std::uint64_t seed) {
    Xoshiro256pp rng(seed);
    Matrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(p));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < p; ++c) m(r, c) = rng.next_normal();
    for (int c = 0; c < p; ++c) {
        double norm_sq = 0.0;
        for (int r = 0; r < n; ++r) norm_sq += m(r, c) * m(r, c);
        double norm = std::sqrt(norm_sq);
        while (norm < 1e-8) {  // essentially impossible, but stay well-defined
            norm_sq = 0.0;
            for (int r = 0; r < n; ++r) {
                m(r, c) = rng.next_normal();
                norm_sq += m(r, c) * m(r, c);
            }
            norm = std::sqrt(norm_sq);
        }
        for (int r = 0; r < n; ++r) m(r, c) /= norm;
    }
    return m;
}

// First n rows of a Haar-ish p x p orthonormal matrix (Gram-Schmidt applied
// to a Gaussian matrix), scaled by sqrt(p/n) so columns have unit norm in
// expectation. For n == p the result has exactly orthonormal columns.
inline Matrix gen_partial_orthonormal_matrix(int n, int p, std::uint64_t seed) {
    Xoshiro256pp rng(seed);
    const auto sp = static_cast<std::size_t>(p);
    Matrix g(sp, sp);
    for (std::size_t r = 0; r < sp; ++r)
        for (std::size_t c = 0; c < sp; ++c) g(r, c) = rng.next_normal();
    // Modified Gram-Schmidt on columns, in place.
    for (std::size_t j = 0; j < sp; ++j) {
        for (;;) {
            for (std::size_t i = 0; i < j; ++i) {
                double dot = 0.0;
                for (std::size_t r = 0; r < sp; ++r) dot += g(r, i) * g(r, j);
                for (std::size_t r = 0; r < sp; ++r) g(r, j) -= dot * g(r, i);
            }
            double norm_sq = 0.0;
            for (std::size_t r = 0; r < sp; ++r) norm_sq += g(r, j) * g(r, j);
            const double norm = std::sqrt(norm_sq);
            if (norm >= 1e-8) {
                for (std::size_t r = 0; r < sp; ++r) g(r, j) /= norm;
                break;
            }
            for (std::size_t r = 0; r < sp; ++r) g(r, j) = rng.next_normal();
        }
    }
    const double scale = std::sqrt(static_cast<double>(p) / static_cast<double>(n));
    Matrix m(static_cast<std::size_t>(n), sp);
    for (int r = 0; r < n; ++r)
        for (std::size_t c = 0; c < sp; ++c)
            m(static_cast<std::size_t>(r), c) = scale * g(static_cast<std::size_t>(r), c);
    return m;
}

// Matrix stream: deterministic function of (config.seed, index).
inline Matrix gen_matrix(const ExperimentConfig& cfg, int index,
                         const std::optional<Matrix>& user_matrix = std::nullopt) {
    const std::uint64_t seed = derive_seed(cfg.seed, 0x4d41u, static_cast<std::uint64_t>(index));
    switch (cfg.ensemble) {
        case Ensemble::Gaussian: return gen_gaussian_matrix(cfg.n, cfg.p, seed);
        case Ensemble::PartialOrthonormal:
            return gen_partial_orthonormal_matrix(cfg.n, cfg.p, seed);
        case Ensemble::UserFile:
            if (!user_matrix)
                throw PreconditionViolated("user_file ensemble: no matrix supplied");
            return *user_matrix;
    }
    throw InternalError("unreachable ensemble");
}

// k-sparse signal in R^p: support uniform over k-subsets, values standard
// normal, redrawn as a block until every entry clears 1e-3 in magnitude so
// "exact recovery" is never decided by a borderline coefficient.
inline Vector gen_signal(int p, int k, std::uint64_t seed) {
    if (p < 1 || k < 0 || k > p) throw PreconditionViolated("gen_signal: need 0 <= k <= p");
    Xoshiro256pp rng(seed);
    std::vector<double> entries(static_cast<std::size_t>(p), 0.0);
    if (k == 0) return Vector(std::move(entries));
    std::vector<int> pool(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) pool[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < k; ++i) {  // partial Fisher-Yates: first k slots are the support
        const auto j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(p - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    std::vector<double> values(static_cast<std::size_t>(k));
    for (;;) {
        bool ok = true;
        for (int i = 0; i < k; ++i) {
            values[static_cast<std::size_t>(i)] = rng.next_normal();
            if (std::abs(values[static_cast<std::size_t>(i)]) < 1e-3) ok = false;
        }
        if (ok) break;
    }
    for (int i = 0; i < k; ++i)
        entries[static_cast<std::size_t>(pool[static_cast<std::size_t>(i)])] =
            values[static_cast<std::size_t>(i)];
    return Vector(std::move(entries));
}

struct SignalOutcome {
    int index = 0;
    bool exact = false;
    double error_linf = 0.0;  // ||beta_hat - beta||_inf
    double residual = 0.0;    // ||Phi beta_hat - y||_inf
    double l1_value = 0.0;
    double l1_reference = 0.0;
    std::string lp_status;
};

struct MatrixVerdict {
    int index = 0;
    RipReport rip;
    std::vector<SignalOutcome> signals;
    bool all_exact = true;
};

struct ConditionVerdict {
    ExperimentConfig config;
    std::vector<MatrixVerdict> matrices;
    // True unless some matrix satisfies the recovery condition yet fails to
    // recover one of its signals exactly.
    bool consistent = true;
};

inline ConditionVerdict verify_recovery_condition(const ExperimentConfig& cfg) {
    cfg.validate();
    std::optional<Matrix> user_matrix;
    if (cfg.ensemble == Ensemble::UserFile) {
        user_matrix = load_matrix_file(cfg.matrix_file);
        if (user_matrix->rows() != static_cast<std::size_t>(cfg.n) ||
            user_matrix->cols() != static_cast<std::size_t>(cfg.p))
            throw PreconditionViolated("user matrix shape does not match config n x p");
    }
    ConditionVerdict verdict;
    verdict.config = cfg;
    for (int mi = 0; mi < cfg.num_matrices; ++mi) {
        const Matrix phi = gen_matrix(cfg, mi, user_matrix);
        MatrixVerdict mv;
        mv.index = mi;
        mv.rip = rip_report(phi, cfg.k, cfg.rip_options);
        for (int si = 0; si < cfg.num_signals; ++si) {
            const std::uint64_t sseed = derive_seed(cfg.seed, 0x5349u,
                                                    static_cast<std::uint64_t>(mi),
                                                    static_cast<std::uint64_t>(si));
            const Vector beta = gen_signal(cfg.p, cfg.k, sseed);
            const Vector y = phi.multiply(beta);
            SignalOutcome out;
            out.index = si;
            try {
                const RecoveryResult rec = recover(phi, y, beta, cfg.recovery_tol);
                out.exact = rec.exact;
                out.residual = rec.residual;
                out.l1_value = rec.l1_value;
                out.l1_reference = l1_norm(beta);
                out.lp_status = to_string(rec.lp_status);
                double err = 0.0;
                for (std::size_t i = 0; i < beta.size(); ++i)
                    err = std::max(err, std::abs(rec.beta_hat[i] - beta[i]));
                out.error_linf = err;
            } catch (const LpFailure& e) {
                out.exact = false;
                out.lp_status = to_string(e.status);
            }
            mv.all_exact = mv.all_exact && out.exact;
            mv.signals.push_back(std::move(out));
        }
        if (mv.rip.condition_holds && !mv.all_exact) verdict.consistent = false;
        verdict.matrices.push_back(std::move(mv));
    }
    return verdict;
}

// ---- config / verdict JSON ----

inline ExperimentConfig config_from_json(const json& j, const std::string& context) {
    ExperimentConfig cfg;
    for (const char* field : {"n", "p", "k", "ensemble"})
        if (!j.contains(field))
            throw IoError(context + ": missing field '" + field + "'");
    cfg.n = j["n"].get<int>();
    cfg.p = j["p"].get<int>();
    cfg.k = j["k"].get<int>();
    cfg.ensemble = ensemble_from_string(j["ensemble"].get<std::string>());
    if (j.contains("matrix_file")) cfg.matrix_file = j["matrix_file"].get<std::string>();
    if (j.contains("num_matrices")) cfg.num_matrices = j["num_matrices"].get<int>();
    if (j.contains("num_signals")) cfg.num_signals = j["num_signals"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (t.contains("recovery_tol")) cfg.recovery_tol = t["recovery_tol"].get<double>();
        if (t.contains("eigen_tol")) cfg.rip_options.eigen_tol = t["eigen_tol"].get<double>();
    }
    if (j.contains("budget")) {
        const auto& b = j["budget"];
        if (b.contains("max_supports"))
            cfg.rip_options.max_supports = b["max_supports"].get<std::uint64_t>();
        if (b.contains("max_pairs")) cfg.rip_options.max_pairs = b["max_pairs"].get<std::uint64_t>();
    }
    return cfg;
}

inline json config_to_json(const ExperimentConfig& cfg) {
    json j{{"n", cfg.n},
           {"p", cfg.p},
           {"k", cfg.k},
           {"ensemble", to_string(cfg.ensemble)},
           {"num_matrices", cfg.num_matrices},
           {"num_signals", cfg.num_signals},
           {"seed", cfg.seed},
           {"tolerances", json{{"recovery_tol", cfg.recovery_tol},
                               {"eigen_tol", cfg.rip_options.eigen_tol}}},
           {"budget", json{{"max_supports", cfg.rip_options.max_supports},
                           {"max_pairs", cfg.rip_options.max_pairs}}}};
    if (!cfg.matrix_file.empty()) j["matrix_file"] = cfg.matrix_file;
    return j;
}

inline std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// The "timestamp" field is the only non-deterministic part of a report;
// comparisons for reproducibility should erase it first.
inline json verdict_to_json(const ConditionVerdict& v) {
    json matrices = json::array();
    for (const auto& mv : v.matrices) {
        json signals = json::array();
        for (const auto& s : mv.signals)
            signals.push_back(json{{"index", s.index},
                                   {"exact", s.exact},
                                   {"error_linf", s.error_linf},
                                   {"residual", s.residual},
                                   {"l1_value", s.l1_value},
                                   {"l1_reference", s.l1_reference},
                                   {"lp_status", s.lp_status}});
        matrices.push_back(json{{"index", mv.index},
                                {"rip", rip_report_to_json(mv.rip)},
                                {"signals", std::move(signals)},
                                {"all_exact", mv.all_exact}});
    }
    return json{{"schema_version", "1"},
                {"timestamp", utc_timestamp()},
                {"config", config_to_json(v.config)},
                {"matrices", std::move(matrices)},
                {"consistent", v.consistent}};
}

}  // namespace sparsedecomp
