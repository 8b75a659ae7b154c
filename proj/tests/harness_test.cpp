#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "sparsedecomp/harness.hpp"
#include "test_util.hpp"

namespace sd = sparsedecomp;

namespace {

void expect_same_matrix(const sd::Matrix& a, const sd::Matrix& b) {
    ASSERT_EQ(a.rows(), b.rows());
    ASSERT_EQ(a.cols(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            EXPECT_EQ(a(r, c), b(r, c)) << "entry (" << r << ", " << c << ")";
}

sd::Matrix duplicated_column_matrix() {
    sd::Matrix phi(3, 4);
    phi(0, 0) = 1.0;
    phi(0, 1) = 1.0;  // duplicate of column 0
    phi(1, 2) = 1.0;
    phi(2, 3) = 1.0;
    return phi;
}

}  // namespace

TEST(Harness, GaussianColumnsHaveUnitNorm) {
    const sd::Matrix m = sd::gen_gaussian_matrix(4, 7, 99);
    for (std::size_t c = 0; c < 7; ++c) {
        double norm_sq = 0.0;
        for (std::size_t r = 0; r < 4; ++r) norm_sq += m(r, c) * m(r, c);
        EXPECT_NEAR(std::sqrt(norm_sq), 1.0, 1e-12);
    }
}

TEST(Harness, SquarePartialOrthonormalIsOrthonormal) {
    const sd::Matrix m = sd::gen_partial_orthonormal_matrix(6, 6, 100);
    for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 6; ++b) {
            double dot = 0.0;
            for (std::size_t r = 0; r < 6; ++r) dot += m(r, a) * m(r, b);
            EXPECT_NEAR(dot, a == b ? 1.0 : 0.0, 1e-10);
        }
    EXPECT_NEAR(sd::delta_k(m, 2).delta, 0.0, 1e-10);
}

TEST(Harness, MatrixStreamIsDeterministic) {
    sd::ExperimentConfig cfg;
    cfg.n = 4;
    cfg.p = 6;
    cfg.k = 1;
    cfg.seed = 42;
    cfg.ensemble = sd::Ensemble::Gaussian;
    expect_same_matrix(sd::gen_matrix(cfg, 3), sd::gen_matrix(cfg, 3));

    const sd::Matrix a = sd::gen_matrix(cfg, 0);
    const sd::Matrix b = sd::gen_matrix(cfg, 1);
    bool any_diff = false;
    for (std::size_t r = 0; r < a.rows() && !any_diff; ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (a(r, c) != b(r, c)) { any_diff = true; break; }
    EXPECT_TRUE(any_diff);

    cfg.ensemble = sd::Ensemble::PartialOrthonormal;
    expect_same_matrix(sd::gen_matrix(cfg, 5), sd::gen_matrix(cfg, 5));
}

TEST(Harness, UserFileEnsembleNeedsAMatrix) {
    sd::ExperimentConfig cfg;
    cfg.n = 2;
    cfg.p = 4;
    cfg.k = 1;
    cfg.ensemble = sd::Ensemble::UserFile;
    EXPECT_THROW(sd::gen_matrix(cfg, 0), sd::PreconditionViolated);
}

TEST(Harness, SignalsAreExactlyKSparseWithClearedEntries) {
    for (int k = 0; k <= 8; ++k) {
        const sd::Vector v = sd::gen_signal(8, k, 7000 + k);
        int nonzeros = 0;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0.0) {
                ++nonzeros;
                EXPECT_GE(std::fabs(v[i]), 1e-3);
            }
        EXPECT_EQ(nonzeros, k);
    }
    EXPECT_THROW(sd::gen_signal(3, 4, 0), sd::PreconditionViolated);
    EXPECT_THROW(sd::gen_signal(0, 0, 0), sd::PreconditionViolated);
}

TEST(Harness, SignalSupportsCoverAllSubsets) {
    std::set<std::vector<int>> seen;
    for (int i = 0; i < 500; ++i) {
        const sd::Vector v = sd::gen_signal(6, 2, sd::derive_seed(5, 0x5349u, i));
        seen.insert(sd::support_of(v, 0.0).indices);
    }
    EXPECT_EQ(seen.size(), 15u);  // C(6,2)
}

TEST(Harness, IdentityUserFileIsFullyConsistent) {
    testutil::TempDir dir("harness_id");
    const std::string path = dir.file("identity.csv");
    sd::write_file(path, sd::matrix_to_csv(sd::Matrix::identity(6)));

    sd::ExperimentConfig cfg;
    cfg.n = 6;
    cfg.p = 6;
    cfg.k = 2;
    cfg.ensemble = sd::Ensemble::UserFile;
    cfg.matrix_file = path;
    cfg.num_matrices = 2;
    cfg.num_signals = 3;
    cfg.seed = 11;

    const sd::ConditionVerdict v = sd::verify_recovery_condition(cfg);
    EXPECT_TRUE(v.consistent);
    ASSERT_EQ(v.matrices.size(), 2u);
    for (const auto& mv : v.matrices) {
        EXPECT_NEAR(mv.rip.condition_value, 0.0, 1e-12);
        EXPECT_TRUE(mv.rip.condition_holds);
        EXPECT_TRUE(mv.all_exact);
        ASSERT_EQ(mv.signals.size(), 3u);
        for (const auto& s : mv.signals) {
            EXPECT_TRUE(s.exact);
            EXPECT_LE(s.error_linf, cfg.recovery_tol);
            EXPECT_NEAR(s.l1_value, s.l1_reference, 1e-9);
            EXPECT_EQ(s.lp_status, "optimal");
        }
    }
}

TEST(Harness, MismatchedUserMatrixShapeIsRejected) {
    testutil::TempDir dir("harness_shape");
    const std::string path = dir.file("tiny.csv");
    sd::write_file(path, sd::matrix_to_csv(sd::Matrix::identity(2)));

    sd::ExperimentConfig cfg;
    cfg.n = 6;
    cfg.p = 6;
    cfg.k = 2;
    cfg.ensemble = sd::Ensemble::UserFile;
    cfg.matrix_file = path;
    EXPECT_THROW(sd::verify_recovery_condition(cfg), sd::PreconditionViolated);
}

TEST(Harness, PartialOrthonormalRunStaysConsistent) {
    sd::ExperimentConfig cfg;
    cfg.n = 6;
    cfg.p = 7;
    cfg.k = 1;
    cfg.ensemble = sd::Ensemble::PartialOrthonormal;
    cfg.num_matrices = 3;
    cfg.num_signals = 3;
    cfg.seed = 2024;

    const sd::ConditionVerdict v = sd::verify_recovery_condition(cfg);
    EXPECT_TRUE(v.consistent);
    ASSERT_EQ(v.matrices.size(), 3u);
    for (const auto& mv : v.matrices) {
        EXPECT_GE(mv.rip.delta, 0.0);
        EXPECT_GE(mv.rip.theta, 0.0);
        ASSERT_EQ(mv.signals.size(), 3u);
        if (mv.rip.condition_holds) EXPECT_TRUE(mv.all_exact);
    }
}

TEST(Harness, DuplicatedColumnsFailTheConditionButStayConsistent) {
    testutil::TempDir dir("harness_dup");
    const std::string path = dir.file("dup.csv");
    sd::write_file(path, sd::matrix_to_csv(duplicated_column_matrix()));

    sd::ExperimentConfig cfg;
    cfg.n = 3;
    cfg.p = 4;
    cfg.k = 1;
    cfg.ensemble = sd::Ensemble::UserFile;
    cfg.matrix_file = path;
    cfg.num_signals = 6;
    cfg.seed = 5;

    const sd::ConditionVerdict v = sd::verify_recovery_condition(cfg);
    ASSERT_EQ(v.matrices.size(), 1u);
    EXPECT_NEAR(v.matrices[0].rip.theta, 1.0, 1e-12);
    EXPECT_FALSE(v.matrices[0].rip.condition_holds);
    EXPECT_TRUE(v.consistent);  // vacuous: the hypothesis never applied
}

TEST(Harness, ReportIsDeterministicUpToTimestamp) {
    sd::ExperimentConfig cfg;
    cfg.n = 4;
    cfg.p = 5;
    cfg.k = 1;
    cfg.ensemble = sd::Ensemble::Gaussian;
    cfg.num_matrices = 2;
    cfg.num_signals = 2;
    cfg.seed = 77;

    sd::json a = sd::verdict_to_json(sd::verify_recovery_condition(cfg));
    sd::json b = sd::verdict_to_json(sd::verify_recovery_condition(cfg));
    a.erase("timestamp");
    b.erase("timestamp");
    EXPECT_EQ(a.dump(), b.dump());
    EXPECT_EQ(a["schema_version"], "1");
}

TEST(Harness, ConfigValidationCatchesBadShapes) {
    sd::ExperimentConfig cfg;
    cfg.n = 5;
    cfg.p = 4;  // n > p
    cfg.k = 1;
    EXPECT_THROW(cfg.validate(), sd::PreconditionViolated);

    cfg.n = 4;
    cfg.k = 3;  // 2k > p
    EXPECT_THROW(cfg.validate(), sd::PreconditionViolated);

    cfg.k = 2;
    cfg.num_signals = 0;
    EXPECT_THROW(cfg.validate(), sd::PreconditionViolated);

    cfg.num_signals = 1;
    cfg.ensemble = sd::Ensemble::UserFile;  // no matrix_file
    EXPECT_THROW(cfg.validate(), sd::PreconditionViolated);
}

TEST(Harness, ConfigJsonRoundTrip) {
    sd::ExperimentConfig cfg;
    cfg.n = 6;
    cfg.p = 9;
    cfg.k = 2;
    cfg.ensemble = sd::Ensemble::PartialOrthonormal;
    cfg.num_matrices = 4;
    cfg.num_signals = 7;
    cfg.seed = 123456789ull;
    cfg.recovery_tol = 1e-7;
    cfg.rip_options.eigen_tol = 1e-13;
    cfg.rip_options.max_supports = 5000;
    cfg.rip_options.max_pairs = 60000;

    const sd::ExperimentConfig back =
        sd::config_from_json(sd::config_to_json(cfg), "round_trip");
    EXPECT_EQ(back.n, cfg.n);
    EXPECT_EQ(back.p, cfg.p);
    EXPECT_EQ(back.k, cfg.k);
    EXPECT_EQ(back.ensemble, cfg.ensemble);
    EXPECT_EQ(back.num_matrices, cfg.num_matrices);
    EXPECT_EQ(back.num_signals, cfg.num_signals);
    EXPECT_EQ(back.seed, cfg.seed);
    EXPECT_EQ(back.recovery_tol, cfg.recovery_tol);
    EXPECT_EQ(back.rip_options.eigen_tol, cfg.rip_options.eigen_tol);
    EXPECT_EQ(back.rip_options.max_supports, cfg.rip_options.max_supports);
    EXPECT_EQ(back.rip_options.max_pairs, cfg.rip_options.max_pairs);
}

TEST(Harness, ConfigJsonReportsMissingFields) {
    try {
        sd::config_from_json(sd::json{{"n", 3}, {"p", 4}, {"k", 1}}, "cfg");
        FAIL() << "expected IoError";
    } catch (const sd::IoError& e) {
        EXPECT_NE(std::string(e.what()).find("ensemble"), std::string::npos);
    }
    EXPECT_THROW(sd::config_from_json(sd::json{{"n", 3}, {"p", 4}, {"k", 1},
                                               {"ensemble", "fourier"}},
                                      "cfg"),
                 sd::IoError);
}

TEST(Io, VectorAndMatrixJsonRoundTrip) {
    sd::Xoshiro256pp rng(41);
    const sd::Vector v{1.0, -2.5, 1e-17, 3.25};
    EXPECT_EQ(sd::vector_from_json(sd::vector_to_json(v), "v"), v);

    const sd::Matrix m = testutil::random_matrix(rng, 3, 4);
    expect_same_matrix(sd::matrix_from_json(sd::matrix_to_json(m), "m"), m);
}

TEST(Io, CsvRoundTripIsExact) {
    sd::Xoshiro256pp rng(42);
    const sd::Matrix m = testutil::random_matrix(rng, 4, 3);
    // 17 significant digits reproduce doubles exactly.
    expect_same_matrix(sd::matrix_from_csv(sd::matrix_to_csv(m), "csv"), m);
}

TEST(Io, LoadMatrixSniffsJsonVersusCsv) {
    testutil::TempDir dir("io_sniff");
    const sd::Matrix m = sd::Matrix::identity(3);

    const std::string json_path = dir.file("m.json");
    sd::write_file(json_path, sd::matrix_to_json(m).dump());
    expect_same_matrix(sd::load_matrix_file(json_path), m);

    const std::string csv_path = dir.file("m.csv");
    sd::write_file(csv_path, sd::matrix_to_csv(m));
    expect_same_matrix(sd::load_matrix_file(csv_path), m);
}

TEST(Io, MalformedCsvNamesLineAndField) {
    try {
        sd::matrix_from_csv("1,2\n3,oops\n", "bad.csv");
        FAIL() << "expected IoError";
    } catch (const sd::IoError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
        EXPECT_NE(msg.find("field 2"), std::string::npos) << msg;
    }
    try {
        sd::matrix_from_csv("1,2\n3\n", "ragged.csv");
        FAIL() << "expected IoError";
    } catch (const sd::IoError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
    EXPECT_THROW(sd::matrix_from_csv("", "empty.csv"), sd::IoError);
    EXPECT_THROW(sd::load_matrix_file("/nonexistent/nowhere.csv"), sd::IoError);
}

TEST(Io, SupportIndicesAreOneBasedOnTheWire) {
    const sd::SupportSet s({0, 2});
    const sd::json j = sd::support_to_json(s);
    EXPECT_EQ(j, sd::json::array({1, 3}));
    EXPECT_EQ(sd::support_from_json(j, "s"), s);
    EXPECT_THROW(sd::support_from_json(sd::json::array({0}), "s"), sd::IoError);
}

TEST(Io, DecompositionJsonRoundTrip) {
    const double third = 1.0 / 3.0;
    const sd::Decomposition d =
        sd::decompose(sd::DecompositionInput(sd::Vector{third, third, third}, 2, 1.0));
    const sd::Decomposition back =
        sd::decomposition_from_json(sd::decomposition_to_json(d), "d");
    ASSERT_EQ(back.terms.size(), d.terms.size());
    for (std::size_t i = 0; i < d.terms.size(); ++i) {
        EXPECT_EQ(back.terms[i].weight, d.terms[i].weight);
        EXPECT_EQ(back.terms[i].vector, d.terms[i].vector);
    }
    EXPECT_TRUE(sd::verify_decomposition(back).pass());
}

TEST(Io, VerdictJsonCarriesTheSchema) {
    sd::ExperimentConfig cfg;
    cfg.n = 4;
    cfg.p = 4;
    cfg.k = 1;
    cfg.ensemble = sd::Ensemble::Gaussian;
    cfg.seed = 3;

    const sd::json j = sd::verdict_to_json(sd::verify_recovery_condition(cfg));
    EXPECT_EQ(j["schema_version"], "1");
    EXPECT_TRUE(j["consistent"].is_boolean());
    ASSERT_EQ(j["matrices"].size(), 1u);
    const sd::json& mv = j["matrices"][0];
    EXPECT_TRUE(mv.contains("rip"));
    EXPECT_TRUE(mv["rip"].contains("condition_value"));
    ASSERT_EQ(mv["signals"].size(), 1u);
    EXPECT_TRUE(mv["signals"][0].contains("exact"));
    // The embedded config parses back to a working configuration.
    const sd::ExperimentConfig back = sd::config_from_json(j["config"], "verdict.config");
    EXPECT_EQ(back.n, cfg.n);
    EXPECT_EQ(back.seed, cfg.seed);
}
