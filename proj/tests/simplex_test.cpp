#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "sparsedecomp/recovery.hpp"
#include "sparsedecomp/rng.hpp"
#include "sparsedecomp/simplex.hpp"
#include "test_util.hpp"

namespace sd = sparsedecomp;

namespace {

// Random basis-pursuit LP with a guaranteed feasible point: y = phi
// applied to a sparse nonnegative-split candidate.
struct BpInstance {
    sd::Matrix phi;
    sd::Vector y;
};

BpInstance random_bp(sd::Xoshiro256pp& rng) {
    const std::size_t n = 1 + rng.next_below(4);   // rows <= 4
    const std::size_t p = 1 + rng.next_below(3);   // cols <= 3 (LP has 2p <= 6 vars)
    BpInstance inst{testutil::random_matrix(rng, n, p), sd::Vector(n, 0.0)};
    sd::Vector beta(p, 0.0);
    for (std::size_t i = 0; i < p; ++i)
        if (rng.next_below(2) == 0) beta[i] = rng.next_normal();
    inst.y = inst.phi.multiply(beta);
    return inst;
}

}  // namespace

TEST(Simplex, SolvesDiagonalSystem) {
    const sd::LpProblem lp(sd::Vector{1.0, 1.0}, sd::Matrix::identity(2), sd::Vector{1.0, 2.0});
    const sd::LpSolution sol = sd::simplex_solve(lp);
    ASSERT_EQ(sol.status, sd::LpStatus::Optimal);
    EXPECT_NEAR(sol.objective, 3.0, 1e-12);
    EXPECT_NEAR(sol.x[0], 1.0, 1e-12);
    EXPECT_NEAR(sol.x[1], 2.0, 1e-12);
}

TEST(Simplex, NegativeRhsComponentIsInfeasibleUnderNonnegativity) {
    // x2 = -2 contradicts x >= 0; also exercises the rhs sign flip.
    const sd::LpProblem lp(sd::Vector{1.0, 1.0}, sd::Matrix::identity(2), sd::Vector{1.0, -2.0});
    EXPECT_EQ(sd::simplex_solve(lp).status, sd::LpStatus::Infeasible);
}

TEST(Simplex, ZeroMatrixNonzeroRhsIsInfeasible) {
    const sd::LpProblem lp(sd::Vector{1.0, 1.0}, sd::Matrix(2, 2), sd::Vector{1.0, 0.0});
    EXPECT_EQ(sd::simplex_solve(lp).status, sd::LpStatus::Infeasible);
}

TEST(Simplex, PicksCheapestColumn) {
    sd::Matrix a(1, 3);
    a(0, 0) = 1.0;
    a(0, 1) = 1.0;
    a(0, 2) = 1.0;
    const sd::LpProblem lp(sd::Vector{2.0, 3.0, 1.0}, std::move(a), sd::Vector{1.0});
    const sd::LpSolution sol = sd::simplex_solve(lp);
    ASSERT_EQ(sol.status, sd::LpStatus::Optimal);
    EXPECT_NEAR(sol.objective, 1.0, 1e-12);
    EXPECT_NEAR(sol.x[2], 1.0, 1e-12);
}

TEST(Simplex, DetectsUnboundedObjective) {
    // x1 = x2 with objective -x1: push both to infinity.
    sd::Matrix a(1, 2);
    a(0, 0) = 1.0;
    a(0, 1) = -1.0;
    const sd::LpProblem lp(sd::Vector{-1.0, 0.0}, std::move(a), sd::Vector{0.0});
    EXPECT_EQ(sd::simplex_solve(lp).status, sd::LpStatus::Unbounded);
}

TEST(Simplex, ReportsIterationLimit) {
    const sd::LpProblem lp(sd::Vector{1.0, 1.0}, sd::Matrix::identity(2), sd::Vector{1.0, 1.0});
    const sd::LpSolution sol = sd::simplex_solve(lp, 1);
    EXPECT_EQ(sol.status, sd::LpStatus::IterationLimit);
    EXPECT_EQ(sol.iterations, 1);
}

TEST(Simplex, DropsRedundantRow) {
    sd::Matrix a(2, 2);
    a(0, 0) = 1.0;
    a(0, 1) = 1.0;
    a(1, 0) = 1.0;
    a(1, 1) = 1.0;
    const sd::LpProblem lp(sd::Vector{1.0, 2.0}, std::move(a), sd::Vector{1.0, 1.0});
    const sd::LpSolution sol = sd::simplex_solve(lp);
    ASSERT_EQ(sol.status, sd::LpStatus::Optimal);
    EXPECT_NEAR(sol.objective, 1.0, 1e-12);
    EXPECT_NEAR(sol.x[0], 1.0, 1e-12);
}

TEST(Simplex, InconsistentDuplicateRowIsInfeasible) {
    sd::Matrix a(2, 2);
    a(0, 0) = 1.0;
    a(0, 1) = 1.0;
    a(1, 0) = 1.0;
    a(1, 1) = 1.0;
    const sd::LpProblem lp(sd::Vector{1.0, 2.0}, std::move(a), sd::Vector{1.0, 2.0});
    EXPECT_EQ(sd::simplex_solve(lp).status, sd::LpStatus::Infeasible);
}

TEST(Simplex, RejectsMismatchedDimensions) {
    EXPECT_THROW(sd::LpProblem(sd::Vector{1.0}, sd::Matrix::identity(2), sd::Vector{1.0, 1.0}),
                 sd::DimensionMismatch);
    EXPECT_THROW(sd::LpProblem(sd::Vector{1.0, 1.0}, sd::Matrix::identity(2), sd::Vector{1.0}),
                 sd::DimensionMismatch);
}

TEST(Simplex, ZeroRhsHasZeroMinimumForPositiveCosts) {
    sd::Xoshiro256pp rng(21);
    const sd::Matrix a = testutil::random_matrix(rng, 3, 5);
    const sd::LpProblem lp(sd::Vector(5, 1.0), a, sd::Vector(3, 0.0));
    const sd::LpSolution sol = sd::simplex_solve(lp);
    ASSERT_EQ(sol.status, sd::LpStatus::Optimal);
    EXPECT_NEAR(sol.objective, 0.0, 1e-12);
    for (double xi : sol.x) EXPECT_LE(std::fabs(xi), 1e-9);
}

TEST(Simplex, MatchesVertexEnumerationOnRandomBasisPursuit) {
    sd::Xoshiro256pp rng(22);
    int solved = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const BpInstance inst = random_bp(rng);
        const sd::LpProblem lp = sd::build_bp_lp(inst.phi, inst.y);
        const sd::LpSolution sol = sd::simplex_solve(lp);
        const oracles::BfsOptimum oracle =
            oracles::enumerate_bfs_minimum(lp.constraints, lp.rhs, lp.cost);
        ASSERT_TRUE(oracle.feasible) << "trial " << trial;
        ASSERT_EQ(sol.status, sd::LpStatus::Optimal) << "trial " << trial;
        EXPECT_NEAR(sol.objective, oracle.objective, 1e-8) << "trial " << trial;
        ++solved;

        // Solution sanity: nonnegative, feasible, certified optimal.
        const double b_scale = std::max(1.0, sd::linf_norm(lp.rhs));
        const sd::Vector image = lp.constraints.multiply(sol.x);
        for (std::size_t r = 0; r < lp.rhs.size(); ++r)
            EXPECT_LE(std::fabs(image[r] - lp.rhs[r]), 1e-8 * b_scale);
        for (double xi : sol.x) EXPECT_GE(xi, -1e-10);
        for (double rc : sol.reduced_costs) EXPECT_GE(rc, -1e-9);

        // Complementarity of the nonnegative split: u_i * w_i ~ 0.
        const std::size_t p = inst.phi.cols();
        for (std::size_t i = 0; i < p; ++i)
            EXPECT_LE(sol.x[i] * sol.x[p + i], 1e-9);
    }
    EXPECT_EQ(solved, 40);
}

TEST(Simplex, BasicColumnsHaveZeroReducedCost) {
    sd::Xoshiro256pp rng(23);
    const BpInstance inst = random_bp(rng);
    const sd::LpSolution sol = sd::simplex_solve(sd::build_bp_lp(inst.phi, inst.y));
    ASSERT_EQ(sol.status, sd::LpStatus::Optimal);
    const int nv = static_cast<int>(sol.reduced_costs.size());
    for (int b : sol.basis)
        if (b < nv) EXPECT_LE(std::fabs(sol.reduced_costs[b]), 1e-9);
}
