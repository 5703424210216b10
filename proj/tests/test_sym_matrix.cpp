#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bahc/rng.hpp"
#include "bahc/simgen.hpp"
#include "bahc/sym_matrix.hpp"
#include "support/oracles.hpp"

using namespace bahc;
using Catch::Matchers::WithinAbs;

namespace {

SymMatrix random_pd(int d, Rng& rng) {
    // A A^t + d I keeps the spectrum comfortably positive
    std::vector<std::vector<double>> a(static_cast<std::size_t>(d),
                                       std::vector<double>(static_cast<std::size_t>(d)));
    for (auto& row : a)
        for (double& v : row) v = rng.normal();
    SymMatrix m(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) {
            double s = (i == j) ? static_cast<double>(d) : 0.0;
            for (int k = 0; k < d; ++k)
                s += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                     a[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            m.set(i, j, s);
        }
    return m;
}

}  // namespace

TEST_CASE("IndexSet validation and set algebra") {
    REQUIRE_THROWS_AS(IndexSet({}), InvalidArgumentError);
    REQUIRE_THROWS_AS(IndexSet({2, 2}), InvalidArgumentError);
    REQUIRE_THROWS_AS(IndexSet({3, 1}), InvalidArgumentError);
    const IndexSet a({0, 2}), b({1, 4});
    REQUIRE(a.disjoint_with(b));
    REQUIRE(a.union_with(b).indices() == std::vector<int>{0, 1, 2, 4});
    REQUIRE_THROWS_AS(a.union_with(IndexSet({2, 3})), InvalidArgumentError);
}

TEST_CASE("restrict selects principal submatrices") {
    REQUIRE(restrict(SymMatrix::identity(3), IndexSet({0, 2}))(0, 1) == 0.0);
    REQUIRE(restrict(SymMatrix::identity(3), IndexSet({0, 2}))(1, 1) == 1.0);

    SymMatrix m(3);
    m.set(0, 0, 1.0); m.set(1, 1, 1.0); m.set(2, 2, 1.0);
    m.set(1, 0, 0.5); m.set(2, 0, 0.2); m.set(2, 1, 0.3);
    const SymMatrix r = restrict(m, IndexSet({0, 1}));
    REQUIRE(r.dim() == 2);
    REQUIRE(r(0, 1) == 0.5);

    // homogeneous matrices restrict to homogeneous matrices
    const SymMatrix a4 = homogeneous_matrix(4, 0.3);
    const SymMatrix a2 = restrict(a4, IndexSet({1, 3}));
    REQUIRE(a2(0, 1) == 0.3);
    REQUIRE(a2(0, 0) == 1.0);

    REQUIRE_THROWS_AS(restrict(m, IndexSet({0, 3})), InvalidArgumentError);
}

TEST_CASE("restriction composes across nested subsets") {
    Rng rng(7);
    const SymMatrix m = random_pd(6, rng);
    const IndexSet outer({0, 2, 3, 5});
    const IndexSet inner({1, 3});  // relative to outer -> global {2, 5}
    const SymMatrix two_step = restrict(restrict(m, outer), inner);
    const SymMatrix one_step = restrict(m, IndexSet({2, 5}));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) REQUIRE(two_step(i, j) == one_step(i, j));
}

TEST_CASE("log_det_pd basics") {
    REQUIRE_THAT(log_det_pd(SymMatrix::identity(5)), WithinAbs(0.0, 1e-15));
    // |A_3(0.5)| = [1 + 2*0.5](1 - 0.5)^2 = 0.5
    REQUIRE_THAT(log_det_pd(homogeneous_matrix(3, 0.5)), WithinAbs(std::log(0.5), 1e-12));
}

TEST_CASE("log_det_pd matches a cofactor-expansion oracle on random 6x6") {
    Rng rng(991);
    for (int rep = 0; rep < 20; ++rep) {
        const SymMatrix m = random_pd(6, rng);
        const double ref = std::log(oracle::det_cofactor(m));
        REQUIRE_THAT(log_det_pd(m), WithinAbs(ref, 1e-9 * std::max(1.0, std::abs(ref))));
    }
}

TEST_CASE("log_det_pd is additive over block-diagonal direct sums") {
    Rng rng(5);
    const SymMatrix a = random_pd(3, rng), b = random_pd(4, rng);
    SymMatrix sum(7);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j <= i; ++j) sum.set(i, j, a(i, j));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j <= i; ++j) sum.set(3 + i, 3 + j, b(i, j));
    REQUIRE_THAT(log_det_pd(sum), WithinAbs(log_det_pd(a) + log_det_pd(b), 1e-10));
}

TEST_CASE("log_det_pd scaling identity |cA| = c^dim |A|") {
    Rng rng(17);
    const SymMatrix a = random_pd(5, rng);
    for (double c : {0.25, 3.0, 117.0}) {
        REQUIRE_THAT(log_det_pd(a.scaled(c)),
                     WithinAbs(5 * std::log(c) + log_det_pd(a), 1e-10));
    }
}

TEST_CASE("log_det_pd reports the failing pivot") {
    SymMatrix rank1(2);
    rank1.set(0, 0, 1.0); rank1.set(1, 1, 1.0); rank1.set(1, 0, 1.0);
    try {
        log_det_pd(rank1);
        FAIL("expected NotPositiveDefiniteError");
    } catch (const NotPositiveDefiniteError& e) {
        REQUIRE(e.pivot_index == 1);
    }
}

TEST_CASE("cov_to_corr") {
    SymMatrix diag = SymMatrix::diagonal({4.0, 9.0, 0.25});
    const SymMatrix c = cov_to_corr(diag);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) REQUIRE(c(i, j) == (i == j ? 1.0 : 0.0));

    SymMatrix m(2);
    m.set(0, 0, 4.0); m.set(1, 1, 9.0); m.set(1, 0, 2.0);
    const SymMatrix r = cov_to_corr(m);
    REQUIRE_THAT(r(0, 1), WithinAbs(1.0 / 3.0, 1e-15));
    REQUIRE(r(0, 0) == 1.0);

    SymMatrix zero(2);
    zero.set(0, 0, 1.0);
    REQUIRE_THROWS_AS(cov_to_corr(zero), DegenerateVarianceError);
}
