#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "bahc/measures.hpp"
#include "bahc/rng.hpp"
#include "bahc/simgen.hpp"
#include "support/oracles.hpp"

using namespace bahc;
using Catch::Matchers::WithinAbs;

TEST_CASE("random_partition degenerate cases") {
    Rng rng(1);
    REQUIRE(random_partition(5, 5, rng) == Partition::singletons(5));
    REQUIRE(random_partition(5, 1, rng) == Partition::one_block(5));
    REQUIRE_THROWS_AS(random_partition(4, 5, rng), InvalidArgumentError);
    REQUIRE_THROWS_AS(random_partition(4, 0, rng), InvalidArgumentError);
}

TEST_CASE("random_partition(4,2) is uniform over the 7 partitions") {
    Rng rng(123);
    std::map<std::string, int> counts;
    const int draws = 70000;
    for (int k = 0; k < draws; ++k) counts[random_partition(4, 2, rng).to_string()]++;
    REQUIRE(counts.size() == 7);  // S(4,2) = 7
    const double expected = draws / 7.0;
    double chi2 = 0.0;
    for (const auto& [key, n] : counts) {
        const double dlt = n - expected;
        chi2 += dlt * dlt / expected;
    }
    // chi-square critical value, 6 dof, alpha = 0.01
    REQUIRE(chi2 < 16.812);
}

TEST_CASE("random_cluster_correlation shape and distribution") {
    Rng rng(31337);
    REQUIRE(random_cluster_correlation(1, rng)(0, 0) == 1.0);

    const int draws = 10000;
    std::vector<double> offdiag;
    offdiag.reserve(3 * draws);
    for (int k = 0; k < draws; ++k) {
        const SymMatrix c = random_cluster_correlation(3, rng);
        for (int i = 0; i < 3; ++i) {
            REQUIRE(c(i, i) == 1.0);
            for (int j = 0; j < i; ++j) offdiag.push_back(c(i, j));
        }
        log_det_pd(c);  // positive definite
    }
    // marginals of the correlation entries are Uniform(-1, 1)
    const double ks = oracle::ks_statistic(offdiag, [](double x) { return (x + 1.0) / 2.0; });
    REQUIRE(ks < oracle::ks_critical(0.01, offdiag.size()));
}

TEST_CASE("un-rescaled Wishart draws have mean (dk+1) I") {
    Rng rng(5150);
    const int dk = 3, draws = 20000;
    double mean_diag = 0.0, mean_off = 0.0;
    for (int rep = 0; rep < draws; ++rep) {
        const auto a = bahc::detail::bartlett_lower(dk, dk + 1, rng);
        // W = A A^t
        for (int i = 0; i < dk; ++i) {
            double wii = 0.0;
            for (int k = 0; k <= i; ++k) wii += a[static_cast<std::size_t>(i) * dk + k] * a[static_cast<std::size_t>(i) * dk + k];
            mean_diag += wii;
        }
        double w10 = 0.0;
        for (int k = 0; k <= 0; ++k) w10 += a[1 * dk + k] * a[0 * dk + k];
        mean_off += w10;
    }
    mean_diag /= draws * dk;
    mean_off /= draws;
    // E[W] = (dk + 1) I; 3-sigma tolerances from the Wishart second moments
    REQUIRE_THAT(mean_diag, WithinAbs(dk + 1.0, 3.0 * std::sqrt(2.0 * (dk + 1.0)) / std::sqrt(static_cast<double>(draws * dk))));
    REQUIRE_THAT(mean_off, WithinAbs(0.0, 3.0 * std::sqrt(dk + 1.0) / std::sqrt(static_cast<double>(draws))));
}

TEST_CASE("sample_dataset cross-block independence and within-block correlation") {
    Rng rng(2020);
    const Partition truth(2, {IndexSet({0}), IndexSet({1})});
    const auto rows = sample_dataset(truth, 10000, Distribution::gaussian(), rng);
    const ScatterInput sc = scatter_from_data(rows, false);
    const SymMatrix corr = cov_to_corr(sc.sample_cov());
    REQUIRE(std::abs(corr(0, 1)) < 0.1);

    // a 2x2 block with known correlation 0.7
    SymMatrix r2(2);
    r2.set(0, 0, 1.0); r2.set(1, 1, 1.0); r2.set(1, 0, 0.7);
    const Partition block(2, {IndexSet({0, 1})});
    const auto rows2 = sample_dataset(block, 10000, Distribution::gaussian(), {r2}, rng);
    const SymMatrix corr2m = cov_to_corr(scatter_from_data(rows2, false).sample_cov());
    REQUIRE_THAT(corr2m(0, 1), WithinAbs(0.7, 3.0 / std::sqrt(10000.0)));
}

TEST_CASE("student(1) rows are heavy tailed") {
    Rng rng(9001);
    const Partition truth(1, {IndexSet({0})});
    const auto rows = sample_dataset(truth, 10000, Distribution::student(1), rng);
    double m2 = 0.0, m4 = 0.0;
    for (const auto& r : rows) {
        m2 += r[0] * r[0];
        m4 += r[0] * r[0] * r[0] * r[0];
    }
    m2 /= rows.size();
    m4 /= rows.size();
    REQUIRE(m4 / (m2 * m2) > 10.0);  // Gaussian kurtosis is 3
}

TEST_CASE("homogeneous_matrix") {
    const SymMatrix a0 = homogeneous_matrix(4, 0.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) REQUIRE(a0(i, j) == (i == j ? 1.0 : 0.0));
    REQUIRE_THAT(log_det_pd(homogeneous_matrix(3, 0.5)), WithinAbs(std::log(0.5), 1e-12));
    REQUIRE_THROWS_AS(homogeneous_matrix(3, 1.0), InvalidArgumentError);
    REQUIRE_THROWS_AS(homogeneous_matrix(3, -0.1), InvalidArgumentError);
}

TEST_CASE("analytic_homogeneous_mi pinned values and plug-in agreement") {
    REQUIRE(analytic_homogeneous_mi(3, 4, 0.0) == 0.0);
    REQUIRE_THAT(analytic_homogeneous_mi(5, 5, 0.3), WithinAbs(0.31262842250854697874, 1e-12));
    REQUIRE_THAT(analytic_homogeneous_mi(7, 7, 0.25), WithinAbs(0.3366722766318827982, 1e-12));

    for (auto [di, dj, rho] : {std::tuple{1, 1, 0.4}, {2, 5, 0.2}, {4, 4, 0.45}}) {
        std::vector<int> iv, jv;
        for (int k = 0; k < di; ++k) iv.push_back(k);
        for (int k = 0; k < dj; ++k) jv.push_back(di + k);
        const ScatterInput sc =
            ScatterInput::from_correlation(homogeneous_matrix(di + dj, rho), 100, true);
        REQUIRE_THAT(mutual_info_plugin(sc, IndexSet(iv), IndexSet(jv)),
                     WithinAbs(analytic_homogeneous_mi(di, dj, rho), 1e-10));
    }
}

TEST_CASE("homogeneous MI increases with block dimension (extensivity)") {
    for (double rho : {0.1, 0.3, 0.5}) {
        for (int di = 1; di <= 10; ++di)
            for (int dj = 1; dj <= 10; ++dj) {
                if (di + 1 <= 10)
                    REQUIRE(analytic_homogeneous_mi(di + 1, dj, rho) >
                            analytic_homogeneous_mi(di, dj, rho));
                if (dj + 1 <= 10)
                    REQUIRE(analytic_homogeneous_mi(di, dj + 1, rho) >
                            analytic_homogeneous_mi(di, dj, rho));
            }
    }
}

TEST_CASE("plug-in MI bias on independent blocks matches D_i D_j / (2N)") {
    Rng rng(777);
    const int reps = 2000, n = 100;
    const Partition truth(4, {IndexSet({0, 1}), IndexSet({2, 3})});
    const IndexSet i({0, 1}), j({2, 3});
    double sum = 0.0, sumsq = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        std::vector<SymMatrix> blocks{random_cluster_correlation(2, rng),
                                      random_cluster_correlation(2, rng)};
        const auto rows = sample_dataset(truth, n, Distribution::gaussian(), blocks, rng);
        // centered at the known zero mean so n_eff = N exactly
        const ScatterInput sc = scatter_from_data(rows, true, std::vector<double>(4, 0.0));
        const double info = mutual_info_plugin(sc, i, j);
        sum += info;
        sumsq += info * info;
    }
    const double mean = sum / reps;
    const double se = std::sqrt((sumsq / reps - mean * mean) / reps);
    const double bias = 2.0 * 2.0 / (2.0 * n);
    INFO("mean " << mean << " expected " << bias << " se " << se);
    REQUIRE(std::abs(mean - bias) < 3.0 * se);
}

TEST_CASE("inverse-Wishart(D+1, I) correlations are uniform (corr strategy prior)") {
    // draw Sigma ~ IW(nu = D+1, I) as the inverse of Wishart(nu, I), rescale
    // to correlation, and KS-test the off-diagonals against Uniform(-1,1)
    Rng rng(161803);
    const int d = 3, draws = 10000;
    std::vector<double> entries;
    entries.reserve(3 * draws);
    for (int k = 0; k < draws; ++k) {
        const auto a = bahc::detail::bartlett_lower(d, d + 1, rng);
        // W = A A^t; Sigma = W^{-1} via the small-matrix oracle
        oracle::Small w;
        w.d = d;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double s = 0.0;
                for (int t = 0; t <= std::min(i, j); ++t)
                    s += a[static_cast<std::size_t>(i) * d + t] * a[static_cast<std::size_t>(j) * d + t];
                w.a[i][j] = s;
            }
        const oracle::Small sigma = w.inverse();
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < i; ++j)
                entries.push_back(sigma.a[i][j] / std::sqrt(sigma.a[i][i] * sigma.a[j][j]));
    }
    const double ks = oracle::ks_statistic(entries, [](double x) { return (x + 1.0) / 2.0; });
    REQUIRE(ks < oracle::ks_critical(0.01, entries.size()));
}
