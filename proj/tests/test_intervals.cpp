#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cheapboot/intervals.hpp"
#include "cheapboot/rng.hpp"
#include "cheapboot/stats.hpp"
#include "support/distributions.hpp"
#include "support/quadrature_oracle.hpp"

using namespace cheapboot;

namespace {

ReplicateSet scalar_set(double point, std::vector<double> replicates) {
    ReplicateSet r;
    r.point = {point};
    for (double v : replicates) r.replicates.push_back({v});
    r.n = 100;
    return r;
}

ReplicateSet random_set(CounterStream& stream, std::size_t d, std::size_t B) {
    ReplicateSet r;
    r.n = 50;
    r.point.resize(d);
    for (auto& v : r.point) v = stream.uniform01() * 10.0 - 5.0;
    for (std::size_t b = 0; b < B; ++b) {
        std::vector<double> rep(d);
        for (std::size_t i = 0; i < d; ++i) {
            rep[i] = r.point[i] + stream.uniform01() * 2.0 - 1.0;
        }
        r.replicates.push_back(std::move(rep));
    }
    return r;
}

}  // namespace

TEST_CASE("cheap interval worked examples") {
    SUBCASE("B = 1") {
        const auto iv = cheap_interval(scalar_set(1.0, {1.2}), 0.05);
        const double t1 = oracle::t_quantile(1, 0.975);
        CHECK(iv.lo[0] == doctest::Approx(1.0 - t1 * 0.2).epsilon(1e-10));
        CHECK(iv.hi[0] == doctest::Approx(1.0 + t1 * 0.2).epsilon(1e-10));
        CHECK(iv.lo[0] == doctest::Approx(-1.5412409472864).epsilon(1e-9));
        CHECK(iv.hi[0] == doctest::Approx(3.5412409472864).epsilon(1e-9));
        CHECK_FALSE(iv.degenerate[0]);
        CHECK(iv.level == doctest::Approx(0.95));
    }
    SUBCASE("all replicates equal the point estimate") {
        const auto iv = cheap_interval(scalar_set(2.5, {2.5, 2.5, 2.5}), 0.05);
        CHECK(iv.lo[0] == 2.5);
        CHECK(iv.hi[0] == 2.5);
        CHECK(iv.degenerate[0]);
    }
    SUBCASE("B = 2") {
        const auto iv = cheap_interval(scalar_set(0.0, {0.3, -0.4}), 0.05);
        const double s = std::sqrt((0.09 + 0.16) / 2.0);
        CHECK(s == doctest::Approx(0.35355339059327373).epsilon(1e-12));
        const double hw = oracle::t_quantile(2, 0.975) * s;
        CHECK(hw == doctest::Approx(1.5212174611294758).epsilon(1e-9));
        CHECK(iv.hi[0] == doctest::Approx(hw).epsilon(1e-9));
        CHECK(iv.lo[0] == doctest::Approx(-hw).epsilon(1e-9));
    }
}

TEST_CASE("basic interval worked examples") {
    SUBCASE("inf-definition arithmetic") {
        const auto iv = basic_interval(scalar_set(0.0, {-0.3, -0.1, 0.2, 0.4}), 0.5);
        CHECK(iv.lo[0] == doctest::Approx(-0.2).epsilon(1e-15));
        CHECK(iv.hi[0] == doctest::Approx(0.3).epsilon(1e-15));
    }
    SUBCASE("symmetric deviations") {
        const auto iv = basic_interval(scalar_set(1.0, {1.0 - 0.25, 1.0 + 0.25}), 0.05);
        CHECK(iv.lo[0] == doctest::Approx(0.75).epsilon(1e-15));
        CHECK(iv.hi[0] == doctest::Approx(1.25).epsilon(1e-15));
    }
    SUBCASE("B = 1 is an error, matching the N.A. table convention") {
        CHECK_THROWS_AS(basic_interval(scalar_set(0.0, {1.0}), 0.05),
                        insufficient_replicates_error);
    }
}

TEST_CASE("percentile interval worked examples") {
    SUBCASE("inf-definition") {
        const auto iv = percentile_interval(scalar_set(2.0, {1, 2, 3, 4}), 0.5);
        CHECK(iv.lo[0] == 1.0);
        CHECK(iv.hi[0] == 3.0);
    }
    SUBCASE("constant replicates degenerate") {
        const auto iv = percentile_interval(scalar_set(2.0, {7.0, 7.0}), 0.05);
        CHECK(iv.lo[0] == 7.0);
        CHECK(iv.hi[0] == 7.0);
        CHECK(iv.degenerate[0]);
    }
    SUBCASE("B = 1 errors") {
        CHECK_THROWS_AS(percentile_interval(scalar_set(0.0, {1.0}), 0.05),
                        insufficient_replicates_error);
    }
}

TEST_CASE("reflection identity between basic and percentile is exact") {
    SeedSpec seed{33, 0, 0, 0};
    CounterStream stream(seed, StreamKind::data);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t B = 2 + stream.bounded(12);
        const auto r = random_set(stream, 1 + stream.bounded(3), B);
        const double alpha = 0.02 + 0.6 * stream.uniform01();
        const auto basic = basic_interval(r, alpha);
        const auto perc = percentile_interval(r, alpha);
        for (std::size_t i = 0; i < r.dim(); ++i) {
            CHECK(basic.lo[i] == 2.0 * r.point[i] - perc.hi[i]);
            CHECK(basic.hi[i] == 2.0 * r.point[i] - perc.lo[i]);
        }
    }
}

TEST_CASE("standard error interval") {
    SUBCASE("worked example") {
        const auto iv = std_error_interval(scalar_set(1.5, {1.0, 2.0}), 0.05);
        CHECK(iv.lo[0] == doctest::Approx(0.11409617565032204).epsilon(1e-9));
        CHECK(iv.hi[0] == doctest::Approx(2.885903824349678).epsilon(1e-9));
    }
    SUBCASE("constant replicates give the degenerate point at the estimate") {
        const auto iv = std_error_interval(scalar_set(3.0, {4.0, 4.0, 4.0}), 0.05);
        CHECK(iv.lo[0] == 3.0);
        CHECK(iv.hi[0] == 3.0);
        CHECK(iv.degenerate[0]);
    }
    SUBCASE("B = 1 errors (divisor B - 1)") {
        CHECK_THROWS_AS(std_error_interval(scalar_set(0.0, {1.0}), 0.05),
                        insufficient_replicates_error);
    }
}

TEST_CASE("cheap interval is symmetric with width 2 t S") {
    SeedSpec seed{44, 0, 0, 0};
    CounterStream stream(seed, StreamKind::data);
    for (int trial = 0; trial < 200; ++trial) {
        const auto r = random_set(stream, 2, 1 + stream.bounded(10));
        const auto iv = cheap_interval(r, 0.05);
        const double t = t_quantile(static_cast<int>(r.n_replicates()), 0.975);
        for (std::size_t i = 0; i < 2; ++i) {
            double ss = 0.0;
            for (const auto& rep : r.replicates) {
                ss += (rep[i] - r.point[i]) * (rep[i] - r.point[i]);
            }
            const double s = std::sqrt(ss / static_cast<double>(r.n_replicates()));
            CHECK(iv.hi[i] - iv.lo[i] ==
                  doctest::Approx(2.0 * t * s).epsilon(1e-13));
            CHECK(iv.hi[i] - r.point[i] ==
                  doctest::Approx(r.point[i] - iv.lo[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("intervals are translation and scale equivariant") {
    SeedSpec seed{55, 0, 0, 0};
    CounterStream stream(seed, StreamKind::data);
    const auto r = random_set(stream, 2, 6);
    const double c = 3.75;
    const double s = 2.5;

    ReplicateSet shifted = r;
    ReplicateSet scaled = r;
    for (std::size_t i = 0; i < r.dim(); ++i) {
        shifted.point[i] += c;
        scaled.point[i] *= s;
    }
    for (std::size_t b = 0; b < r.n_replicates(); ++b) {
        for (std::size_t i = 0; i < r.dim(); ++i) {
            shifted.replicates[b][i] += c;
            scaled.replicates[b][i] *= s;
        }
    }

    using Maker = IntervalSet (*)(const ReplicateSet&, double);
    for (Maker make : {static_cast<Maker>(cheap_interval), static_cast<Maker>(basic_interval),
                       static_cast<Maker>(percentile_interval),
                       static_cast<Maker>(std_error_interval)}) {
        const auto base = make(r, 0.05);
        const auto sh = make(shifted, 0.05);
        const auto sc = make(scaled, 0.05);
        for (std::size_t i = 0; i < r.dim(); ++i) {
            CHECK(sh.lo[i] == doctest::Approx(base.lo[i] + c).epsilon(1e-12));
            CHECK(sh.hi[i] == doctest::Approx(base.hi[i] + c).epsilon(1e-12));
            CHECK(sc.lo[i] == doctest::Approx(base.lo[i] * s).epsilon(1e-12));
            CHECK(sc.hi[i] == doctest::Approx(base.hi[i] * s).epsilon(1e-12));
        }
    }
}

TEST_CASE("cheap width grows with the observed spread") {
    const auto narrow = cheap_interval(scalar_set(0.0, {0.1, -0.1}), 0.05);
    const auto wide = cheap_interval(scalar_set(0.0, {0.4, -0.4}), 0.05);
    CHECK(wide.hi[0] - wide.lo[0] > narrow.hi[0] - narrow.lo[0]);
}

TEST_CASE("expected halfwidth ratio reproduces the printed inflations") {
    struct Row {
        int B;
        double inflation_percent;
    };
    // 417.3%, 94.6%, 24.8%, 10.9% within 0.05 percentage points.
    for (const auto& row : {Row{1, 417.3}, Row{2, 94.6}, Row{5, 24.8}, Row{10, 10.9}}) {
        const double ratio = expected_halfwidth_ratio(row.B, 0.05);
        CHECK(std::fabs(100.0 * (ratio - 1.0) - row.inflation_percent) < 0.05);
    }
}

TEST_CASE("expected halfwidth ratio decreases in B toward 1") {
    double prev = expected_halfwidth_ratio(1, 0.05);
    for (int B = 2; B <= 100; ++B) {
        const double r = expected_halfwidth_ratio(B, 0.05);
        CHECK(r < prev);
        CHECK(r > 1.0);
        prev = r;
    }
    CHECK(expected_halfwidth_ratio(5000, 0.05) - 1.0 < 1e-3);
    CHECK_THROWS_AS(expected_halfwidth_ratio(0, 0.05), std::domain_error);
}

TEST_CASE("replicate dimension mismatches are rejected") {
    ReplicateSet r;
    r.point = {0.0, 0.0};
    r.replicates = {{1.0}};
    CHECK_THROWS_AS(cheap_interval(r, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(cheap_interval(scalar_set(0.0, {0.1}), 1.5), std::domain_error);
}

TEST_CASE("sqrt(n) S_{n,B} distribution sanity check at reduced scale") {
    // Light version of the chi-distribution check: the full-scale run is in
    // the acceptance suite.
    const std::size_t n = 500;
    const int n_draws = 800;
    const int B = 2;
    std::vector<double> stats;
    stats.reserve(n_draws);
    for (int d = 0; d < n_draws; ++d) {
        SeedSpec seed{777, static_cast<std::uint64_t>(d), 0, 0};
        CounterStream data_stream(seed, StreamKind::data);
        std::vector<double> x(n);
        for (auto& v : x) v = normal_quantile(data_stream.uniform01());
        const double xbar = mean_of(x);
        double ss = 0.0;
        for (int b = 1; b <= B; ++b) {
            CounterStream rs(seed.with_resample(static_cast<std::uint64_t>(b)),
                             StreamKind::resample);
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                sum += x[static_cast<std::size_t>(rs.bounded(n))];
            }
            const double dev = sum / static_cast<double>(n) - xbar;
            ss += dev * dev;
        }
        stats.push_back(std::sqrt(static_cast<double>(n) * ss / B));
    }
    const double ks = testdist::ks_distance(stats, [B](double s) {
        return s <= 0.0 ? 0.0 : testdist::chi_squared_cdf(B * s * s, B);
    });
    CHECK(ks < 0.06);
}
