#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cheapboot/bounds.hpp"
#include "cheapboot/rng.hpp"
#include "support/bound_transcription.hpp"

using namespace cheapboot;

namespace {

GenericBoundInputs random_generic(CounterStream& stream) {
    GenericBoundInputs in;
    in.e1 = stream.uniform01() * 0.2;
    in.e2 = stream.uniform01() * 0.2;
    in.beta = stream.uniform01() * 0.2;
    in.B = 1 + static_cast<int>(stream.bounded(20));
    in.alpha = 0.01 + 0.5 * stream.uniform01();
    in.e3 = stream.uniform01() * 0.4;
    in.e4 = stream.uniform01() * 0.2;
    in.sigma = in.e3 + 0.1 + stream.uniform01();  // keep sigma > e3
    return in;
}

ModelBoundInputs random_model(CounterStream& stream) {
    ModelBoundInputs in;
    auto u = [&] { return 0.1 + 2.9 * stream.uniform01(); };
    in.n = 10 + stream.bounded(10000);
    in.p = 1 + stream.bounded(500);
    in.B = 1 + static_cast<int>(stream.bounded(20));
    in.tau = u();
    in.hessian_bound = u();
    in.grad_norm_lower = u();
    in.lambda_sigma = u();
    in.sigma = u();
    in.m31 = u();
    in.m32 = u();
    in.trace_sigma = u();
    in.third_moment_norm = u();
    in.orlicz_psi1 = u();
    in.third_abs_moment = u();
    in.q = 4.0 + 8.0 * stream.uniform01();
    in.lq_norm = u();
    in.l4_moment = u();
    in.C = u();
    in.C1 = u();
    return in;
}

}  // namespace

TEST_CASE("generic bound worked examples") {
    GenericBoundInputs in;
    in.e1 = 0.01;
    in.e2 = 0.005;
    in.beta = 0.02;
    in.B = 3;
    CHECK(bound_cheap_generic(in) == doctest::Approx(0.07).epsilon(1e-15));
    CHECK(bound_quantile_generic(in) == doctest::Approx(0.07).epsilon(1e-15));

    GenericBoundInputs zeros;
    CHECK(bound_cheap_generic(zeros) == 0.0);
    CHECK(bound_quantile_generic(zeros) == 0.0);

    GenericBoundInputs linear;
    linear.e2 = 0.003;
    for (int B : {1, 4, 9}) {
        linear.B = B;
        CHECK(bound_cheap_generic(linear) == doctest::Approx(2.0 * B * 0.003).epsilon(1e-15));
    }
}

TEST_CASE("generic bounds reject bad inputs") {
    GenericBoundInputs in;
    in.e1 = -0.1;
    CHECK_THROWS_AS(bound_cheap_generic(in), std::domain_error);
    GenericBoundInputs bad_b;
    bad_b.B = 0;
    CHECK_THROWS_AS(bound_cheap_generic(bad_b), std::domain_error);
}

TEST_CASE("comparison chain between cheap and quantile bounds") {
    SeedSpec seed{61, 0, 0, 0};
    CounterStream stream(seed, StreamKind::data);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto in = random_generic(stream);
        const double cheap = bound_cheap_generic(in);
        const double quantile = bound_quantile_generic(in);
        CHECK(0.5 * quantile <= cheap + 1e-15);
        CHECK(cheap <= in.B * quantile + 1e-15);
    }
}

TEST_CASE("alternative bound behavior") {
    SUBCASE("large B second branch approaches 2 e1") {
        GenericBoundInputs in;
        in.e1 = 0.03;
        in.e2 = 1.0;  // makes the first branch useless
        in.B = 1000000;
        in.sigma = 1.0;
        CHECK(bound_cheap_alternative(in) == doctest::Approx(2.0 * in.e1).epsilon(1e-3));
    }
    SUBCASE("huge e2 selects the second branch") {
        GenericBoundInputs in;
        in.e1 = 0.01;
        in.e2 = 100.0;
        in.B = 5;
        in.e3 = 0.05;
        in.e4 = 0.02;
        in.sigma = 1.0;
        CHECK(bound_cheap_alternative(in) < bound_cheap_generic(in));
        CHECK(bound_cheap_alternative(in) == doctest::Approx(transcription::thm6(in)).epsilon(1e-12));
    }
    SUBCASE("never exceeds the basic bound") {
        SeedSpec seed{62, 0, 0, 0};
        CounterStream stream(seed, StreamKind::data);
        for (int trial = 0; trial < 500; ++trial) {
            const auto in = random_generic(stream);
            CHECK(bound_cheap_alternative(in) <= bound_cheap_generic(in));
        }
    }
    SUBCASE("sigma <= e3 rejected") {
        GenericBoundInputs in;
        in.e3 = 2.0;
        in.sigma = 1.0;
        CHECK_THROWS_AS(bound_cheap_alternative(in), std::domain_error);
    }
}

TEST_CASE("model bounds match the independent transcription") {
    SeedSpec seed{63, 0, 0, 0};
    CounterStream stream(seed, StreamKind::data);
    for (int trial = 0; trial < 50; ++trial) {
        const auto in = random_model(stream);
        CHECK(bound_function_of_mean(in, BoundMethod::cheap) ==
              doctest::Approx(transcription::thm3(in)).epsilon(1e-12));
        CHECK(bound_function_of_mean(in, BoundMethod::quantile) ==
              doctest::Approx(transcription::thm7(in)).epsilon(1e-12));
        CHECK(bound_linear_subexp(in, BoundMethod::cheap) ==
              doctest::Approx(transcription::thm4(in)).epsilon(1e-12));
        CHECK(bound_linear_subexp(in, BoundMethod::quantile) ==
              doctest::Approx(transcription::thm8(in)).epsilon(1e-12));
        CHECK(bound_linear_moment(in, BoundMethod::cheap) ==
              doctest::Approx(transcription::thm5(in)).epsilon(1e-12));
        CHECK(bound_linear_moment(in, BoundMethod::quantile) ==
              doctest::Approx(transcription::thm9(in)).epsilon(1e-12));
    }
}

TEST_CASE("function-of-mean bound is affine in B") {
    ModelBoundInputs in;
    in.n = 1000;
    in.p = 50;
    in.B = 3;
    const double at_B = bound_function_of_mean(in, BoundMethod::cheap);
    in.B = 6;
    const double at_2B = bound_function_of_mean(in, BoundMethod::cheap);
    const double n = static_cast<double>(in.n);
    // f(B) = 6/n + B*K, so f(2B) - f(B) = f(B) - 6/n.
    CHECK(at_2B - at_B == doctest::Approx(at_B - 6.0 / n).epsilon(1e-12));
}

TEST_CASE("subexp bound scaling properties") {
    SUBCASE("B-proportional part") {
        ModelBoundInputs in;
        in.n = 500;
        in.C = 1.0;
        in.B = 2;
        const double f2 = bound_linear_subexp(in, BoundMethod::cheap);
        in.B = 6;
        const double f6 = bound_linear_subexp(in, BoundMethod::cheap);
        const double base = in.C / static_cast<double>(in.n);
        CHECK((f6 - base) == doctest::Approx(3.0 * (f2 - base)).epsilon(1e-12));
    }
    SUBCASE("n -> n^4 multiplies the log^11 factor by 4^11") {
        ModelBoundInputs in;
        in.n = 100;
        in.B = 1;
        in.third_abs_moment = 0.0;  // isolate the Orlicz term
        const double small = bound_linear_subexp(in, BoundMethod::cheap) - 1.0 / 100.0;
        ModelBoundInputs big = in;
        big.n = 100000000;  // 100^4
        const double large = bound_linear_subexp(big, BoundMethod::cheap) - 1.0 / 1e8;
        const double expected =
            small * std::pow(4.0, 11) * std::sqrt(100.0) / std::sqrt(1e8);
        CHECK(large == doctest::Approx(expected).epsilon(1e-10));
    }
    SUBCASE("1/sqrt(n) homogeneity of the third-moment term") {
        ModelBoundInputs in;
        in.n = 400;
        in.orlicz_psi1 = 0.0;
        in.B = 1;
        const double f_n = bound_linear_subexp(in, BoundMethod::cheap) - 1.0 / 400.0;
        ModelBoundInputs in4 = in;
        in4.n = 1600;
        const double f_4n = bound_linear_subexp(in4, BoundMethod::cheap) - 1.0 / 1600.0;
        CHECK(f_4n == doctest::Approx(0.5 * f_n).epsilon(1e-12));
    }
}

TEST_CASE("moment bound properties") {
    SUBCASE("q -> infinity exponent limit") {
        ModelBoundInputs in;
        in.n = 2500;
        in.q = 1e9;
        in.third_abs_moment = 0.0;
        const double got = bound_linear_moment(in, BoundMethod::cheap);
        const double expected = std::sqrt(std::log(2500.0)) / std::sqrt(2500.0);
        CHECK(got == doctest::Approx(expected).epsilon(1e-6));
    }
    SUBCASE("max selection picks the larger moment proxy") {
        ModelBoundInputs in;
        in.n = 100;
        in.lq_norm = 0.5;
        in.l4_moment = 9.0;  // sqrt = 3 > 0.5
        in.third_abs_moment = 0.0;
        const double got = bound_linear_moment(in, BoundMethod::cheap);
        in.lq_norm = 3.0;
        in.l4_moment = 0.0;
        CHECK(got == doctest::Approx(bound_linear_moment(in, BoundMethod::cheap)).epsilon(1e-14));
    }
    SUBCASE("q < 4 rejected") {
        ModelBoundInputs in;
        in.q = 3.0;
        CHECK_THROWS_AS(bound_linear_moment(in, BoundMethod::cheap), std::domain_error);
    }
    SUBCASE("n < 3 rejected") {
        ModelBoundInputs in;
        in.n = 2;
        CHECK_THROWS_AS(bound_linear_moment(in, BoundMethod::cheap), std::domain_error);
    }
}

TEST_CASE("bounds are nonnegative and monotone in error inputs") {
    SeedSpec seed{64, 0, 0, 0};
    CounterStream stream(seed, StreamKind::data);
    for (int trial = 0; trial < 200; ++trial) {
        auto in = random_generic(stream);
        const double base = bound_cheap_generic(in);
        CHECK(base >= 0.0);
        auto worse = in;
        worse.e1 += 0.05;
        CHECK(bound_cheap_generic(worse) >= base);
        worse = in;
        worse.e2 += 0.05;
        CHECK(bound_cheap_generic(worse) >= base);
        worse = in;
        worse.beta += 0.05;
        CHECK(bound_cheap_generic(worse) >= base);
    }
    auto model = random_model(stream);
    const double base = bound_function_of_mean(model, BoundMethod::cheap);
    CHECK(base >= 0.0);
    auto worse = model;
    worse.m31 += 1.0;
    CHECK(bound_function_of_mean(worse, BoundMethod::cheap) >= base);
}
