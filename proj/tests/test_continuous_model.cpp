#include <doctest.h>

#include <cmath>

#include "pettis/continuous_model.hpp"
#include "pettis/errors.hpp"
#include "pettis/sampling.hpp"

using namespace pettis;

namespace {

// power(1/4), p_n = 4n: c_n = 2^{3-n}.
ContinuousModel quarter_model(int depth = 9, NormExponent p = 2.0) {
    return build_continuous_model(PsiSpec::power(0.25), 1.0, p, SequenceRule::affine(4.0), depth);
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::invalid_argument;
}

}  // namespace

TEST_SUITE("continuous_model") {

TEST_CASE("coefficients and tail") {
    const auto m = quarter_model();
    for (int n = 2; n <= 9; ++n) CHECK(m.coefficient(n) == doctest::Approx(std::exp2(3.0 - n)).epsilon(1e-14));
    CHECK(m.tail(9) == doctest::Approx(std::exp2(-6.0)).epsilon(1e-12));
    CHECK(m.layout()->dim(2) == 257);
    CHECK(m.layout()->dim(9) == (std::uint64_t{1} << 36) + 1);
    CHECK(m.min_separation() == std::ldexp(1.0, -32));
    CHECK(code_of([&] { m.coefficient(1); }) == ErrorCode::level_out_of_range);
    CHECK(code_of([] { build_continuous_model(PsiSpec::power(0.25), 1.0, 2.0, SequenceRule::affine(4.0), 2); }) ==
          ErrorCode::invalid_argument);
    CHECK(code_of([] { build_continuous_model(PsiSpec::power(0.25), 1.0, 2.0, SequenceRule::affine(4.0), 16); }) ==
          ErrorCode::level_overflow);
    CHECK(code_of([] {
              build_continuous_model(PsiSpec::power(0.25), 1.0, 2.0, SequenceRule::affine(1.0), 10, 64, 0.8);
          }) == ErrorCode::growth_failed);
}

TEST_CASE("block paths") {
    const auto m = quarter_model();
    // Left endpoints land on single unit vectors.
    const auto left = eval_fn(m, 2, 3.0 / 256);
    CHECK(left == BlockVector::from_coords(m.layout(), {{2, 4, 1.0}}));
    const auto mid = eval_fn(m, 2, 3.5 / 256);
    CHECK(norm(mid) == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
    CHECK(mid.coefficient(2, 4) == 0.5);
    CHECK(mid.coefficient(2, 5) == 0.5);
    // The last cell reaches the final unit vector.
    const auto last = eval_fn(m, 2, 1.0 - 0.25 / 256);
    CHECK(last.coefficient(2, 257) == doctest::Approx(0.75));
    CHECK(code_of([&] { eval_fn(m, 10, 0.5); }) == ErrorCode::level_out_of_range);
    CHECK(code_of([&] { eval_fn(m, 2, 1.0); }) == ErrorCode::out_of_range);
}

TEST_CASE("value at zero") {
    const auto m = quarter_model();
    const auto v = eval_f(m, 0.0);
    double sq = 0.0;
    for (int n = 2; n <= 9; ++n) {
        sq += m.coefficient(n) * m.coefficient(n);
        CHECK(v.truncated.coefficient(n, 1) == m.coefficient(n));
    }
    CHECK(norm(v.truncated) == doctest::Approx(std::sqrt(sq)).epsilon(1e-14));
    CHECK(v.tail == m.tail(9));
}

TEST_CASE("disjoint brackets are at least unit distance apart") {
    const auto m = quarter_model(3);
    const double w = std::exp2(-8.0);
    double smallest = 1e300;
    for (int i = 0; i <= 20; ++i) {
        for (int j = 0; j <= 20; ++j) {
            const double s = (10 + i / 21.0) * w;
            const double t = (12 + j / 21.0) * w;
            smallest = std::min(smallest, norm(subtract(eval_fn(m, 2, s), eval_fn(m, 2, t))));
        }
    }
    // α² + (1-α)² + β² + (1-β)² has minimum 1 at α = β = 1/2.
    CHECK(smallest >= 1.0 - 1e-12);
    CHECK(norm(subtract(eval_fn(m, 2, 10.5 * w), eval_fn(m, 2, 12.5 * w))) == doctest::Approx(1.0));
}

TEST_CASE("separation level") {
    const auto m = quarter_model();
    const auto sep = separation_lower_bound(m, 0.0, 1.0 - std::exp2(-12.0));
    CHECK(sep.level == 2);
    CHECK(sep.coefficient == 2.0);
    CHECK(sep.distance >= sep.coefficient * (1.0 - 1e-12));

    // |s - t| = 2^{-p_1} sits in the bracket of n = 2, so block 3 separates.
    const auto edge = separation_lower_bound(m, 0.25, 0.25 + std::exp2(-4.0));
    CHECK(edge.level == 3);

    CHECK(code_of([&] { separation_lower_bound(m, 0.4, 0.4); }) == ErrorCode::invalid_argument);
    CHECK(code_of([&] { separation_lower_bound(m, 0.4, 0.4 + std::exp2(-40.0)); }) == ErrorCode::pair_too_close);
}

TEST_CASE("boundary pairs hold") {
    const auto m = quarter_model();
    for (int n = 2; n <= 9; ++n) {
        const double d = std::ldexp(1.0, static_cast<int>(-m.level_exponent(n - 1)));
        for (double s : {0.0, 0.125, 0.5 - d}) {
            const auto pc = check_pair(m, s, s + d);
            CAPTURE(n);
            CHECK(pc.holds);
            CHECK(pc.lhs >= pc.separation.distance * (1 - 1e-12));
        }
    }
}

TEST_CASE("random pairs satisfy the lower bound and the modulus") {
    for (const auto p : {NormExponent(2.0), NormExponent(1.0), NormExponent::infinity()}) {
        const auto m = quarter_model(9, p);
        Rng rng(61);
        int bad_lower = 0;
        int bad_upper = 0;
        for (int i = 0; i < 3000; ++i) {
            const double s = rng.uniform();
            const double t = i % 2 == 0 ? rng.uniform() : std::min(s + std::exp2(rng.uniform(-31.0, -1.0)), 0.999999);
            if (std::abs(s - t) < m.min_separation()) continue;
            const auto pc = check_pair(m, s, t);
            if (!pc.holds) ++bad_lower;
            if (pc.lhs > modulus_bound(m, std::abs(s - t)) * (1 + 1e-12)) ++bad_upper;
        }
        CHECK(bad_lower == 0);
        CHECK(bad_upper == 0);
    }
}

TEST_CASE("json summary") {
    const nlohmann::json j = quarter_model();
    CHECK(j.at("kind") == "continuous");
    CHECK(j.at("c").at("2").get<double>() == 2.0);
    CHECK(j.at("tail_at_depth").get<double>() == doctest::Approx(std::exp2(-6.0)));
}

}  // TEST_SUITE
