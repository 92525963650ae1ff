#include <doctest.h>

#include <cmath>
#include <vector>

#include "pettis/errors.hpp"
#include "pettis/sampling.hpp"
#include "pettis/sequence_space.hpp"

using namespace pettis;

namespace {

BlockVector random_vector(const LayoutPtr& layout, Rng& rng) {
    std::vector<std::pair<int, CoordRun>> runs;
    const auto count = rng.below(0, 6);
    for (std::uint64_t i = 0; i < count; ++i) {
        const int n = static_cast<int>(rng.below(1, 5));
        const auto first = rng.below(1, std::uint64_t{1} << n);
        const auto len = rng.below(1, (std::uint64_t{1} << n) - first + 1);
        runs.push_back({n, CoordRun{first, len, rng.uniform(-2.0, 2.0)}});
    }
    return BlockVector::from_runs(layout, runs);
}

Functional random_functional(const LayoutPtr& layout, Rng& rng) {
    std::vector<Coordinate> coords;
    const auto count = rng.below(1, 8);
    for (std::uint64_t i = 0; i < count; ++i) {
        const int n = static_cast<int>(rng.below(1, 5));
        coords.push_back({n, rng.below(1, std::uint64_t{1} << n), rng.uniform(-1.0, 1.0)});
    }
    return Functional(layout, coords);
}

// Norm straight from the expanded coordinates.
double naive_norm(const BlockVector& v) {
    const auto p = v.layout().p();
    double acc = 0.0;
    for (const auto& c : v.coordinates()) {
        acc = p.is_infinite() ? std::max(acc, std::abs(c.value)) : acc + std::pow(std::abs(c.value), p.value());
    }
    return p.is_infinite() ? acc : std::pow(acc, 1.0 / p.value());
}

}  // namespace

TEST_SUITE("sequence_space") {

TEST_CASE("norm examples") {
    const auto l2 = BlockLayout::dyadic(2.0, 4);
    CHECK(norm(BlockVector::from_coords(l2, {{1, 1, 3.0}, {1, 2, 4.0}})) == 5.0);
    const auto l1 = BlockLayout::dyadic(1.0, 4);
    CHECK(norm(BlockVector::from_coords(l1, {{2, 1, 0.5}, {3, 2, 0.25}})) == 0.75);
    CHECK(norm(BlockVector(l2)) == 0.0);
    const auto linf = BlockLayout::dyadic(NormExponent::infinity(), 4);
    CHECK(norm(BlockVector::from_coords(linf, {{2, 1, -0.5}, {3, 2, 0.25}})) == 0.5);
}

TEST_CASE("runs are canonical") {
    const auto l = BlockLayout::dyadic(2.0, 6);
    const auto a = BlockVector::from_runs(l, {{3, {1, 4, 1.0}}, {3, {5, 4, 1.0}}});
    const auto b = BlockVector::from_coords(l, {{3, 1, 1.0}, {3, 2, 1.0}, {3, 3, 1.0}, {3, 4, 1.0},
                                                {3, 5, 1.0}, {3, 6, 1.0}, {3, 7, 1.0}, {3, 8, 1.0}});
    CHECK(a == b);
    REQUIRE(a.levels().at(3).size() == 1);
    CHECK(a.levels().at(3)[0].count == 8);
    // Overlaps add up, zeros vanish.
    const auto c = BlockVector::from_runs(l, {{4, {2, 6, 1.0}}, {4, {4, 2, 2.0}}, {4, {6, 2, -1.0}}});
    CHECK(c.coefficient(4, 1) == 0.0);
    CHECK(c.coefficient(4, 3) == 1.0);
    CHECK(c.coefficient(4, 4) == 3.0);
    CHECK(c.coefficient(4, 6) == 0.0);
    CHECK(c.coefficient(4, 7) == 0.0);
    CHECK(c.nonzero_count() == 4);
    CHECK(BlockVector::from_coords(l, {{2, 1, 1.0}, {2, 1, -1.0}}).empty());
}

TEST_CASE("coordinates must fit the layout") {
    const auto l = BlockLayout::dyadic(2.0, 3);
    CHECK_THROWS_AS(BlockVector::from_coords(l, {{2, 5, 1.0}}), Error);
    CHECK_THROWS_AS(BlockVector::from_coords(l, {{2, 0, 1.0}}), Error);
    try {
        BlockVector::from_coords(l, {{4, 1, 1.0}});
        FAIL("expected level error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::level_out_of_range);
    }
}

TEST_CASE("projection") {
    const auto l = BlockLayout::dyadic(2.0, 4);
    const auto v = BlockVector::from_coords(l, {{1, 1, 3.0}, {2, 4, 4.0}});
    const auto p = project_block(v, 2);
    CHECK(p == BlockVector::from_coords(l, {{2, 4, 4.0}}));
    CHECK(project_block(p, 2) == p);
    CHECK(project_block(BlockVector(l), 3).empty());
    CHECK(norm(p) <= norm(v));
    CHECK(block_norm(v, 2) == 4.0);
}

TEST_CASE("functionals") {
    const auto l = BlockLayout::dyadic(2.0, 4);
    CHECK(apply_functional(Functional::unit(l, 1, 1), BlockVector::from_coords(l, {{1, 1, 3.0}})) == 3.0);
    CHECK(apply_functional(Functional::unit(l, 1, 1), BlockVector::from_coords(l, {{1, 2, 3.0}})) == 0.0);
    const Functional x(l, {{1, 1, 1.0}, {1, 2, -1.0}});
    CHECK(apply_functional(x, BlockVector::from_coords(l, {{1, 1, 2.0}, {1, 2, 2.0}})) == 0.0);
    CHECK(x.dual_norm() == doctest::Approx(std::sqrt(2.0)));
    const auto other = BlockLayout::dyadic(1.0, 4);
    try {
        apply_functional(x, BlockVector(other));
        FAIL("expected layout mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::layout_mismatch);
    }
    const Functional y(BlockLayout::dyadic(1.0, 4), {{2, 1, 0.5}, {3, 1, -0.75}});
    CHECK(y.dual_norm() == 0.75);
}

TEST_CASE("add and scale") {
    const auto l = BlockLayout::dyadic(2.0, 4);
    const auto a = BlockVector::from_coords(l, {{1, 1, 3.0}});
    const auto b = BlockVector::from_coords(l, {{2, 2, 4.0}});
    CHECK(add(a, BlockVector(l)) == a);
    CHECK(scale(a, 0.0).empty());
    CHECK(norm(add(a, b)) * norm(add(a, b)) == doctest::Approx(norm(a) * norm(a) + norm(b) * norm(b)));
    CHECK(subtract(a, a).empty());
    CHECK_THROWS_AS(add(a, BlockVector(BlockLayout::dyadic(1.0, 4))), Error);
}

TEST_CASE("norm axioms and Hoelder on 10^4 random vectors per exponent") {
    Rng rng(4242);
    for (const auto p : {NormExponent(1.0), NormExponent(2.0), NormExponent(4.0), NormExponent::infinity()}) {
        CAPTURE(to_string(p));
        const auto l = BlockLayout::dyadic(p, 5);
        int bad_triangle = 0;
        int bad_scale = 0;
        int bad_hoelder = 0;
        int bad_naive = 0;
        for (int i = 0; i < 10000; ++i) {
            const auto a = random_vector(l, rng);
            const auto b = random_vector(l, rng);
            const double t = rng.uniform(-3.0, 3.0);
            const auto x = random_functional(l, rng);
            if (norm(add(a, b)) > (norm(a) + norm(b)) * (1 + 1e-12)) ++bad_triangle;
            if (std::abs(norm(scale(a, t)) - std::abs(t) * norm(a)) > 1e-12 * (1 + norm(a))) ++bad_scale;
            if (std::abs(apply_functional(x, a)) > x.dual_norm() * norm(a) * (1 + 1e-12) + 1e-15) ++bad_hoelder;
            if (std::abs(norm(a) - naive_norm(a)) > 1e-12 * (1 + norm(a))) ++bad_naive;
        }
        CHECK(bad_triangle == 0);
        CHECK(bad_scale == 0);
        CHECK(bad_hoelder == 0);
        CHECK(bad_naive == 0);
    }
}

TEST_CASE("p-additivity over disjoint levels") {
    Rng rng(5);
    const auto l = BlockLayout::dyadic(4.0, 5);
    for (int i = 0; i < 200; ++i) {
        const auto v = random_vector(l, rng);
        double sum = 0.0;
        for (int n = 1; n <= 5; ++n) sum += std::pow(block_norm(v, n), 4.0);
        CHECK(std::pow(norm(v), 4.0) == doctest::Approx(sum).epsilon(1e-12));
    }
}

TEST_CASE("huge runs stay cheap") {
    const auto l = BlockLayout::dyadic(2.0, 30);
    const auto v = BlockVector::from_runs(l, {{30, {1, std::uint64_t{1} << 30, 1.0}}});
    CHECK(norm(v) == doctest::Approx(std::exp2(15.0)));
    CHECK(v.nonzero_count() == std::uint64_t{1} << 30);
}

TEST_CASE("json round trip") {
    const auto l = BlockLayout::dyadic(2.0, 4);
    const auto v = BlockVector::from_coords(l, {{1, 1, 3.0}, {3, 7, -0.5}});
    const nlohmann::json j = v;
    CHECK(j.at("coeffs").at("3,7").get<double>() == -0.5);
    CHECK(block_vector_from_json(j, l) == v);
    CHECK_THROWS_AS(block_vector_from_json(j, BlockLayout::dyadic(1.0, 4)), Error);
}

}  // TEST_SUITE
