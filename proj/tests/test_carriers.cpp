#include <doctest.h>

#include <cstdint>
#include <vector>

#include "pettis/carriers.hpp"
#include "pettis/errors.hpp"

using namespace pettis;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::invalid_argument;
}

// Every pair of carriers, compared directly.
std::uint64_t brute_force_overlaps(const CarrierFamily& f) {
    std::vector<IntervalSet> all;
    for (int n = 1; n <= f.depth(); ++n) {
        for (std::uint64_t k = 1; k <= (std::uint64_t{1} << n); ++k) all.push_back(f.carrier(n, k));
    }
    std::uint64_t overlaps = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            if (overlap_measure(all[i], all[j]) > 0.0) ++overlaps;
        }
    }
    return overlaps;
}

}  // namespace

TEST_SUITE("carriers") {

TEST_CASE("greedy-gap hand-simulated allocations") {
    const auto one = allocate_carriers(1, CarrierScheme::greedy_gap);
    CHECK(carrier(one, 1, 1) == IntervalSet{{0.125, 0.375}});
    CHECK(carrier(one, 1, 2) == IntervalSet{{0.625, 0.875}});

    const auto two = allocate_carriers(2, CarrierScheme::greedy_gap);
    CHECK(carrier(two, 1, 1) == IntervalSet{{0.125, 0.375}});
    CHECK(carrier(two, 2, 1) == IntervalSet{{0.03125, 0.09375}});
    CHECK(carrier(two, 2, 2) == IntervalSet{{0.40625, 0.46875}});
    CHECK(carrier(two, 2, 3) == IntervalSet{{0.53125, 0.59375}});
    CHECK(carrier(two, 2, 4) == IntervalSet{{0.90625, 0.96875}});
    CHECK(verify_disjointness(two).pass);
}

TEST_CASE("greedy-gap runs out of room at depth 3") {
    // A^1_1 = [0.125, 0.375) already covers I^3_2 = [0.125, 0.25).
    CHECK(code_of([] { allocate_carriers(3, CarrierScheme::greedy_gap); }) ==
          ErrorCode::allocation_exhausted);
}

TEST_CASE("index and depth errors") {
    const auto f = allocate_carriers(1, CarrierScheme::greedy_gap);
    CHECK(code_of([&] { carrier(f, 1, 3); }) == ErrorCode::out_of_range);
    CHECK(code_of([&] { carrier(f, 2, 1); }) == ErrorCode::out_of_range);
    CHECK(code_of([] { allocate_carriers(0); }) == ErrorCode::invalid_argument);
    CHECK(code_of([] { allocate_carriers(41); }) == ErrorCode::invalid_argument);
}

TEST_CASE("midpoint-leaf layout") {
    const auto f = allocate_carriers(3);
    // w = 1/8: above the leaf level the slot is [mid + w/2, mid + 3w/4).
    CHECK(carrier(f, 1, 1) == IntervalSet{{0.3125, 0.34375}});
    CHECK(carrier(f, 2, 4) == IntervalSet{{0.9375, 0.96875}});
    // Leaf cells carry [a + w/4, a + w/2).
    CHECK(carrier(f, 3, 1) == IntervalSet{{0.03125, 0.0625}});
    CHECK(f.carrier_measure(3, 8) == 0.03125);
}

TEST_CASE("every scheme is contained, positive and disjoint") {
    for (auto scheme : {CarrierScheme::midpoint_leaf, CarrierScheme::fat_cantor_stage}) {
        for (int depth : {1, 2, 5, 8}) {
            CAPTURE(depth);
            const auto f = allocate_carriers(depth, scheme);
            double total = 0.0;
            for (int n = 1; n <= depth; ++n) {
                for (std::uint64_t k = 1; k <= (std::uint64_t{1} << n); ++k) {
                    const auto a = f.carrier(n, k);
                    CHECK(a.measure() > 0.0);
                    CHECK(dyadic_interval({n, k}).contains(a.hull()));
                    total += a.measure();
                }
            }
            CHECK(total < 1.0);
            CHECK(f.occupied_measure() == doctest::Approx(total));
            CHECK(brute_force_overlaps(f) == 0);
            const auto report = verify_disjointness(f);
            CHECK(report.pass);
            CHECK(report.carriers_checked == (std::uint64_t{2} << depth) - 2);
        }
    }
}

TEST_CASE("fat-cantor stage carriers are finite unions") {
    const auto f = allocate_carriers(4, CarrierScheme::fat_cantor_stage, {3});
    const auto a = f.carrier(2, 3);
    CHECK(a.size() == 8);
    const auto slot = allocate_carriers(4).carrier(2, 3);
    CHECK(is_subset(a, slot));
    CHECK(a.measure() < slot.measure());
}

TEST_CASE("disjointness report flags a corrupted family") {
    const auto f = allocate_carriers(3);
    const auto bad = f.with_carrier(1, 1, unite(f.carrier(1, 1), f.carrier(2, 1)));
    const auto report = verify_disjointness(bad);
    CHECK_FALSE(report.pass);
    CHECK(report.violation_count >= 1);
    bool found_pair = false;
    for (const auto& v : report.violations) {
        if (v.kind == DisjointnessViolation::Kind::overlap &&
            ((v.first == DyadicIndex{1, 1} && v.second == DyadicIndex{2, 1}) ||
             (v.first == DyadicIndex{2, 1} && v.second == DyadicIndex{1, 1}))) {
            found_pair = true;
        }
    }
    CHECK(found_pair);
    CHECK(brute_force_overlaps(bad) >= 1);
}

TEST_CASE("disjointness report flags escapes and empty carriers") {
    const auto f = allocate_carriers(2);
    const auto escaped = f.with_carrier(2, 4, IntervalSet{{0.1, 0.2}});
    const auto r1 = verify_disjointness(escaped);
    CHECK_FALSE(r1.pass);
    const auto empty = f.with_carrier(2, 2, IntervalSet{});
    const auto r2 = verify_disjointness(empty);
    CHECK_FALSE(r2.pass);
    REQUIRE_FALSE(r2.violations.empty());
    CHECK(r2.violations.front().kind == DisjointnessViolation::Kind::empty);
}

TEST_CASE("depth 16 family passes the disjointness check") {
    const auto report = verify_disjointness(allocate_carriers(16));
    CHECK(report.pass);
    CHECK(report.violation_count == 0);
    CHECK(report.carriers_checked == (std::uint64_t{2} << 16) - 2);
}

TEST_CASE("allocation is deterministic and archives round-trip") {
    const auto a = allocate_carriers(6, CarrierScheme::fat_cantor_stage);
    const auto b = allocate_carriers(6, CarrierScheme::fat_cantor_stage);
    const nlohmann::json ja = a;
    const nlohmann::json jb = b;
    CHECK(ja.dump() == jb.dump());
    const auto back = carrier_family_from_json(ja);
    CHECK(back.materialized());
    for (std::uint64_t k = 1; k <= 64; ++k) CHECK(back.carrier(6, k) == a.carrier(6, k));
    CHECK(nlohmann::json(back).dump() == ja.dump());

    const nlohmann::json deep = allocate_carriers(20);
    CHECK_FALSE(deep.contains("sets"));
    CHECK(carrier_family_from_json(deep).carrier(20, 77) == allocate_carriers(20).carrier(20, 77));
}

TEST_CASE("scheme names") {
    CHECK(parse_carrier_scheme("greedy-gap") == CarrierScheme::greedy_gap);
    CHECK(parse_carrier_scheme("fat-cantor-stage") == CarrierScheme::fat_cantor_stage);
    CHECK(to_string(CarrierScheme::midpoint_leaf) == "midpoint-leaf");
    CHECK_THROWS_AS(parse_carrier_scheme("random"), Error);
}

}  // TEST_SUITE
