#include "doctest.h"

#include "omac/classifier.hpp"
#include "omac/json_io.hpp"

using namespace omac;

namespace {
Dist half(const std::string& name) {
    return Dist::over(Axis{name, Alphabet({"0", "1"})}, {0.5, 0.5});
}

ChannelSpec y_eq_x1() {
    auto spec = builtin_xor_mac(1.0);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            for (std::size_t s = 0; s < 2; ++s) spec.w[(a * 2 + b) * 2 + s] = Symbol(a);
    return spec;
}
}  // namespace

TEST_CASE("case mapping follows the implication table") {
    CHECK(case_from_predicates(true, true, true) == 1);
    CHECK(case_from_predicates(false, true, true) == 2);
    CHECK(case_from_predicates(false, true, false) == 3);
    CHECK(case_from_predicates(false, false, true) == 4);
    CHECK(case_from_predicates(false, false, false) == 5);
    CHECK_THROWS_AS(case_from_predicates(true, false, true), std::logic_error);
    CHECK_THROWS_AS(case_from_predicates(true, true, false), std::logic_error);
}

TEST_CASE("xor and identity channels land in their cases and replay") {
    struct Row {
        ChannelSpec spec;
        int expected;
    };
    std::vector<Row> rows = {{builtin_xor_mac(0.2), 1}, {builtin_xor_mac(0.3), 5}, {y_eq_x1(), 3}};
    for (const auto& row : rows) {
        auto v = classify_shape(row.spec, half("x1"), half("x2"), 0.1, 8);
        CHECK(v.shape_case == row.expected);
        CHECK(replay_verdict(row.spec, v));
        CHECK(verdict_from_json(to_json(v)).shape_case == v.shape_case);
        CHECK(replay_verdict(row.spec, verdict_from_json(to_json(v))));
        if (v.predicates[0].verdict) CHECK((v.predicates[1].verdict && v.predicates[2].verdict));
    }
}

TEST_CASE("tampered verdicts fail replay") {
    auto spec = builtin_xor_mac(0.2);
    auto v = classify_shape(spec, half("x1"), half("x2"), 0.1, 8);
    REQUIRE(v.predicates[0].verdict);
    v.predicates[0].verdict = false;
    CHECK_FALSE(replay_verdict(spec, v));
}

TEST_CASE("case number is nondecreasing in the jammer weight") {
    int prev = 1;
    for (int i = 0; i <= 10; ++i) {
        double p = 0.05 * i;
        int c = classify_shape(builtin_xor_mac(p), half("x1"), half("x2"), 0.1, 6).shape_case;
        CHECK(c >= prev);
        prev = c;
    }
    CHECK(prev == 5);
}

TEST_CASE("input scan over the xor family") {
    auto scan = classify_over_inputs(builtin_xor_mac(0.2), 0.5, 0.1, 6);
    CHECK(scan.table.size() == 9);
    CHECK(scan.best_case == 1);
    bool uniform_best = false;
    for (auto i : scan.best) uniform_best |= scan.table[i].p1.values()[0] == 0.5 && scan.table[i].p2.values()[0] == 0.5;
    CHECK(uniform_best);
    auto high = classify_over_inputs(builtin_xor_mac(0.3), 0.5, 0.1, 6, 2);
    CHECK(high.best_case == 5);
    CHECK(high.best_cases == std::vector<int>{5});
}

TEST_CASE("infeasible inputs are rejected") {
    auto spec = builtin_xor_mac(0.2);
    spec.lambda1 = ConstraintSet(spec.x1, {LinearConstraint{{Decimal{0, 0}, Decimal{1, 0}}, lp::Sense::le, Decimal{1, 1}}});
    CHECK_THROWS(classify_shape(spec, half("x1"), half("x2"), 0.1, 4));
}
