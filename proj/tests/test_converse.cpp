#include "doctest.h"
#include "generators.hpp"

#include "omac/converse.hpp"

#include <cmath>

using namespace omac;

namespace {
const Alphabet& B = gen::bin();
constexpr std::uint64_t kBig = 100000000;

Word w(const std::string& s) {
    Word out;
    for (char c : s) out.push_back(static_cast<Symbol>(c - '0'));
    return out;
}

// Enumerates the 16 bit patterns directly.
double quartic_oracle(double a, double b) {
    double total = 0;
    for (int m = 0; m < 16; ++m) {
        int x1 = m & 1, x2 = (m >> 1) & 1, x3 = (m >> 2) & 1, x4 = (m >> 3) & 1;
        if (((x1 + x2 + x3 + x4) & 1) == 0) continue;
        total += (x1 ? a : 1 - a) * (x2 ? b : 1 - b) * (x3 ? a : 1 - a) * (x4 ? b : 1 - b);
    }
    return total;
}

Tensor sign_tensor() {
    auto t = Tensor::zeros(kind_axes(Kind::joint, B, B));
    for (Eigen::Index i = 0; i < t.size(); ++i) {
        auto ix = t.unflat(i);
        t.values_mut()[i] = ((ix[0] + ix[1]) % 2 ? -1.0 : 1.0) / 16.0;
    }
    return t;
}

// Sylvester Hadamard row r of order 8 in 0/1 form; rows 1..7 pairwise agree on half the positions.
Word hadamard_row(std::size_t r) {
    Word out(8);
    for (std::size_t c = 0; c < 8; ++c) out[c] = static_cast<Symbol>(__builtin_popcountll(r & c) & 1);
    return out;
}

Word concat(Word a, const Word& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

CodePair random_code(gen::Rng& r, std::size_t n, std::size_t m1, std::size_t m2) {
    CodePair c{{}, {}, n};
    for (std::size_t i = 0; i < m1; ++i) c.book1.push_back(gen::word(r, n, 2));
    for (std::size_t j = 0; j < m2; ++j) c.book2.push_back(gen::word(r, n, 2));
    return c;
}
}  // namespace

TEST_CASE("plotkin-type bound for the xor channel") {
    CHECK(plotkin_xor_bound(Decimal::parse("0.3")).value == Rational(6));
    CHECK(plotkin_xor_bound(Decimal::parse("0.5")).value == Rational(2));
    CHECK(plotkin_xor_bound(Decimal::parse("0.26")).value == Rational(26));
    CHECK(plotkin_xor_bound(0.3).as_double() == 6.0);
    CHECK(plotkin_xor_bound(Decimal::parse("0.2500001")).as_double() > 1e6);
    CHECK_THROWS(plotkin_xor_bound(Decimal::parse("0.25")));
    CHECK_THROWS(plotkin_xor_bound(Decimal::parse("0.2")));
}

TEST_CASE("quartic: closed form, symmetry and boundary") {
    gen::Rng r(71);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 1000; ++trial) {
        double a = u(r), b = u(r);
        CHECK(xor_quartic(a, b) == doctest::Approx(quartic_oracle(a, b)).epsilon(1e-14));
        CHECK(std::abs(xor_quartic(a, b) - xor_quartic(1 - a, 1 - b)) < 1e-14);
        CHECK(xor_quartic(a, b) == doctest::Approx((1 - std::pow((1 - 2 * a) * (1 - 2 * b), 2)) / 2).epsilon(1e-12));
    }
    for (double a : {0.0, 1.0})
        for (double b : {0.0, 1.0}) CHECK(xor_quartic(a, b) == 0.0);
    auto qm = quartic_max_check(0.01);
    CHECK(std::abs(qm.max - 0.5) < 1e-9);
    CHECK(qm.distance_to(0.25, 0.5) < 1e-9);
    CHECK(qm.distance_to(0.0, 0.0) > 0.4);
}

TEST_CASE("brute force code search") {
    auto r0 = brute_force_search(builtin_xor_mac(0.0), 2, 2, 1, kBig);
    REQUIRE(r0.found);
    CHECK(r0.code->book1 == std::vector<Word>{w("00"), w("01")});  // first canonical pair in word order
    CHECK(verify_zero_error(builtin_xor_mac(0.0), *r0.code).zero_error);
    CHECK(brute_force_search(builtin_xor_mac(0.3), 4, 1, 1, kBig).found);

    // p = 0.3 at n = 3 allows no jammed symbol, so distinct sums decide: {000,111} x {000,011}
    // gives sums 000, 011, 111, 100, all distinct, and the search must agree
    CHECK(brute_force_search(builtin_xor_mac(0.3), 3, 2, 2, kBig).found);

    // monotonicity: none at (M1, M2) implies none at larger sizes
    auto a = brute_force_search(builtin_xor_mac(0.5), 3, 2, 2, kBig);
    if (a.exhaustively_none()) {
        CHECK(brute_force_search(builtin_xor_mac(0.5), 3, 3, 2, kBig).exhaustively_none());
        CHECK(brute_force_search(builtin_xor_mac(0.5), 3, 2, 3, kBig).exhaustively_none());
    }
    auto tiny = brute_force_search(builtin_xor_mac(0.3), 4, 3, 3, 10);
    CHECK_FALSE(tiny.exhaustive);
    CHECK_FALSE(tiny.exhaustively_none());
}

TEST_CASE("brute force agrees with exhaustive enumeration on tiny instances") {
    // unpruned enumeration of all book pairs at n = 3
    gen::Rng r(72);
    for (int trial = 0; trial < 8; ++trial) {
        auto spec = gen::binary_channel(r);
        std::size_t m1 = 1 + r() % 3, m2 = 1 + r() % 2;
        bool exists = false;
        std::vector<Word> all;
        for (int v = 0; v < 8; ++v) all.push_back(Word{Symbol(v >> 2 & 1), Symbol(v >> 1 & 1), Symbol(v & 1)});
        auto subsets = [&](std::size_t m) {
            std::vector<std::vector<Word>> out;
            for (int mask = 0; mask < 256; ++mask) {
                if (std::size_t(__builtin_popcount(mask)) != m) continue;
                std::vector<Word> s;
                for (int v = 0; v < 8; ++v)
                    if (mask >> v & 1) s.push_back(all[std::size_t(v)]);
                out.push_back(s);
            }
            return out;
        };
        for (const auto& b1 : subsets(m1)) {
            for (const auto& b2 : subsets(m2))
                if (verify_zero_error(spec, CodePair{b1, b2, 3}).zero_error) {
                    exists = true;
                    break;
                }
            if (exists) break;
        }
        auto res = brute_force_search(spec, 3, m1, m2, kBig);
        CHECK(res.exhaustive);
        CHECK(res.found == exists);
    }
}

TEST_CASE("komlos check") {
    CHECK_THROWS(komlos_check({w("0101")}, Dist::uniform({Axis{"a", B}, Axis{"b", B}}), 0.1));
    gen::Rng r(73);
    std::vector<Word> v;
    for (int i = 0; i < 20; ++i) v.push_back(gen::word(r, 400, 2));
    auto ref = Dist::uniform({Axis{"a", B}, Axis{"b", B}});
    auto rep = komlos_check(v, ref, 0.1);
    CHECK(rep.precondition);
    CHECK(rep.holds);
    CHECK(rep.asymmetry == 0.0);
    auto tight = komlos_check(v, ref, 0.001);
    CHECK_FALSE(tight.precondition);
    CHECK(tight.bad_i < tight.bad_j);

    auto s = komlos_adversarial_search(200, 20, 24, 5);
    CHECK(s.trials == 200);
    CHECK(s.violations == 0);
    CHECK(s.worst_ratio <= 1.0);
}

TEST_CASE("double count identity and sign") {
    gen::Rng r(74);
    auto ref = Dist::uniform(kind_axes(Kind::joint, B, B));
    for (int trial = 0; trial < 30; ++trial) {
        auto c = random_code(r, 2 + r() % 10, 1 + r() % 5, 1 + r() % 5);
        auto rep = double_count(c, sign_tensor(), ref, 0.1, 0.05);
        CHECK(std::abs(rep.s_direct - rep.s_columns) < 1e-8);
        CHECK(rep.lower_bound_holds);
        CHECK(rep.s_direct >= -1e-9);
        CHECK(rep.eta_prime == doctest::Approx(16 * 0.1));
    }
    auto neg = Tensor(kind_axes(Kind::joint, B, B), Eigen::VectorXd::Constant(16, -1.0 / 16));
    CHECK_THROWS(double_count(random_code(r, 4, 2, 2), neg, ref, 0.1, 0.05));
}

TEST_CASE("converse size bound") {
    CHECK(converse_size_bound(1.0) == doctest::Approx(1 + std::sqrt(2.0)).epsilon(1e-15));
    CHECK(converse_size_bound(3.0) == doctest::Approx(1.0));
    CHECK_THROWS(converse_size_bound(0.0));
}

TEST_CASE("equicoupled extraction") {
    auto spec = builtin_xor_mac(0.3);
    // cluster A: 0^8 + hadamard rows 1..3; cluster B: 1^8 + rows 4..6
    CodePair c{{}, {Word(16, 0), Word(16, 1)}, 16};
    for (std::size_t i = 1; i <= 3; ++i) c.book1.push_back(concat(Word(8, 0), hadamard_row(i)));
    for (std::size_t i = 4; i <= 6; ++i) c.book1.push_back(concat(Word(8, 1), hadamard_row(i)));
    auto ex = extract_equicoupled_pair(spec, c, 0.05, ExtractMode::exact);
    CHECK(ex.verified);
    REQUIRE(ex.indices1.size() == 3);
    CHECK(ex.indices2.size() == 2);
    bool in_a = std::all_of(ex.indices1.begin(), ex.indices1.end(), [](std::size_t i) { return i < 3; });
    bool in_b = std::all_of(ex.indices1.begin(), ex.indices1.end(), [](std::size_t i) { return i >= 3; });
    CHECK((in_a || in_b));
    CHECK(ex.eta_achieved <= 0.05 + 1e-12);

    auto greedy = extract_equicoupled_pair(spec, c, 0.05, ExtractMode::greedy);
    CHECK(greedy.verified);

    CodePair two{{w("0011"), w("0101")}, {w("0000"), w("1111")}, 4};
    auto t = extract_equicoupled_pair(spec, two, 0.05, ExtractMode::exact);
    CHECK(t.indices1.size() == 2);
    CHECK(t.indices2.size() == 2);

    auto single = extract_equicoupled_single(spec, c.book1, Word(16, 0), Kind::marg1, 0.05, ExtractMode::exact);
    CHECK(single.verified);
    CHECK(single.indices1.size() == 3);

    gen::Rng r(75);
    for (int trial = 0; trial < 20; ++trial) {
        auto rc = random_code(r, 12, 2 + r() % 5, 2 + r() % 4);
        std::sort(rc.book1.begin(), rc.book1.end());
        rc.book1.erase(std::unique(rc.book1.begin(), rc.book1.end()), rc.book1.end());
        std::sort(rc.book2.begin(), rc.book2.end());
        rc.book2.erase(std::unique(rc.book2.begin(), rc.book2.end()), rc.book2.end());
        if (rc.m1() < 2 || rc.m2() < 2) continue;
        CHECK(extract_equicoupled_pair(spec, rc, 0.1, trial % 2 ? ExtractMode::exact : ExtractMode::greedy).verified);
    }
}

TEST_CASE("codes sampled from one product extract whole") {
    // at eta = 0.25 the 16-cell net has denominator 4, and Bern(0.325) x Bern(0.475) keeps
    // every cell at least 0.085 net steps from a rounding decision: over eight standard
    // deviations at n = 2e4, so every hyperedge gets the same color
    gen::Rng r(76);
    auto draw = [&](double q) {
        std::bernoulli_distribution b(q);
        Word x(20000);
        for (auto& s : x) s = static_cast<Symbol>(b(r));
        return x;
    };
    CodePair c{{}, {}, 20000};
    for (int i = 0; i < 5; ++i) c.book1.push_back(draw(0.325));
    for (int i = 0; i < 4; ++i) c.book2.push_back(draw(0.475));
    auto ex = extract_equicoupled_pair(builtin_xor_mac(0.3), c, 0.25, ExtractMode::greedy);
    CHECK(ex.verified);
    CHECK(ex.indices1.size() == 5);
    CHECK(ex.indices2.size() == 4);
}
