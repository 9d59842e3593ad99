#include "doctest.h"
#include "generators.hpp"

#include "omac/achievability.hpp"

#include <cmath>

using namespace omac;

namespace {
const Alphabet& B = gen::bin();

Word w(const std::string& s) {
    Word out;
    for (char c : s) out.push_back(static_cast<Symbol>(c - '0'));
    return out;
}

Dist bern(const std::string& name, double q) {
    return Dist::over(Axis{name, B}, {1 - q, q});
}

double d2(double a, double b) {
    auto term = [](double x, double y) { return x > 0 ? x * std::log2(x / y) : 0.0; };
    return term(a, b) + term(1 - a, 1 - b);
}

std::size_t parity(const std::vector<std::size_t>& ix, Kind k) {
    return k == Kind::joint ? ix[0] ^ ix[1] ^ ix[2] ^ ix[3] : k == Kind::marg1 ? ix[0] ^ ix[1] : ix[1] ^ ix[2];
}

// For XOR the confusability set with fixed single-axis marginals is {P(odd) <= 2p}.
// Cyclic I-projections onto {P(odd) = 2p} and each marginal family converge to the
// minimizer whenever the reference has more odd mass than 2p.
double xor_kl_oracle(double p, double a, double b, Kind k) {
    Dist ref = good_atom(k, bern("x1", a), bern("x2", b));
    double odd = 0;
    for (Eigen::Index i = 0; i < ref.size(); ++i) odd += parity(ref.unflat(i), k) ? ref.values()[i] : 0.0;
    const double c = 2 * p;
    if (odd <= c) return 0.0;
    Eigen::VectorXd q = ref.values();
    for (int sweep = 0; sweep < 20000; ++sweep) {
        double o = 0;
        for (Eigen::Index i = 0; i < q.size(); ++i) o += parity(ref.unflat(i), k) ? q[i] : 0.0;
        for (Eigen::Index i = 0; i < q.size(); ++i) q[i] *= parity(ref.unflat(i), k) ? c / o : (1 - c) / (1 - o);
        for (const auto& ax : ref.axes()) {
            auto cur = sum_out(Tensor(ref.axes(), q), {ax.name}).values();
            auto want = sum_out(ref, {ax.name}).values();
            std::size_t pos = ref.axis_position(ax.name);
            for (Eigen::Index i = 0; i < q.size(); ++i) {
                auto s = static_cast<Eigen::Index>(ref.unflat(i)[pos]);
                q[i] *= want[s] / cur[s];
            }
        }
    }
    double kl = 0;
    for (Eigen::Index i = 0; i < q.size(); ++i)
        if (q[i] > 0) kl += q[i] * std::log2(q[i] / ref.values()[i]);
    return kl;
}

}  // namespace

TEST_CASE("largest remainder chunk rounding") {
    std::vector<std::pair<Dist, Dist>> f(3, {bern("x1", 0.5), bern("x2", 0.5)});
    auto plan = make_plan({0.5, 0.3, 0.2}, f, 7);
    CHECK(plan.bounds == std::vector<std::size_t>{0, 4, 6, 7});
    CHECK(make_plan({0.5, 0.5}, {f[0], f[1]}, 5).bounds == std::vector<std::size_t>{0, 3, 5});
    CHECK(make_plan({1.0}, {f[0]}, 9).n() == 9);
    gen::Rng r(61);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t k = 1 + r() % 5, n = 1 + r() % 100;
        auto wts = gen::simplex(r, k);
        if (wts.minCoeff() * double(n) < 1) continue;
        auto p = make_plan(std::vector<double>(wts.begin(), wts.end()), std::vector<std::pair<Dist, Dist>>(k, f[0]), n);
        CHECK(p.n() == n);
        for (std::size_t l = 0; l < k; ++l) CHECK(std::abs(double(p.chunk_size(l)) - wts[long(l)] * double(n)) < 1.0);
    }
}

TEST_CASE("forced compositions from point-mass chunks") {
    auto plan = make_plan({0.5, 0.5}, {{bern("x1", 0), bern("x2", 0.5)}, {bern("x1", 1), bern("x2", 0.5)}}, 10);
    auto book = sample_book(plan, 1, 50, 7);
    for (const auto& word : book) CHECK(word == w("0000011111"));
    CHECK(word_counts(book[0], 2) == std::vector<std::int64_t>{5, 5});
    CHECK(word_counts(book[0], 2, 3, 6) == std::vector<std::int64_t>{2, 1});
}

TEST_CASE("sampling is deterministic and index-stable") {
    auto plan = make_plan({0.4, 0.6}, {{bern("x1", 0.2), bern("x2", 0.5)}, {bern("x1", 0.7), bern("x2", 0.1)}}, 30);
    auto a = sample_book(plan, 1, 10, 99), b = sample_book(plan, 1, 25, 99);
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
    CHECK(sample_book(plan, 2, 10, 99) != a);
    CHECK(sample_book(plan, 1, 10, 100) != a);
    auto c1 = sample_timeshared_code(plan, 4, 5, 3), c2 = sample_timeshared_code(plan, 4, 5, 3);
    CHECK(c1.book1 == c2.book1);
    CHECK(c1.book2 == c2.book2);
    CHECK(c1.n == 30);
}

TEST_CASE("joint types of sampled tuples concentrate on the good mixture") {
    std::vector<double> wts = {0.3, 0.7};
    std::vector<std::pair<Dist, Dist>> f = {{bern("x1", 0.2), bern("x2", 0.6)}, {bern("x1", 0.9), bern("x2", 0.3)}};
    auto plan = make_plan(wts, f, 2000);
    auto target = good_mixture(Kind::joint, wts, f);
    int failures = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto c = sample_timeshared_code(plan, 2, 2, seed);
        auto t = type_of({c.book1[0], c.book1[1], c.book2[0], c.book2[1]}, kind_axes(Kind::joint, B, B));
        failures += distance(t, target, Metric::Linf) > 0.05;
    }
    CHECK(failures < 1);
}

TEST_CASE("composition filters") {
    std::vector<Word> same = {w("0011"), w("1010"), w("0101"), w("1100")};
    CHECK(constant_composition_filter(same, bern("x", 0.5), 0) == same);
    std::vector<Word> mixed = {w("0011"), w("0001"), w("1110"), w("1010")};
    CHECK(constant_composition_filter(mixed, bern("x", 0.5), 0) == std::vector<Word>{w("0011"), w("1010")});
    CHECK(constant_composition_filter(mixed, bern("x", 0.5), 0.25).size() == 4);
    // 0.3 * 5 = 1.5 rounds to one 1 by largest remainder ties to the earlier symbol
    std::vector<Word> five = {w("00001"), w("00011")};
    CHECK(constant_composition_filter(five, bern("x", 0.3), 0).size() == 1);

    auto plan = make_plan({0.5, 0.5}, {{bern("x1", 0), bern("x2", 0.5)}, {bern("x1", 1), bern("x2", 0.5)}}, 4);
    CHECK(timeshared_composition_filter({w("0011"), w("0101"), w("1100")}, plan, 1) == std::vector<Word>{w("0011")});
}

TEST_CASE("majority type meets the pigeonhole floor") {
    gen::Rng r(62);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 1 + r() % 12, q = 2 + r() % 2, m = 1 + r() % 60;
        std::vector<Word> book;
        for (std::size_t i = 0; i < m; ++i) book.push_back(gen::word(r, n, q));
        auto mt = majority_type(book, q);
        CHECK(double(mt.size) >= majority_type_floor(m, n, q));
        std::size_t count = 0;
        for (const auto& x : book) count += word_counts(x, q) == mt.counts;
        CHECK(count == mt.size);
    }
    CHECK(majority_type_floor(100, 4, 2) == doctest::Approx(20.0));
}

TEST_CASE("expurgation") {
    auto spec = builtin_xor_mac(0.25);
    CodePair good{{w("0000"), w("1111")}, {w("0000")}, 4};
    ExpurgationLog log;
    auto same = expurgate(builtin_xor_mac(0.0), good, &log);
    CHECK(same.book1 == good.book1);
    CHECK(same.book2 == good.book2);
    CHECK(log.removed1 + log.removed2 == 0);

    // 0000 and 1000 differ in one coordinate: a single jammed symbol confuses them
    CodePair one{{w("0000"), w("1000")}, {w("0101")}, 4};
    auto out = expurgate(spec, one, &log);
    CHECK(out.book1 == std::vector<Word>{w("0000")});
    CHECK(out.book2 == one.book2);
    CHECK(log.removed1 == 1);
    CHECK(log.removed2 == 0);

    gen::Rng r(63);
    for (int trial = 0; trial < 100; ++trial) {
        auto ch = gen::binary_channel(r);
        std::size_t n = 2 + r() % 5;
        CodePair c{{}, {}, n};
        for (int i = 0; i < 4; ++i) c.book1.push_back(gen::word(r, n, 2)), c.book2.push_back(gen::word(r, n, 2));
        std::sort(c.book1.begin(), c.book1.end());
        c.book1.erase(std::unique(c.book1.begin(), c.book1.end()), c.book1.end());
        std::sort(c.book2.begin(), c.book2.end());
        c.book2.erase(std::unique(c.book2.begin(), c.book2.end()), c.book2.end());
        CHECK(verify_zero_error(ch, expurgate(ch, c)).zero_error);
    }
}

TEST_CASE("kl minima match the parity tilting oracle") {
    auto u1 = bern("x1", 0.5), u2 = bern("x2", 0.5);
    auto m = kl_to_confusable(builtin_xor_mac(0.15), u1, u2, Kind::marg1);
    CHECK(std::abs(m.value - d2(0.3, 0.5)) < 1e-3);
    CHECK(m.value - m.gap <= d2(0.3, 0.5) + 1e-9);
    CHECK(confusable_dist(builtin_xor_mac(0.15), m.minimizer, Kind::marg1).feasible);

    // brute force over the dual multiplier at step 1/512: every grid value is a lower bound
    double grid = -1e9;
    for (int i = 0; i <= 512 * 16; ++i) {
        double lam = i / 512.0;
        grid = std::max(grid, -lam * 0.3 - std::log2(0.5 + 0.5 * std::exp2(-lam)));
    }
    CHECK(m.value >= grid - 1e-3);
    CHECK(std::abs(m.value - grid) < 1e-3);

    gen::Rng r(64);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int trial = 0; trial < 12; ++trial) {
        double a = u(r), b = u(r), p = 0.02 * double(1 + r() % 12);
        Kind k = static_cast<Kind>(trial % 3);
        auto got = kl_to_confusable(builtin_xor_mac(p), bern("x1", a), bern("x2", b), k);
        CHECK(std::abs(got.value - xor_kl_oracle(p, a, b, k)) < 1e-3);
    }
    CHECK(kl_to_confusable(builtin_xor_mac(0.3), u1, u2, Kind::marg1).value == doctest::Approx(0.0));
}

TEST_CASE("inner bound bookkeeping") {
    auto u1 = bern("x1", 0.5), u2 = bern("x2", 0.5);
    auto rep = inner_bound(builtin_xor_mac(0.15), u1, u2);
    CHECK(rep.D >= rep.D_hat - 1e-6);
    CHECK(rep.D_hat == doctest::Approx(std::min(rep.marg1.value, rep.marg2.value)));
    CHECK(rep.D == doctest::Approx(d2(0.3, 0.5)).epsilon(1e-3));
    CHECK(rep.r_individual == doctest::Approx(std::max(0.0, rep.D - rep.D_hat)));
    CHECK(rep.applicable);
    CHECK(inner_bound(builtin_xor_mac(0.3), u1, u2).D_hat == doctest::Approx(0.0));
    gen::Rng r(65);
    std::uniform_real_distribution<double> u(0.1, 0.9);
    for (int trial = 0; trial < 6; ++trial) {
        auto rr = inner_bound(builtin_xor_mac(0.1), bern("x1", u(r)), bern("x2", u(r)));
        CHECK(rr.D >= rr.D_hat - 1e-6);
    }
}

TEST_CASE("sanov exponent is nonincreasing in the jammer weight") {
    auto u1 = bern("x1", 0.5), u2 = bern("x2", 0.5);
    double prev = 1e9;
    for (int i = 0; i <= 6; ++i) {
        double e = sanov_exponent(builtin_xor_mac(0.05 * i), u1, u2, Kind::marg1);
        CHECK(e <= prev + 1e-6);
        prev = e;
    }
    CHECK(prev == doctest::Approx(0.0));
}

TEST_CASE("achieve is deterministic and its output is zero-error") {
    auto u1 = bern("x1", 0.5), u2 = bern("x2", 0.5);
    auto plan = make_plan({1.0}, {{u1, u2}}, 32);
    auto a = achieve(builtin_xor_mac(0.15), plan, 0.02, 0.02, 5);
    auto b = achieve(builtin_xor_mac(0.15), plan, 0.02, 0.02, 5);
    CHECK(a.code.book1 == b.code.book1);
    CHECK(a.code.book2 == b.code.book2);
    CHECK(a.zero_error);
    CHECK(verify_zero_error(builtin_xor_mac(0.15), a.code).zero_error);
    CHECK(a.code.m1() <= a.target_m1);
    CHECK(a.target_m1 == std::size_t(std::ceil(std::pow(2.0, 32 * 0.02))));
}
