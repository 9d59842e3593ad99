#include "doctest.h"
#include "generators.hpp"

#include "omac/confusability.hpp"

#include <cmath>

using namespace omac;

namespace {
Word w(const std::string& s) {
    Word out;
    for (char c : s) out.push_back(static_cast<Symbol>(c - '0'));
    return out;
}

const Alphabet& B = gen::bin();

// Exhaustive oracle: every pair of jamming words of length n.
bool brute_confusable(const ChannelSpec& spec, const std::vector<Word>& t, Kind k) {
    const std::size_t n = t[0].size();
    Word a1, b1, a2, b2;
    switch (k) {
        case Kind::joint: a1 = t[0], a2 = t[1], b1 = t[2], b2 = t[3]; break;
        case Kind::marg1: a1 = t[0], a2 = t[1], b1 = b2 = t[2]; break;
        case Kind::marg2: a1 = a2 = t[0], b1 = t[1], b2 = t[2]; break;
    }
    const std::size_t total = std::size_t{1} << n;
    auto as_word = [&](std::size_t v) {
        Word s(n);
        for (std::size_t j = 0; j < n; ++j) s[j] = static_cast<Symbol>((v >> j) & 1);
        return s;
    };
    std::vector<Word> ok;
    for (std::size_t v = 0; v < total; ++v) {
        Word s = as_word(v);
        std::int64_t ones = std::count(s.begin(), s.end(), 1);
        if (spec.lambda.admits_exact({static_cast<std::int64_t>(n) - ones, ones}, static_cast<std::int64_t>(n))) ok.push_back(s);
    }
    for (const auto& s1 : ok)
        for (const auto& s2 : ok)
            if (apply_channel(spec, a1, b1, s1) == apply_channel(spec, a2, b2, s2)) return true;
    return false;
}

// Swap images preserving membership: both copies of each user.
Dist transpose(const Dist& p, Kind k) {
    switch (k) {
        case Kind::joint: return Dist(swap_contents(swap_contents(p.as_tensor(), axis::x1_1, axis::x1_2), axis::x2_1, axis::x2_2));
        case Kind::marg1: return Dist(swap_contents(p.as_tensor(), axis::x1_1, axis::x1_2));
        case Kind::marg2: return Dist(swap_contents(p.as_tensor(), axis::x2_1, axis::x2_2));
    }
    return p;
}

double parity_mass(const Dist& p, Kind k) {
    double m = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        auto idx = p.unflat(i);
        std::size_t z = k == Kind::joint ? idx[0] ^ idx[1] ^ idx[2] ^ idx[3] : k == Kind::marg1 ? idx[0] ^ idx[1] : idx[1] ^ idx[2];
        if (z) m += p.values()[i];
    }
    return m;
}
}  // namespace

TEST_CASE("diagonal couplings are confusable with a valid witness") {
    gen::Rng r(41);
    for (int trial = 0; trial < 100; ++trial) {
        auto spec = gen::binary_channel(r);
        auto p1 = gen::simplex(r, 2), p2 = gen::simplex(r, 2);
        auto diag = Tensor::zeros(kind_axes(Kind::joint, B, B));
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b) diag.values_mut()[diag.flat({a, a, b, b})] = p1[long(a)] * p2[long(b)];
        auto cert = confusable_dist(spec, Dist(diag), Kind::joint);
        REQUIRE(cert.feasible);
        REQUIRE(cert.witness);
        const auto& wt = *cert.witness;
        Tensor x_marg = sum_out(wt.as_tensor(), kind_axis_names(Kind::joint));
        CHECK((x_marg.values() - diag.values()).lpNorm<Eigen::Infinity>() < 1e-9);
        for (Eigen::Index i = 0; i < wt.size(); ++i) {
            if (wt.values()[i] < 1e-12) continue;
            auto ix = wt.unflat(i);  // x1_1, x1_2, x2_1, x2_2, s1, s2, y
            CHECK(spec.output(Symbol(ix[0]), Symbol(ix[2]), Symbol(ix[4])) == ix[6]);
            CHECK(spec.output(Symbol(ix[1]), Symbol(ix[3]), Symbol(ix[5])) == ix[6]);
        }
        CHECK(spec.lambda.admits(marginalize(wt, {"s1"}).values(), 1e-9));
        CHECK(spec.lambda.admits(marginalize(wt, {"s2"}).values(), 1e-9));
    }
}

TEST_CASE("xor: uniform product coupling is joint-confusable exactly when p >= 1/4") {
    auto u = Dist::uniform(kind_axes(Kind::joint, B, B));
    CHECK(confusable_dist(builtin_xor_mac(0.3), u, Kind::joint).feasible);
    CHECK(confusable_dist(builtin_xor_mac(0.25), u, Kind::joint).feasible);
    auto c = confusable_dist(builtin_xor_mac(0.2), u, Kind::joint);
    CHECK_FALSE(c.feasible);
    CHECK(c.slack > 0.05);
    CHECK_FALSE(c.witness);
}

TEST_CASE("xor confusability matches the parity-mass criterion") {
    // For XOR, s1 xor s2 must equal the parity z of the x-tuple; splitting the z=1 mass
    // evenly shows membership iff P(z = 1) <= 2p.
    gen::Rng r(42);
    int decided = 0;
    for (int trial = 0; trial < 400; ++trial) {
        Kind k = static_cast<Kind>(trial % 3);
        double p = 0.05 * double(1 + r() % 10);
        auto d = gen::coupling(r, k, 3 + r() % 8, B, B);
        double z = parity_mass(d, k);
        if (std::abs(z - 2 * p) < 1e-9) continue;
        ++decided;
        CHECK(confusable_dist(builtin_xor_mac(p), d, k).feasible == (z <= 2 * p));
    }
    CHECK(decided > 300);
}

TEST_CASE("distance to the confusability set against the parity oracle") {
    // Scaling odd-parity cells by (1 - t) and even ones by (1 + t) keeps every
    // marginal uniform; t = 0.2 reaches P(z=1) = 0.4, and any member needs at
    // least 0.1 mass moved, so l1 = 0.2 and linf = 0.1 / 8.
    auto u = Dist::uniform(kind_axes(Kind::joint, B, B));
    auto spec = builtin_xor_mac(0.2);
    CHECK(distance_to_set(spec, u, Kind::joint, Metric::L1, Side::to_confusable) == doctest::Approx(0.2).epsilon(1e-6));
    CHECK(distance_to_set(spec, u, Kind::joint, Metric::Linf, Side::to_confusable) ==
          doctest::Approx(0.0125).epsilon(1e-6));
    CHECK(distance_to_set(builtin_xor_mac(0.3), u, Kind::joint, Metric::L1, Side::to_confusable) == 0.0);
    CHECK(distance_to_set(spec, u, Kind::joint, Metric::L1, Side::to_nonconfusable) == 0.0);
}

TEST_CASE("depth inside the confusability set") {
    auto diag = Tensor::zeros(kind_axes(Kind::joint, B, B));
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) diag.values_mut()[diag.flat({a, a, b, b})] = 0.25;
    CHECK(distance_to_set(builtin_xor_mac(0.3), Dist(diag), Kind::joint, Metric::L1, Side::to_nonconfusable) > 0.1);
    // at p = 0 any odd-parity mass leaves the set: the diagonal sits on its boundary
    CHECK(distance_to_set(builtin_xor_mac(0.0), Dist(diag), Kind::joint, Metric::L1, Side::to_nonconfusable) < 1e-7);
    // uniform at p = 0.3: P(z=1) = 1/2 against the threshold 0.6
    auto u = Dist::uniform(kind_axes(Kind::joint, B, B));
    double depth = distance_to_set(builtin_xor_mac(0.3), u, Kind::joint, Metric::L1, Side::to_nonconfusable);
    CHECK(depth > 0.0);
    CHECK(depth <= 0.2 + 1e-9);
}

TEST_CASE("operational confusability examples") {
    auto spec = builtin_xor_mac(0.25);
    auto r = operational_confusable(spec, {w("0000"), w("1100"), w("0000")}, Kind::marg1);
    REQUIRE(r.confusable);
    CHECK(std::count(r.s1.begin(), r.s1.end(), 1) <= 1);
    CHECK(std::count(r.s2.begin(), r.s2.end(), 1) <= 1);
    CHECK(apply_channel(spec, w("0000"), w("0000"), r.s1) == apply_channel(spec, w("1100"), w("0000"), r.s2));
    CHECK_FALSE(operational_confusable(builtin_xor_mac(0.2), {w("0000"), w("1100"), w("0000")}, Kind::marg1).confusable);
    auto self = operational_confusable(builtin_xor_mac(0.0), {w("0110"), w("0110"), w("1011"), w("1011")}, Kind::joint);
    CHECK(self.confusable);
    CHECK(self.s1 == self.s2);
    CHECK_THROWS(operational_confusable(spec, {w("000"), w("1100"), w("0000")}, Kind::marg1));
}

TEST_CASE("operational confusability agrees with exhaustive jamming search") {
    gen::Rng r(43);
    for (int trial = 0; trial < 600; ++trial) {
        auto spec = gen::binary_channel(r);
        Kind k = static_cast<Kind>(trial % 3);
        std::size_t n = 1 + r() % 5;
        std::vector<Word> t;
        for (std::size_t v = 0; v < (k == Kind::joint ? 4u : 3u); ++v) t.push_back(gen::word(r, n, 2));
        auto res = operational_confusable(spec, t, k);
        CHECK(res.confusable == brute_confusable(spec, t, k));
    }
}

TEST_CASE("operational verdicts are invariant under coordinate permutations") {
    gen::Rng r(44);
    for (int trial = 0; trial < 300; ++trial) {
        auto spec = gen::binary_channel(r);
        Kind k = static_cast<Kind>(trial % 3);
        auto t = gen::tuple(r, k, 2 + r() % 6, 2, 2);
        std::vector<std::size_t> perm(t[0].size());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), r);
        auto tp = t;
        for (std::size_t v = 0; v < t.size(); ++v)
            for (std::size_t j = 0; j < perm.size(); ++j) tp[v][j] = t[v][perm[j]];
        CHECK(operational_confusable(spec, t, k).confusable == operational_confusable(spec, tp, k).confusable);
    }
}

TEST_CASE("operational confusability implies LP feasibility on the exact type") {
    gen::Rng r(45);
    int positives = 0;
    for (int trial = 0; trial < 500; ++trial) {
        auto spec = gen::binary_channel(r);
        Kind k = static_cast<Kind>(trial % 3);
        auto t = gen::tuple(r, k, 1 + r() % 6, 2, 2);
        if (!operational_confusable(spec, t, k).confusable) continue;
        ++positives;
        CHECK(confusable_dist(spec, type_of(t, kind_axes(k, B, B)), k).feasible);
    }
    CHECK(positives > 50);
}

TEST_CASE("zero-error verification examples") {
    CHECK(verify_zero_error(builtin_xor_mac(0.3), CodePair{{w("0101")}, {w("0011")}, 4}).zero_error);
    auto bad = verify_zero_error(builtin_xor_mac(0.1), CodePair{{w("0000"), w("1111")}, {w("0000"), w("1111")}, 4});
    REQUIRE_FALSE(bad.zero_error);
    CHECK(bad.kind == Kind::joint);
    CHECK(bad.indices == std::array<std::size_t, 4>{0, 1, 0, 1});
    CHECK(apply_channel(builtin_xor_mac(0.1), bad.tuple[0], bad.tuple[2], bad.s1) ==
          apply_channel(builtin_xor_mac(0.1), bad.tuple[1], bad.tuple[3], bad.s2));
    CHECK(verify_zero_error(builtin_xor_mac(0.0), CodePair{{w("0000"), w("1111")}, {w("0000")}, 4}).zero_error);
}

TEST_CASE("confusability sets: nontrivial, transposition invariant, midpoint convex") {
    gen::Rng r(46);
    for (int trial = 0; trial < 150; ++trial) {
        auto spec = gen::binary_channel(r);
        Kind k = static_cast<Kind>(trial % 3);
        auto a = gen::coupling(r, k, 2 + r() % 6, B, B);
        auto ca = confusable_dist(spec, a, k);
        CHECK(confusable_dist(spec, transpose(a, k), k).feasible == ca.feasible);
        auto b = gen::coupling(r, k, 2 + r() % 6, B, B);
        if (ca.feasible && confusable_dist(spec, b, k).feasible) {
            Dist mid(a.axes(), 0.5 * (a.values() + b.values()));
            CHECK(confusable_dist(spec, mid, k).feasible);
        }
    }
}

TEST_CASE("inputs outside the self-coupling set are rejected") {
    auto axes = kind_axes(Kind::joint, B, B);
    std::size_t idx[] = {0, 1, 0, 0};
    CHECK_THROWS(confusable_dist(builtin_xor_mac(0.3), Dist::point(axes, idx), Kind::joint));
    CHECK_THROWS(confusable_dist(builtin_xor_mac(0.3), Dist::uniform(axes), Kind::marg1));
}
