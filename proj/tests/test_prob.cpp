#include "doctest.h"
#include "generators.hpp"

#include "omac/exact.hpp"
#include "omac/prob.hpp"

#include <cmath>

using namespace omac;

namespace {
Axis ax(const std::string& name, std::size_t k = 2) { return Axis{name, Alphabet::range(k)}; }
Word w(const std::string& s) {
    Word out;
    for (char c : s) out.push_back(static_cast<Symbol>(c - '0'));
    return out;
}
}  // namespace

TEST_CASE("decimal and rational arithmetic is exact") {
    auto d = Decimal::parse("0.30");
    CHECK(Rational::from_decimal(d) == Rational(3, 10));
    CHECK(Decimal::from_double(0.1 + 0.2).str() == "0.30000000000000004");
    CHECK(Decimal::from_double(0.3).str() == "0.3");
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(1) / (Rational(4) * Rational(1, 20)) + Rational(1) == Rational(6));
    CHECK(Rational(-2, 4).str() == "-1/2");
    CHECK(Rational(1, 4) < Rational(3, 10));
}

TEST_CASE("type of a balanced string and of a pair") {
    auto t = type_of({w("0101")}, {ax("a")});
    CHECK(t.values()[0] == 0.5);
    CHECK(t.values()[1] == 0.5);
    auto p = type_of({w("00"), w("01")}, {ax("a"), ax("b")});
    CHECK(p({0, 0}) == 0.5);
    CHECK(p({0, 1}) == 0.5);
    CHECK(p({1, 0}) == 0.0);
    CHECK_THROWS(type_of({w("00"), w("011")}, {ax("a"), ax("b")}));
    CHECK_THROWS(type_of({Word{0, 2}}, {ax("a")}));
}

TEST_CASE("types are integer counts over n and respect concatenation") {
    gen::Rng r(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n1 = 1 + r() % 9, n2 = 1 + r() % 9;
        Word u1 = gen::word(r, n1, 3), v1 = gen::word(r, n1, 2), u2 = gen::word(r, n2, 3), v2 = gen::word(r, n2, 2);
        std::vector<Axis> axes{ax("u", 3), ax("v")};
        auto e = exact_type_of({u1, v1}, axes);
        CHECK(e.n == static_cast<std::int64_t>(n1));
        CHECK(e.counts.values().sum() == e.n);
        Word u = u1, v = v1;
        u.insert(u.end(), u2.begin(), u2.end());
        v.insert(v.end(), v2.begin(), v2.end());
        double a = static_cast<double>(n1) / static_cast<double>(n1 + n2);
        Eigen::VectorXd mix = a * type_of({u1, v1}, axes).values() + (1 - a) * type_of({u2, v2}, axes).values();
        CHECK((type_of({u, v}, axes).values() - mix).lpNorm<Eigen::Infinity>() < 1e-15);
    }
}

TEST_CASE("marginals of products and of uniform distributions") {
    auto a = Dist::over(ax("a", 3), {0.2, 0.3, 0.5});
    auto b = Dist::over(ax("b"), {0.9, 0.1});
    auto ab = tensor_product(a, b);
    CHECK((marginalize(ab, {"a"}).values() - a.values()).norm() < 1e-15);
    CHECK((marginalize(ab, {"b"}).values() - b.values()).norm() < 1e-15);
    auto u = Dist::uniform({ax("x", 3), ax("y", 3)});
    CHECK((marginalize(u, {"x"}).values().array() - 1.0 / 3).abs().maxCoeff() < 1e-15);
    CHECK_THROWS(marginalize(u, {"z"}));
}

TEST_CASE("signed marginals sum absolute values") {
    Tensor t({ax("a"), ax("b")}, Eigen::Vector4d(0.25, -0.25, -0.25, 0.25));
    auto m = marginalize(t, {"a"});
    CHECK(m.values()[0] == doctest::Approx(0.5));
    CHECK(m.values()[1] == doctest::Approx(0.5));
    // the plain signed sum would be zero
    CHECK(sum_out(t, {"a"}).values().norm() < 1e-15);
}

TEST_CASE("marginalization never increases l1 distance") {
    gen::Rng r(12);
    std::vector<Axis> axes{ax("a", 3), ax("b"), ax("c")};
    for (int trial = 0; trial < 300; ++trial) {
        auto p = gen::dist(r, axes, true), q = gen::dist(r, axes, true);
        CHECK(distance(marginalize(p, {"a", "c"}), marginalize(q, {"a", "c"}), Metric::L1) <=
              distance(p, q, Metric::L1) + 1e-15);
        auto s = gen::signed_tensor(r, axes), t = gen::signed_tensor(r, axes);
        CHECK(distance(marginalize(s, {"b"}), marginalize(t, {"b"}), Metric::L1) <= distance(s, t, Metric::L1) + 1e-15);
    }
}

TEST_CASE("tensor products of point masses and fair coins") {
    std::size_t i0[] = {1}, i1[] = {0}, i01[] = {1, 0};
    auto d = tensor_product(Dist::point({ax("a")}, i0), Dist::point({ax("b")}, i1));
    CHECK(d.values() == Dist::point({ax("a"), ax("b")}, i01).values());
    auto c = tensor_product(Dist::bernoulli(0.5, "a"), Dist::bernoulli(0.5, "b"));
    CHECK((c.values().array() - 0.25).abs().maxCoeff() == 0.0);
    CHECK_THROWS(tensor_product(Dist::bernoulli(0.5, "a"), Dist::bernoulli(0.5, "a")));
}

TEST_CASE("distances between point masses and the norm sandwich") {
    std::size_t i0[] = {0}, i1[] = {1};
    auto d0 = Dist::point({ax("a")}, i0), d1 = Dist::point({ax("a")}, i1);
    CHECK(distance(d0, d1, Metric::L1) == 2.0);
    CHECK(distance(d0, d0, Metric::L1) == 0.0);
    gen::Rng r(13);
    std::vector<Axis> axes{ax("a", 3), ax("b", 2)};
    for (int trial = 0; trial < 300; ++trial) {
        auto p = gen::dist(r, axes), q = gen::dist(r, axes);
        double li = distance(p, q, Metric::Linf), l1 = distance(p, q, Metric::L1);
        CHECK(li <= l1);
        CHECK(l1 <= 6 * li + 1e-15);
        CHECK(l1 == distance(q, p, Metric::L1));
    }
    CHECK_THROWS(distance(d0, Dist::uniform({ax("b")}), Metric::L1));
}

TEST_CASE("nets: sizes and covering") {
    CHECK(build_net(1, 0.3).size() == 1);
    CHECK(build_net(2, 0.5).size() <= 4);
    CHECK(build_net(3, 0.1).size() <= 3375);
    CHECK_THROWS(build_net(2, 0.0));
    gen::Rng r(14);
    for (std::size_t k : {2u, 3u}) {
        double eta = 0.1;
        auto net = build_net_vectors(k, eta);
        for (int trial = 0; trial < 500; ++trial) {
            Eigen::VectorXd p = gen::simplex(r, k, trial % 3 == 0);
            double best = 1e9;
            for (const auto& v : net) best = std::min(best, (v - p).lpNorm<Eigen::Infinity>());
            CHECK(best <= eta + 1e-12);
        }
    }
}

TEST_CASE("net quantization lands on the grid next to the point") {
    gen::Rng r(15);
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t k = 2 + r() % 3;
        int m = 1 + static_cast<int>(r() % 12);
        Eigen::VectorXd p = gen::simplex(r, k);
        Eigen::VectorXi c = net_quantize(p, m);
        CHECK(c.sum() == m);
        CHECK((c.cast<double>() / m - p).lpNorm<Eigen::Infinity>() < 1.0 / m + 1e-12);
    }
}

TEST_CASE("symmetrize: fixed points, swap images, idempotence and the distance bound") {
    auto axes = kind_axes(Kind::joint, Alphabet::range(2), Alphabet::range(2));
    std::size_t idx[] = {0, 1, 0, 1};
    auto s = symmetrize(Dist::point(axes, idx), Kind::joint);
    for (auto img : {std::vector<std::size_t>{0, 1, 0, 1}, {1, 0, 0, 1}, {0, 1, 1, 0}, {1, 0, 1, 0}})
        CHECK(s.values()[s.flat(img)] == 0.25);
    CHECK(s.values().sum() == 1.0);

    gen::Rng r(16);
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t q1 = 2 + r() % 2, q2 = 2;
        auto ax4 = kind_axes(Kind::joint, Alphabet::range(q1), Alphabet::range(q2));
        auto p = gen::dist(r, ax4, trial % 2 == 0);
        auto ps = symmetrize(p, Kind::joint);
        CHECK(asymmetry(ps).max < 1e-12);
        CHECK((symmetrize(ps, Kind::joint).values() - ps.values()).lpNorm<Eigen::Infinity>() < 1e-15);
        double bound = 0.75 * double(q1 * q1 * q2 * q2) * asymmetry(p).max;
        CHECK(distance(p, ps, Metric::L1) <= bound + 1e-12);
        auto m1 = gen::dist(r, kind_axes(Kind::marg1, Alphabet::range(q1), Alphabet::range(q2)));
        auto m1s = symmetrize(m1, Kind::marg1);
        CHECK(swap_asymmetry(m1s, Kind::marg1) < 1e-12);
        CHECK(distance(m1, m1s, Metric::L1) <= 0.5 * double(q1 * q1 * q2) * swap_asymmetry(m1, Kind::marg1) + 1e-12);
    }
    CHECK_THROWS(symmetrize(Dist::uniform({ax("a"), ax("b")}), Kind::joint));
}

TEST_CASE("asymmetry components") {
    auto axes = kind_axes(Kind::joint, Alphabet::range(2), Alphabet::range(2));
    std::size_t idx[] = {0, 1, 1, 1};
    auto a = asymmetry(Dist::point(axes, idx));
    CHECK(a.a1 == 1.0);
    CHECK(a.a2 == 0.0);
    CHECK(a.max == 1.0);
    auto z = asymmetry(Dist::uniform(axes));
    CHECK(z.max == 0.0);
    gen::Rng r(17);
    for (int trial = 0; trial < 1000; ++trial) {
        auto rep = asymmetry(gen::dist(r, axes, trial % 2 == 0));
        CHECK(rep.a12 <= rep.a1 + rep.a2 + 1e-15);
        CHECK(rep.a1 <= rep.a12 + rep.a2 + 1e-15);
        CHECK(rep.max == std::max({rep.a12, rep.a1, rep.a2}));
    }
}

TEST_CASE("kl divergence closed forms") {
    auto b3 = Dist::bernoulli(0.3), b5 = Dist::bernoulli(0.5);
    // independent closed form of d(0.3 || 0.5) in bits
    double oracle = 0.3 * std::log2(0.3 / 0.5) + 0.7 * std::log2(0.7 / 0.5);
    CHECK(kl(b3, b5).bits == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(kl(b3, b5).bits == doctest::Approx(0.1187).epsilon(1e-3));
    CHECK(binary_divergence(0.3, 0.5) == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(kl(b3, b3).bits == 0.0);
    CHECK(kl(Dist::bernoulli(0.0), b5).bits == doctest::Approx(1.0));
    auto inf = kl(b5, Dist::bernoulli(0.0));
    CHECK_FALSE(inf.absolutely_continuous);
    CHECK(std::isinf(inf.bits));
    gen::Rng r(18);
    for (int trial = 0; trial < 200; ++trial) {
        auto p = gen::dist(r, {ax("a", 4)}), q = gen::dist(r, {ax("a", 4)});
        CHECK(kl(p, q).bits >= 0.0);
        CHECK(kl(p, q).bits == kl(p, q).bits);
    }
}

TEST_CASE("nu polynomial closed form") {
    CHECK(nu_poly(Dist::bernoulli(0.5), 10) == doctest::Approx(10 * M_PI).epsilon(1e-14));
    CHECK(nu_poly(Dist::bernoulli(0.5), 40) == doctest::Approx(4 * nu_poly(Dist::bernoulli(0.5), 10)).epsilon(1e-14));
    CHECK_THROWS(nu_poly(Dist::bernoulli(0.0), 10));
    CHECK_THROWS(nu_poly(Dist::bernoulli(0.5), 0));
}

TEST_CASE("kind layouts and good atoms") {
    auto atom = good_atom(Kind::joint, Dist::bernoulli(0.2), Dist::bernoulli(0.7));
    CHECK(atom.axis_names() == kind_axis_names(Kind::joint));
    CHECK(atom({1, 0, 1, 1}) == doctest::Approx(0.2 * 0.8 * 0.7 * 0.7));
    CHECK(is_symmetric(atom, Kind::joint));
    CHECK(kind_from_string("marg2") == Kind::marg2);
    CHECK_THROWS(kind_from_string("both"));
}
