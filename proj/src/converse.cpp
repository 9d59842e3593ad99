#include "omac/converse.hpp"

#include "omac/confusability.hpp"
#include "omac/rng.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace omac {

std::string to_string(ExtractMode m) {
    return m == ExtractMode::exact ? "exact" : "greedy";
}

ExtractMode extract_mode_from_string(const std::string& s) {
    if (s == "exact") return ExtractMode::exact;
    if (s == "greedy") return ExtractMode::greedy;
    throw std::invalid_argument("unknown extraction mode: " + s);
}

namespace {

using Color = int;

struct Coloring {
    std::vector<Eigen::VectorXi> points;  // color id -> net counts
    std::map<std::vector<int>, Color> ids;
    int m = 1;

    Color color_of(const Dist& tau) {
        Eigen::VectorXi c = net_quantize(tau.values(), m);
        std::vector<int> key(c.data(), c.data() + c.size());
        auto [it, fresh] = ids.emplace(key, static_cast<Color>(points.size()));
        if (fresh) points.push_back(c);
        return it->second;
    }
};

std::vector<std::pair<std::size_t, std::size_t>> pairs_of(std::size_t m) {
    std::vector<std::pair<std::size_t, std::size_t>> p;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b) p.push_back({a, b});
    return p;
}

std::vector<std::size_t> bits_of(std::uint32_t mask) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < 32; ++i)
        if (mask >> i & 1u) out.push_back(i);
    return out;
}

// Largest clique (size >= 2) of a graph on <= 32 vertices, lowest mask on ties.
std::uint32_t max_clique(const std::vector<std::uint32_t>& adj) {
    std::uint32_t best = 0;
    const std::size_t nv = adj.size();
    auto rec = [&](auto&& self, std::uint32_t chosen, std::uint32_t cand) -> void {
        if (std::popcount(chosen) > std::popcount(best) ||
            (std::popcount(chosen) == std::popcount(best) && chosen != 0 && chosen < best))
            best = chosen;
        if (std::popcount(chosen) + std::popcount(cand) < std::popcount(best)) return;
        while (cand) {
            if (std::popcount(chosen) + std::popcount(cand) < std::popcount(best)) return;
            std::size_t v = static_cast<std::size_t>(std::countr_zero(cand));
            cand &= cand - 1;
            self(self, chosen | (1u << v), cand & adj[v]);
        }
    };
    std::uint32_t all = nv >= 32 ? ~0u : ((1u << nv) - 1u);
    rec(rec, 0u, all);
    return std::popcount(best) >= 2 ? best : 0u;
}

Dist net_point(const std::vector<Axis>& axes, const Eigen::VectorXi& counts, int m) {
    return Dist(axes, counts.cast<double>() / static_cast<double>(m));
}

void require_pairable(std::size_t m, const char* what) {
    if (m < 2) throw std::invalid_argument(std::string(what) + " needs at least two codewords");
}

}  // namespace

EquicoupledReport extract_equicoupled_pair(const ChannelSpec& spec, const CodePair& code, double eta, ExtractMode mode) {
    if (!(eta > 0)) throw std::invalid_argument("eta must be positive");
    require_pairable(code.m1(), "book 1");
    require_pairable(code.m2(), "book 2");
    const std::size_t M1 = code.m1(), M2 = code.m2();
    if (mode == ExtractMode::exact && (M1 > kExactExtractCap || M2 > kExactExtractCap))
        throw std::invalid_argument("exact extraction is capped at 12 codewords per book");
    auto axes = kind_axes(Kind::joint, spec.x1, spec.x2);
    Coloring col;
    col.m = net_denominator(static_cast<std::size_t>(Dist::product_size(axes)), eta);
    auto P1 = pairs_of(M1), P2 = pairs_of(M2);
    std::vector<std::vector<Color>> color(P1.size(), std::vector<Color>(P2.size()));
    for (std::size_t a = 0; a < P1.size(); ++a)
        for (std::size_t b = 0; b < P2.size(); ++b)
            color[a][b] = col.color_of(type_of({code.book1[P1[a].first], code.book1[P1[a].second],
                                                code.book2[P2[b].first], code.book2[P2[b].second]},
                                               axes));

    std::vector<std::size_t> keepA, keepB;
    Color chosen = 0;
    if (mode == ExtractMode::exact) {
        // pair index lookup for masks
        std::vector<std::vector<std::size_t>> pid1(M1, std::vector<std::size_t>(M1)), pid2(M2, std::vector<std::size_t>(M2));
        for (std::size_t a = 0; a < P1.size(); ++a) pid1[P1[a].first][P1[a].second] = a;
        for (std::size_t b = 0; b < P2.size(); ++b) pid2[P2[b].first][P2[b].second] = b;
        std::vector<std::uint32_t> masks;
        for (std::uint32_t A = 0; A < (1u << M1); ++A)
            if (std::popcount(A) >= 2) masks.push_back(A);
        std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t x, std::uint32_t y) { return std::popcount(x) > std::popcount(y); });
        std::size_t best = 0;
        std::uint32_t bestA = 0, bestB = 0;
        for (std::uint32_t A : masks) {
            auto va = bits_of(A);
            if (va.size() * M2 <= best) break;
            // colour of each B-pair if uniform over the pairs inside A
            std::vector<Color> uni(P2.size(), -1);
            for (std::size_t b = 0; b < P2.size(); ++b) {
                Color c = -2;
                for (std::size_t x = 0; x < va.size() && c != -1; ++x)
                    for (std::size_t y = x + 1; y < va.size(); ++y) {
                        Color cc = color[pid1[va[x]][va[y]]][b];
                        if (c == -2) c = cc;
                        else if (c != cc) {
                            c = -1;
                            break;
                        }
                    }
                uni[b] = c;
            }
            std::map<Color, std::vector<std::uint32_t>> adj;
            for (std::size_t b = 0; b < P2.size(); ++b) {
                if (uni[b] < 0) continue;
                auto& g = adj[uni[b]];
                if (g.empty()) g.assign(M2, 0u);
                g[P2[b].first] |= 1u << P2[b].second;
                g[P2[b].second] |= 1u << P2[b].first;
            }
            for (const auto& [c, g] : adj) {
                std::uint32_t B = max_clique(g);
                std::size_t score = va.size() * static_cast<std::size_t>(std::popcount(B));
                if (B && score > best) {
                    best = score;
                    bestA = A;
                    bestB = B;
                    chosen = c;
                }
            }
        }
        keepA = bits_of(bestA);
        keepB = bits_of(bestB);
    } else {
        std::vector<bool> inA(M1, true), inB(M2, true);
        std::size_t nA = M1, nB = M2;
        for (;;) {
            std::map<Color, std::size_t> freq;
            for (std::size_t a = 0; a < P1.size(); ++a)
                for (std::size_t b = 0; b < P2.size(); ++b)
                    if (inA[P1[a].first] && inA[P1[a].second] && inB[P2[b].first] && inB[P2[b].second]) ++freq[color[a][b]];
            Color target = 0;
            std::size_t top = 0, total = 0;
            for (const auto& [c, f] : freq) {
                total += f;
                if (f > top) {
                    top = f;
                    target = c;
                }
            }
            chosen = target;
            if (top == total) break;
            std::vector<std::size_t> badA(M1, 0), badB(M2, 0);
            for (std::size_t a = 0; a < P1.size(); ++a)
                for (std::size_t b = 0; b < P2.size(); ++b) {
                    if (!(inA[P1[a].first] && inA[P1[a].second] && inB[P2[b].first] && inB[P2[b].second])) continue;
                    if (color[a][b] == target) continue;
                    ++badA[P1[a].first];
                    ++badA[P1[a].second];
                    ++badB[P2[b].first];
                    ++badB[P2[b].second];
                }
            std::size_t worst = 0, who = 0;
            bool side1 = true;
            if (nA > 2)
                for (std::size_t i = 0; i < M1; ++i)
                    if (inA[i] && badA[i] > worst) {
                        worst = badA[i];
                        who = i;
                    }
            if (nB > 2)
                for (std::size_t j = 0; j < M2; ++j)
                    if (inB[j] && badB[j] > worst) {
                        worst = badB[j];
                        who = j;
                        side1 = false;
                    }
            if (worst == 0) break;  // cannot happen with a side above 2
            if (side1) {
                inA[who] = false;
                --nA;
            } else {
                inB[who] = false;
                --nB;
            }
        }
        for (std::size_t i = 0; i < M1; ++i)
            if (inA[i]) keepA.push_back(i);
        for (std::size_t j = 0; j < M2; ++j)
            if (inB[j]) keepB.push_back(j);
    }

    EquicoupledReport rep;
    rep.kind = Kind::joint;
    rep.indices1 = keepA;
    rep.indices2 = keepB;
    rep.eta = eta;
    rep.method = mode;
    rep.p_star = net_point(axes, col.points[static_cast<std::size_t>(chosen)], col.m);
    for (std::size_t x = 0; x < keepA.size(); ++x)
        for (std::size_t y = x + 1; y < keepA.size(); ++y)
            for (std::size_t u = 0; u < keepB.size(); ++u)
                for (std::size_t v = u + 1; v < keepB.size(); ++v) {
                    Dist tau = type_of({code.book1[keepA[x]], code.book1[keepA[y]], code.book2[keepB[u]], code.book2[keepB[v]]}, axes);
                    rep.eta_achieved = std::max(rep.eta_achieved, distance(tau, rep.p_star, Metric::Linf));
                }
    rep.verified = rep.eta_achieved <= eta + 1e-12;
    return rep;
}

EquicoupledReport extract_equicoupled_single(const ChannelSpec& spec, const std::vector<Word>& book, const Word& other,
                                             Kind kind, double eta, ExtractMode mode) {
    if (kind == Kind::joint) throw std::invalid_argument("single-book extraction takes kind marg1 or marg2");
    if (!(eta > 0)) throw std::invalid_argument("eta must be positive");
    require_pairable(book.size(), "book");
    const std::size_t M = book.size();
    if (mode == ExtractMode::exact && M > kExactExtractCap)
        throw std::invalid_argument("exact extraction is capped at 12 codewords");
    auto axes = kind_axes(kind, spec.x1, spec.x2);
    auto words = [&](std::size_t i1, std::size_t i2) {
        return kind == Kind::marg1 ? std::vector<Word>{book[i1], book[i2], other} : std::vector<Word>{other, book[i1], book[i2]};
    };
    Coloring col;
    col.m = net_denominator(static_cast<std::size_t>(Dist::product_size(axes)), eta);
    std::vector<std::vector<Color>> color(M, std::vector<Color>(M, -1));
    for (auto [a, b] : pairs_of(M)) color[a][b] = color[b][a] = col.color_of(type_of(words(a, b), axes));

    std::vector<std::size_t> keep;
    Color chosen = 0;
    if (mode == ExtractMode::exact) {
        std::uint32_t best = 0;
        for (Color c = 0; c < static_cast<Color>(col.points.size()); ++c) {
            std::vector<std::uint32_t> adj(M, 0u);
            for (auto [a, b] : pairs_of(M))
                if (color[a][b] == c) {
                    adj[a] |= 1u << b;
                    adj[b] |= 1u << a;
                }
            std::uint32_t K = max_clique(adj);
            if (std::popcount(K) > std::popcount(best)) {
                best = K;
                chosen = c;
            }
        }
        keep = bits_of(best);
    } else {
        std::vector<bool> in(M, true);
        std::size_t live = M;
        for (;;) {
            std::map<Color, std::size_t> freq;
            for (auto [a, b] : pairs_of(M))
                if (in[a] && in[b]) ++freq[color[a][b]];
            Color target = 0;
            std::size_t top = 0, total = 0;
            for (const auto& [c, f] : freq) {
                total += f;
                if (f > top) {
                    top = f;
                    target = c;
                }
            }
            chosen = target;
            if (top == total || live <= 2) break;
            std::vector<std::size_t> bad(M, 0);
            for (auto [a, b] : pairs_of(M))
                if (in[a] && in[b] && color[a][b] != target) {
                    ++bad[a];
                    ++bad[b];
                }
            std::size_t who = static_cast<std::size_t>(std::max_element(bad.begin(), bad.end()) - bad.begin());
            in[who] = false;
            --live;
        }
        for (std::size_t i = 0; i < M; ++i)
            if (in[i]) keep.push_back(i);
    }

    EquicoupledReport rep;
    rep.kind = kind;
    rep.indices1 = keep;
    rep.eta = eta;
    rep.method = mode;
    rep.p_star = net_point(axes, col.points[static_cast<std::size_t>(chosen)], col.m);
    for (std::size_t x = 0; x < keep.size(); ++x)
        for (std::size_t y = x + 1; y < keep.size(); ++y)
            rep.eta_achieved = std::max(rep.eta_achieved, distance(type_of(words(keep[x], keep[y]), axes), rep.p_star, Metric::Linf));
    rep.verified = rep.eta_achieved <= eta + 1e-12;
    return rep;
}

double pair_asymmetry(const Tensor& p) {
    if (p.rank() != 2 || !(p.axes()[0].alphabet == p.axes()[1].alphabet))
        throw std::invalid_argument("pair asymmetry needs two axes over one alphabet");
    const std::size_t q = p.axes()[0].alphabet.size();
    double a = 0;
    for (std::size_t x = 0; x < q; ++x)
        for (std::size_t y = 0; y < q; ++y) a = std::max(a, std::abs(p({x, y}) - p({y, x})));
    return a;
}

KomlosReport komlos_check(const std::vector<Word>& vectors, const Dist& reference, double eta) {
    if (vectors.size() < 2) throw std::invalid_argument("komlos check needs at least two sequences");
    if (eta < 0) throw std::invalid_argument("eta must be nonnegative");
    KomlosReport r;
    r.m = vectors.size();
    r.asymmetry = pair_asymmetry(reference);
    r.bound = 6.0 / std::sqrt(static_cast<double>(r.m)) + 4.0 * std::sqrt(eta) + 2.0 * eta;
    r.precondition = true;
    for (std::size_t i = 0; i < vectors.size(); ++i)
        for (std::size_t j = i + 1; j < vectors.size(); ++j) {
            double d = distance(type_of({vectors[i], vectors[j]}, reference.axes()), reference, Metric::Linf);
            r.max_deviation = std::max(r.max_deviation, d);
            if (d > eta + 1e-12 && r.precondition) {
                r.precondition = false;
                r.bad_i = i;
                r.bad_j = j;
            }
        }
    r.holds = r.asymmetry <= r.bound;
    return r;
}

KomlosSearch komlos_adversarial_search(int trials, std::size_t max_m, std::size_t length, std::uint64_t seed) {
    if (max_m < 2 || length == 0) throw std::invalid_argument("komlos search needs max_m >= 2 and positive length");
    KomlosSearch out;
    std::vector<Axis> axes{{"w1", Alphabet::range(2)}, {"w2", Alphabet::range(2)}};
    for (int t = 0; t < trials; ++t) {
        CounterRng rng(seed, static_cast<std::uint64_t>(t));
        std::size_t M = 2 + static_cast<std::size_t>(rng.below(max_m - 1));
        std::vector<Word> v(M, Word(length));
        std::vector<double> u(length);
        for (auto& x : u) x = rng.uniform();
        std::vector<double> th(M);
        for (auto& x : th) x = rng.uniform();
        double flip = 0.2 * rng.uniform();
        switch (t % 3) {
            case 0:  // independent Bernoulli sequences
                for (std::size_t i = 0; i < M; ++i)
                    for (std::size_t k = 0; k < length; ++k) v[i][k] = rng.uniform() < th[i] ? 1 : 0;
                break;
            case 1:  // nested thresholds: ordered pairs are as lopsided as possible
                std::sort(th.begin(), th.end());
                for (std::size_t i = 0; i < M; ++i)
                    for (std::size_t k = 0; k < length; ++k) v[i][k] = u[k] < th[i] ? 1 : 0;
                break;
            default:  // nested thresholds with symbol noise
                std::sort(th.begin(), th.end());
                for (std::size_t i = 0; i < M; ++i)
                    for (std::size_t k = 0; k < length; ++k)
                        v[i][k] = static_cast<Symbol>((u[k] < th[i] ? 1 : 0) ^ (rng.uniform() < flip ? 1 : 0));
                break;
        }
        Tensor mean = Tensor::zeros(axes);
        std::size_t cnt = 0;
        for (std::size_t i = 0; i < M; ++i)
            for (std::size_t j = i + 1; j < M; ++j, ++cnt) mean.values_mut() += type_of({v[i], v[j]}, axes).values();
        mean.values_mut() /= static_cast<double>(cnt);
        Dist ref(mean);
        double eta = 0;
        for (std::size_t i = 0; i < M; ++i)
            for (std::size_t j = i + 1; j < M; ++j) eta = std::max(eta, distance(type_of({v[i], v[j]}, axes), ref, Metric::Linf));
        auto rep = komlos_check(v, ref, eta);
        ++out.trials;
        if (!rep.holds) ++out.violations;
        double ratio = rep.asymmetry / rep.bound;
        if (ratio > out.worst_ratio) {
            out.worst_ratio = ratio;
            out.worst_m = M;
            out.worst_eta = eta;
        }
    }
    return out;
}

double converse_size_bound(double delta) {
    if (!(delta > 0)) throw std::invalid_argument("size bound needs delta > 0");
    return (1.0 + std::sqrt(1.0 + delta)) / delta;
}

DoubleCountReport double_count(const CodePair& code, const Tensor& q, const Dist& reference, double eta, double alpha) {
    require_kind_layout(q, Kind::joint);
    require_kind_layout(reference, Kind::joint);
    if (!is_symmetric(reference, Kind::joint, 1e-9)) throw std::invalid_argument("double count: reference is not symmetric");
    auto audit = is_cogood(q, Kind::joint);
    if (!audit.cogood) throw std::invalid_argument("double count: q is not co-good");
    if (code.book1.empty() || code.book2.empty()) throw std::invalid_argument("double count: empty book");
    const std::size_t q1 = q.axes()[0].alphabet.size(), q2 = q.axes()[2].alphabet.size();
    const std::size_t n = code.book1[0].size();
    const std::size_t M1 = code.m1(), M2 = code.m2();

    DoubleCountReport r;
    r.cogood_margin = audit.margin;
    const auto& qv = q.values();
    for (std::size_t i1 = 0; i1 < M1; ++i1)
        for (std::size_t i2 = 0; i2 < M1; ++i2)
            for (std::size_t j1 = 0; j1 < M2; ++j1)
                for (std::size_t j2 = 0; j2 < M2; ++j2) {
                    double s = 0;
                    for (std::size_t k = 0; k < n; ++k) {
                        std::size_t f = ((code.book1[i1][k] * q1 + code.book1[i2][k]) * q2 + code.book2[j1][k]) * q2 + code.book2[j2][k];
                        s += qv[static_cast<Eigen::Index>(f)];
                    }
                    r.s_direct += s / static_cast<double>(n);
                }
    double col = 0;
    for (std::size_t k = 0; k < n; ++k) {
        Eigen::VectorXd p1 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(q1)), p2 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(q2));
        for (const auto& w : code.book1) p1[w[k]] += 1.0 / static_cast<double>(M1);
        for (const auto& w : code.book2) p2[w[k]] += 1.0 / static_cast<double>(M2);
        col += product_form(q, Kind::joint, p1, p2);
    }
    const double m1 = static_cast<double>(M1), m2 = static_cast<double>(M2);
    r.s_columns = m1 * m1 * m2 * m2 * col / static_cast<double>(n);
    r.deviation = std::abs(r.s_direct - r.s_columns);
    r.lower_bound_holds = r.s_direct >= -1e-9 && r.s_columns >= -1e-9;

    const double cells = static_cast<double>(q1 * q1 * q2 * q2);
    r.eta = eta;
    r.alpha = alpha;
    r.eta_prime = cells * eta;
    r.alpha_prime = 0.75 * cells * alpha;
    r.eps_prime = -inner(reference, q);
    r.delta = r.eps_prime - r.eta_prime - r.alpha_prime;
    r.upper_bound = m1 * (m1 - 1) * m2 * (m2 - 1) * (r.eta_prime + r.alpha_prime - r.eps_prime) + m1 * m1 * m2 + m1 * m2 * m2 + m1 * m2;
    if (r.delta > 0) r.size_bound = converse_size_bound(r.delta);
    return r;
}

PlotkinBound plotkin_xor_bound(const Decimal& p) {
    PlotkinBound b;
    b.p = Rational::from_decimal(p);
    if (Rational(1) < b.p) throw std::invalid_argument("plotkin bound: p must lie in (1/4, 1]");
    b.eps = b.p - Rational(1, 4);
    if (b.eps <= Rational(0)) throw std::invalid_argument("plotkin bound: p must exceed 1/4 (bound vacuous)");
    b.value = Rational(1) / (Rational(4) * b.eps) + Rational(1);
    return b;
}

PlotkinBound plotkin_xor_bound(double p) {
    return plotkin_xor_bound(Decimal::from_double(p));
}

double xor_quartic(double a, double b) {
    const double A = 1 - a, B = 1 - b;
    // the eight odd-parity patterns of (x1_1, x2_1, x1_2, x2_2)
    return A * B * A * b + A * B * a * B + A * b * A * B + a * B * A * B + a * b * a * B + a * b * A * b + a * B * a * b +
           A * b * a * b;
}

double QuarticMax::distance_to(double a, double b) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& [x, y] : argmax) d = std::min(d, std::hypot(x - a, y - b));
    return d;
}

QuarticMax quartic_max_check(double grid_step) {
    if (!(grid_step > 0) || grid_step > 1) throw std::invalid_argument("grid_step must lie in (0,1]");
    const long N = std::max(1L, std::lround(1.0 / grid_step));
    QuarticMax r;
    r.grid_step = 1.0 / static_cast<double>(N);
    r.max = -1;
    long bi = 0, bj = 0;
    for (long i = 0; i <= N; ++i)
        for (long j = 0; j <= N; ++j) {
            double v = xor_quartic(static_cast<double>(i) / N, static_cast<double>(j) / N);
            if (v > r.max) {
                r.max = v;
                bi = i;
                bj = j;
            }
        }
    // compass search from the best grid point
    double a = static_cast<double>(bi) / N, b = static_cast<double>(bj) / N, h = r.grid_step;
    double best = r.max;
    while (h > 1e-12) {
        bool moved = false;
        for (auto [da, db] : {std::pair{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}) {
            double na = std::clamp(a + h * da, 0.0, 1.0), nb = std::clamp(b + h * db, 0.0, 1.0);
            double v = xor_quartic(na, nb);
            if (v > best + 1e-16) {
                best = v;
                a = na;
                b = nb;
                moved = true;
            }
        }
        if (!moved) h /= 2;
    }
    r.max = std::max(r.max, best);
    for (long i = 0; i <= N; ++i)
        for (long j = 0; j <= N; ++j) {
            double x = static_cast<double>(i) / N, y = static_cast<double>(j) / N;
            if (xor_quartic(x, y) >= r.max - 1e-12) r.argmax.push_back({x, y});
        }
    if (best >= r.max - 1e-12) r.argmax.push_back({a, b});
    return r;
}

namespace {

struct TupleKey {
    std::uint8_t kind;
    std::uint32_t a, b, c, d;
    bool operator==(const TupleKey&) const = default;
};
struct TupleHash {
    std::size_t operator()(const TupleKey& k) const {
        std::uint64_t h = CounterRng::mix(k.kind);
        for (std::uint32_t v : {k.a, k.b, k.c, k.d}) h = CounterRng::mix(h ^ v);
        return static_cast<std::size_t>(h);
    }
};

class ShardSearch {
public:
    ShardSearch(const ChannelSpec& spec, std::size_t n, std::size_t m1, std::size_t m2, std::vector<Word>& w1,
                std::vector<Word>& w2, std::atomic<std::uint64_t>& nodes, std::uint64_t budget)
        : spec_(spec), n_(n), m1_(m1), m2_(m2), w1_(w1), w2_(w2), nodes_(nodes), budget_(budget) {}

    // Returns true when a code was found; sets out_of_budget when stopped early.
    bool run(std::uint32_t first) {
        b1_ = {first};
        return pick1(first + 1);
    }
    bool out_of_budget = false;
    std::vector<std::uint32_t> b1_, b2_;

private:
    bool confusable(Kind k, std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d = 0) {
        TupleKey key{static_cast<std::uint8_t>(k), a, b, c, d};
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        std::vector<Word> t;
        switch (k) {
            case Kind::joint: t = {w1_[a], w1_[b], w2_[c], w2_[d]}; break;
            case Kind::marg1: t = {w1_[a], w1_[b], w2_[c]}; break;
            case Kind::marg2: t = {w1_[a], w2_[b], w2_[c]}; break;
        }
        bool r = operational_confusable(spec_, t, k).confusable;
        memo_.emplace(key, r);
        return r;
    }

    bool pick1(std::uint32_t from) {
        if (b1_.size() == m1_) return pick2(0);
        for (std::uint32_t w = from; w < w1_.size(); ++w) {
            if (w1_.size() - w < m1_ - b1_.size()) break;
            b1_.push_back(w);
            if (pick1(w + 1)) return true;
            b1_.pop_back();
            if (out_of_budget) return false;
        }
        return false;
    }

    // Checks every tuple that involves the newest book-2 word.
    bool admissible(std::uint32_t w) {
        for (std::size_t x = 0; x < b1_.size(); ++x)
            for (std::size_t y = x + 1; y < b1_.size(); ++y)
                if (confusable(Kind::marg1, b1_[x], b1_[y], w)) return false;
        for (std::uint32_t prev : b2_) {
            for (std::uint32_t a : b1_)
                if (confusable(Kind::marg2, a, prev, w)) return false;
            for (std::size_t x = 0; x < b1_.size(); ++x)
                for (std::size_t y = x + 1; y < b1_.size(); ++y)
                    if (confusable(Kind::joint, b1_[x], b1_[y], prev, w) || confusable(Kind::joint, b1_[x], b1_[y], w, prev))
                        return false;
        }
        return true;
    }

    bool pick2(std::uint32_t from) {
        if (b2_.size() == m2_) return true;
        for (std::uint32_t w = from; w < w2_.size(); ++w) {
            if (w2_.size() - w < m2_ - b2_.size()) break;
            if (nodes_.fetch_add(1) >= budget_) {
                out_of_budget = true;
                return false;
            }
            if (!admissible(w)) continue;
            b2_.push_back(w);
            if (pick2(w + 1)) return true;
            b2_.pop_back();
            if (out_of_budget) return false;
        }
        return false;
    }

    const ChannelSpec& spec_;
    std::size_t n_, m1_, m2_;
    std::vector<Word>& w1_;
    std::vector<Word>& w2_;
    std::atomic<std::uint64_t>& nodes_;
    std::uint64_t budget_;
    std::unordered_map<TupleKey, bool, TupleHash> memo_;
};

std::vector<Word> all_words(std::size_t q, std::size_t n) {
    double total = std::pow(static_cast<double>(q), static_cast<double>(n));
    if (total > static_cast<double>(1u << 20)) throw std::invalid_argument("brute force: |X|^n exceeds 2^20 words");
    std::vector<Word> out(static_cast<std::size_t>(total), Word(n));
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::size_t v = i;
        for (std::size_t k = n; k-- > 0;) {
            out[i][k] = static_cast<Symbol>(v % q);
            v /= q;
        }
    }
    return out;
}

}  // namespace

BruteForceResult brute_force_search(const ChannelSpec& spec, std::size_t n, std::size_t m1, std::size_t m2,
                                    std::uint64_t budget, int jobs) {
    if (n == 0 || m1 == 0 || m2 == 0) throw std::invalid_argument("brute force: n, M1, M2 must be positive");
    BruteForceResult res;
    res.n = n;
    res.m1 = m1;
    res.m2 = m2;
    res.budget = budget;
    res.canonicalization = "v1: books strictly increasing in base-|X| order; first book-1 word coordinate-sorted";
    auto w1 = all_words(spec.x1.size(), n), w2 = all_words(spec.x2.size(), n);
    std::vector<std::uint32_t> shards;
    for (std::uint32_t i = 0; i < w1.size(); ++i)
        if (std::is_sorted(w1[i].begin(), w1[i].end())) shards.push_back(i);

    std::atomic<std::uint64_t> nodes{0};
    std::atomic<std::size_t> cutoff{shards.size()};  // lowest shard index with a hit
    std::vector<std::optional<CodePair>> found(shards.size());
    std::vector<char> truncated(shards.size(), 0);
    auto work = [&](std::size_t s) {
        if (s > cutoff.load()) return;
        ShardSearch search(spec, n, m1, m2, w1, w2, nodes, budget);
        if (search.run(shards[s])) {
            CodePair c;
            c.n = n;
            for (auto i : search.b1_) c.book1.push_back(w1[i]);
            for (auto j : search.b2_) c.book2.push_back(w2[j]);
            found[s] = c;
            std::size_t cur = cutoff.load();
            while (s < cur && !cutoff.compare_exchange_weak(cur, s)) {
            }
        }
        truncated[s] = search.out_of_budget ? 1 : 0;
    };
    std::size_t workers = static_cast<std::size_t>(std::max(1, jobs));
    if (workers == 1) {
        for (std::size_t s = 0; s < shards.size(); ++s) {
            work(s);
            if (found[s] || truncated[s]) break;
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t s; (s = next.fetch_add(1)) < shards.size();) work(s);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    res.nodes = nodes.load();
    for (std::size_t s = 0; s < shards.size(); ++s) {
        if (found[s]) {
            // a hit is definitive only if no lower shard was cut short
            bool clean = std::none_of(truncated.begin(), truncated.begin() + static_cast<long>(s), [](char t) { return t != 0; });
            res.found = true;
            res.code = found[s];
            res.exhaustive = clean;
            break;
        }
        if (truncated[s]) break;
    }
    if (!res.found) res.exhaustive = std::none_of(truncated.begin(), truncated.end(), [](char t) { return t != 0; }) &&
                                     res.nodes <= budget;
    if (res.found && !verify_zero_error(spec, *res.code).zero_error)
        throw std::logic_error("brute force: search returned a code that fails verification");
    return res;
}

}  // namespace omac
