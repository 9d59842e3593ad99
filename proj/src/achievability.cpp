#include "omac/achievability.hpp"

#include "omac/lp.hpp"
#include "omac/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace omac {

namespace {

std::vector<std::size_t> largest_remainder(const std::vector<double>& w, std::size_t n) {
    double total = std::accumulate(w.begin(), w.end(), 0.0);
    std::vector<std::size_t> out(w.size());
    std::vector<std::pair<double, std::size_t>> rem;
    std::size_t used = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        double exact = w[i] / total * static_cast<double>(n);
        out[i] = static_cast<std::size_t>(std::floor(exact + 1e-12));
        used += out[i];
        rem.push_back({exact - static_cast<double>(out[i]), i});
    }
    std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t r = 0; used < n; ++r, ++used) out[rem[r % rem.size()].second] += 1;
    return out;
}

// Exact composition of a chunk of length len drawn from p.
std::vector<std::int64_t> rounded_counts(const Eigen::VectorXd& p, std::size_t len) {
    std::vector<double> w(p.data(), p.data() + p.size());
    auto c = largest_remainder(w, len);
    return {c.begin(), c.end()};
}

Symbol draw(const Eigen::VectorXd& p, double u) {
    double acc = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        acc += p[i];
        if (u < acc) return static_cast<Symbol>(i);
    }
    for (Eigen::Index i = p.size(); i-- > 0;)
        if (p[i] > 0) return static_cast<Symbol>(i);
    return 0;
}

const Dist& factor(const TimeSharingPlan& plan, std::size_t l, int user) {
    return user == 1 ? plan.factors[l].first : plan.factors[l].second;
}

double nu_on_support(const Dist& p, std::size_t n) {
    std::vector<double> s;
    for (Eigen::Index i = 0; i < p.size(); ++i)
        if (p.values()[i] > 0) s.push_back(p.values()[i]);
    if (s.size() <= 1) return 1.0;
    return nu_poly(Dist::over(Axis{"x", Alphabet::range(s.size())}, s), static_cast<long>(n));
}

}  // namespace

TimeSharingPlan make_plan(const std::vector<double>& weights, const std::vector<std::pair<Dist, Dist>>& factors,
                          std::size_t n) {
    if (weights.empty() || weights.size() != factors.size()) throw std::invalid_argument("plan: empty or mismatched weights");
    for (double w : weights)
        if (!(w >= 0)) throw std::invalid_argument("plan: negative weight");
    auto sizes = largest_remainder(weights, n);
    TimeSharingPlan plan;
    plan.weights = weights;
    plan.factors = factors;
    plan.bounds = {0};
    for (std::size_t l = 0; l < sizes.size(); ++l) {
        if (weights[l] > 0 && sizes[l] == 0) throw std::invalid_argument("plan: chunk rounds to zero length");
        plan.bounds.push_back(plan.bounds.back() + sizes[l]);
    }
    return plan;
}

TimeSharingPlan plan_from_decomposition(const GoodDecomposition& d, std::size_t n) {
    return make_plan(d.weights, d.factors, n);
}

std::vector<Word> sample_book(const TimeSharingPlan& plan, int user, std::size_t m, std::uint64_t seed) {
    const std::size_t n = plan.n();
    std::vector<Word> book(m, Word(n));
    for (std::size_t j = 0; j < m; ++j) {
        CounterRng rng(seed, (static_cast<std::uint64_t>(user) << 48) ^ j);
        for (std::size_t l = 0; l + 1 < plan.bounds.size(); ++l) {
            const auto& p = factor(plan, l, user).values();
            for (std::size_t pos = plan.bounds[l]; pos < plan.bounds[l + 1]; ++pos) book[j][pos] = draw(p, rng.uniform());
        }
    }
    return book;
}

CodePair sample_timeshared_code(const TimeSharingPlan& plan, std::size_t m1, std::size_t m2, std::uint64_t seed) {
    if (plan.n() < plan.weights.size()) throw std::invalid_argument("sample: n smaller than the number of chunks");
    if (m1 < 1 || m2 < 1) throw std::invalid_argument("sample: books need at least one codeword");
    return CodePair{sample_book(plan, 1, m1, seed), sample_book(plan, 2, m2, seed), plan.n()};
}

std::vector<std::int64_t> word_counts(const Word& w, std::size_t q, std::size_t begin, std::size_t end) {
    std::vector<std::int64_t> c(q, 0);
    end = std::min(end, w.size());
    for (std::size_t i = begin; i < end; ++i) c.at(w[i]) += 1;
    return c;
}

std::vector<Word> constant_composition_filter(const std::vector<Word>& book, const Dist& p, double slack) {
    if (book.empty()) return {};
    const std::size_t n = book[0].size(), q = static_cast<std::size_t>(p.size());
    std::vector<Word> out;
    if (slack <= 0) {
        auto target = rounded_counts(p.values(), n);
        for (const auto& w : book)
            if (word_counts(w, q) == target) out.push_back(w);
        return out;
    }
    for (const auto& w : book) {
        auto c = word_counts(w, q);
        double d = 0;
        for (std::size_t x = 0; x < q; ++x)
            d = std::max(d, std::abs(static_cast<double>(c[x]) / static_cast<double>(n) - p.values()[static_cast<Eigen::Index>(x)]));
        if (d <= slack + 1e-12) out.push_back(w);
    }
    return out;
}

std::vector<Word> timeshared_composition_filter(const std::vector<Word>& book, const TimeSharingPlan& plan, int user) {
    std::vector<std::vector<std::int64_t>> targets;
    for (std::size_t l = 0; l + 1 < plan.bounds.size(); ++l)
        targets.push_back(rounded_counts(factor(plan, l, user).values(), plan.chunk_size(l)));
    std::vector<Word> out;
    for (const auto& w : book) {
        bool ok = true;
        for (std::size_t l = 0; ok && l + 1 < plan.bounds.size(); ++l)
            ok = word_counts(w, targets[l].size(), plan.bounds[l], plan.bounds[l + 1]) == targets[l];
        if (ok) out.push_back(w);
    }
    return out;
}

MajorityType majority_type(const std::vector<Word>& book, std::size_t q) {
    std::map<std::vector<std::int64_t>, std::size_t> freq;
    for (const auto& w : book) ++freq[word_counts(w, q)];
    MajorityType best;
    for (const auto& [c, k] : freq)
        if (k > best.size) best = {c, k};
    return best;
}

double majority_type_floor(std::size_t book_size, std::size_t n, std::size_t q) {
    return static_cast<double>(book_size) / std::pow(static_cast<double>(n + q - 1), static_cast<double>(q - 1));
}

CodePair expurgate(const ChannelSpec& spec, const CodePair& code, ExpurgationLog* log) {
    CodePair c = code;
    ExpurgationLog local;
    for (;;) {
        if (c.book1.empty() || c.book2.empty()) break;
        auto rep = verify_zero_error(spec, c);
        if (rep.zero_error) break;
        ++local.rounds;
        const auto& ix = rep.indices;
        switch (rep.kind) {
            case Kind::joint:
                c.book1.erase(c.book1.begin() + static_cast<long>(ix[1]));
                c.book2.erase(c.book2.begin() + static_cast<long>(std::max(ix[2], ix[3])));
                ++local.removed1;
                ++local.removed2;
                break;
            case Kind::marg1:
                c.book1.erase(c.book1.begin() + static_cast<long>(ix[1]));
                ++local.removed1;
                break;
            case Kind::marg2:
                c.book2.erase(c.book2.begin() + static_cast<long>(ix[3]));
                ++local.removed2;
                break;
        }
    }
    if (log) *log = local;
    return c;
}

KlMinimum kl_to_confusable(const ChannelSpec& spec, const Dist& p1, const Dist& p2, Kind k, const FrankWolfeOptions& opt) {
    if (p1.rank() != 1 || !(p1.axes()[0].alphabet == spec.x1) || p2.rank() != 1 || !(p2.axes()[0].alphabet == spec.x2))
        throw std::invalid_argument("input distribution alphabet mismatch");
    Dist ref = good_atom(k, p1, p2);
    auto cp = compatible_pairs(spec, k);
    std::vector<Eigen::Index> tuples;
    for (Eigen::Index t = 0; t < ref.size(); ++t)
        if (ref.values()[t] > 0 && !cp[static_cast<std::size_t>(t)].empty()) tuples.push_back(t);
    if (tuples.empty()) throw std::invalid_argument("confusability set misses the support of the product");

    lp::Problem prob;
    LiftedVars lv = add_lifted_vars(prob, spec, k, tuples);
    add_state_rows(prob, spec, lv);
    std::vector<Eigen::VectorXd> marg;
    for (const auto& ax : ref.axes()) marg.push_back(sum_out(ref, {ax.name}).values());
    add_marginal_rows(prob, ref.axes(), lv, marg);
    const int nv = prob.num_vars();
    const std::size_t nt = tuples.size();

    auto tuple_mass = [&](const Eigen::VectorXd& y) {
        Eigen::VectorXd m = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nt));
        for (std::size_t i = 0; i < nt; ++i)
            for (std::size_t q = 0; q < lv.pairs[i].size(); ++q) m[static_cast<Eigen::Index>(i)] += y[lv.first_var[i] + static_cast<int>(q)];
        return m;
    };
    Eigen::VectorXd r(static_cast<Eigen::Index>(nt));
    for (std::size_t i = 0; i < nt; ++i) r[static_cast<Eigen::Index>(i)] = ref.values()[tuples[i]];
    auto objective = [&](const Eigen::VectorXd& m) {
        double f = 0;
        for (Eigen::Index i = 0; i < m.size(); ++i)
            if (m[i] > 0) f += m[i] * std::log2(m[i] / r[i]);
        return f;
    };
    auto lmo = [&](const Eigen::VectorXd& g) {
        for (std::size_t i = 0; i < nt; ++i)
            for (std::size_t q = 0; q < lv.pairs[i].size(); ++q) prob.set_cost(lv.first_var[i] + static_cast<int>(q), g[static_cast<Eigen::Index>(i)]);
        auto sol = lp::solve(prob);
        if (sol.status == lp::Status::infeasible) throw std::invalid_argument("confusability set misses the support of the product");
        if (!sol.optimal()) throw std::runtime_error(std::string("Frank-Wolfe LP failed: ") + lp::to_string(sol.status));
        return Eigen::VectorXd(sol.x.head(nv));
    };
    auto gradient = [&](const Eigen::VectorXd& m) {
        Eigen::VectorXd g(m.size());
        for (Eigen::Index i = 0; i < m.size(); ++i) g[i] = std::log2(std::max(m[i], 1e-15) / r[i]) + 1.0 / std::log(2.0);
        return g;
    };

    // Exact minimizer of f(m + t d) on [0, tmax] by bisection on the derivative.
    auto line_min = [&](const Eigen::VectorXd& m, const Eigen::VectorXd& d, double tmax) {
        auto slope = [&](double t) {
            double v = 0;
            for (Eigen::Index i = 0; i < m.size(); ++i)
                if (d[i] != 0) v += d[i] * (std::log2(std::max(m[i] + t * d[i], 1e-300) / r[i]) + 1.0 / std::log(2.0));
            return v;
        };
        if (slope(tmax) <= 0) return tmax;
        double lo = 0, hi = tmax;
        for (int b = 0; b < 60; ++b) {
            double mid = 0.5 * (lo + hi);
            (slope(mid) < 0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };

    Eigen::VectorXd y = lmo(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nt)));
    std::vector<Eigen::VectorXd> active{y};  // pairwise rule: y = sum alpha_j active_j
    std::vector<double> alpha{1.0};
    KlMinimum res;
    res.kind = k;
    // Best iterate so far and best certified lower bound f(y) - <g, y - s>.
    double best_upper = std::numeric_limits<double>::infinity(), best_lower = -best_upper;
    Eigen::VectorXd best_y = y;
    for (int it = 0; it < opt.max_iterations; ++it) {
        Eigen::VectorXd m = tuple_mass(y);
        Eigen::VectorXd g = gradient(m);
        Eigen::VectorXd s = lmo(g);
        Eigen::VectorXd ms = tuple_mass(s);
        double f = objective(m);
        if (f < best_upper) {
            best_upper = f;
            best_y = y;
        }
        best_lower = std::max(best_lower, f - g.dot(m - ms));
        res.gap = best_upper - best_lower;
        res.iterations = it + 1;
        if (res.gap <= opt.gap_target) {
            res.converged = true;
            break;
        }
        if (opt.step == FrankWolfeStep::pairwise) {
            std::size_t away = 0;
            double worst = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < active.size(); ++j) {
                double v = g.dot(tuple_mass(active[j]));
                if (v > worst) {
                    worst = v;
                    away = j;
                }
            }
            double gamma = line_min(m, ms - tuple_mass(active[away]), alpha[away]);
            y += gamma * (s - active[away]);
            alpha[away] -= gamma;
            std::size_t at = active.size();
            for (std::size_t j = 0; j < active.size(); ++j)
                if ((active[j] - s).lpNorm<Eigen::Infinity>() < 1e-12) at = j;
            if (at == active.size()) {
                active.push_back(s);
                alpha.push_back(0.0);
            }
            alpha[at] += gamma;
            for (std::size_t j = active.size(); j-- > 0;)
                if (alpha[j] <= 1e-15 && active.size() > 1) {
                    active.erase(active.begin() + static_cast<long>(j));
                    alpha.erase(alpha.begin() + static_cast<long>(j));
                }
            continue;
        }
        double gamma = opt.step == FrankWolfeStep::line_search ? line_min(m, ms - m, 1.0) : 2.0 / (it + 2.0);
        y = (1 - gamma) * y + gamma * s;
    }
    {
        Eigen::VectorXd m = tuple_mass(y);
        if (objective(m) < best_upper) best_y = y;
    }
    Eigen::VectorXd m = tuple_mass(best_y);
    res.value = std::max(0.0, objective(m));
    Tensor q = Tensor::zeros(ref.axes());
    for (std::size_t i = 0; i < nt; ++i) q.values_mut()[tuples[i]] = std::max(0.0, m[static_cast<Eigen::Index>(i)]);
    q.values_mut() /= q.values().sum();
    res.minimizer = Dist(q);
    return res;
}

InnerBoundReport inner_bound(const ChannelSpec& spec, const Dist& p1, const Dist& p2, const FrankWolfeOptions& opt) {
    InnerBoundReport rep;
    rep.joint = kl_to_confusable(spec, p1, p2, Kind::joint, opt);
    rep.marg1 = kl_to_confusable(spec, p1, p2, Kind::marg1, opt);
    rep.marg2 = kl_to_confusable(spec, p1, p2, Kind::marg2, opt);
    rep.D = rep.joint.value;
    rep.D_hat = std::min(rep.marg1.value, rep.marg2.value);
    auto outside = [&](Kind k) { return !confusable_dist(spec, good_atom(k, p1, p2), k).feasible; };
    rep.applicable = outside(Kind::joint) && outside(Kind::marg1) && outside(Kind::marg2);
    rep.r_individual = rep.D - rep.D_hat;
    rep.r_sum = rep.D_hat;
    rep.region_nonempty = rep.applicable && rep.r_individual > 0 && rep.r_sum > 0;
    return rep;
}

double sanov_exponent(const ChannelSpec& spec, const Dist& p1, const Dist& p2, Kind k, const FrankWolfeOptions& opt) {
    return kl_to_confusable(spec, p1, p2, k, opt).value;
}

SanovCheck sanov_monte_carlo(const ChannelSpec& spec, const Dist& p1, const Dist& p2, Kind k, int n1, int n2, long trials,
                             std::uint64_t seed, double tolerance) {
    if (n1 <= 0 || n2 <= n1 || trials <= 0) throw std::invalid_argument("sanov harness: need 0 < n1 < n2 and trials > 0");
    FrankWolfeOptions fw;
    SanovCheck out;
    out.exponent = sanov_exponent(spec, p1, p2, k, fw);
    auto layout = kind_axes(k, spec.x1, spec.x2);
    const bool two1 = k != Kind::marg2, two2 = k != Kind::marg1;
    for (int n : {n1, n2}) {
        auto base = [&](const Dist& p) {
            auto c = rounded_counts(p.values(), static_cast<std::size_t>(n));
            Word w;
            for (std::size_t x = 0; x < c.size(); ++x) w.insert(w.end(), static_cast<std::size_t>(c[x]), static_cast<Symbol>(x));
            return w;
        };
        const Word w1 = base(p1), w2 = base(p2);
        CounterRng rng(seed, static_cast<std::uint64_t>(n));
        auto shuffled = [&](Word w) {
            for (std::size_t i = w.size(); i > 1; --i) std::swap(w[i - 1], w[rng.below(i)]);
            return w;
        };
        std::map<std::vector<std::int64_t>, bool> cache;
        SanovPoint pt;
        pt.n = n;
        pt.trials = trials;
        for (long t = 0; t < trials; ++t) {
            std::vector<Word> words;
            words.push_back(shuffled(w1));
            if (two1) words.push_back(shuffled(w1));
            words.push_back(shuffled(w2));
            if (two2) words.push_back(shuffled(w2));
            auto et = exact_type_of(words, layout);
            std::vector<std::int64_t> key(et.counts.values().data(), et.counts.values().data() + et.counts.size());
            auto it = cache.find(key);
            if (it == cache.end()) it = cache.emplace(key, confusable_dist(spec, et.to_dist(), k).feasible).first;
            if (it->second) ++pt.hits;
        }
        pt.log2_frequency = pt.hits > 0 ? std::log2(static_cast<double>(pt.hits) / static_cast<double>(trials))
                                        : -std::numeric_limits<double>::infinity();
        out.points.push_back(pt);
    }
    const auto& a = out.points[0];
    const auto& b = out.points[1];
    out.slope = -(b.log2_frequency - a.log2_frequency) / static_cast<double>(b.n - a.n);
    out.raw_ratio = -b.log2_frequency / (static_cast<double>(b.n) * out.exponent);
    out.relative_error = out.exponent > 0 ? std::abs(out.slope - out.exponent) / out.exponent : std::abs(out.slope);
    out.within_tolerance = std::isfinite(out.slope) && out.relative_error <= tolerance;
    return out;
}

AchieveReport achieve(const ChannelSpec& spec, const TimeSharingPlan& plan, double rate1, double rate2,
                      std::uint64_t seed, std::size_t max_sample) {
    if (rate1 < 0 || rate2 < 0) throw std::invalid_argument("rates must be nonnegative");
    AchieveReport rep;
    rep.plan = plan;
    const std::size_t n = plan.n();
    auto target = [&](double r, std::size_t q) {
        double m = std::exp2(static_cast<double>(n) * r * std::log2(static_cast<double>(q)));
        return static_cast<std::size_t>(std::max(1.0, std::ceil(m - 1e-9)));
    };
    rep.target_m1 = target(rate1, spec.x1.size());
    rep.target_m2 = target(rate2, spec.x2.size());
    auto oversample = [&](std::size_t m, int user) {
        double nu = 1;
        for (std::size_t l = 0; l + 1 < plan.bounds.size(); ++l)
            if (plan.chunk_size(l) > 0) nu *= nu_on_support(factor(plan, l, user), plan.chunk_size(l));
        double s = std::ceil(2.0 * static_cast<double>(m) * nu);
        return static_cast<std::size_t>(std::min(s, static_cast<double>(max_sample)));
    };
    rep.sampled1 = oversample(rep.target_m1, 1);
    rep.sampled2 = oversample(rep.target_m2, 2);
    auto keep = [](std::vector<Word> book, std::size_t m) {
        // drop repeats, keep first occurrences, then cap
        std::vector<Word> out;
        std::map<Word, bool> seen;
        for (auto& w : book) {
            if (out.size() >= m) break;
            if (seen.emplace(w, true).second) out.push_back(std::move(w));
        }
        return out;
    };
    auto b1 = timeshared_composition_filter(sample_book(plan, 1, rep.sampled1, seed), plan, 1);
    auto b2 = timeshared_composition_filter(sample_book(plan, 2, rep.sampled2, seed), plan, 2);
    rep.filtered1 = b1.size();
    rep.filtered2 = b2.size();
    CodePair code{keep(std::move(b1), 2 * rep.target_m1), keep(std::move(b2), 2 * rep.target_m2), n};
    if (code.book1.empty() || code.book2.empty()) {
        rep.code = code;
        return rep;
    }
    code = expurgate(spec, code, &rep.expurgation);
    if (code.book1.size() > rep.target_m1) code.book1.resize(rep.target_m1);
    if (code.book2.size() > rep.target_m2) code.book2.resize(rep.target_m2);
    rep.code = code;
    rep.zero_error = !code.book1.empty() && !code.book2.empty() && verify_zero_error(spec, code).zero_error;
    rep.rate1 = empirical_rate(code.m1(), n, spec.x1.size());
    rep.rate2 = empirical_rate(code.m2(), n, spec.x2.size());
    rep.success = rep.zero_error && code.m1() >= 2 && code.m2() >= 2;
    return rep;
}

}  // namespace omac
