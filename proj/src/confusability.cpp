#include "omac/confusability.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace omac {

TupleSides tuple_sides(Kind k, const std::vector<std::size_t>& idx) {
    auto s = [&](std::size_t i) { return static_cast<Symbol>(idx[i]); };
    switch (k) {
        case Kind::joint: return {s(0), s(2), s(1), s(3)};
        case Kind::marg1: return {s(0), s(2), s(1), s(2)};
        case Kind::marg2: return {s(0), s(1), s(0), s(2)};
    }
    throw std::logic_error("unreachable");
}

std::vector<std::vector<std::array<Symbol, 2>>> compatible_pairs(const ChannelSpec& spec, Kind k) {
    auto layout = Tensor::zeros(kind_axes(k, spec.x1, spec.x2));
    std::vector<std::vector<std::array<Symbol, 2>>> out(static_cast<std::size_t>(layout.size()));
    const auto ns = static_cast<Symbol>(spec.s.size());
    for (Eigen::Index f = 0; f < layout.size(); ++f) {
        TupleSides t = tuple_sides(k, layout.unflat(f));
        for (Symbol s1 = 0; s1 < ns; ++s1)
            for (Symbol s2 = 0; s2 < ns; ++s2)
                if (spec.output(t.a1, t.b1, s1) == spec.output(t.a2, t.b2, s2))
                    out[static_cast<std::size_t>(f)].push_back({s1, s2});
    }
    return out;
}

void require_self_coupling(const ChannelSpec& spec, const Tensor& p, Kind k, double tol) {
    require_kind_layout(p, k);
    if (!(p.axes() == kind_axes(k, spec.x1, spec.x2)))
        throw std::invalid_argument("coupling alphabets differ from the channel alphabets");
    for (const auto& [a, b] : kind_swaps(k)) {
        Eigen::VectorXd ma = sum_out(p, {a}).values(), mb = sum_out(p, {b}).values();
        if ((ma - mb).lpNorm<Eigen::Infinity>() > tol)
            throw std::invalid_argument("marginal mismatch: " + a + " and " + b + " differ (not a self-coupling)");
    }
}

LiftedVars add_lifted_vars(lp::Problem& prob, const ChannelSpec& spec, Kind k, const std::vector<Eigen::Index>& tuples) {
    auto cp = compatible_pairs(spec, k);
    LiftedVars lv;
    for (Eigen::Index t : tuples) {
        lv.tuples.push_back(t);
        lv.pairs.push_back(cp[static_cast<std::size_t>(t)]);
        lv.first_var.push_back(prob.add_vars(static_cast<int>(lv.pairs.back().size())));
    }
    return lv;
}

namespace {

std::vector<std::pair<int, double>> state_row_terms(const LinearConstraint& row, const LiftedVars& lv, int side) {
    std::vector<std::pair<int, double>> terms;
    for (std::size_t i = 0; i < lv.tuples.size(); ++i)
        for (std::size_t q = 0; q < lv.pairs[i].size(); ++q) {
            double a = row.coeffs[lv.pairs[i][q][static_cast<std::size_t>(side)]].to_double();
            if (a != 0) terms.push_back({lv.first_var[i] + static_cast<int>(q), a});
        }
    return terms;
}

}  // namespace

void add_state_rows(lp::Problem& prob, const ChannelSpec& spec, const LiftedVars& lv) {
    for (const auto& row : spec.lambda.rows())
        for (int side = 0; side < 2; ++side) prob.add_row(state_row_terms(row, lv, side), row.sense, row.rhs.to_double());
}

void add_marginal_rows(lp::Problem& prob, const std::vector<Axis>& axes, const LiftedVars& lv,
                       const std::vector<Eigen::VectorXd>& marginals) {
    auto layout = Tensor::zeros(axes);
    for (std::size_t ax = 0; ax < axes.size(); ++ax) {
        std::vector<std::vector<std::pair<int, double>>> rows(axes[ax].alphabet.size());
        for (std::size_t i = 0; i < lv.tuples.size(); ++i) {
            std::size_t sym = layout.unflat(lv.tuples[i])[ax];
            for (std::size_t q = 0; q < lv.pairs[i].size(); ++q) rows[sym].push_back({lv.first_var[i] + static_cast<int>(q), 1.0});
        }
        for (std::size_t sym = 0; sym < rows.size(); ++sym)
            prob.add_row(rows[sym], lp::Sense::eq, marginals[ax][static_cast<Eigen::Index>(sym)]);
    }
}

ConfusabilityCertificate confusable_dist(const ChannelSpec& spec, const Dist& p, Kind k) {
    require_self_coupling(spec, p, k);
    auto cp = compatible_pairs(spec, k);
    std::vector<Eigen::Index> matched;
    double unmatched = 0;
    for (Eigen::Index t = 0; t < p.size(); ++t) {
        if (p.values()[t] <= 0) continue;
        if (cp[static_cast<std::size_t>(t)].empty()) unmatched += p.values()[t];
        else matched.push_back(t);
    }
    lp::Problem prob;
    LiftedVars lv = add_lifted_vars(prob, spec, k, matched);
    for (std::size_t i = 0; i < lv.tuples.size(); ++i) {
        std::vector<std::pair<int, double>> row;
        for (std::size_t q = 0; q < lv.pairs[i].size(); ++q) row.push_back({lv.first_var[i] + static_cast<int>(q), 1.0});
        prob.add_row(row, lp::Sense::eq, p.values()[lv.tuples[i]]);
    }
    for (const auto& row : spec.lambda.rows()) {
        for (int side = 0; side < 2; ++side) {
            auto terms = state_row_terms(row, lv, side);
            double b = row.rhs.to_double();
            if (row.sense == lp::Sense::eq) {
                terms.push_back({prob.add_var(1.0), -1.0});
                terms.push_back({prob.add_var(1.0), 1.0});
            } else {
                terms.push_back({prob.add_var(1.0), row.sense == lp::Sense::le ? -1.0 : 1.0});
            }
            prob.add_row(terms, row.sense, b);
        }
    }
    auto sol = lp::solve(prob);
    if (!sol.optimal()) throw std::runtime_error(std::string("confusability LP failed: ") + lp::to_string(sol.status));

    ConfusabilityCertificate cert;
    cert.kind = k;
    cert.slack = std::max(0.0, sol.objective) + unmatched;
    cert.feasible = cert.slack <= kFeasibilityTol;
    if (cert.feasible) {
        auto axes = p.axes();
        axes.push_back({"s1", spec.s});
        axes.push_back({"s2", spec.s});
        axes.push_back({"y", spec.y});
        auto w = Tensor::zeros(axes);
        auto layout = Tensor::zeros(p.axes());
        for (std::size_t i = 0; i < lv.tuples.size(); ++i) {
            auto idx = layout.unflat(lv.tuples[i]);
            TupleSides ts = tuple_sides(k, idx);
            for (std::size_t q = 0; q < lv.pairs[i].size(); ++q) {
                double v = sol.x[lv.first_var[i] + static_cast<int>(q)];
                if (v <= 0) continue;
                auto full = idx;
                full.push_back(lv.pairs[i][q][0]);
                full.push_back(lv.pairs[i][q][1]);
                full.push_back(spec.output(ts.a1, ts.b1, lv.pairs[i][q][0]));
                w.values_mut()[w.flat(full)] += v;
            }
        }
        w.values_mut() /= w.values().sum();
        cert.witness = Dist(w);
    }
    return cert;
}

namespace {

std::vector<Eigen::VectorXd> axis_marginals(const Dist& p) {
    std::vector<Eigen::VectorXd> out;
    for (const auto& ax : p.axes()) out.push_back(sum_out(p, {ax.name}).values());
    return out;
}

double distance_into_complement(const ChannelSpec& spec, const Dist& p, Kind k, int steps) {
    // Lower bound on the l1 radius of (ball around p) within J that stays in K.
    // With conditionals c(.|t) chosen for every reachable tuple, a move Δ changes the
    // state-row value by at most (U-L)/2 * |Δ|_1, where [L,U] bounds the per-tuple
    // row usage; the LP looks for conditionals with slack >= r (U-L)/2.
    auto cp = compatible_pairs(spec, k);
    auto marg = axis_marginals(p);
    std::vector<Eigen::Index> tuples;
    for (Eigen::Index t = 0; t < p.size(); ++t) {
        auto idx = p.unflat(t);
        bool reachable = true;
        for (std::size_t a = 0; a < idx.size(); ++a)
            if (marg[a][static_cast<Eigen::Index>(idx[a])] <= 0) reachable = false;
        if (!reachable) continue;
        if (cp[static_cast<std::size_t>(t)].empty()) return 0.0;
        tuples.push_back(t);
    }
    if (spec.lambda.empty_rows()) return 2.0;

    auto feasible_at = [&](double r) {
        lp::Problem prob;
        LiftedVars lv = add_lifted_vars(prob, spec, k, tuples);
        for (std::size_t i = 0; i < lv.tuples.size(); ++i) {
            std::vector<std::pair<int, double>> row;
            for (std::size_t q = 0; q < lv.pairs[i].size(); ++q) row.push_back({lv.first_var[i] + static_cast<int>(q), 1.0});
            prob.add_row(row, lp::Sense::eq, 1.0);
        }
        for (const auto& row : spec.lambda.rows()) {
            for (int side = 0; side < 2; ++side) {
                int U = prob.add_var(0.0, true), L = prob.add_var(0.0, true);
                std::vector<std::pair<int, double>> weighted;
                for (std::size_t i = 0; i < lv.tuples.size(); ++i) {
                    std::vector<std::pair<int, double>> usage;
                    for (std::size_t q = 0; q < lv.pairs[i].size(); ++q) {
                        double a = row.coeffs[lv.pairs[i][q][static_cast<std::size_t>(side)]].to_double();
                        if (a == 0) continue;
                        usage.push_back({lv.first_var[i] + static_cast<int>(q), a});
                        double pt = p.values()[lv.tuples[i]];
                        if (pt > 0) weighted.push_back({lv.first_var[i] + static_cast<int>(q), a * pt});
                    }
                    auto up = usage;
                    up.push_back({U, -1.0});
                    prob.add_row(up, lp::Sense::le, 0.0);
                    auto lo = usage;
                    lo.push_back({L, -1.0});
                    prob.add_row(lo, lp::Sense::ge, 0.0);
                }
                double b = row.rhs.to_double();
                if (row.sense != lp::Sense::ge) {
                    auto t = weighted;
                    t.push_back({U, r / 2});
                    t.push_back({L, -r / 2});
                    prob.add_row(t, lp::Sense::le, b);
                }
                if (row.sense != lp::Sense::le) {
                    auto t = weighted;
                    t.push_back({U, -r / 2});
                    t.push_back({L, r / 2});
                    prob.add_row(t, lp::Sense::ge, b);
                }
            }
        }
        return lp::solve(prob).optimal();
    };
    if (!feasible_at(0.0)) return 0.0;
    if (feasible_at(2.0)) return 2.0;
    double lo = 0, hi = 2;
    for (int it = 0; it < steps; ++it) {
        double mid = 0.5 * (lo + hi);
        (feasible_at(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace

double nonconfusable_depth(const ChannelSpec& spec, const Dist& p, Kind k, int bisection_steps) {
    if (!confusable_dist(spec, p, k).feasible) return 0.0;
    return distance_into_complement(spec, p, k, bisection_steps);
}

double distance_to_set(const ChannelSpec& spec, const Dist& p, Kind k, Metric metric, Side side) {
    auto cert = confusable_dist(spec, p, k);
    if (side == Side::to_nonconfusable) {
        if (!cert.feasible) return 0.0;
        double r = distance_into_complement(spec, p, k, 40);
        return metric == Metric::L1 ? r : r / static_cast<double>(p.size());
    }
    if (cert.feasible) return 0.0;

    auto cp = compatible_pairs(spec, k);
    std::vector<Eigen::Index> tuples;
    for (Eigen::Index t = 0; t < p.size(); ++t)
        if (!cp[static_cast<std::size_t>(t)].empty()) tuples.push_back(t);
    lp::Problem prob;
    LiftedVars lv = add_lifted_vars(prob, spec, k, tuples);
    add_state_rows(prob, spec, lv);
    add_marginal_rows(prob, p.axes(), lv, axis_marginals(p));
    std::vector<int> var_of_tuple(static_cast<std::size_t>(p.size()), -1);
    for (std::size_t i = 0; i < lv.tuples.size(); ++i) var_of_tuple[static_cast<std::size_t>(lv.tuples[i])] = static_cast<int>(i);
    int shared = metric == Metric::Linf ? prob.add_var(1.0) : -1;
    for (Eigen::Index t = 0; t < p.size(); ++t) {
        int u = shared >= 0 ? shared : prob.add_var(1.0);
        std::vector<std::pair<int, double>> plus{{u, 1.0}}, minus{{u, 1.0}};
        int i = var_of_tuple[static_cast<std::size_t>(t)];
        if (i >= 0)
            for (std::size_t q = 0; q < lv.pairs[static_cast<std::size_t>(i)].size(); ++q) {
                int v = lv.first_var[static_cast<std::size_t>(i)] + static_cast<int>(q);
                plus.push_back({v, -1.0});
                minus.push_back({v, 1.0});
            }
        double pt = p.values()[t];
        prob.add_row(plus, lp::Sense::ge, -pt);  // u >= p' - p
        prob.add_row(minus, lp::Sense::ge, pt);  // u >= p - p'
    }
    auto sol = lp::solve(prob);
    if (!sol.optimal()) throw std::runtime_error(std::string("distance LP failed: ") + lp::to_string(sol.status));
    return std::max(0.0, sol.objective);
}

OperationalResult operational_confusable(const ChannelSpec& spec, const std::vector<Word>& tuple, Kind k) {
    auto axes = kind_axes(k, spec.x1, spec.x2);
    if (tuple.size() != axes.size()) throw std::invalid_argument("operational_confusable: wrong tuple arity");
    const std::size_t n = tuple[0].size();
    for (std::size_t v = 0; v < tuple.size(); ++v) {
        if (tuple[v].size() != n) throw std::invalid_argument("operational_confusable: length mismatch");
        for (Symbol s : tuple[v])
            if (s >= axes[v].alphabet.size()) throw std::invalid_argument("operational_confusable: symbol out of range");
    }
    auto layout = Tensor::zeros(axes);
    auto cp = compatible_pairs(spec, k);

    std::map<Eigen::Index, std::vector<std::size_t>> coords;  // pattern -> coordinates
    std::vector<std::size_t> idx(tuple.size());
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t v = 0; v < tuple.size(); ++v) idx[v] = tuple[v][j];
        coords[layout.flat(idx)].push_back(j);
    }
    for (const auto& [pat, cs] : coords)
        if (cp[static_cast<std::size_t>(pat)].empty()) return {};

    // State: counts of the first |S|-1 state symbols on each side, radix n+1.
    const std::size_t ns = spec.s.size(), dims = 2 * (ns - 1);
    std::vector<std::int64_t> stride(dims);
    std::int64_t total = 1;
    for (std::size_t d = dims; d-- > 0;) {
        stride[d] = total;
        total *= static_cast<std::int64_t>(n + 1);
        if (total > 4'000'000) throw std::runtime_error("operational_confusable: state space too large");
    }
    auto delta = [&](const std::array<Symbol, 2>& pr) {
        std::int64_t d = 0;
        if (pr[0] + 1u < ns) d += stride[pr[0]];
        if (pr[1] + 1u < ns) d += stride[ns - 1 + pr[1]];
        return d;
    };

    // Fast reachability pass over a sparse frontier; parents are tracked only when a
    // feasible end state exists.
    {
        std::vector<char> mark(static_cast<std::size_t>(total), 0);
        std::vector<std::int64_t> frontier{0}, next;
        for (const auto& [pat, cs] : coords) {
            const auto& pairs = cp[static_cast<std::size_t>(pat)];
            const std::int64_t c = static_cast<std::int64_t>(cs.size());
            std::vector<std::int64_t> inc{0};
            for (std::size_t q = 0; q < pairs.size(); ++q) {
                std::vector<std::int64_t> grown;
                std::int64_t d = delta(pairs[q]);
                // inc holds (offset, used) packed as offset * (c+1) + used
                for (std::int64_t packed : inc) {
                    std::int64_t off = packed / (c + 1), used = packed % (c + 1);
                    if (q + 1 == pairs.size()) grown.push_back((off + (c - used) * d) * (c + 1) + c);
                    else
                        for (std::int64_t j = 0; used + j <= c; ++j) grown.push_back((off + j * d) * (c + 1) + used + j);
                }
                std::sort(grown.begin(), grown.end());
                grown.erase(std::unique(grown.begin(), grown.end()), grown.end());
                inc = std::move(grown);
            }
            next.clear();
            for (std::int64_t st : frontier)
                for (std::int64_t packed : inc) {
                    std::int64_t to = st + packed / (c + 1);
                    if (to < total && !mark[static_cast<std::size_t>(to)]) {
                        mark[static_cast<std::size_t>(to)] = 1;
                        next.push_back(to);
                    }
                }
            for (std::int64_t st : next) mark[static_cast<std::size_t>(st)] = 0;
            frontier.swap(next);
        }
        bool any = false;
        for (std::int64_t st : frontier) {
            std::int64_t u1 = 0, u2 = 0;
            std::vector<std::int64_t> c1(ns, 0), c2(ns, 0);
            for (std::size_t a = 0; a + 1 < ns; ++a) {
                c1[a] = (st / stride[a]) % static_cast<std::int64_t>(n + 1);
                c2[a] = (st / stride[ns - 1 + a]) % static_cast<std::int64_t>(n + 1);
                u1 += c1[a];
                u2 += c2[a];
            }
            c1[ns - 1] = static_cast<std::int64_t>(n) - u1;
            c2[ns - 1] = static_cast<std::int64_t>(n) - u2;
            if (c1[ns - 1] < 0 || c2[ns - 1] < 0) continue;
            if (spec.lambda.admits_exact(c1, static_cast<std::int64_t>(n)) && spec.lambda.admits_exact(c2, static_cast<std::int64_t>(n))) {
                any = true;
                break;
            }
        }
        if (!any) return {};
    }

    struct PatternStage {
        std::int64_t count;
        std::vector<std::array<Symbol, 2>> pairs;
        std::vector<std::vector<std::int64_t>> sub;  // parents inside the pattern, (state, used) indexed
        std::vector<std::int64_t> out;                // parents of pattern-level states
    };
    std::vector<PatternStage> stages;
    std::vector<std::int64_t> level(static_cast<std::size_t>(total), -1);
    level[0] = -2;  // start
    for (const auto& [pat, cs] : coords) {
        PatternStage st;
        st.count = static_cast<std::int64_t>(cs.size());
        st.pairs = cp[static_cast<std::size_t>(pat)];
        const std::int64_t c = st.count, w = c + 1;
        std::vector<std::int64_t> out(static_cast<std::size_t>(total), -1);
        if (st.pairs.size() == 1) {
            std::int64_t d = delta(st.pairs[0]) * c;
            for (std::int64_t s = 0; s < total; ++s)
                if (level[static_cast<std::size_t>(s)] != -1 && out[static_cast<std::size_t>(s + d)] == -1)
                    out[static_cast<std::size_t>(s + d)] = s;
        } else {
            std::vector<std::int64_t> prev;  // previous sub-stage parents, (state, used)
            for (std::size_t q = 0; q + 1 < st.pairs.size(); ++q) {
                std::vector<std::int64_t> cur(static_cast<std::size_t>(total * w), -1);
                std::int64_t d = delta(st.pairs[q]);
                for (std::int64_t s = 0; s < total; ++s) {
                    for (std::int64_t u = 0; u < (q == 0 ? 1 : w); ++u) {
                        bool reached = q == 0 ? level[static_cast<std::size_t>(s)] != -1 : prev[static_cast<std::size_t>(s * w + u)] != -1;
                        if (!reached) continue;
                        std::int64_t from = q == 0 ? s : s * w + u;
                        for (std::int64_t j = 0; u + j <= c; ++j) {
                            std::int64_t to = (s + j * d) * w + u + j;
                            if (cur[static_cast<std::size_t>(to)] == -1) cur[static_cast<std::size_t>(to)] = from;
                        }
                    }
                }
                st.sub.push_back(cur);
                prev = std::move(cur);
            }
            std::int64_t d = delta(st.pairs.back());
            for (std::int64_t s = 0; s < total; ++s)
                for (std::int64_t u = 0; u <= c; ++u) {
                    if (prev[static_cast<std::size_t>(s * w + u)] == -1) continue;
                    std::int64_t to = s + (c - u) * d;
                    if (out[static_cast<std::size_t>(to)] == -1) out[static_cast<std::size_t>(to)] = s * w + u;
                }
        }
        st.out = out;
        level = std::move(out);
        stages.push_back(std::move(st));
    }

    auto counts_of = [&](std::int64_t s, int side) {
        std::vector<std::int64_t> cnt(ns, 0);
        std::int64_t used = 0;
        for (std::size_t a = 0; a + 1 < ns; ++a) {
            cnt[a] = (s / stride[side * (ns - 1) + a]) % static_cast<std::int64_t>(n + 1);
            used += cnt[a];
        }
        cnt[ns - 1] = static_cast<std::int64_t>(n) - used;
        return cnt;
    };
    std::int64_t found = -1;
    for (std::int64_t s = 0; s < total && found < 0; ++s) {
        if (level[static_cast<std::size_t>(s)] == -1) continue;
        auto c1 = counts_of(s, 0), c2 = counts_of(s, 1);
        if (c1[ns - 1] < 0 || c2[ns - 1] < 0) continue;
        if (spec.lambda.admits_exact(c1, static_cast<std::int64_t>(n)) && spec.lambda.admits_exact(c2, static_cast<std::int64_t>(n)))
            found = s;
    }
    if (found < 0) return {};

    // Walk parents back to per-pattern pair allocations.
    std::vector<std::vector<std::int64_t>> alloc(stages.size());
    std::int64_t s = found;
    for (std::size_t p = stages.size(); p-- > 0;) {
        auto& st = stages[p];
        const std::int64_t w = st.count + 1;
        alloc[p].assign(st.pairs.size(), 0);
        std::int64_t par = st.out[static_cast<std::size_t>(s)];
        if (st.pairs.size() == 1) {
            alloc[p][0] = st.count;
            s = par;
            continue;
        }
        std::int64_t u = par % w;
        alloc[p].back() = st.count - u;
        std::int64_t cur = par;
        for (std::size_t q = st.sub.size(); q-- > 0;) {
            std::int64_t from = st.sub[q][static_cast<std::size_t>(cur)];
            std::int64_t uu = cur % w;
            std::int64_t prev_u = q == 0 ? 0 : from % w;
            alloc[p][q] = uu - prev_u;
            cur = from;
        }
        s = cur;  // after sub-stage 0 the parent is a pattern-level state
    }

    OperationalResult res;
    res.confusable = true;
    res.s1.assign(n, 0);
    res.s2.assign(n, 0);
    std::size_t p = 0;
    for (const auto& [pat, cs] : coords) {
        std::size_t at = 0;
        for (std::size_t q = 0; q < stages[p].pairs.size(); ++q)
            for (std::int64_t r = 0; r < alloc[p][q]; ++r, ++at) {
                res.s1[cs[at]] = stages[p].pairs[q][0];
                res.s2[cs[at]] = stages[p].pairs[q][1];
            }
        ++p;
    }
    return res;
}

ZeroErrorReport verify_zero_error(const ChannelSpec& spec, const CodePair& code) {
    ZeroErrorReport rep;
    auto hit = [&](Kind k, std::array<std::size_t, 4> ids, std::vector<Word> tuple) {
        auto r = operational_confusable(spec, tuple, k);
        if (!r.confusable) return false;
        rep.zero_error = false;
        rep.kind = k;
        rep.indices = ids;
        rep.tuple = std::move(tuple);
        rep.s1 = std::move(r.s1);
        rep.s2 = std::move(r.s2);
        return true;
    };
    const auto& b1 = code.book1;
    const auto& b2 = code.book2;
    for (std::size_t i1 = 0; i1 < b1.size(); ++i1)
        for (std::size_t i2 = i1 + 1; i2 < b1.size(); ++i2)
            for (std::size_t j1 = 0; j1 < b2.size(); ++j1)
                for (std::size_t j2 = 0; j2 < b2.size(); ++j2)
                    if (j1 != j2 && hit(Kind::joint, {i1, i2, j1, j2}, {b1[i1], b1[i2], b2[j1], b2[j2]})) return rep;
    for (std::size_t i1 = 0; i1 < b1.size(); ++i1)
        for (std::size_t i2 = i1 + 1; i2 < b1.size(); ++i2)
            for (std::size_t j = 0; j < b2.size(); ++j)
                if (hit(Kind::marg1, {i1, i2, j, j}, {b1[i1], b1[i2], b2[j]})) return rep;
    for (std::size_t i = 0; i < b1.size(); ++i)
        for (std::size_t j1 = 0; j1 < b2.size(); ++j1)
            for (std::size_t j2 = j1 + 1; j2 < b2.size(); ++j2)
                if (hit(Kind::marg2, {i, i, j1, j2}, {b1[i], b2[j1], b2[j2]})) return rep;
    return rep;
}

}  // namespace omac
