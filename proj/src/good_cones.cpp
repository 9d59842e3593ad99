#include "omac/good_cones.hpp"

#include "omac/lp.hpp"
#include "omac/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace omac {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::size_t x1_size(const Tensor& t, Kind k) {
    return t.axes()[t.axis_position(k == Kind::marg2 ? axis::x1 : axis::x1_1)].alphabet.size();
}
std::size_t x2_size(const Tensor& t, Kind k) {
    return t.axes()[t.axis_position(k == Kind::marg1 ? axis::x2 : axis::x2_1)].alphabet.size();
}

Eigen::VectorXd lifted(const Eigen::VectorXd& p, bool doubled) {
    if (!doubled) return p;
    RowMajor outer = p * p.transpose();
    return Eigen::Map<const Eigen::VectorXd>(outer.data(), outer.size());
}

void require_in_j(const Tensor& t, Kind k) {
    require_kind_layout(t, k);
    for (const auto& [a, b] : kind_swaps(k))
        if ((sum_out(t, {a}).values() - sum_out(t, {b}).values()).lpNorm<Eigen::Infinity>() > 1e-9)
            throw std::invalid_argument("target outside the self-coupling set: " + a + " and " + b + " marginals differ");
}

// Group images of every cell under the swap symmetries of the kind.
std::vector<std::vector<Eigen::Index>> swap_images(const Tensor& layout, Kind k) {
    auto sw = kind_swaps(k);
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> elems{{}};
    for (const auto& s : sw) elems.push_back({{layout.axis_position(s[0]), layout.axis_position(s[1])}});
    if (k == Kind::joint) elems.push_back({elems[1][0], elems[2][0]});
    std::vector<std::vector<Eigen::Index>> out(static_cast<std::size_t>(layout.size()));
    for (Eigen::Index f = 0; f < layout.size(); ++f) {
        for (const auto& e : elems) {
            auto idx = layout.unflat(f);
            for (const auto& [i, j] : e) std::swap(idx[i], idx[j]);
            out[static_cast<std::size_t>(f)].push_back(layout.flat(idx));
        }
    }
    return out;
}

struct Orbits {
    std::vector<int> of_cell;
    std::vector<std::vector<Eigen::Index>> cells;
};

Orbits orbits_of(const Tensor& layout, Kind k) {
    auto images = swap_images(layout, k);
    Orbits o;
    o.of_cell.assign(static_cast<std::size_t>(layout.size()), -1);
    for (Eigen::Index f = 0; f < layout.size(); ++f) {
        if (o.of_cell[static_cast<std::size_t>(f)] >= 0) continue;
        int id = static_cast<int>(o.cells.size());
        o.cells.emplace_back();
        for (Eigen::Index g : images[static_cast<std::size_t>(f)]) {
            if (o.of_cell[static_cast<std::size_t>(g)] >= 0) continue;
            o.of_cell[static_cast<std::size_t>(g)] = id;
            o.cells.back().push_back(g);
        }
    }
    return o;
}

Axis factor_axis(const Tensor& t, Kind k, int user) {
    if (user == 1) return {"x1", t.axes()[t.axis_position(k == Kind::marg2 ? axis::x1 : axis::x1_1)].alphabet};
    return {"x2", t.axes()[t.axis_position(k == Kind::marg1 ? axis::x2 : axis::x2_1)].alphabet};
}

Dist user_marginal(const Dist& t, Kind k, int user) {
    std::string name = user == 1 ? (k == Kind::marg2 ? axis::x1 : axis::x1_1) : (k == Kind::marg1 ? axis::x2 : axis::x2_1);
    return rename_axes(marginalize(t, {name}), {user == 1 ? "x1" : "x2"});
}

// Removes atoms until at most (dimension + 1) remain, keeping the mixture fixed.
void caratheodory_prune(std::vector<Eigen::VectorXd>& atoms, std::vector<double>& w,
                        std::vector<std::pair<Dist, Dist>>& factors) {
    const Eigen::Index dim = atoms.empty() ? 0 : atoms[0].size();
    while (static_cast<Eigen::Index>(atoms.size()) > dim + 1) {
        const Eigen::Index m = static_cast<Eigen::Index>(atoms.size());
        Eigen::MatrixXd A(dim + 1, m);
        for (Eigen::Index j = 0; j < m; ++j) {
            A.col(j).head(dim) = atoms[static_cast<std::size_t>(j)];
            A(dim, j) = 1.0;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
        Eigen::MatrixXd ker = lu.kernel();
        if (ker.cols() == 0 || ker.col(0).norm() == 0) break;
        Eigen::VectorXd v = ker.col(0);
        if (v.maxCoeff() <= 0) v = -v;
        double t = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < m; ++j)
            if (v[j] > 1e-14) t = std::min(t, w[static_cast<std::size_t>(j)] / v[j]);
        std::vector<Eigen::VectorXd> a2;
        std::vector<double> w2;
        std::vector<std::pair<Dist, Dist>> f2;
        bool dropped = false;
        for (Eigen::Index j = 0; j < m; ++j) {
            double nw = w[static_cast<std::size_t>(j)] - t * v[j];
            if (nw <= 1e-15 && !dropped) {
                dropped = true;
                continue;
            }
            if (nw <= 1e-15) continue;
            a2.push_back(atoms[static_cast<std::size_t>(j)]);
            w2.push_back(nw);
            f2.push_back(factors[static_cast<std::size_t>(j)]);
        }
        if (!dropped) break;
        atoms = std::move(a2);
        w = std::move(w2);
        factors = std::move(f2);
    }
    double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) x /= s;
}

}  // namespace

Dist good_mixture(Kind k, const std::vector<double>& weights, const std::vector<std::pair<Dist, Dist>>& factors) {
    if (weights.empty() || weights.size() != factors.size()) throw std::invalid_argument("good_mixture: empty or mismatched");
    Tensor acc;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        Dist a = good_atom(k, factors[i].first, factors[i].second);
        if (i == 0) acc = Tensor(a.axes(), weights[i] * a.values());
        else acc.values_mut() += weights[i] * a.values();
    }
    acc.values_mut() /= acc.values().sum();
    return Dist(acc);
}

Dist GoodDecomposition::mixture() const {
    return good_mixture(kind, weights, factors);
}

GoodDecomposition project_decomposition(const GoodDecomposition& d, Kind to) {
    if (d.kind != Kind::joint || to == Kind::joint) throw std::invalid_argument("projection goes from joint to a marginal kind");
    GoodDecomposition out = d;
    out.kind = to;
    out.residual = 0;
    out.net_slack = net_lipschitz_slack(to, d.factors[0].first.size(), d.factors[0].second.size(), d.eta);
    return out;
}

double net_lipschitz_slack(Kind k, std::size_t q1, std::size_t q2, double eta) {
    double c1 = static_cast<double>(q1) * eta, c2 = static_cast<double>(q2) * eta;
    double s = k == Kind::joint ? 2 * c1 + 2 * c2 : k == Kind::marg1 ? 2 * c1 + c2 : c1 + 2 * c2;
    return std::min(2.0, s);
}

GoodDecomposition good_membership(const Dist& target, Kind k, double eta, std::size_t k_cap, double tol) {
    require_in_j(target, k);
    Dist p1 = user_marginal(target, k, 1), p2 = user_marginal(target, k, 2);
    std::vector<Dist> n1{p1}, n2{p2};
    for (auto& d : build_net(factor_axis(target, k, 1), eta)) n1.push_back(d);
    for (auto& d : build_net(factor_axis(target, k, 2), eta)) n2.push_back(d);

    std::vector<std::pair<Dist, Dist>> factors;
    std::vector<Eigen::VectorXd> atoms;
    for (const auto& a : n1)
        for (const auto& b : n2) {
            if (k_cap > 0 && atoms.size() >= k_cap) break;
            factors.push_back({a, b});
            atoms.push_back(good_atom(k, a, b).values());
        }
    const int na = static_cast<int>(atoms.size());
    const Eigen::Index cells = target.size();

    lp::Problem prob;
    int lam = prob.add_vars(na);
    int u = prob.add_vars(static_cast<int>(cells), 1.0);
    std::vector<std::pair<int, double>> sum;
    for (int i = 0; i < na; ++i) sum.push_back({lam + i, 1.0});
    prob.add_row(sum, lp::Sense::eq, 1.0);
    for (Eigen::Index c = 0; c < cells; ++c) {
        std::vector<std::pair<int, double>> hi{{u + static_cast<int>(c), 1.0}}, lo{{u + static_cast<int>(c), 1.0}};
        for (int i = 0; i < na; ++i) {
            double a = atoms[static_cast<std::size_t>(i)][c];
            if (a == 0) continue;
            hi.push_back({lam + i, a});
            lo.push_back({lam + i, -a});
        }
        prob.add_row(hi, lp::Sense::ge, target.values()[c]);   // u >= t - mix
        prob.add_row(lo, lp::Sense::ge, -target.values()[c]);  // u >= mix - t
    }
    auto sol = lp::solve(prob);
    if (!sol.optimal()) throw std::runtime_error(std::string("good membership LP failed: ") + lp::to_string(sol.status));

    GoodDecomposition d;
    d.kind = k;
    d.eta = eta;
    d.tolerance = tol;
    std::vector<Eigen::VectorXd> used;
    for (int i = 0; i < na; ++i) {
        double w = sol.x[lam + i];
        if (w <= 1e-12) continue;
        d.weights.push_back(w);
        d.factors.push_back(factors[static_cast<std::size_t>(i)]);
        used.push_back(atoms[static_cast<std::size_t>(i)]);
    }
    caratheodory_prune(used, d.weights, d.factors);
    d.residual = (target.values() - d.mixture().values()).lpNorm<1>();
    d.net_slack = net_lipschitz_slack(k, p1.size(), p2.size(), eta);
    d.member = d.residual <= tol;
    return d;
}

double product_form(const Tensor& q, Kind k, const Eigen::VectorXd& p1, const Eigen::VectorXd& p2) {
    Eigen::VectorXd l1 = lifted(p1, k != Kind::marg2), l2 = lifted(p2, k != Kind::marg1);
    Eigen::Map<const RowMajor> Q(q.values().data(), l1.size(), l2.size());
    return l1.dot(Q * l2);
}

CogoodAudit is_cogood(const Tensor& q, Kind k, double grid_step) {
    require_kind_layout(q, k);
    if (!is_symmetric(q, k, 1e-9)) throw std::invalid_argument("is_cogood: tensor is not symmetric");
    if (std::abs(q.values().lpNorm<1>() - 1.0) > 1e-6) throw std::invalid_argument("is_cogood: tensor must have l1 norm 1");
    if (!(grid_step > 0) || grid_step > 1) throw std::invalid_argument("is_cogood: grid_step must lie in (0,1]");
    const std::size_t q1 = x1_size(q, k), q2 = x2_size(q, k);
    int m = std::max(1, static_cast<int>(std::lround(1.0 / grid_step)));
    auto g1 = simplex_grid(q1, m), g2 = simplex_grid(q2, m);
    bool d1 = k != Kind::marg2, d2 = k != Kind::marg1;
    Eigen::MatrixXd X1(d1 ? q1 * q1 : q1, g1.size()), X2(d2 ? q2 * q2 : q2, g2.size());
    for (std::size_t i = 0; i < g1.size(); ++i) X1.col(static_cast<Eigen::Index>(i)) = lifted(g1[i], d1);
    for (std::size_t i = 0; i < g2.size(); ++i) X2.col(static_cast<Eigen::Index>(i)) = lifted(g2[i], d2);
    Eigen::Map<const RowMajor> Q(q.values().data(), X1.rows(), X2.rows());
    Eigen::MatrixXd V = X1.transpose() * Q * X2;

    std::vector<std::pair<double, Eigen::Index>> order(static_cast<std::size_t>(V.size()));
    for (Eigen::Index i = 0; i < V.size(); ++i) order[static_cast<std::size_t>(i)] = {V.data()[i], i};
    std::size_t starts = std::min<std::size_t>(8, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<long>(starts), order.end());

    CogoodAudit best;
    best.grid_step = grid_step;
    best.margin = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < starts; ++s) {
        Eigen::Index flat = order[s].second;
        Eigen::VectorXd a = g1[static_cast<std::size_t>(flat % V.rows())], b = g2[static_cast<std::size_t>(flat / V.rows())];
        double val = product_form(q, k, a, b);
        double h = grid_step;
        for (int it = 0; it < 20000 && h > 1e-11; ++it) {
            bool improved = false;
            for (int which = 0; which < 2; ++which) {
                Eigen::VectorXd& p = which == 0 ? a : b;
                for (Eigen::Index i = 0; i < p.size(); ++i)
                    for (Eigen::Index j = 0; j < p.size(); ++j) {
                        if (i == j || p[i] <= 0) continue;
                        double d = std::min(h, p[i]);
                        p[i] -= d;
                        p[j] += d;
                        double v = product_form(q, k, a, b);
                        if (v < val - 1e-15) {
                            val = v;
                            improved = true;
                        } else {
                            p[i] += d;
                            p[j] -= d;
                        }
                    }
            }
            if (!improved) h /= 2;
        }
        if (val < best.margin) {
            best.margin = val;
            best.argmin_p1 = a;
            best.argmin_p2 = b;
        }
    }
    best.cogood = best.margin >= -1e-8;
    return best;
}

std::optional<CogoodCertificate> cogood_certificate(const Dist& target, Kind k, double eta, double eps_prime,
                                                    double grid_step) {
    require_in_j(target, k);
    Orbits orb = orbits_of(target, k);
    const int no = static_cast<int>(orb.cells.size());
    Eigen::VectorXd t_orb = Eigen::VectorXd::Zero(no), size = Eigen::VectorXd::Zero(no);
    for (int o = 0; o < no; ++o)
        for (Eigen::Index c : orb.cells[static_cast<std::size_t>(o)]) {
            t_orb[o] += target.values()[c];
            size[o] += 1;
        }
    auto net1 = build_net(factor_axis(target, k, 1), eta), net2 = build_net(factor_axis(target, k, 2), eta);
    Eigen::MatrixXd atoms(static_cast<Eigen::Index>(net1.size() * net2.size()), no);
    atoms.setZero();
    Eigen::Index r = 0;
    for (const auto& a : net1)
        for (const auto& b : net2) {
            Dist at = good_atom(k, a, b);
            for (Eigen::Index c = 0; c < at.size(); ++c) atoms(r, orb.of_cell[static_cast<std::size_t>(c)]) += at.values()[c];
            ++r;
        }

    // Cutting planes: only atoms that the current q violates enter the LP. Outer rounds add the
    // off-net product points that the audit finds negative.
    std::vector<Eigen::Index> active;
    std::vector<bool> in(static_cast<std::size_t>(atoms.rows()), false);
    const Axis ax1 = factor_axis(target, k, 1), ax2 = factor_axis(target, k, 2);
    Eigen::VectorXd qo = Eigen::VectorXd::Zero(no);
    Tensor q;
    CogoodAudit audit;
    for (int outer = 0;; ++outer) {
        for (int round = 0; round < 500; ++round) {
            lp::Problem prob;
            int qv = prob.add_vars(no, 0.0, true);
            int av = prob.add_vars(no);
            for (int o = 0; o < no; ++o) prob.set_cost(qv + o, t_orb[o]);
            std::vector<std::pair<int, double>> norm;
            for (int o = 0; o < no; ++o) {
                norm.push_back({av + o, size[o]});
                prob.add_row({{av + o, 1.0}, {qv + o, -1.0}}, lp::Sense::ge, 0.0);
                prob.add_row({{av + o, 1.0}, {qv + o, 1.0}}, lp::Sense::ge, 0.0);
            }
            prob.add_row(norm, lp::Sense::le, 1.0);
            for (Eigen::Index a : active) {
                std::vector<std::pair<int, double>> row;
                for (int o = 0; o < no; ++o)
                    if (atoms(a, o) != 0) row.push_back({qv + o, atoms(a, o)});
                prob.add_row(row, lp::Sense::ge, 0.0);
            }
            auto sol = lp::solve(prob);
            if (!sol.optimal()) throw std::runtime_error(std::string("co-good LP failed: ") + lp::to_string(sol.status));
            qo = sol.x.segment(qv, no);
            Eigen::VectorXd vals = atoms * qo;
            std::vector<std::pair<double, Eigen::Index>> viol;
            for (Eigen::Index i = 0; i < vals.size(); ++i)
                if (vals[i] < -1e-12 && !in[static_cast<std::size_t>(i)]) viol.push_back({vals[i], i});
            if (viol.empty()) break;
            std::sort(viol.begin(), viol.end());
            for (std::size_t i = 0; i < std::min<std::size_t>(25, viol.size()); ++i) {
                active.push_back(viol[i].second);
                in[static_cast<std::size_t>(viol[i].second)] = true;
            }
        }

        q = Tensor::zeros(target.axes());
        for (Eigen::Index c = 0; c < q.size(); ++c) q.values_mut()[c] = qo[orb.of_cell[static_cast<std::size_t>(c)]];
        double norm = q.values().lpNorm<1>();
        if (norm < 1e-12) return std::nullopt;
        q.values_mut() /= norm;
        if (inner(target, q) > -eps_prime) return std::nullopt;
        audit = is_cogood(q, k, grid_step);
        if (audit.margin >= -1e-10 || outer >= 30) break;

        Dist at = good_atom(k, Dist(std::vector<Axis>{ax1}, audit.argmin_p1), Dist(std::vector<Axis>{ax2}, audit.argmin_p2));
        Eigen::RowVectorXd cut = Eigen::RowVectorXd::Zero(no);
        for (Eigen::Index c = 0; c < at.size(); ++c) cut[orb.of_cell[static_cast<std::size_t>(c)]] += at.values()[c];
        atoms.conservativeResize(atoms.rows() + 1, Eigen::NoChange);
        atoms.row(atoms.rows() - 1) = cut;
        in.push_back(true);
        active.push_back(atoms.rows() - 1);
    }

    if (audit.margin < -1e-8) {
        // shift by the all-ones tensor, which pairs to 1 with every distribution
        q.values_mut().array() += -audit.margin + 1e-12;
        q.values_mut() /= q.values().lpNorm<1>();
        audit = is_cogood(q, k, grid_step);
    }
    CogoodCertificate cert;
    cert.kind = k;
    cert.q = q;
    cert.inner = inner(target, q);
    cert.grid_margin = audit.margin;
    cert.eps_prime = eps_prime;
    cert.grid_step = grid_step;
    cert.eta = eta;
    if (cert.inner > -eps_prime || cert.grid_margin < -1e-8) return std::nullopt;
    return cert;
}

namespace {

Dist as_factor(const Dist& d, const std::string& name, const Alphabet& a) {
    if (d.rank() != 1 || !(d.axes()[0].alphabet == a)) throw std::invalid_argument("input distribution alphabet mismatch");
    return rename_axes(d, {name});
}

struct Evaluation {
    bool witness = false;
    std::array<double, 3> margins{-1, -1, -1};
    double score = 0;  // min margin when a witness
    double depth = 0;  // max depth over confusable kinds otherwise
};

}  // namespace

GoodSearchResult search_good(const ChannelSpec& spec, const Dist& p1_in, const Dist& p2_in, GoodPredicate what,
                             double eta, int budget, std::uint64_t seed) {
    Dist p1 = as_factor(p1_in, "x1", spec.x1), p2 = as_factor(p2_in, "x2", spec.x2);
    if (!spec.lambda1.admits(p1.values(), 1e-9) || !spec.lambda2.admits(p2.values(), 1e-9))
        throw std::invalid_argument("infeasible input pair: outside the input constraints");
    if (budget < 1) throw std::invalid_argument("search budget must be positive");
    const Kind mix_kind = what == GoodPredicate::simultaneous ? Kind::joint
                          : what == GoodPredicate::marg1_only ? Kind::marg1
                                                              : Kind::marg2;

    std::vector<Dist> n1{p1}, n2{p2};
    for (auto& d : build_net(Axis{"x1", spec.x1}, eta)) n1.push_back(d);
    for (auto& d : build_net(Axis{"x2", spec.x2}, eta)) n2.push_back(d);
    std::vector<std::pair<Dist, Dist>> atoms;
    for (const auto& a : n1)
        for (const auto& b : n2) atoms.push_back({a, b});
    const int na = static_cast<int>(atoms.size());

    CounterRng rng(seed, 0x600D);
    auto random_vertex = [&]() {
        lp::Problem prob;
        int lam = prob.add_vars(na);
        for (int i = 0; i < na; ++i) prob.set_cost(lam + i, 2 * rng.uniform() - 1);
        for (Eigen::Index x = 0; x < p1.size(); ++x) {
            std::vector<std::pair<int, double>> row;
            for (int i = 0; i < na; ++i)
                if (double a = atoms[static_cast<std::size_t>(i)].first.values()[x]; a != 0) row.push_back({lam + i, a});
            prob.add_row(row, lp::Sense::eq, p1.values()[x]);
        }
        for (Eigen::Index y = 0; y < p2.size(); ++y) {
            std::vector<std::pair<int, double>> row;
            for (int i = 0; i < na; ++i)
                if (double b = atoms[static_cast<std::size_t>(i)].second.values()[y]; b != 0) row.push_back({lam + i, b});
            prob.add_row(row, lp::Sense::eq, p2.values()[y]);
        }
        auto sol = lp::solve(prob);
        Eigen::VectorXd w = Eigen::VectorXd::Zero(na);
        if (sol.optimal()) w = sol.x.head(na).cwiseMax(0.0);
        else w[0] = 1.0;
        return Eigen::VectorXd(w / w.sum());
    };

    auto to_decomposition = [&](const Eigen::VectorXd& w) {
        GoodDecomposition d;
        d.kind = mix_kind;
        d.eta = eta;
        d.member = true;
        double total = 0;
        for (int i = 0; i < na; ++i)
            if (w[i] > 1e-12) {
                d.weights.push_back(w[i]);
                d.factors.push_back(atoms[static_cast<std::size_t>(i)]);
                total += w[i];
            }
        for (auto& x : d.weights) x /= total;
        d.net_slack = net_lipschitz_slack(mix_kind, spec.x1.size(), spec.x2.size(), eta);
        return d;
    };

    std::vector<Kind> kinds = what == GoodPredicate::simultaneous ? std::vector<Kind>{Kind::joint, Kind::marg1, Kind::marg2}
                                                                   : std::vector<Kind>{mix_kind};
    auto evaluate = [&](const GoodDecomposition& d) {
        Evaluation e;
        e.witness = true;
        e.score = std::numeric_limits<double>::infinity();
        for (Kind k : kinds) {
            Dist m = good_mixture(k, d.weights, d.factors);
            auto slot = static_cast<std::size_t>(k);
            auto cert = confusable_dist(spec, m, k);
            if (cert.feasible) {
                e.witness = false;
                e.margins[slot] = 0;
                e.depth = std::max(e.depth, nonconfusable_depth(spec, m, k, 14));
            } else {
                e.margins[slot] = distance_to_set(spec, m, k, Metric::L1, Side::to_confusable);
                e.score = std::min(e.score, e.margins[slot]);
            }
        }
        if (!e.witness) e.score = 0;
        return e;
    };

    GoodSearchResult res;
    res.predicate = what;
    res.seed = seed;
    res.eta = eta;
    Eigen::VectorXd best_w, neg_w;
    Evaluation best_e, neg_e;
    bool have_neg = false;
    for (int it = 0; it < budget; ++it) {
        Eigen::VectorXd w;
        if (it == 0) {
            w = Eigen::VectorXd::Zero(na);
            w[0] = 1.0;  // the product P1, P2 itself
        } else if (it % 2 == 1) {
            w = random_vertex();
        } else {
            const Eigen::VectorXd& centre = res.found ? best_w : neg_w;
            double t = 0.1 + 0.8 * rng.uniform();
            w = (1 - t) * centre + t * random_vertex();
        }
        auto d = to_decomposition(w);
        auto e = evaluate(d);
        ++res.evaluated;
        if (e.witness) {
            if (!res.found || e.score > best_e.score) {
                res.found = true;
                best_w = w;
                best_e = e;
                res.best = d;
            }
        } else if (!have_neg || e.depth < neg_e.depth) {
            have_neg = true;
            neg_w = w;
            neg_e = e;
            if (!res.found) res.best = d;
        }
        if (res.found && best_e.score >= 2 * eta) break;
    }
    Evaluation& fin = res.found ? best_e : neg_e;
    if (!res.found) {
        // the search compared coarse depths; report a fine one
        fin.depth = 0;
        for (Kind k : kinds) {
            Dist m = good_mixture(k, res.best.weights, res.best.factors);
            fin.depth = std::max(fin.depth, nonconfusable_depth(spec, m, k, 40));
        }
    }
    res.margins = fin.margins;
    res.margin = res.found ? fin.score : fin.depth;
    return res;
}

GoodSearchResult search_simultaneously_good(const ChannelSpec& spec, const Dist& p1, const Dist& p2, double eta,
                                            int budget, std::uint64_t seed) {
    return search_good(spec, p1, p2, GoodPredicate::simultaneous, eta, budget, seed);
}

}  // namespace omac
