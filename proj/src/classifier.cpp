#include "omac/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

namespace omac {

namespace {

std::vector<Kind> kinds_of(GoodPredicate g) {
    switch (g) {
        case GoodPredicate::simultaneous: return {Kind::joint, Kind::marg1, Kind::marg2};
        case GoodPredicate::marg1_only: return {Kind::marg1};
        case GoodPredicate::marg2_only: return {Kind::marg2};
    }
    return {};
}

PredicateRecord record_from(const GoodSearchResult& r, GoodPredicate what, double eta) {
    PredicateRecord p;
    p.predicate = what;
    p.verdict = r.found;
    p.search = r;
    p.margin = r.margin;
    if (r.found && what != r.predicate) p.margin = r.margins[what == GoodPredicate::marg1_only ? 1 : 2];
    p.boundary_uncertain = p.margin < 2 * eta;
    return p;
}

}  // namespace

int case_from_predicates(bool g, bool g1, bool g2) {
    if (g) {
        if (!g1 || !g2) throw std::logic_error("inconsistent predicate pattern: G nonempty but a marginal predicate fails");
        return 1;
    }
    if (g1 && g2) return 2;
    if (g1) return 3;
    if (g2) return 4;
    return 5;
}

ShapeVerdict classify_shape(const ChannelSpec& spec, const Dist& p1, const Dist& p2, double eta, int budget,
                            std::uint64_t seed) {
    ShapeVerdict v;
    v.eta = eta;
    v.p1 = p1;
    v.p2 = p2;
    auto g = search_good(spec, p1, p2, GoodPredicate::simultaneous, eta, budget, seed);
    v.predicates[0] = record_from(g, GoodPredicate::simultaneous, eta);
    if (g.found) {
        // The joint witness projects to marginal witnesses with the same weights.
        v.predicates[1] = record_from(g, GoodPredicate::marg1_only, eta);
        v.predicates[2] = record_from(g, GoodPredicate::marg2_only, eta);
        for (int i = 1; i < 3; ++i)
            if (v.predicates[static_cast<std::size_t>(i)].margin <= 0)
                throw std::logic_error("inconsistent predicate pattern: projected witness is confusable");
    } else {
        v.predicates[1] = record_from(search_good(spec, p1, p2, GoodPredicate::marg1_only, eta, budget, seed),
                                      GoodPredicate::marg1_only, eta);
        v.predicates[2] = record_from(search_good(spec, p1, p2, GoodPredicate::marg2_only, eta, budget, seed),
                                      GoodPredicate::marg2_only, eta);
    }
    v.shape_case = case_from_predicates(v.predicates[0].verdict, v.predicates[1].verdict, v.predicates[2].verdict);
    v.boundary_uncertain = std::any_of(v.predicates.begin(), v.predicates.end(),
                                       [](const PredicateRecord& p) { return p.boundary_uncertain; });
    return v;
}

bool replay_verdict(const ChannelSpec& spec, const ShapeVerdict& v) {
    for (const auto& p : v.predicates) {
        const auto& d = p.search.best;
        if (d.weights.empty()) return false;
        bool all_nonconfusable = true;
        for (Kind k : kinds_of(p.predicate))
            if (confusable_dist(spec, good_mixture(k, d.weights, d.factors), k).feasible) all_nonconfusable = false;
        if (all_nonconfusable != p.verdict) return false;
    }
    return case_from_predicates(v.predicates[0].verdict, v.predicates[1].verdict, v.predicates[2].verdict) ==
           v.shape_case;
}

InputScan classify_over_inputs(const ChannelSpec& spec, double grid_step, double eta, int budget, int jobs,
                               std::uint64_t seed) {
    if (!(grid_step > 0) || grid_step > 1) throw std::invalid_argument("grid_step must lie in (0,1]");
    int m = std::max(1, static_cast<int>(std::lround(1.0 / grid_step)));
    std::vector<Dist> in1, in2;
    for (const auto& v : simplex_grid(spec.x1.size(), m))
        if (spec.lambda1.admits(v, 1e-12)) in1.push_back(Dist({Axis{"x1", spec.x1}}, v));
    for (const auto& v : simplex_grid(spec.x2.size(), m))
        if (spec.lambda2.admits(v, 1e-12)) in2.push_back(Dist({Axis{"x2", spec.x2}}, v));
    if (in1.empty() || in2.empty()) throw std::invalid_argument("empty feasible grid");

    InputScan scan;
    scan.table.resize(in1.size() * in2.size());
    auto work = [&](std::size_t i) {
        scan.table[i] = classify_shape(spec, in1[i / in2.size()], in2[i % in2.size()], eta, budget, seed);
    };
    std::size_t n = scan.table.size();
    std::size_t workers = static_cast<std::size_t>(std::max(1, jobs));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < n; i += workers) work(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    // Order 1 > 2 > {3, 4} > 5; 3 and 4 are incomparable.
    auto rank = [](int c) { return c == 4 ? 3 : c; };
    int best_rank = 5;
    for (const auto& v : scan.table) best_rank = std::min(best_rank, rank(v.shape_case));
    for (std::size_t i = 0; i < n; ++i)
        if (rank(scan.table[i].shape_case) == best_rank) {
            scan.best.push_back(i);
            int c = scan.table[i].shape_case;
            if (std::find(scan.best_cases.begin(), scan.best_cases.end(), c) == scan.best_cases.end())
                scan.best_cases.push_back(c);
        }
    std::sort(scan.best_cases.begin(), scan.best_cases.end());
    scan.best_case = scan.best_cases.front();
    return scan;
}

}  // namespace omac
