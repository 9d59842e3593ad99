#pragma once

#include "omac/channel.hpp"
#include "omac/good_cones.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace omac {

// One nonemptiness question: G, G1 \ K1 or G2 \ K2.
struct PredicateRecord {
    GoodPredicate predicate = GoodPredicate::simultaneous;
    bool verdict = false;
    // verdict true: smallest L1 distance from the witness to a confusability set.
    // verdict false: depth inside K of the least-deep candidate tried.
    double margin = 0;
    bool boundary_uncertain = false;
    GoodSearchResult search;  // witness or least-deep candidate
};

struct ShapeVerdict {
    int shape_case = 5;  // 1..5
    std::array<PredicateRecord, 3> predicates;  // G, G1\K1, G2\K2
    double eta = kDefaultEta;
    Dist p1, p2;
    bool boundary_uncertain = false;  // any predicate within 2*eta of its boundary
};

// Case from the predicate pattern; throws std::logic_error when G holds but a
// marginal predicate does not.
int case_from_predicates(bool g, bool g1, bool g2);

ShapeVerdict classify_shape(const ChannelSpec& spec, const Dist& p1, const Dist& p2, double eta = kDefaultEta,
                            int budget = 32, std::uint64_t seed = 1);

// Re-runs the confusability LPs on the stored candidates; true when every
// predicate comes out as recorded.
bool replay_verdict(const ChannelSpec& spec, const ShapeVerdict& v);

struct InputScan {
    std::vector<ShapeVerdict> table;  // grid order: P1 outer, P2 inner
    int best_case = 5;
    std::vector<std::size_t> best;    // every row attaining best_case (3 and 4 are tied when both occur)
    std::vector<int> best_cases;      // {best_case} or {3, 4}
};

// Scans the feasible part of the product grid; jobs > 1 classifies rows on worker threads.
InputScan classify_over_inputs(const ChannelSpec& spec, double grid_step, double eta = kDefaultEta, int budget = 32,
                               int jobs = 1, std::uint64_t seed = 1);

}  // namespace omac
