#pragma once

#include "omac/channel.hpp"
#include "omac/codebook.hpp"
#include "omac/lp.hpp"
#include "omac/prob.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace omac {

inline constexpr double kFeasibilityTol = 1e-8;

struct ConfusabilityCertificate {
    Kind kind = Kind::joint;
    bool feasible = false;
    // Minimal total constraint violation (state-constraint rows plus mass on
    // x-tuples that no jamming pair can reconcile). Zero up to tolerance iff feasible.
    double slack = 0;
    std::optional<Dist> witness;  // axes: kind layout, s1, s2, y
};

// Which (s1, s2) make the two sides of an x-tuple produce the same output.
// Sides: joint (x1_1,x2_1)|(x1_2,x2_2); marg1 (x1_1,x2)|(x1_2,x2); marg2 (x1,x2_1)|(x1,x2_2).
struct TupleSides {
    Symbol a1, b1, a2, b2;
};
TupleSides tuple_sides(Kind k, const std::vector<std::size_t>& idx);
std::vector<std::vector<std::array<Symbol, 2>>> compatible_pairs(const ChannelSpec& spec, Kind k);

// Throws unless p has the kind layout over the channel alphabets and its paired
// copies share marginals.
void require_self_coupling(const ChannelSpec& spec, const Tensor& p, Kind k, double tol = 1e-9);

ConfusabilityCertificate confusable_dist(const ChannelSpec& spec, const Dist& p, Kind k);

enum class Side { to_confusable, to_nonconfusable };
double distance_to_set(const ChannelSpec& spec, const Dist& p, Kind k, Metric metric, Side side);
// L1 to_nonconfusable lower bound with a chosen bisection depth (distance_to_set uses 40).
double nonconfusable_depth(const ChannelSpec& spec, const Dist& p, Kind k, int bisection_steps);

// Full coupling polytope {Q(t, s1, s2)} over a chosen list of x-tuples; used by
// the distance LPs and by the divergence minimization.
struct LiftedVars {
    std::vector<Eigen::Index> tuples;
    std::vector<std::vector<std::array<Symbol, 2>>> pairs;
    std::vector<int> first_var;
};
LiftedVars add_lifted_vars(lp::Problem& prob, const ChannelSpec& spec, Kind k, const std::vector<Eigen::Index>& tuples);
// Hard state constraints on both jamming marginals.
void add_state_rows(lp::Problem& prob, const ChannelSpec& spec, const LiftedVars& lv);
// Fixes the single-axis marginals of the lifted x-distribution.
void add_marginal_rows(lp::Problem& prob, const std::vector<Axis>& axes, const LiftedVars& lv,
                       const std::vector<Eigen::VectorXd>& marginals);

struct OperationalResult {
    bool confusable = false;
    Word s1, s2;
};
// Exact integer feasibility over per-pattern jamming pair counts.
OperationalResult operational_confusable(const ChannelSpec& spec, const std::vector<Word>& tuple, Kind k);

struct ZeroErrorReport {
    bool zero_error = true;
    Kind kind = Kind::joint;
    std::array<std::size_t, 4> indices{};  // (i1, i2, j1, j2); unused slots repeat
    std::vector<Word> tuple;
    Word s1, s2;
};
// Checks joint tuples (i1<i2, j1!=j2), then marg1 (i1<i2, j), then marg2 (i, j1<j2),
// each in lexicographic index order, and stops at the first violation.
ZeroErrorReport verify_zero_error(const ChannelSpec& spec, const CodePair& code);

}  // namespace omac
