#pragma once

#include "omac/exact.hpp"
#include "omac/lp.hpp"
#include "omac/tensor.hpp"

#include <string>
#include <vector>

namespace omac {

struct LinearConstraint {
    std::vector<Decimal> coeffs;  // one per alphabet symbol
    lp::Sense sense = lp::Sense::le;
    Decimal rhs;
};

// Half-space description of a convex subset of the simplex over one alphabet.
// An empty row list is the whole simplex.
class ConstraintSet {
public:
    ConstraintSet() = default;
    ConstraintSet(Alphabet alphabet, std::vector<LinearConstraint> rows);

    const Alphabet& alphabet() const { return alphabet_; }
    const std::vector<LinearConstraint>& rows() const { return rows_; }
    bool empty_rows() const { return rows_.empty(); }

    // Exact test on an integer type (counts over n).
    bool admits_exact(const std::vector<std::int64_t>& counts, std::int64_t n) const;
    bool admits(const Eigen::Ref<const Eigen::VectorXd>& p, double tol = 1e-12) const;
    // Signed slack of row r at p (>= 0 means satisfied; equality rows give -|defect|).
    double row_slack(std::size_t r, const Eigen::Ref<const Eigen::VectorXd>& p) const;
    bool feasible() const;

    friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;

private:
    Alphabet alphabet_;
    std::vector<LinearConstraint> rows_;
};

bool operator==(const LinearConstraint& a, const LinearConstraint& b);

struct ChannelSpec {
    Alphabet x1, x2, s, y;
    std::vector<Symbol> w;  // flat table indexed (x1, x2, s), s fastest
    ConstraintSet lambda1, lambda2, lambda;

    Symbol output(Symbol a, Symbol b, Symbol st) const {
        return w[(static_cast<std::size_t>(a) * x2.size() + b) * s.size() + st];
    }
    friend bool operator==(const ChannelSpec&, const ChannelSpec&) = default;
};

// Semantic violations; empty iff the channel is admissible.
std::vector<std::string> validate_channel(const ChannelSpec& spec);

Word apply_channel(const ChannelSpec& spec, const Word& x1, const Word& x2, const Word& s);

ChannelSpec builtin_xor_mac(double p);

}  // namespace omac
