#include "omac/channel.hpp"

#include <algorithm>
#include <stdexcept>

namespace omac {

bool operator==(const LinearConstraint& a, const LinearConstraint& b) {
    return a.coeffs == b.coeffs && a.sense == b.sense && a.rhs == b.rhs;
}

ConstraintSet::ConstraintSet(Alphabet alphabet, std::vector<LinearConstraint> rows)
    : alphabet_(std::move(alphabet)), rows_(std::move(rows)) {
    for (const auto& r : rows_)
        if (r.coeffs.size() != alphabet_.size()) throw std::invalid_argument("constraint row length differs from alphabet size");
}

bool ConstraintSet::admits_exact(const std::vector<std::int64_t>& counts, std::int64_t n) const {
    if (counts.size() != alphabet_.size()) throw std::invalid_argument("admits_exact: count vector size");
    for (const auto& r : rows_) {
        int scale = r.rhs.scale;
        for (const auto& c : r.coeffs) scale = std::max(scale, c.scale);
        __int128 lhs = 0;
        for (std::size_t s = 0; s < counts.size(); ++s)
            if (counts[s] != 0) lhs += r.coeffs[s].at_scale(scale) * counts[s];
        __int128 rhs = r.rhs.at_scale(scale) * n;
        bool ok = r.sense == lp::Sense::le ? lhs <= rhs : r.sense == lp::Sense::ge ? lhs >= rhs : lhs == rhs;
        if (!ok) return false;
    }
    return true;
}

double ConstraintSet::row_slack(std::size_t r, const Eigen::Ref<const Eigen::VectorXd>& p) const {
    const auto& row = rows_.at(r);
    double lhs = 0;
    for (std::size_t s = 0; s < row.coeffs.size(); ++s) lhs += row.coeffs[s].to_double() * p[static_cast<Eigen::Index>(s)];
    double b = row.rhs.to_double();
    switch (row.sense) {
        case lp::Sense::le: return b - lhs;
        case lp::Sense::ge: return lhs - b;
        case lp::Sense::eq: return -std::abs(lhs - b);
    }
    return 0;
}

bool ConstraintSet::admits(const Eigen::Ref<const Eigen::VectorXd>& p, double tol) const {
    for (std::size_t r = 0; r < rows_.size(); ++r)
        if (row_slack(r, p) < -tol) return false;
    return true;
}

bool ConstraintSet::feasible() const {
    if (rows_.empty()) return true;
    lp::Problem prob;
    int first = prob.add_vars(static_cast<int>(alphabet_.size()));
    std::vector<std::pair<int, double>> sum;
    for (std::size_t s = 0; s < alphabet_.size(); ++s) sum.push_back({first + static_cast<int>(s), 1.0});
    prob.add_row(sum, lp::Sense::eq, 1.0);
    for (const auto& r : rows_) {
        std::vector<std::pair<int, double>> row;
        for (std::size_t s = 0; s < alphabet_.size(); ++s) row.push_back({first + static_cast<int>(s), r.coeffs[s].to_double()});
        prob.add_row(row, r.sense, r.rhs.to_double());
    }
    return lp::solve(prob).optimal();
}

std::vector<std::string> validate_channel(const ChannelSpec& spec) {
    std::vector<std::string> out;
    std::size_t cells = spec.x1.size() * spec.x2.size() * spec.s.size();
    if (spec.x1.size() == 0 || spec.x2.size() == 0 || spec.s.size() == 0 || spec.y.size() == 0)
        out.push_back("empty alphabet");
    if (spec.w.size() != cells) out.push_back("W not total");
    for (Symbol v : spec.w)
        if (v >= spec.y.size()) {
            out.push_back("W output outside Y");
            break;
        }
    auto check = [&](const ConstraintSet& c, const Alphabet& a, const std::string& name) {
        if (!(c.alphabet() == a)) out.push_back(name + " alphabet mismatch");
        else if (!c.feasible()) out.push_back("infeasible " + name + " constraint (empty feasible set)");
    };
    check(spec.lambda1, spec.x1, "input-1");
    check(spec.lambda2, spec.x2, "input-2");
    check(spec.lambda, spec.s, "state");
    return out;
}

Word apply_channel(const ChannelSpec& spec, const Word& x1, const Word& x2, const Word& s) {
    if (x1.size() != x2.size() || x1.size() != s.size()) throw std::invalid_argument("apply_channel: length mismatch");
    Word y(x1.size());
    for (std::size_t j = 0; j < x1.size(); ++j) {
        if (x1[j] >= spec.x1.size() || x2[j] >= spec.x2.size() || s[j] >= spec.s.size())
            throw std::invalid_argument("apply_channel: symbol out of range");
        y[j] = spec.output(x1[j], x2[j], s[j]);
    }
    return y;
}

ChannelSpec builtin_xor_mac(double p) {
    if (!(p >= 0 && p <= 1)) throw std::invalid_argument("xor mac: p must lie in [0,1]");
    Alphabet bin({"0", "1"});
    ChannelSpec spec;
    spec.x1 = spec.x2 = spec.s = spec.y = bin;
    spec.w.resize(8);
    for (Symbol a = 0; a < 2; ++a)
        for (Symbol b = 0; b < 2; ++b)
            for (Symbol t = 0; t < 2; ++t) spec.w[(a * 2u + b) * 2u + t] = static_cast<Symbol>(a ^ b ^ t);
    spec.lambda1 = ConstraintSet(bin, {});
    spec.lambda2 = ConstraintSet(bin, {});
    spec.lambda = ConstraintSet(bin, {LinearConstraint{{Decimal{0, 0}, Decimal{1, 0}}, lp::Sense::le, Decimal::from_double(p)}});
    return spec;
}

}  // namespace omac
