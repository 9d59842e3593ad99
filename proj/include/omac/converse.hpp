#pragma once

#include "omac/channel.hpp"
#include "omac/codebook.hpp"
#include "omac/exact.hpp"
#include "omac/good_cones.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace omac {

enum class ExtractMode { exact, greedy };
std::string to_string(ExtractMode m);
ExtractMode extract_mode_from_string(const std::string& s);

inline constexpr std::size_t kExactExtractCap = 12;

struct EquicoupledReport {
    Kind kind = Kind::joint;            // joint for pairs; marg1 / marg2 for single books
    std::vector<std::size_t> indices1;  // kept rows of book 1 (or of the single book)
    std::vector<std::size_t> indices2;  // kept rows of book 2 (empty for single books)
    Dist p_star;                        // net point coloring every kept hyperedge
    double eta = 0;                     // requested
    double eta_achieved = 0;            // max d_inf over kept hyperedges
    ExtractMode method = ExtractMode::greedy;
    bool verified = false;              // post-condition re-checked on the output
};

// Hyperedges ((i1<i2), (j1<j2)) colored by the net point of their joint type.
// Exact mode maximizes |A| * |B| (needs M1, M2 <= kExactExtractCap).
EquicoupledReport extract_equicoupled_pair(const ChannelSpec& spec, const CodePair& code, double eta, ExtractMode mode);
// Edges (i1<i2) of one book against a fixed word of the other user. kind marg1:
// book is user 1 and other is an X2 word; marg2: book is user 2.
EquicoupledReport extract_equicoupled_single(const ChannelSpec& spec, const std::vector<Word>& book, const Word& other,
                                             Kind kind, double eta, ExtractMode mode);

struct KomlosReport {
    std::size_t m = 0;
    bool precondition = false;
    std::size_t bad_i = 0, bad_j = 0;  // offending pair when the precondition fails
    double max_deviation = 0;          // max d_inf(pairwise type, reference)
    double asymmetry = 0;              // max |P(a,b) - P(b,a)|
    double bound = 0;                  // 6/sqrt(M) + 4 sqrt(eta) + 2 eta
    bool holds = false;
};
double pair_asymmetry(const Tensor& p);
KomlosReport komlos_check(const std::vector<Word>& vectors, const Dist& reference, double eta);

struct KomlosSearch {
    int trials = 0;
    int violations = 0;
    double worst_ratio = 0;  // max asymmetry / bound over trials
    std::size_t worst_m = 0;
    double worst_eta = 0;
};
// Random and threshold constructions over binary sequences; reference is the mean
// pairwise type and eta its max deviation, so the precondition holds by construction.
KomlosSearch komlos_adversarial_search(int trials, std::size_t max_m, std::size_t length, std::uint64_t seed);

struct DoubleCountReport {
    double s_direct = 0, s_columns = 0, deviation = 0;
    bool lower_bound_holds = false;  // S >= 0
    double eta = 0, alpha = 0;
    double eta_prime = 0, alpha_prime = 0, eps_prime = 0, delta = 0;
    double upper_bound = 0;  // M1(M1-1)M2(M2-1)(eta'+alpha'-eps') + M1^2 M2 + M1 M2^2 + M1 M2
    std::optional<double> size_bound;  // (1 + sqrt(1 + delta)) / delta when delta > 0
    double cogood_margin = 0;
};
double converse_size_bound(double delta);
// Sum over all ordered (i1, i2, j1, j2) of <tau, q>, directly and through column
// distributions. Throws unless q is audited co-good and reference is symmetric.
DoubleCountReport double_count(const CodePair& code, const Tensor& q, const Dist& reference, double eta, double alpha);

struct PlotkinBound {
    Rational p, eps, value;  // value = 1/(4 eps) + 1 bounds M1 * M2
    double as_double() const { return value.to_double(); }
};
PlotkinBound plotkin_xor_bound(const Decimal& p);
PlotkinBound plotkin_xor_bound(double p);

// Probability of odd parity of four independent bits with means alpha, beta, alpha, beta.
double xor_quartic(double alpha, double beta);

struct QuarticMax {
    double max = 0;
    std::vector<std::pair<double, double>> argmax;  // grid points within 1e-12 of the max, after polish
    double grid_step = 0;
    // smallest Euclidean distance from (a, b) to the argmax set
    double distance_to(double a, double b) const;
};
QuarticMax quartic_max_check(double grid_step);

struct BruteForceResult {
    bool found = false;
    bool exhaustive = false;  // every canonical candidate visited
    std::optional<CodePair> code;
    std::uint64_t nodes = 0;
    std::size_t n = 0, m1 = 0, m2 = 0;
    std::uint64_t budget = 0;
    std::string canonicalization;
    bool exhaustively_none() const { return exhaustive && !found; }
};
// Depth-first search over canonical code pairs: books strictly increasing in the
// base-|X| word order and the first book-1 word coordinate-sorted. Shards by that
// first word; jobs > 1 runs shards on threads and the lowest shard with a hit wins.
BruteForceResult brute_force_search(const ChannelSpec& spec, std::size_t n, std::size_t m1, std::size_t m2,
                                    std::uint64_t budget, int jobs = 1);

}  // namespace omac
