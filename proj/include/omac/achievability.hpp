#pragma once

#include "omac/channel.hpp"
#include "omac/codebook.hpp"
#include "omac/confusability.hpp"
#include "omac/good_cones.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace omac {

// Coded time-sharing: chunk l covers positions [bounds[l], bounds[l+1]) and
// draws user i's symbols i.i.d. from factors[l] (first for user 1).
struct TimeSharingPlan {
    std::vector<double> weights;
    std::vector<std::pair<Dist, Dist>> factors;
    std::vector<std::size_t> bounds;  // size k+1, bounds[0] = 0, bounds[k] = n

    std::size_t n() const { return bounds.empty() ? 0 : bounds.back(); }
    std::size_t chunk_size(std::size_t l) const { return bounds[l + 1] - bounds[l]; }
};

// Chunk sizes by largest-remainder rounding of weights * n (ties to the earlier chunk).
TimeSharingPlan make_plan(const std::vector<double>& weights, const std::vector<std::pair<Dist, Dist>>& factors,
                          std::size_t n);
TimeSharingPlan plan_from_decomposition(const GoodDecomposition& d, std::size_t n);

// user is 1 or 2. Word j of the book depends only on (seed, user, j).
std::vector<Word> sample_book(const TimeSharingPlan& plan, int user, std::size_t m, std::uint64_t seed);
CodePair sample_timeshared_code(const TimeSharingPlan& plan, std::size_t m1, std::size_t m2, std::uint64_t seed);

// Count vector of a word over q symbols.
std::vector<std::int64_t> word_counts(const Word& w, std::size_t q, std::size_t begin = 0,
                                      std::size_t end = static_cast<std::size_t>(-1));

// slack = 0 keeps the exact type class of the largest-remainder rounding of p
// at length n; slack > 0 keeps words with d_inf(type, p) <= slack.
std::vector<Word> constant_composition_filter(const std::vector<Word>& book, const Dist& p, double slack);
// Chunkwise exact filter for a time-sharing plan.
std::vector<Word> timeshared_composition_filter(const std::vector<Word>& book, const TimeSharingPlan& plan, int user);

struct MajorityType {
    std::vector<std::int64_t> counts;
    std::size_t size = 0;  // codewords of that type
};
// Most frequent type; ties go to the lexicographically smallest count vector.
MajorityType majority_type(const std::vector<Word>& book, std::size_t q);
// Pigeonhole floor |C| / (n + q - 1)^(q - 1).
double majority_type_floor(std::size_t book_size, std::size_t n, std::size_t q);

struct ExpurgationLog {
    std::size_t removed1 = 0, removed2 = 0, rounds = 0;
};
// Repeats verify_zero_error and deletes per violation until the pair is zero-error.
// joint: book1[i2] and book2[max(j1, j2)]; marg1: book1[i2]; marg2: book2[j2].
CodePair expurgate(const ChannelSpec& spec, const CodePair& code, ExpurgationLog* log = nullptr);

// open_loop: step 2/(t+2). line_search: exact step toward the LP vertex.
// pairwise: mass moves from the worst active vertex to the LP vertex.
enum class FrankWolfeStep { open_loop, line_search, pairwise };

struct FrankWolfeOptions {
    int max_iterations = 5000;
    double gap_target = 1e-4;  // bits
    FrankWolfeStep step = FrankWolfeStep::pairwise;
};

struct KlMinimum {
    Kind kind = Kind::joint;
    double value = 0;  // bits, attained by minimizer
    // best value minus the best Frank-Wolfe lower bound seen; value - gap is certified
    double gap = 0;
    int iterations = 0;
    bool converged = false;
    Dist minimizer;    // kind layout
};
// min KL(Q || P1^(x)2 (x) P2^(x)2) over Q in the confusability set of the kind.
// Throws when the set restricted to supp(reference) is empty.
KlMinimum kl_to_confusable(const ChannelSpec& spec, const Dist& p1, const Dist& p2, Kind k,
                           const FrankWolfeOptions& opt = {});

struct InnerBoundReport {
    bool applicable = false;  // all three minima positive: the product is outside every K
    KlMinimum joint, marg1, marg2;
    double D = 0, D_hat = 0;
    // R1 <= D - D_hat, R2 <= D - D_hat, R1 + R2 <= D_hat (bits per symbol)
    double r_individual = 0, r_sum = 0;
    bool region_nonempty = false;
};
InnerBoundReport inner_bound(const ChannelSpec& spec, const Dist& p1, const Dist& p2,
                             const FrankWolfeOptions& opt = {});

double sanov_exponent(const ChannelSpec& spec, const Dist& p1, const Dist& p2, Kind k,
                      const FrankWolfeOptions& opt = {});

struct SanovPoint {
    int n = 0;
    long trials = 0, hits = 0;
    double log2_frequency = 0;
};
struct SanovCheck {
    double exponent = 0;
    std::vector<SanovPoint> points;
    double slope = 0;           // -(log2 f(n2) - log2 f(n1)) / (n2 - n1)
    double relative_error = 0;  // |slope - exponent| / exponent
    bool within_tolerance = false;
    double raw_ratio = 0;       // -log2 f(n2) / (n2 * exponent), informational
};
// Samples i.i.d. tuples from the product, tests the exact type against K.
SanovCheck sanov_monte_carlo(const ChannelSpec& spec, const Dist& p1, const Dist& p2, Kind k, int n1, int n2,
                             long trials, std::uint64_t seed, double tolerance = 0.25);

struct AchieveReport {
    TimeSharingPlan plan;
    std::size_t target_m1 = 0, target_m2 = 0;
    std::size_t sampled1 = 0, sampled2 = 0;
    std::size_t filtered1 = 0, filtered2 = 0;
    ExpurgationLog expurgation;
    CodePair code;
    bool zero_error = false;
    double rate1 = 0, rate2 = 0;
    bool success = false;  // zero-error with both books of size >= 2
};
// M_i = ceil(|X_i|^(n R_i)); samples about 2 M_i nu oversampled words, filters to the
// plan's chunk compositions, keeps 2 M_i, expurgates, then truncates to M_i.
AchieveReport achieve(const ChannelSpec& spec, const TimeSharingPlan& plan, double rate1, double rate2,
                      std::uint64_t seed, std::size_t max_sample = 200000);

}  // namespace omac
