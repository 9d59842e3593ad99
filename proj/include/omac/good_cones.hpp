#pragma once

#include "omac/channel.hpp"
#include "omac/confusability.hpp"
#include "omac/prob.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace omac {

inline constexpr double kGoodnessTol = 1e-7;
inline constexpr double kDefaultEta = 0.05;
inline constexpr double kDefaultGridStep = 0.02;
inline constexpr double kDefaultEpsPrime = 1e-4;

struct GoodDecomposition {
    Kind kind = Kind::joint;
    std::vector<double> weights;
    std::vector<std::pair<Dist, Dist>> factors;  // (P1_i, P2_i), single-axis each
    double residual = 0;                         // l1 gap between mixture and target
    double net_slack = 0;                        // l1 Lipschitz slack of the net
    double eta = 0;
    bool member = false;
    double tolerance = kGoodnessTol;

    Dist mixture() const;
    // residual - net_slack, floored at zero: certified l1 distance to the good set
    double distance_lower_bound() const { return std::max(0.0, residual - net_slack); }
};

Dist good_mixture(Kind k, const std::vector<double>& weights, const std::vector<std::pair<Dist, Dist>>& factors);
// Same weights, factors reused: joint -> marg1 or marg2.
GoodDecomposition project_decomposition(const GoodDecomposition& d, Kind to);
double net_lipschitz_slack(Kind k, std::size_t q1, std::size_t q2, double eta);

// k_cap = 0 uses every net atom pair.
GoodDecomposition good_membership(const Dist& target, Kind k, double eta = kDefaultEta, std::size_t k_cap = 0,
                                  double tol = kGoodnessTol);

// Value of <P1^(x)2 (x) P2^(x)2, q> (single copies for the marginal kinds).
double product_form(const Tensor& q, Kind k, const Eigen::VectorXd& p1, const Eigen::VectorXd& p2);

struct CogoodAudit {
    bool cogood = false;
    double margin = 0;  // smallest value found
    Eigen::VectorXd argmin_p1, argmin_p2;
    double grid_step = 0;
};
// Grid over both simplices plus local polishing from the worst grid points.
// A numerical audit rather than a proof.
CogoodAudit is_cogood(const Tensor& q, Kind k, double grid_step = kDefaultGridStep);

struct CogoodCertificate {
    Kind kind = Kind::joint;
    Tensor q;
    double inner = 0;        // <target, q>
    double grid_margin = 0;  // audited minimum over product tensors
    double eps_prime = kDefaultEpsPrime;
    double grid_step = kDefaultGridStep;
    double eta = kDefaultEta;
};
std::optional<CogoodCertificate> cogood_certificate(const Dist& target, Kind k, double eta = kDefaultEta,
                                                    double eps_prime = kDefaultEpsPrime,
                                                    double grid_step = kDefaultGridStep);

// Which nonemptiness question a search answers.
enum class GoodPredicate { simultaneous, marg1_only, marg2_only };

struct GoodSearchResult {
    GoodPredicate predicate = GoodPredicate::simultaneous;
    bool found = false;
    GoodDecomposition best;            // witness when found, else least-deep candidate
    std::array<double, 3> margins{};   // l1 to_confusable for joint, marg1, marg2 (unused = -1)
    double margin = 0;                 // found: min relevant margin; else depth inside K
    int evaluated = 0;
    std::uint64_t seed = 0;
    double eta = 0;
};

GoodSearchResult search_good(const ChannelSpec& spec, const Dist& p1, const Dist& p2, GoodPredicate what, double eta,
                             int budget, std::uint64_t seed);
GoodSearchResult search_simultaneously_good(const ChannelSpec& spec, const Dist& p1, const Dist& p2, double eta,
                                            int budget, std::uint64_t seed = 1);

}  // namespace omac
