#pragma once

#include "omac/tensor.hpp"

#include <array>
#include <string>
#include <vector>

namespace omac {

// Which self-coupling a quantity lives on. Axis layouts:
//   joint: x1_1, x1_2, x2_1, x2_2
//   marg1: x1_1, x1_2, x2
//   marg2: x1, x2_1, x2_2
enum class Kind { joint, marg1, marg2 };

namespace axis {
inline const std::string x1_1 = "x1_1";
inline const std::string x1_2 = "x1_2";
inline const std::string x2_1 = "x2_1";
inline const std::string x2_2 = "x2_2";
inline const std::string x1 = "x1";
inline const std::string x2 = "x2";
}  // namespace axis

std::string to_string(Kind k);
Kind kind_from_string(const std::string& s);
std::vector<std::string> kind_axis_names(Kind k);
std::vector<Axis> kind_axes(Kind k, const Alphabet& x1, const Alphabet& x2);
// Pairs of axis names exchanged by the symmetry group of the kind.
std::vector<std::array<std::string, 2>> kind_swaps(Kind k);
void require_kind_layout(const Tensor& t, Kind k);

enum class Metric { L1, Linf };

// Exact joint type: integer counts over n.
struct ExactType {
    CountTensor counts;
    std::int64_t n = 0;
    Dist to_dist() const;
};

ExactType exact_type_of(const std::vector<Word>& vectors, const std::vector<Axis>& axes);
Dist type_of(const std::vector<Word>& vectors, const std::vector<Axis>& axes);

// Keeps the listed axes in the listed order. Distributions sum mass. Signed
// tensors sum ABSOLUTE values, so the marginal of a signed tensor is a
// nonnegative "mass" profile rather than a signed marginal; this keeps
// marginalization a contraction in l1 for both cases.
Dist marginalize(const Dist& d, const std::vector<std::string>& keep);
Tensor marginalize(const Tensor& t, const std::vector<std::string>& keep);
// Ordinary signed sum over the dropped axes (used internally).
Tensor sum_out(const Tensor& t, const std::vector<std::string>& keep);

Dist tensor_product(const Dist& a, const Dist& b);
Tensor tensor_product(const Tensor& a, const Tensor& b);

Dist permute(const Dist& d, const std::vector<std::string>& order);
Dist rename_axes(const Dist& d, const std::vector<std::string>& names);

double distance(const Tensor& a, const Tensor& b, Metric m);
double inner(const Tensor& a, const Tensor& b);

// eta-net of the (k-1)-simplex: grid with denominator m = net_denominator(k, eta),
// which guarantees d_inf covering radius (k-1)/(k m) <= eta.
int net_denominator(std::size_t k, double eta);
// All points of the simplex whose coordinates are multiples of 1/m, lexicographic.
std::vector<Eigen::VectorXd> simplex_grid(std::size_t k, int m);
std::vector<Eigen::VectorXd> build_net_vectors(std::size_t k, double eta);
std::vector<Dist> build_net(std::size_t k, double eta);
std::vector<Dist> build_net(const Axis& axis, double eta);
// Nearest net point by largest-remainder rounding; ties lower the later coordinate.
Eigen::VectorXi net_quantize(const Eigen::Ref<const Eigen::VectorXd>& p, int m);

Dist symmetrize(const Dist& p, Kind k);
Tensor symmetrize(const Tensor& p, Kind k);

struct AsymmetryReport {
    double a12 = 0, a1 = 0, a2 = 0, max = 0;
};
AsymmetryReport asymmetry(const Dist& p);
// Largest swap defect over the symmetry group of the kind.
double swap_asymmetry(const Tensor& p, Kind k);
bool is_symmetric(const Tensor& t, Kind k, double tol = 1e-12);

struct Divergence {
    double bits = 0;
    bool absolutely_continuous = true;
};
Divergence kl(const Dist& p, const Dist& q);
double binary_divergence(double a, double b);

double nu_poly(const Dist& p, long n);

// P1 (x) P1 (x) P2 (x) P2 with the axis names of the kind (single copies for marginals).
Dist good_atom(Kind k, const Dist& p1, const Dist& p2);

}  // namespace omac
