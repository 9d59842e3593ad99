#include "omac/prob.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace omac {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw std::invalid_argument("alphabet must be nonempty");
    std::set<std::string> seen;
    for (const auto& s : symbols_)
        if (!seen.insert(s).second) throw std::invalid_argument("duplicate symbol '" + s + "'");
    if (symbols_.size() > 0xFFFF) throw std::invalid_argument("alphabet too large");
}

Alphabet Alphabet::range(std::size_t k) {
    std::vector<std::string> s;
    for (std::size_t i = 0; i < k; ++i) s.push_back(std::to_string(i));
    return Alphabet(std::move(s));
}

Symbol Alphabet::index_of(std::string_view s) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i] == s) return static_cast<Symbol>(i);
    throw std::invalid_argument("unknown symbol '" + std::string(s) + "'");
}

bool Alphabet::contains(std::string_view s) const {
    return std::find(symbols_.begin(), symbols_.end(), s) != symbols_.end();
}

bool Alphabet::single_char() const {
    return std::all_of(symbols_.begin(), symbols_.end(), [](const std::string& s) { return s.size() == 1; });
}

Dist::Dist(std::vector<Axis> axes, Eigen::VectorXd values) : BasicTensor<double>(std::move(axes), std::move(values)) {
    for (Eigen::Index i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) throw std::invalid_argument("distribution entry not finite");
        if (values_[i] < -1e-12) throw std::invalid_argument("negative probability");
        if (values_[i] < 0) values_[i] = 0;
    }
    double s = values_.sum();
    if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("probabilities do not sum to 1");
    // rounding-level sums are left alone so that serialization round-trips bit-exactly
    if (std::abs(s - 1.0) > 64 * std::numeric_limits<double>::epsilon() * static_cast<double>(values_.size())) values_ /= s;
}

Dist Dist::uniform(std::vector<Axis> axes) {
    auto n = static_cast<Eigen::Index>(product_size(axes));
    return Dist(std::move(axes), Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

Dist Dist::point(std::vector<Axis> axes, std::span<const std::size_t> idx) {
    auto t = Tensor::zeros(std::move(axes));
    t.values_mut()[t.flat(idx)] = 1.0;
    return Dist(t);
}

Dist Dist::over(Axis axis, std::vector<double> probs) {
    return Dist({std::move(axis)}, Eigen::Map<Eigen::VectorXd>(probs.data(), static_cast<Eigen::Index>(probs.size())));
}

Dist Dist::bernoulli(double q, std::string axis_name) {
    return over(Axis{std::move(axis_name), Alphabet::range(2)}, {1.0 - q, q});
}

std::string to_string(Kind k) {
    switch (k) {
        case Kind::joint: return "joint";
        case Kind::marg1: return "marg1";
        case Kind::marg2: return "marg2";
    }
    return "?";
}

Kind kind_from_string(const std::string& s) {
    if (s == "joint") return Kind::joint;
    if (s == "marg1") return Kind::marg1;
    if (s == "marg2") return Kind::marg2;
    throw std::invalid_argument("unknown kind '" + s + "'");
}

std::vector<std::string> kind_axis_names(Kind k) {
    switch (k) {
        case Kind::joint: return {axis::x1_1, axis::x1_2, axis::x2_1, axis::x2_2};
        case Kind::marg1: return {axis::x1_1, axis::x1_2, axis::x2};
        case Kind::marg2: return {axis::x1, axis::x2_1, axis::x2_2};
    }
    return {};
}

std::vector<Axis> kind_axes(Kind k, const Alphabet& x1, const Alphabet& x2) {
    switch (k) {
        case Kind::joint: return {{axis::x1_1, x1}, {axis::x1_2, x1}, {axis::x2_1, x2}, {axis::x2_2, x2}};
        case Kind::marg1: return {{axis::x1_1, x1}, {axis::x1_2, x1}, {axis::x2, x2}};
        case Kind::marg2: return {{axis::x1, x1}, {axis::x2_1, x2}, {axis::x2_2, x2}};
    }
    return {};
}

std::vector<std::array<std::string, 2>> kind_swaps(Kind k) {
    switch (k) {
        case Kind::joint: return {{axis::x1_1, axis::x1_2}, {axis::x2_1, axis::x2_2}};
        case Kind::marg1: return {{axis::x1_1, axis::x1_2}};
        case Kind::marg2: return {{axis::x2_1, axis::x2_2}};
    }
    return {};
}

void require_kind_layout(const Tensor& t, Kind k) {
    auto names = kind_axis_names(k);
    if (t.axis_names() != names) throw std::invalid_argument("axes do not match the " + to_string(k) + " layout");
    for (const auto& [a, b] : kind_swaps(k))
        if (!(t.axes()[t.axis_position(a)].alphabet == t.axes()[t.axis_position(b)].alphabet))
            throw std::invalid_argument("paired axes " + a + "/" + b + " have different alphabets");
}

Dist ExactType::to_dist() const {
    Eigen::VectorXd v = counts.values().cast<double>() / static_cast<double>(n);
    return Dist(counts.axes(), v);
}

ExactType exact_type_of(const std::vector<Word>& vectors, const std::vector<Axis>& axes) {
    if (vectors.empty() || vectors.size() != axes.size()) throw std::invalid_argument("type_of: need one axis per vector");
    std::size_t n = vectors[0].size();
    if (n == 0) throw std::invalid_argument("type_of: empty vector");
    for (std::size_t v = 0; v < vectors.size(); ++v) {
        if (vectors[v].size() != n) throw std::invalid_argument("type_of: length mismatch");
        for (Symbol s : vectors[v])
            if (s >= axes[v].alphabet.size()) throw std::invalid_argument("type_of: unknown symbol");
    }
    auto counts = CountTensor::zeros(axes);
    std::vector<std::size_t> idx(vectors.size());
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t v = 0; v < vectors.size(); ++v) idx[v] = vectors[v][j];
        counts.values_mut()[counts.flat(idx)] += 1;
    }
    return ExactType{std::move(counts), static_cast<std::int64_t>(n)};
}

Dist type_of(const std::vector<Word>& vectors, const std::vector<Axis>& axes) {
    return exact_type_of(vectors, axes).to_dist();
}

namespace {

Tensor reduce(const Tensor& t, const std::vector<std::string>& keep, bool absolute) {
    if (keep.empty()) throw std::invalid_argument("marginalize: keep set is empty");
    std::vector<std::size_t> pos;
    std::vector<Axis> axes;
    for (const auto& name : keep) {
        pos.push_back(t.axis_position(name));
        axes.push_back(t.axes()[pos.back()]);
    }
    auto out = Tensor::zeros(axes);
    std::vector<std::size_t> sub(keep.size());
    for (Eigen::Index f = 0; f < t.size(); ++f) {
        auto idx = t.unflat(f);
        for (std::size_t i = 0; i < pos.size(); ++i) sub[i] = idx[pos[i]];
        double v = t.values()[f];
        out.values_mut()[out.flat(sub)] += absolute ? std::abs(v) : v;
    }
    return out;
}

}  // namespace

Dist marginalize(const Dist& d, const std::vector<std::string>& keep) {
    return Dist(reduce(d, keep, false));
}

Tensor marginalize(const Tensor& t, const std::vector<std::string>& keep) {
    return reduce(t, keep, true);
}

Tensor sum_out(const Tensor& t, const std::vector<std::string>& keep) {
    return reduce(t, keep, false);
}

Tensor tensor_product(const Tensor& a, const Tensor& b) {
    auto axes = a.axes();
    for (const auto& ax : b.axes()) {
        if (a.has_axis(ax.name)) throw std::invalid_argument("tensor_product: axis name collision on " + ax.name);
        axes.push_back(ax);
    }
    Eigen::MatrixXd outer = b.values() * a.values().transpose();  // column j = a_j * b
    return Tensor(std::move(axes), Eigen::Map<const Eigen::VectorXd>(outer.data(), outer.size()));
}

Dist tensor_product(const Dist& a, const Dist& b) {
    return Dist(tensor_product(a.as_tensor(), b.as_tensor()));
}

Dist permute(const Dist& d, const std::vector<std::string>& order) {
    return Dist(permute(d.as_tensor(), order));
}

Dist rename_axes(const Dist& d, const std::vector<std::string>& names) {
    return Dist(rename_axes(d.as_tensor(), names));
}

double distance(const Tensor& a, const Tensor& b, Metric m) {
    if (!a.same_shape(b)) throw std::invalid_argument("distance: shape mismatch");
    Eigen::VectorXd d = a.values() - b.values();
    return m == Metric::L1 ? d.lpNorm<1>() : d.lpNorm<Eigen::Infinity>();
}

double inner(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("inner: shape mismatch");
    return a.values().dot(b.values());
}

int net_denominator(std::size_t k, double eta) {
    if (!(eta > 0) || eta > 1) throw std::invalid_argument("net resolution must lie in (0,1]");
    if (k == 0) throw std::invalid_argument("alphabet size must be positive");
    if (k == 1) return 1;
    double kd = static_cast<double>(k);
    return std::max(1, static_cast<int>(std::ceil((kd - 1.0) / (kd * eta) - 1e-12)));
}

std::vector<Eigen::VectorXd> simplex_grid(std::size_t k, int m) {
    if (k == 0 || m <= 0) throw std::invalid_argument("simplex_grid: bad size");
    std::vector<Eigen::VectorXd> out;
    std::vector<int> c(k, 0);
    auto rec = [&](auto&& self, std::size_t i, int left) -> void {
        if (i + 1 == k) {
            c[i] = left;
            Eigen::VectorXd v(static_cast<Eigen::Index>(k));
            for (std::size_t j = 0; j < k; ++j) v[static_cast<Eigen::Index>(j)] = static_cast<double>(c[j]) / m;
            out.push_back(std::move(v));
            return;
        }
        for (int a = 0; a <= left; ++a) {
            c[i] = a;
            self(self, i + 1, left - a);
        }
    };
    rec(rec, 0, m);
    return out;
}

std::vector<Eigen::VectorXd> build_net_vectors(std::size_t k, double eta) {
    return simplex_grid(k, net_denominator(k, eta));
}

std::vector<Dist> build_net(const Axis& axis, double eta) {
    std::vector<Dist> out;
    for (auto& v : build_net_vectors(axis.alphabet.size(), eta)) out.emplace_back(std::vector<Axis>{axis}, v);
    return out;
}

std::vector<Dist> build_net(std::size_t k, double eta) {
    return build_net(Axis{"x", Alphabet::range(k)}, eta);
}

Eigen::VectorXi net_quantize(const Eigen::Ref<const Eigen::VectorXd>& p, int m) {
    const Eigen::Index k = p.size();
    Eigen::VectorXi c(k);
    std::vector<std::pair<double, Eigen::Index>> frac;
    int used = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
        double s = std::max(0.0, p[i]) * m;
        c[i] = static_cast<int>(std::floor(s + 1e-12));
        used += c[i];
        frac.push_back({s - c[i], i});
    }
    int rest = m - used;
    std::stable_sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (Eigen::Index j = 0; j < k && rest > 0; ++j, --rest) ++c[frac[static_cast<std::size_t>(j)].second];
    for (Eigen::Index j = k - 1; rest < 0; --j) {  // only when rounding overshot
        Eigen::Index i = frac[static_cast<std::size_t>(j)].second;
        if (c[i] > 0) {
            --c[i];
            ++rest;
        }
    }
    return c;
}

Tensor symmetrize(const Tensor& p, Kind k) {
    require_kind_layout(p, k);
    if (k == Kind::joint) {
        Tensor s1 = swap_contents(p, axis::x1_1, axis::x1_2);
        Tensor s2 = swap_contents(p, axis::x2_1, axis::x2_2);
        Tensor s12 = swap_contents(s1, axis::x2_1, axis::x2_2);
        Eigen::VectorXd v = 0.25 * (p.values() + s1.values() + s2.values() + s12.values());
        return Tensor(p.axes(), v);
    }
    auto sw = kind_swaps(k).front();
    Tensor s = swap_contents(p, sw[0], sw[1]);
    return Tensor(p.axes(), 0.5 * (p.values() + s.values()));
}

Dist symmetrize(const Dist& p, Kind k) {
    return Dist(symmetrize(p.as_tensor(), k));
}

AsymmetryReport asymmetry(const Dist& p) {
    require_kind_layout(p, Kind::joint);
    Tensor s1 = swap_contents(p.as_tensor(), axis::x1_1, axis::x1_2);
    Tensor s2 = swap_contents(p.as_tensor(), axis::x2_1, axis::x2_2);
    Tensor s12 = swap_contents(s1, axis::x2_1, axis::x2_2);
    AsymmetryReport r;
    r.a12 = (p.values() - s12.values()).lpNorm<Eigen::Infinity>();
    r.a1 = (p.values() - s1.values()).lpNorm<Eigen::Infinity>();
    r.a2 = (p.values() - s2.values()).lpNorm<Eigen::Infinity>();
    r.max = std::max({r.a12, r.a1, r.a2});
    return r;
}

double swap_asymmetry(const Tensor& p, Kind k) {
    require_kind_layout(p, k);
    double worst = 0;
    auto swaps = kind_swaps(k);
    std::vector<Tensor> images;
    for (const auto& sw : swaps) images.push_back(swap_contents(p, sw[0], sw[1]));
    if (k == Kind::joint) images.push_back(swap_contents(images[0], axis::x2_1, axis::x2_2));
    for (const auto& im : images) worst = std::max(worst, (p.values() - im.values()).lpNorm<Eigen::Infinity>());
    return worst;
}

bool is_symmetric(const Tensor& t, Kind k, double tol) {
    return swap_asymmetry(t, k) <= tol;
}

Divergence kl(const Dist& p, const Dist& q) {
    if (!p.same_shape(q)) throw std::invalid_argument("kl: shape mismatch");
    Divergence d;
    double acc = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        double a = p.values()[i], b = q.values()[i];
        if (a <= 0) continue;
        if (b <= 0) {
            d.absolutely_continuous = false;
            d.bits = std::numeric_limits<double>::infinity();
            return d;
        }
        acc += a * std::log2(a / b);
    }
    d.bits = std::max(0.0, acc);
    return d;
}

double binary_divergence(double a, double b) {
    auto term = [](double x, double y) { return x > 0 ? x * std::log2(x / y) : 0.0; };
    return term(a, b) + term(1 - a, 1 - b);
}

double nu_poly(const Dist& p, long n) {
    if (n <= 0) throw std::invalid_argument("nu_poly: n must be positive");
    double log_prod = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p.values()[i] <= 0) throw std::domain_error("nu_poly: zero atom; reduce the alphabet first");
        log_prod += std::log(p.values()[i]);
    }
    double k = static_cast<double>(p.size());
    return std::exp(0.5 * (k * std::log(2 * M_PI * static_cast<double>(n)) + log_prod));
}

Dist good_atom(Kind k, const Dist& p1, const Dist& p2) {
    if (p1.rank() != 1 || p2.rank() != 1) throw std::invalid_argument("good_atom: factors must be single-axis");
    auto named = [](const Dist& d, const std::string& name) { return rename_axes(d, {name}); };
    switch (k) {
        case Kind::joint:
            return tensor_product(tensor_product(tensor_product(named(p1, axis::x1_1), named(p1, axis::x1_2)),
                                                 named(p2, axis::x2_1)),
                                  named(p2, axis::x2_2));
        case Kind::marg1:
            return tensor_product(tensor_product(named(p1, axis::x1_1), named(p1, axis::x1_2)), named(p2, axis::x2));
        case Kind::marg2:
            return tensor_product(tensor_product(named(p1, axis::x1), named(p2, axis::x2_1)), named(p2, axis::x2_2));
    }
    throw std::logic_error("unreachable");
}

}  // namespace omac
