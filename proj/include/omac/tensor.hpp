#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace omac {

using Symbol = std::uint16_t;
using Word = std::vector<Symbol>;

class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> symbols);
    static Alphabet range(std::size_t k);  // symbols "0".."k-1"

    std::size_t size() const { return symbols_.size(); }
    const std::vector<std::string>& symbols() const { return symbols_; }
    const std::string& operator[](std::size_t i) const { return symbols_.at(i); }
    Symbol index_of(std::string_view s) const;
    bool contains(std::string_view s) const;
    bool single_char() const;

    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    std::vector<std::string> symbols_;
};

struct Axis {
    std::string name;
    Alphabet alphabet;
    friend bool operator==(const Axis&, const Axis&) = default;
};

// Dense array over a labeled product of alphabets, row-major (last axis fastest).
template <typename Scalar>
class BasicTensor {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    BasicTensor() = default;
    BasicTensor(std::vector<Axis> axes, Vector values) : axes_(std::move(axes)), values_(std::move(values)) {
        for (std::size_t i = 0; i < axes_.size(); ++i) {
            if (axes_[i].alphabet.size() == 0) throw std::invalid_argument("empty alphabet on axis " + axes_[i].name);
            for (std::size_t j = 0; j < i; ++j)
                if (axes_[i].name == axes_[j].name) throw std::invalid_argument("duplicate axis name " + axes_[i].name);
        }
        if (values_.size() != static_cast<Eigen::Index>(product_size(axes_)))
            throw std::invalid_argument("value count does not match axis shape");
    }

    static BasicTensor zeros(std::vector<Axis> axes) {
        Eigen::Index n = static_cast<Eigen::Index>(product_size(axes));
        return BasicTensor(std::move(axes), Vector::Zero(n));
    }

    static std::size_t product_size(const std::vector<Axis>& axes) {
        std::size_t n = 1;
        for (const auto& a : axes) n *= a.alphabet.size();
        return n;
    }

    const std::vector<Axis>& axes() const { return axes_; }
    std::size_t rank() const { return axes_.size(); }
    Eigen::Index size() const { return values_.size(); }
    const Vector& values() const { return values_; }
    Vector& values_mut() { return values_; }

    std::vector<std::size_t> shape() const {
        std::vector<std::size_t> s;
        for (const auto& a : axes_) s.push_back(a.alphabet.size());
        return s;
    }

    std::vector<std::string> axis_names() const {
        std::vector<std::string> s;
        for (const auto& a : axes_) s.push_back(a.name);
        return s;
    }

    bool has_axis(std::string_view name) const {
        return std::any_of(axes_.begin(), axes_.end(), [&](const Axis& a) { return a.name == name; });
    }

    std::size_t axis_position(std::string_view name) const {
        for (std::size_t i = 0; i < axes_.size(); ++i)
            if (axes_[i].name == name) return i;
        throw std::invalid_argument("unknown axis " + std::string(name));
    }

    Eigen::Index flat(std::span<const std::size_t> idx) const {
        Eigen::Index f = 0;
        for (std::size_t i = 0; i < axes_.size(); ++i) f = f * axes_[i].alphabet.size() + idx[i];
        return f;
    }
    Eigen::Index flat(std::initializer_list<std::size_t> idx) const {
        return flat(std::span<const std::size_t>(idx.begin(), idx.size()));
    }

    std::vector<std::size_t> unflat(Eigen::Index f) const {
        std::vector<std::size_t> idx(axes_.size());
        for (std::size_t i = axes_.size(); i-- > 0;) {
            idx[i] = static_cast<std::size_t>(f % axes_[i].alphabet.size());
            f /= axes_[i].alphabet.size();
        }
        return idx;
    }

    Scalar operator()(std::initializer_list<std::size_t> idx) const { return values_[flat(idx)]; }

    bool same_shape(const BasicTensor& o) const { return axes_ == o.axes_; }

protected:
    std::vector<Axis> axes_;
    Vector values_;
};

using Tensor = BasicTensor<double>;
using CountTensor = BasicTensor<std::int64_t>;

// Probability distribution: nonnegative entries summing to one (within 1e-9,
// then renormalized exactly so downstream sums stay tight).
class Dist : public BasicTensor<double> {
public:
    Dist() = default;
    Dist(std::vector<Axis> axes, Eigen::VectorXd values);
    explicit Dist(const Tensor& t) : Dist(t.axes(), t.values()) {}

    static Dist uniform(std::vector<Axis> axes);
    static Dist point(std::vector<Axis> axes, std::span<const std::size_t> idx);
    static Dist over(Axis axis, std::vector<double> probs);
    static Dist bernoulli(double q, std::string axis_name = "x");

    const Tensor& as_tensor() const { return *this; }

private:
    using BasicTensor<double>::values_mut;
};

// Re-ordering of axes by name; values move with their axes.
template <typename Scalar>
BasicTensor<Scalar> permute(const BasicTensor<Scalar>& t, const std::vector<std::string>& order) {
    if (order.size() != t.rank()) throw std::invalid_argument("permute: axis count mismatch");
    std::vector<std::size_t> src(order.size());
    std::vector<Axis> axes;
    for (std::size_t i = 0; i < order.size(); ++i) {
        src[i] = t.axis_position(order[i]);
        axes.push_back(t.axes()[src[i]]);
    }
    auto out = BasicTensor<Scalar>::zeros(axes);
    std::vector<std::size_t> dst_idx(order.size());
    for (Eigen::Index f = 0; f < t.size(); ++f) {
        auto idx = t.unflat(f);
        for (std::size_t i = 0; i < order.size(); ++i) dst_idx[i] = idx[src[i]];
        out.values_mut()[out.flat(dst_idx)] = t.values()[f];
    }
    return out;
}

// Exchange the contents of two same-alphabet axes while keeping the axis labels,
// i.e. out(.., a, .., b, ..) = t(.., b, .., a, ..).
template <typename Scalar>
BasicTensor<Scalar> swap_contents(const BasicTensor<Scalar>& t, std::string_view a, std::string_view b) {
    std::size_t i = t.axis_position(a), j = t.axis_position(b);
    if (!(t.axes()[i].alphabet == t.axes()[j].alphabet))
        throw std::invalid_argument("swap_contents: alphabets differ");
    BasicTensor<Scalar> out = t;
    for (Eigen::Index f = 0; f < t.size(); ++f) {
        auto idx = t.unflat(f);
        std::swap(idx[i], idx[j]);
        out.values_mut()[f] = t.values()[t.flat(idx)];
    }
    return out;
}

template <typename Scalar>
BasicTensor<Scalar> rename_axes(BasicTensor<Scalar> t, const std::vector<std::string>& names) {
    if (names.size() != t.rank()) throw std::invalid_argument("rename_axes: count mismatch");
    auto axes = t.axes();
    for (std::size_t i = 0; i < names.size(); ++i) axes[i].name = names[i];
    return BasicTensor<Scalar>(std::move(axes), t.values());
}

}  // namespace omac
