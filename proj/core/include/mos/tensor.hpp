#pragma once

#include "mos/linalg.hpp"

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace mos {

using linalg::cplx;
using linalg::Mat;
using linalg::Scalar;

/// Dense D-way tensor (D >= 1), stored flat with the last index fastest.
/// Modes are 0-based throughout. Values are immutable in spirit: every
/// operation below returns a fresh tensor.
template <Scalar T>
class Tensor {
public:
    Tensor() = default;

    explicit Tensor(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
        init_strides();
        data_.assign(numel_, T{});
    }

    Tensor(std::vector<std::size_t> shape, std::vector<T> entries)
        : shape_(std::move(shape)), data_(std::move(entries)) {
        init_strides();
        if (data_.size() != numel_)
            throw std::invalid_argument("Tensor: entry count does not match shape");
    }

    std::size_t order() const { return shape_.size(); }
    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t dim(std::size_t d) const { return shape_.at(d); }
    const std::vector<std::size_t>& strides() const { return strides_; }
    std::size_t numel() const { return numel_; }

    T& operator[](std::size_t flat) { return data_[flat]; }
    const T& operator[](std::size_t flat) const { return data_[flat]; }

    /// 3-way element access.
    T& operator()(std::size_t i, std::size_t j, std::size_t k) {
        return data_[i * strides_[0] + j * strides_[1] + k * strides_[2]];
    }
    const T& operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[i * strides_[0] + j * strides_[1] + k * strides_[2]];
    }

    std::span<T> entries() { return data_; }
    std::span<const T> entries() const { return data_; }

    bool operator==(const Tensor&) const = default;

private:
    void init_strides() {
        if (shape_.empty()) throw std::invalid_argument("Tensor: order must be >= 1");
        strides_.assign(shape_.size(), 1);
        for (std::size_t d = shape_.size(); d-- > 1;)
            strides_[d - 1] = strides_[d] * shape_[d];
        numel_ = strides_[0] * shape_[0];
    }

    std::vector<std::size_t> shape_;
    std::vector<std::size_t> strides_;
    std::size_t numel_ = 0;
    std::vector<T> data_;
};

template <Scalar T>
double frobenius_norm(const Tensor<T>& t) {
    double acc = 0.0;
    for (const T& x : t.entries()) acc += linalg::abs_sq(x);
    return std::sqrt(acc);
}

inline Tensor<cplx> to_complex(const Tensor<double>& t) {
    std::vector<cplx> e(t.numel());
    for (std::size_t i = 0; i < t.numel(); ++i) e[i] = t[i];
    return Tensor<cplx>(t.shape(), std::move(e));
}

namespace detail {

// Axes other than `mode` in the cyclic order mode+1, ..., D-1, 0, ..., mode-1
// (first entry varies slowest across unfolding columns).
inline std::vector<std::size_t> cyclic_axes(std::size_t order, std::size_t mode) {
    std::vector<std::size_t> cyc;
    cyc.reserve(order - 1);
    for (std::size_t d = mode + 1; d < order; ++d) cyc.push_back(d);
    for (std::size_t d = 0; d < mode; ++d) cyc.push_back(d);
    return cyc;
}

// Calls fn(column, base_offset) for every unfolding column, where base_offset
// is the flat index of the fiber start; fiber elements step by strides[mode].
template <class Fn>
void for_each_fiber(const std::vector<std::size_t>& shape, const std::vector<std::size_t>& strides,
                    std::size_t mode, Fn&& fn) {
    const auto cyc = cyclic_axes(shape.size(), mode);
    std::vector<std::size_t> idx(shape.size(), 0);
    std::size_t cols = 1;
    for (std::size_t d : cyc) cols *= shape[d];
    for (std::size_t c = 0; c < cols; ++c) {
        std::size_t base = 0;
        for (std::size_t d : cyc) base += idx[d] * strides[d];
        fn(c, base);
        for (std::size_t pos = cyc.size(); pos-- > 0;) {
            if (++idx[cyc[pos]] < shape[cyc[pos]]) break;
            idx[cyc[pos]] = 0;
        }
    }
}

} // namespace detail

/// d-mode unfolding: M_d x (prod/M_d) matrix whose columns are the d-mode
/// fibers, columns ordered cyclically (mode+1, ..., D-1, 0, ..., mode-1 from
/// slowest to fastest).
template <Scalar T>
Mat<T> unfold(const Tensor<T>& t, std::size_t mode) {
    if (mode >= t.order()) throw std::invalid_argument("unfold: mode out of range");
    const std::size_t rows = t.dim(mode);
    Mat<T> r(rows, t.numel() / rows);
    const std::size_t step = t.strides()[mode];
    detail::for_each_fiber(t.shape(), t.strides(), mode, [&](std::size_t c, std::size_t base) {
        for (std::size_t i = 0, off = base; i < rows; ++i, off += step) r(i, c) = t[off];
    });
    return r;
}

/// Inverse of unfold: fold(unfold(t, d), d, t.shape()) == t exactly.
template <Scalar T>
Tensor<T> fold(const Mat<T>& m, std::size_t mode, std::vector<std::size_t> shape) {
    if (mode >= shape.size()) throw std::invalid_argument("fold: mode out of range");
    Tensor<T> t(std::move(shape));
    if (m.rows() != t.dim(mode) || m.cols() != t.numel() / t.dim(mode))
        throw std::invalid_argument("fold: matrix dimensions do not match shape");
    const std::size_t rows = m.rows();
    const std::size_t step = t.strides()[mode];
    detail::for_each_fiber(t.shape(), t.strides(), mode, [&](std::size_t c, std::size_t base) {
        for (std::size_t i = 0, off = base; i < rows; ++i, off += step) t[off] = m(i, c);
    });
    return t;
}

/// d-mode product t x_d u: multiplies u onto every d-mode fiber; the d-th
/// extent becomes u.rows().
template <Scalar T>
Tensor<T> mode_product(const Tensor<T>& t, const Mat<T>& u, std::size_t mode) {
    if (mode >= t.order()) throw std::invalid_argument("mode_product: mode out of range");
    if (u.cols() != t.dim(mode))
        throw std::invalid_argument("mode_product: matrix columns do not match mode extent");
    std::vector<std::size_t> shape = t.shape();
    shape[mode] = u.rows();
    return fold(matmul(u, unfold(t, mode)), mode, std::move(shape));
}

/// Concatenation along a mode; a's slices come first.
template <Scalar T>
Tensor<T> concat(const Tensor<T>& a, const Tensor<T>& b, std::size_t mode) {
    if (a.order() != b.order() || mode >= a.order())
        throw std::invalid_argument("concat: incompatible orders or mode out of range");
    for (std::size_t d = 0; d < a.order(); ++d)
        if (d != mode && a.dim(d) != b.dim(d))
            throw std::invalid_argument("concat: shapes differ outside the concatenation mode");
    std::vector<std::size_t> shape = a.shape();
    shape[mode] += b.dim(mode);
    Tensor<T> r(std::move(shape));

    std::size_t outer = 1, inner = 1;
    for (std::size_t d = 0; d < mode; ++d) outer *= a.dim(d);
    for (std::size_t d = mode + 1; d < a.order(); ++d) inner *= a.dim(d);
    const std::size_t na = a.dim(mode) * inner, nb = b.dim(mode) * inner;
    for (std::size_t o = 0; o < outer; ++o) {
        std::copy_n(a.entries().data() + o * na, na, r.entries().data() + o * (na + nb));
        std::copy_n(b.entries().data() + o * nb, nb, r.entries().data() + o * (na + nb) + na);
    }
    return r;
}

/// Sub-tensor keeping indices [from, from + len) along a mode.
template <Scalar T>
Tensor<T> slice(const Tensor<T>& t, std::size_t mode, std::size_t from, std::size_t len) {
    if (mode >= t.order()) throw std::invalid_argument("slice: mode out of range");
    if (from + len > t.dim(mode)) throw std::invalid_argument("slice: range out of bounds");
    std::vector<std::size_t> shape = t.shape();
    shape[mode] = len;
    Tensor<T> r(std::move(shape));
    std::size_t outer = 1, inner = 1;
    for (std::size_t d = 0; d < mode; ++d) outer *= t.dim(d);
    for (std::size_t d = mode + 1; d < t.order(); ++d) inner *= t.dim(d);
    for (std::size_t o = 0; o < outer; ++o)
        std::copy_n(t.entries().data() + (o * t.dim(mode) + from) * inner, len * inner,
                    r.entries().data() + o * len * inner);
    return r;
}

template <Scalar T>
struct HosvdResult {
    Tensor<T> core;
    std::vector<Mat<T>> factors;                          // U_d, each M_d x M_d unitary
    std::vector<std::vector<double>> mode_singular_values; // descending, per mode
};

/// Higher-order SVD: per-mode factors and singular values from the d-mode
/// unfoldings, plus the all-orthogonal core t x_1 U_1^H ... x_D U_D^H.
template <Scalar T>
HosvdResult<T> hosvd(const Tensor<T>& t) {
    HosvdResult<T> r;
    r.factors.reserve(t.order());
    r.mode_singular_values.reserve(t.order());
    for (std::size_t d = 0; d < t.order(); ++d) {
        auto sv = linalg::svd(unfold(t, d));
        r.factors.push_back(std::move(sv.u));
        r.mode_singular_values.push_back(std::move(sv.s));
    }
    r.core = t;
    for (std::size_t d = 0; d < t.order(); ++d)
        r.core = mode_product(r.core, linalg::adjoint(r.factors[d]), d);
    return r;
}

} // namespace mos
