// Copyright 2026 The tnsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "tnsim/score.hpp"

namespace tnsim {

using Complex = std::complex<double>;

/// Caller-chosen axis identifier. Node tensors use edge ids for auxiliary
/// axes and kPhysicalAxis for the qubit axis.
using AxisLabel = std::int64_t;
inline constexpr AxisLabel kPhysicalAxis = -1;

/// (axis of the left tensor, axis of the right tensor)
using AxisPair = std::pair<std::size_t, std::size_t>;

/// Relative singular-value cutoff: s_i is kept when s_i > tol * s_max.
inline constexpr double kDefaultSvdTolerance = 1e-12;

namespace detail {

inline std::size_t product(std::span<const std::size_t> dims) {
    std::size_t p = 1;
    for (std::size_t d : dims) {
        p *= d;
    }
    return p;
}

inline std::vector<std::size_t> row_major_strides(std::span<const std::size_t> dims) {
    std::vector<std::size_t> strides(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) {
        strides[i - 1] = strides[i] * dims[i];
    }
    return strides;
}

}  // namespace detail

/// Dense complex tensor, row-major over dims. A rank-0 tensor holds one value.
class Tensor {
   public:
    Tensor() : data_(1, Complex{0.0, 0.0}) {}

    explicit Tensor(std::vector<std::size_t> dims)
        : dims_(std::move(dims)), data_(checked_size(dims_), Complex{0.0, 0.0}) {}

    Tensor(std::vector<std::size_t> dims, std::vector<Complex> data) : dims_(std::move(dims)), data_(std::move(data)) {
        if (data_.size() != checked_size(dims_)) {
            throw std::invalid_argument(
                "tensor data size " + std::to_string(data_.size()) + " does not match product of dims " +
                std::to_string(detail::product(dims_)));
        }
    }

    Tensor(std::vector<std::size_t> dims, std::vector<Complex> data, std::vector<AxisLabel> labels)
        : Tensor(std::move(dims), std::move(data)) {
        set_labels(std::move(labels));
    }

    static Tensor scalar(Complex value) {
        Tensor t;
        t.data_[0] = value;
        return t;
    }

    std::size_t rank() const { return dims_.size(); }
    std::size_t size() const { return data_.size(); }
    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t dim(std::size_t axis) const { return dims_.at(axis); }

    const std::vector<Complex>& data() const { return data_; }
    std::vector<Complex>& data() { return data_; }

    /// Empty when the tensor is unlabeled.
    const std::vector<AxisLabel>& labels() const { return labels_; }
    bool labeled() const { return !labels_.empty() || dims_.empty(); }

    void set_labels(std::vector<AxisLabel> labels) {
        if (!labels.empty() && labels.size() != dims_.size()) {
            throw std::invalid_argument("label count does not match tensor rank");
        }
        for (std::size_t i = 0; i < labels.size(); ++i) {
            for (std::size_t j = i + 1; j < labels.size(); ++j) {
                if (labels[i] == labels[j]) {
                    throw std::invalid_argument("duplicate axis label " + std::to_string(labels[i]));
                }
            }
        }
        labels_ = std::move(labels);
    }

    std::optional<std::size_t> find_axis(AxisLabel label) const {
        auto it = std::find(labels_.begin(), labels_.end(), label);
        if (it == labels_.end()) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - labels_.begin());
    }

    std::size_t axis_of(AxisLabel label) const {
        auto axis = find_axis(label);
        if (!axis) {
            throw std::out_of_range("tensor has no axis labelled " + std::to_string(label));
        }
        return *axis;
    }

    std::size_t offset(std::span<const std::size_t> index) const {
        if (index.size() != dims_.size()) {
            throw std::out_of_range("index rank does not match tensor rank");
        }
        std::size_t off = 0;
        for (std::size_t i = 0; i < index.size(); ++i) {
            if (index[i] >= dims_[i]) {
                throw std::out_of_range("tensor index out of range on axis " + std::to_string(i));
            }
            off = off * dims_[i] + index[i];
        }
        return off;
    }

    Complex at(std::span<const std::size_t> index) const { return data_[offset(index)]; }
    Complex& at(std::span<const std::size_t> index) { return data_[offset(index)]; }
    Complex at(std::initializer_list<std::size_t> index) const {
        return at(std::span<const std::size_t>(index.begin(), index.size()));
    }
    Complex& at(std::initializer_list<std::size_t> index) {
        return at(std::span<const std::size_t>(index.begin(), index.size()));
    }

    /// Result axis i is input axis perm[i]. Labels follow their axes.
    Tensor permuted(std::span<const std::size_t> perm) const {
        const std::size_t n = dims_.size();
        if (perm.size() != n) {
            throw std::invalid_argument("permutation length does not match tensor rank");
        }
        std::vector<bool> seen(n, false);
        for (std::size_t p : perm) {
            if (p >= n || seen[p]) {
                throw std::invalid_argument("invalid axis permutation");
            }
            seen[p] = true;
        }
        bool identity = true;
        for (std::size_t i = 0; i < n; ++i) {
            identity = identity && perm[i] == i;
        }
        if (identity) {
            return *this;
        }

        std::vector<std::size_t> out_dims(n);
        std::vector<AxisLabel> out_labels;
        for (std::size_t i = 0; i < n; ++i) {
            out_dims[i] = dims_[perm[i]];
            if (!labels_.empty()) {
                out_labels.push_back(labels_[perm[i]]);
            }
        }
        const auto in_strides = detail::row_major_strides(dims_);
        std::vector<std::size_t> src_stride(n);
        for (std::size_t i = 0; i < n; ++i) {
            src_stride[i] = in_strides[perm[i]];
        }

        std::vector<Complex> out(data_.size());
        std::vector<std::size_t> counter(n, 0);
        const std::size_t inner_dim = out_dims[n - 1];
        const std::size_t inner_stride = src_stride[n - 1];
        std::size_t src = 0;
        for (std::size_t dst = 0; dst < out.size(); dst += inner_dim) {
            for (std::size_t k = 0; k < inner_dim; ++k) {
                out[dst + k] = data_[src + k * inner_stride];
            }
            // Advance the odometer over every axis except the innermost.
            for (std::size_t ax = n - 1; ax-- > 0;) {
                src += src_stride[ax];
                if (++counter[ax] < out_dims[ax]) {
                    break;
                }
                src -= src_stride[ax] * out_dims[ax];
                counter[ax] = 0;
            }
        }
        Tensor result(std::move(out_dims), std::move(out));
        result.labels_ = std::move(out_labels);
        return result;
    }

    Tensor permuted(std::initializer_list<std::size_t> perm) const {
        return permuted(std::span<const std::size_t>(perm.begin(), perm.size()));
    }

    /// Same data, new shape. Labels are dropped.
    Tensor reshaped(std::vector<std::size_t> dims) const {
        if (checked_size(dims) != data_.size()) {
            throw std::invalid_argument("reshape changes the number of elements");
        }
        return Tensor(std::move(dims), data_);
    }

    Tensor with_labels(std::vector<AxisLabel> labels) const {
        Tensor t = *this;
        t.set_labels(std::move(labels));
        return t;
    }

    /// Fixes one axis to a single index value and removes it.
    Tensor sliced(std::size_t axis, std::size_t value) const {
        if (axis >= dims_.size()) {
            throw std::out_of_range("slice axis out of range");
        }
        if (value >= dims_[axis]) {
            throw std::out_of_range("slice value out of range");
        }
        std::size_t outer = 1;
        for (std::size_t i = 0; i < axis; ++i) {
            outer *= dims_[i];
        }
        std::size_t inner = 1;
        for (std::size_t i = axis + 1; i < dims_.size(); ++i) {
            inner *= dims_[i];
        }
        std::vector<Complex> out(outer * inner);
        for (std::size_t o = 0; o < outer; ++o) {
            const std::size_t base = (o * dims_[axis] + value) * inner;
            std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(base), inner,
                        out.begin() + static_cast<std::ptrdiff_t>(o * inner));
        }
        std::vector<std::size_t> out_dims = dims_;
        out_dims.erase(out_dims.begin() + static_cast<std::ptrdiff_t>(axis));
        Tensor result(std::move(out_dims), std::move(out));
        if (!labels_.empty()) {
            result.labels_ = labels_;
            result.labels_.erase(result.labels_.begin() + static_cast<std::ptrdiff_t>(axis));
        }
        return result;
    }

    Tensor conj() const {
        Tensor t = *this;
        for (auto& v : t.data_) {
            v = std::conj(v);
        }
        return t;
    }

    Tensor scaled(Complex alpha) const {
        Tensor t = *this;
        for (auto& v : t.data_) {
            v *= alpha;
        }
        return t;
    }

    double frobenius_norm() const {
        double acc = 0.0;
        for (const auto& v : data_) {
            acc += std::norm(v);
        }
        return std::sqrt(acc);
    }

    bool all_finite() const {
        return std::all_of(data_.begin(), data_.end(),
                           [](const Complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
    }

   private:
    static std::size_t checked_size(const std::vector<std::size_t>& dims) {
        for (std::size_t d : dims) {
            if (d == 0) {
                throw std::invalid_argument("tensor axis extents must be >= 1");
            }
        }
        return detail::product(dims);
    }

    std::vector<std::size_t> dims_;
    std::vector<Complex> data_;
    std::vector<AxisLabel> labels_;
};

namespace detail {

struct PairSplit {
    std::vector<std::size_t> free_a, shared_a, free_b, shared_b;
};

inline PairSplit split_pairs(std::span<const std::size_t> dims_a, std::span<const std::size_t> dims_b,
                             std::span<const AxisPair> pairs) {
    std::vector<bool> used_a(dims_a.size(), false), used_b(dims_b.size(), false);
    PairSplit s;
    for (const auto& [ia, ib] : pairs) {
        if (ia >= dims_a.size() || ib >= dims_b.size()) {
            throw std::out_of_range("contraction axis index out of range");
        }
        if (used_a[ia] || used_b[ib]) {
            throw std::invalid_argument("axis paired more than once");
        }
        if (dims_a[ia] != dims_b[ib]) {
            throw std::invalid_argument("extent mismatch on contracted axes: " + std::to_string(dims_a[ia]) +
                                        " vs " + std::to_string(dims_b[ib]));
        }
        used_a[ia] = used_b[ib] = true;
        s.shared_a.push_back(ia);
        s.shared_b.push_back(ib);
    }
    for (std::size_t i = 0; i < dims_a.size(); ++i) {
        if (!used_a[i]) s.free_a.push_back(i);
    }
    for (std::size_t i = 0; i < dims_b.size(); ++i) {
        if (!used_b[i]) s.free_b.push_back(i);
    }
    return s;
}

}  // namespace detail

/// Multiply count of contracting tensors of the given shapes over `shared`.
inline Score contraction_cost(std::span<const std::size_t> dims_a, std::span<const std::size_t> dims_b,
                              std::span<const AxisPair> shared) {
    const auto s = detail::split_pairs(dims_a, dims_b, shared);
    Score cost = 1;
    for (std::size_t i : s.free_a) cost = checked_mul(cost, dims_a[i]);
    for (std::size_t i : s.free_b) cost = checked_mul(cost, dims_b[i]);
    for (std::size_t i : s.shared_a) cost = checked_mul(cost, dims_a[i]);
    return cost;
}

/// Sums over the paired axes. The result carries the unpaired axes of `a`
/// followed by the unpaired axes of `b`, in their original order.
inline Tensor contract_pair(const Tensor& a, const Tensor& b, std::span<const AxisPair> pairs) {
    const auto s = detail::split_pairs(a.dims(), b.dims(), pairs);

    std::vector<std::size_t> perm_a = s.free_a;
    perm_a.insert(perm_a.end(), s.shared_a.begin(), s.shared_a.end());
    std::vector<std::size_t> perm_b = s.shared_b;
    perm_b.insert(perm_b.end(), s.free_b.begin(), s.free_b.end());
    const Tensor pa = a.permuted(perm_a);
    const Tensor pb = b.permuted(perm_b);

    std::size_t rows = 1, inner = 1, cols = 1;
    std::vector<std::size_t> out_dims;
    std::vector<AxisLabel> out_labels;
    const bool carry_labels = a.labeled() && b.labeled();
    for (std::size_t i : s.free_a) {
        rows *= a.dim(i);
        out_dims.push_back(a.dim(i));
        if (carry_labels) out_labels.push_back(a.labels()[i]);
    }
    for (std::size_t i : s.shared_a) inner *= a.dim(i);
    for (std::size_t i : s.free_b) {
        cols *= b.dim(i);
        out_dims.push_back(b.dim(i));
        if (carry_labels) out_labels.push_back(b.labels()[i]);
    }

    using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMat> ma(pa.data().data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(inner));
    Eigen::Map<const RowMat> mb(pb.data().data(), static_cast<Eigen::Index>(inner), static_cast<Eigen::Index>(cols));
    std::vector<Complex> out(rows * cols);
    Eigen::Map<RowMat> mc(out.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    mc.noalias() = ma * mb;

    Tensor result(std::move(out_dims), std::move(out));
    if (carry_labels) {
        result.set_labels(std::move(out_labels));
    }
    return result;
}

inline Tensor contract_pair(const Tensor& a, const Tensor& b, std::initializer_list<AxisPair> pairs) {
    return contract_pair(a, b, std::span<const AxisPair>(pairs.begin(), pairs.size()));
}

/// Pairs every axis label the two tensors have in common.
inline std::vector<AxisPair> shared_label_pairs(const Tensor& a, const Tensor& b) {
    std::vector<AxisPair> pairs;
    for (std::size_t i = 0; i < a.labels().size(); ++i) {
        if (auto j = b.find_axis(a.labels()[i])) {
            pairs.emplace_back(i, *j);
        }
    }
    return pairs;
}

struct SvdResult {
    Tensor u;  ///< (row axes..., kept_rank), orthonormal columns
    std::vector<double> singular_values;  ///< kept values, non-increasing
    Tensor v;  ///< (kept_rank, remaining axes...), orthonormal rows
    std::size_t kept_rank = 0;
    double discarded_weight = 0.0;  ///< sqrt of the sum of squared dropped values
};

/// Matricizes `t` as (row_axes) x (other axes in order) and factors it.
inline SvdResult svd_factorize(const Tensor& t, std::span<const std::size_t> row_axes,
                               double tolerance = kDefaultSvdTolerance) {
    if (!(tolerance >= 0.0)) {
        throw std::invalid_argument("svd tolerance must be non-negative");
    }
    if (row_axes.empty() || row_axes.size() >= t.rank()) {
        throw std::invalid_argument("svd row axes must be a proper nonempty subset of the tensor axes");
    }
    if (!t.all_finite()) {
        throw std::invalid_argument("svd input contains non-finite values");
    }
    std::vector<bool> is_row(t.rank(), false);
    for (std::size_t ax : row_axes) {
        if (ax >= t.rank() || is_row[ax]) {
            throw std::invalid_argument("invalid svd row axis");
        }
        is_row[ax] = true;
    }
    std::vector<std::size_t> perm(row_axes.begin(), row_axes.end());
    std::vector<std::size_t> row_dims, col_dims;
    for (std::size_t ax : row_axes) row_dims.push_back(t.dim(ax));
    for (std::size_t ax = 0; ax < t.rank(); ++ax) {
        if (!is_row[ax]) {
            perm.push_back(ax);
            col_dims.push_back(t.dim(ax));
        }
    }
    const Tensor p = t.permuted(perm);
    const auto rows = static_cast<Eigen::Index>(detail::product(row_dims));
    const auto cols = static_cast<Eigen::Index>(detail::product(col_dims));

    using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    using ColMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
    const ColMat m = Eigen::Map<const RowMat>(p.data().data(), rows, cols);
    Eigen::BDCSVD<ColMat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const Eigen::Index full_rank = sv.size();

    const double s_max = full_rank > 0 ? sv(0) : 0.0;
    Eigen::Index kept = 0;
    double dropped = 0.0;
    for (Eigen::Index i = 0; i < full_rank; ++i) {
        if (sv(i) > tolerance * s_max && sv(i) > 0.0) {
            ++kept;
        } else {
            dropped += sv(i) * sv(i);
        }
    }
    kept = std::max<Eigen::Index>(kept, 1);

    SvdResult r;
    r.kept_rank = static_cast<std::size_t>(kept);
    r.discarded_weight = std::sqrt(dropped);
    for (Eigen::Index i = 0; i < kept; ++i) r.singular_values.push_back(sv(i));

    std::vector<std::size_t> u_dims = row_dims;
    u_dims.push_back(r.kept_rank);
    std::vector<Complex> u_data(static_cast<std::size_t>(rows * kept));
    Eigen::Map<RowMat>(u_data.data(), rows, kept) = svd.matrixU().leftCols(kept);
    r.u = Tensor(std::move(u_dims), std::move(u_data));

    std::vector<std::size_t> v_dims{r.kept_rank};
    v_dims.insert(v_dims.end(), col_dims.begin(), col_dims.end());
    std::vector<Complex> v_data(static_cast<std::size_t>(kept * cols));
    Eigen::Map<RowMat>(v_data.data(), kept, cols) = svd.matrixV().leftCols(kept).adjoint();
    r.v = Tensor(std::move(v_dims), std::move(v_data));
    return r;
}

inline SvdResult svd_factorize(const Tensor& t, std::initializer_list<std::size_t> row_axes,
                               double tolerance = kDefaultSvdTolerance) {
    return svd_factorize(t, std::span<const std::size_t>(row_axes.begin(), row_axes.size()), tolerance);
}

/// Largest element-wise |a - b|. Shapes must match.
inline double max_abs_difference(const Tensor& a, const Tensor& b) {
    if (a.dims() != b.dims()) {
        throw std::invalid_argument("cannot compare tensors of different shapes");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    }
    return m;
}

inline bool approx_equal(const Tensor& a, const Tensor& b, double tol) {
    return a.dims() == b.dims() && max_abs_difference(a, b) <= tol;
}

}  // namespace tnsim
