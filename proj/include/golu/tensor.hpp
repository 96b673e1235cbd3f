#pragma once

#include <golu/errors.hpp>

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace golu {

using Shape = std::vector<std::size_t>;

inline std::size_t shape_size(const Shape& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>{});
}

inline std::string shape_string(const Shape& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i != 0) {
            s += ", ";
        }
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

/// Dense row-major array with an explicit shape. Rank must be at least 1 and
/// the buffer length must equal the product of the extents.
template <typename T>
class Tensor {
public:
    using value_type = T;

    Tensor() : shape_{0} {}

    explicit Tensor(Shape shape, T fill = T{}) : shape_(std::move(shape)) {
        check_rank();
        data_.assign(shape_size(shape_), fill);
    }

    Tensor(Shape shape, std::vector<T> data) : shape_(std::move(shape)), data_(std::move(data)) {
        check_rank();
        if (shape_size(shape_) != data_.size()) {
            throw UsageError("Tensor: shape " + shape_string(shape_) + " does not match buffer of " +
                             std::to_string(data_.size()) + " elements");
        }
    }

    /// 1-D tensor from a list of values.
    static Tensor from(std::initializer_list<T> values) {
        return Tensor(Shape{values.size()}, std::vector<T>(values));
    }

    const Shape& shape() const noexcept { return shape_; }
    std::size_t rank() const noexcept { return shape_.size(); }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }
    std::size_t extent(std::size_t axis) const { return shape_.at(axis); }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }
    const std::vector<T>& vector() const noexcept { return data_; }

    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    /// Same buffer, new shape with the same element count.
    Tensor reshaped(Shape shape) const& { return Tensor(std::move(shape), data_); }
    Tensor reshaped(Shape shape) && { return Tensor(std::move(shape), std::move(data_)); }

    friend bool operator==(const Tensor&, const Tensor&) = default;

private:
    void check_rank() const {
        if (shape_.empty()) {
            throw UsageError("Tensor: rank-0 shapes are not supported");
        }
    }

    Shape shape_;
    std::vector<T> data_;
};

} // namespace golu
