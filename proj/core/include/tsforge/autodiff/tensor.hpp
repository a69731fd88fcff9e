#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace tsforge::ad {

/// Dense row-major double tensor. Every dimension is positive.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
    Tensor(std::vector<std::size_t> shape, std::vector<double> data);

    [[nodiscard]] static Tensor scalar(double value) { return Tensor({1}, {value}); }
    [[nodiscard]] static Tensor vector(std::vector<double> values);
    [[nodiscard]] static Tensor zeros_like(const Tensor& other) { return Tensor(other.shape_); }

    [[nodiscard]] const std::vector<std::size_t>& shape() const noexcept { return shape_; }
    [[nodiscard]] std::size_t rank() const noexcept { return shape_.size(); }
    [[nodiscard]] std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    [[nodiscard]] std::span<double> data() noexcept { return data_; }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return data_; }

    double& operator[](std::size_t i) noexcept { return data_[i]; }
    double operator[](std::size_t i) const noexcept { return data_[i]; }

    double& at(std::size_t r, std::size_t c) noexcept { return data_[r * shape_[1] + c]; }
    [[nodiscard]] double at(std::size_t r, std::size_t c) const noexcept {
        return data_[r * shape_[1] + c];
    }
    double& at(std::size_t i, std::size_t j, std::size_t k) noexcept {
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }
    [[nodiscard]] double at(std::size_t i, std::size_t j, std::size_t k) const noexcept {
        return data_[(i * shape_[1] + j) * shape_[2] + k];
    }

    [[nodiscard]] bool all_finite() const noexcept;
    [[nodiscard]] bool same_shape(const Tensor& other) const noexcept {
        return shape_ == other.shape_;
    }

    Tensor& operator+=(const Tensor& other);

    /// Byte-level equality of shape and data (distinguishes -0.0 from 0.0).
    [[nodiscard]] bool bit_identical(const Tensor& other) const noexcept;

private:
    std::vector<std::size_t> shape_;
    std::vector<double> data_;
};

[[nodiscard]] std::string shape_string(const std::vector<std::size_t>& shape);

struct Parameter {
    Tensor value;
    bool trainable = true;
};

/// Named parameters with a trainable flag. Frozen entries never receive optimizer
/// updates or gradients.
class ParameterSet {
public:
    void add(const std::string& name, Tensor value, bool trainable = true);

    [[nodiscard]] bool contains(const std::string& name) const { return params_.count(name) > 0; }
    [[nodiscard]] Parameter& at(const std::string& name);
    [[nodiscard]] const Parameter& at(const std::string& name) const;
    [[nodiscard]] const Tensor& value(const std::string& name) const { return at(name).value; }

    void set_trainable(const std::string& name, bool trainable) { at(name).trainable = trainable; }
    /// Freezes everything except the listed names.
    void freeze_all_except(std::span<const std::string> trainable_names);

    [[nodiscard]] std::size_t size() const noexcept { return params_.size(); }
    /// Total number of scalar entries.
    [[nodiscard]] std::size_t scalar_count() const noexcept;
    [[nodiscard]] std::vector<std::string> names() const;
    [[nodiscard]] std::vector<std::string> trainable_names() const;

    [[nodiscard]] auto begin() const noexcept { return params_.begin(); }
    [[nodiscard]] auto end() const noexcept { return params_.end(); }
    [[nodiscard]] auto begin() noexcept { return params_.begin(); }
    [[nodiscard]] auto end() noexcept { return params_.end(); }

    /// Same names, flags and bit-identical values.
    [[nodiscard]] bool bit_identical(const ParameterSet& other) const;

private:
    std::map<std::string, Parameter> params_;
};

using GradientMap = std::map<std::string, Tensor>;

}  // namespace tsforge::ad
