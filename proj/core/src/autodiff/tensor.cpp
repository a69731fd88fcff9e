#include "tsforge/autodiff/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <numeric>

#include "tsforge/common/error.hpp"

namespace tsforge::ad {

namespace {

std::size_t element_count(const std::vector<std::size_t>& shape) {
    if (shape.empty()) {
        throw ShapeError("tensor shape must have at least one dimension");
    }
    std::size_t n = 1;
    for (const auto d : shape) {
        if (d == 0) {
            throw ShapeError("tensor dimensions must be positive, got " + shape_string(shape));
        }
        n *= d;
    }
    return n;
}

}  // namespace

std::string shape_string(const std::vector<std::size_t>& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i > 0) {
            s += ", ";
        }
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)), data_(element_count(shape_), fill) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != element_count(shape_)) {
        throw ShapeError("data length " + std::to_string(data_.size()) +
                         " does not match shape " + shape_string(shape_));
    }
}

Tensor Tensor::vector(std::vector<double> values) {
    const auto n = values.size();
    return Tensor({n}, std::move(values));
}

bool Tensor::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Tensor& Tensor::operator+=(const Tensor& other) {
    if (!same_shape(other)) {
        throw ShapeError("cannot add " + shape_string(other.shape_) + " to " +
                         shape_string(shape_));
    }
    std::transform(data_.begin(), data_.end(), other.data_.begin(), data_.begin(),
                   std::plus<>());
    return *this;
}

bool Tensor::bit_identical(const Tensor& other) const noexcept {
    return shape_ == other.shape_ &&
           (data_.empty() ||
            std::memcmp(data_.data(), other.data_.data(), data_.size() * sizeof(double)) == 0);
}

void ParameterSet::add(const std::string& name, Tensor value, bool trainable) {
    if (!params_.emplace(name, Parameter{std::move(value), trainable}).second) {
        throw InvalidArgument("duplicate parameter name '" + name + "'");
    }
}

Parameter& ParameterSet::at(const std::string& name) {
    const auto it = params_.find(name);
    if (it == params_.end()) {
        throw InvalidArgument("unknown parameter '" + name + "'");
    }
    return it->second;
}

const Parameter& ParameterSet::at(const std::string& name) const {
    const auto it = params_.find(name);
    if (it == params_.end()) {
        throw InvalidArgument("unknown parameter '" + name + "'");
    }
    return it->second;
}

void ParameterSet::freeze_all_except(std::span<const std::string> trainable_names) {
    for (auto& [name, p] : params_) {
        p.trainable = false;
    }
    for (const auto& name : trainable_names) {
        at(name).trainable = true;
    }
}

std::size_t ParameterSet::scalar_count() const noexcept {
    std::size_t n = 0;
    for (const auto& [name, p] : params_) {
        n += p.value.size();
    }
    return n;
}

std::vector<std::string> ParameterSet::names() const {
    std::vector<std::string> out;
    for (const auto& [name, p] : params_) {
        out.push_back(name);
    }
    return out;
}

std::vector<std::string> ParameterSet::trainable_names() const {
    std::vector<std::string> out;
    for (const auto& [name, p] : params_) {
        if (p.trainable) {
            out.push_back(name);
        }
    }
    return out;
}

bool ParameterSet::bit_identical(const ParameterSet& other) const {
    if (params_.size() != other.params_.size()) {
        return false;
    }
    auto it = other.params_.begin();
    for (const auto& [name, p] : params_) {
        if (it->first != name || it->second.trainable != p.trainable ||
            !it->second.value.bit_identical(p.value)) {
            return false;
        }
        ++it;
    }
    return true;
}

}  // namespace tsforge::ad
