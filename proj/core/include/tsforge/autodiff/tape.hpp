#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsforge/autodiff/tensor.hpp"

namespace tsforge::ad {

using NodeId = std::size_t;

class Tape;

/// Reverse rule of one primitive: reads `tape.grad(self)` and accumulates into the
/// gradient buffers of its inputs.
using BackwardFn = std::function<void(Tape& tape, NodeId self)>;

/// Records primitive applications in execution order; replaying them backwards
/// yields exact gradients. A tape supports a single backward pass.
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;
    Tape(Tape&&) = default;
    Tape& operator=(Tape&&) = default;

    NodeId constant(Tensor value);
    /// Leaf bound to a parameter; gradients flow to it only when it is trainable.
    /// Repeated requests for one name return the same node.
    NodeId parameter(const ParameterSet& params, const std::string& name);

    /// Appends a primitive result. Throws NumericError naming `primitive` when
    /// `value` contains NaN/Inf.
    NodeId record(std::string_view primitive, Tensor value, std::vector<NodeId> inputs,
                  BackwardFn backward);

    [[nodiscard]] const Tensor& value(NodeId id) const { return nodes_.at(id).value; }
    [[nodiscard]] bool requires_grad(NodeId id) const { return nodes_.at(id).requires_grad; }
    [[nodiscard]] const std::string& primitive(NodeId id) const { return nodes_.at(id).primitive; }
    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }

    /// Gradient of the output with respect to node `id` (valid during backward).
    [[nodiscard]] const Tensor& grad(NodeId id) const;
    /// Zero-initialized accumulation buffer for an input that requires gradients.
    Tensor& grad_buffer(NodeId id);

    /// Backpropagates `seed` (same shape as the output) and returns the gradient of
    /// every trainable parameter leaf. Frozen parameters are absent from the map.
    GradientMap backward(NodeId output, const Tensor& seed);
    /// Scalar output seeded with 1.
    GradientMap backward(NodeId scalar_output);

private:
    struct Node {
        Tensor value;
        Tensor grad;
        std::vector<NodeId> inputs;
        BackwardFn backward;
        std::string primitive;
        std::optional<std::string> parameter_name;
        bool requires_grad = false;
    };

    std::vector<Node> nodes_;
    std::map<std::string, NodeId> parameter_nodes_;
    bool consumed_ = false;
};

}  // namespace tsforge::ad
