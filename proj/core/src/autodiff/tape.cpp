#include "tsforge/autodiff/tape.hpp"

#include <algorithm>

#include "tsforge/common/error.hpp"

namespace tsforge::ad {

NodeId Tape::constant(Tensor value) {
    if (!value.all_finite()) {
        throw NumericError("non-finite value in constant input");
    }
    Node n;
    n.value = std::move(value);
    n.primitive = "constant";
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
}

NodeId Tape::parameter(const ParameterSet& params, const std::string& name) {
    if (const auto it = parameter_nodes_.find(name); it != parameter_nodes_.end()) {
        return it->second;
    }
    const auto& p = params.at(name);
    if (!p.value.all_finite()) {
        throw NumericError("non-finite value in parameter '" + name + "'");
    }
    Node n;
    n.value = p.value;
    n.primitive = "parameter";
    n.parameter_name = name;
    n.requires_grad = p.trainable;
    nodes_.push_back(std::move(n));
    parameter_nodes_.emplace(name, nodes_.size() - 1);
    return nodes_.size() - 1;
}

NodeId Tape::record(std::string_view primitive, Tensor value, std::vector<NodeId> inputs,
                    BackwardFn backward) {
    if (!value.all_finite()) {
        throw NumericError("non-finite value produced by primitive '" + std::string(primitive) +
                           "'");
    }
    Node n;
    n.value = std::move(value);
    n.primitive = std::string(primitive);
    n.requires_grad = std::any_of(inputs.begin(), inputs.end(), [&](NodeId id) {
        return nodes_.at(id).requires_grad;
    });
    n.inputs = std::move(inputs);
    n.backward = std::move(backward);
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
}

const Tensor& Tape::grad(NodeId id) const { return nodes_.at(id).grad; }

Tensor& Tape::grad_buffer(NodeId id) {
    auto& n = nodes_.at(id);
    if (n.grad.empty()) {
        n.grad = Tensor::zeros_like(n.value);
    }
    return n.grad;
}

GradientMap Tape::backward(NodeId output, const Tensor& seed) {
    if (consumed_) {
        throw Error("tape already replayed; run a new forward pass before backward");
    }
    consumed_ = true;
    if (output >= nodes_.size()) {
        throw InvalidArgument("backward from unknown node");
    }
    if (!seed.same_shape(nodes_[output].value)) {
        throw ShapeError("gradient seed shape " + shape_string(seed.shape()) +
                         " does not match output " + shape_string(nodes_[output].value.shape()));
    }
    if (nodes_[output].requires_grad) {
        grad_buffer(output) += seed;
    }
    for (NodeId i = output + 1; i-- > 0;) {
        auto& n = nodes_[i];
        if (!n.requires_grad || n.grad.empty() || !n.backward) {
            continue;
        }
        n.backward(*this, i);
        if (!n.grad.all_finite()) {
            throw NumericError("non-finite gradient in primitive '" + n.primitive + "'");
        }
    }
    GradientMap grads;
    for (auto& n : nodes_) {
        if (n.parameter_name && n.requires_grad) {
            grads.emplace(*n.parameter_name,
                          n.grad.empty() ? Tensor::zeros_like(n.value) : std::move(n.grad));
        }
    }
    return grads;
}

GradientMap Tape::backward(NodeId scalar_output) {
    if (value(scalar_output).size() != 1) {
        throw ShapeError("backward without a seed requires a scalar output");
    }
    return backward(scalar_output, Tensor(value(scalar_output).shape(), 1.0));
}

}  // namespace tsforge::ad
