#include "tsforge/autodiff/optim.hpp"

#include <cmath>

#include "tsforge/common/error.hpp"

namespace tsforge::ad {

void adam_update(ParameterSet& params, const GradientMap& grads, AdamState& state) {
    std::size_t trainable = 0;
    for (const auto& [name, p] : params) {
        if (!p.trainable) {
            if (grads.count(name) > 0) {
                throw InvalidArgument("gradient supplied for frozen parameter '" + name + "'");
            }
            continue;
        }
        ++trainable;
        const auto it = grads.find(name);
        if (it == grads.end()) {
            throw InvalidArgument("missing gradient for trainable parameter '" + name + "'");
        }
        if (!it->second.same_shape(p.value)) {
            throw ShapeError("gradient for '" + name + "' has shape " +
                             shape_string(it->second.shape()) + ", parameter has " +
                             shape_string(p.value.shape()));
        }
    }
    if (grads.size() != trainable) {
        for (const auto& [name, g] : grads) {
            if (!params.contains(name)) {
                throw InvalidArgument("gradient for unknown parameter '" + name + "'");
            }
        }
    }

    const auto& cfg = state.config;
    state.step += 1;
    const double t = static_cast<double>(state.step);
    const double correction1 = 1.0 - std::pow(cfg.beta1, t);
    const double correction2 = 1.0 - std::pow(cfg.beta2, t);
    for (auto& [name, p] : params) {
        if (!p.trainable) {
            continue;
        }
        const Tensor& g = grads.at(name);
        auto [mit, m_new] = state.first_moment.try_emplace(name, Tensor::zeros_like(p.value));
        auto [vit, v_new] = state.second_moment.try_emplace(name, Tensor::zeros_like(p.value));
        Tensor& m = mit->second;
        Tensor& v = vit->second;
        if (!m.same_shape(p.value) || !v.same_shape(p.value)) {
            throw ShapeError("Adam moments for '" + name + "' do not match the parameter shape");
        }
        for (std::size_t i = 0; i < p.value.size(); ++i) {
            m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
            v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
            const double m_hat = m[i] / correction1;
            const double v_hat = v[i] / correction2;
            p.value[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
        }
    }
}

}  // namespace tsforge::ad
