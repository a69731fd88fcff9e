#include "tsforge/forecasters/network.hpp"

#include <cmath>

#include "tsforge/common/error.hpp"
#include "tsforge/common/rng.hpp"

namespace tsforge {

namespace {

using ad::NodeId;
using ad::Tensor;

struct ParamSpec {
    std::string name;
    std::vector<std::size_t> shape;
    enum class Init { glorot, zeros, ones, forget_bias } init;
    bool trainable = true;
    std::size_t fan_in = 0;
    std::size_t fan_out = 0;
};

std::string tcn_block(std::size_t i) { return "tcn.block" + std::to_string(i); }

/// Parameters of the configuration in deterministic build order.
std::vector<ParamSpec> parameter_specs(const ForecasterConfig& cfg) {
    using Init = ParamSpec::Init;
    std::vector<ParamSpec> specs;
    const std::size_t w = cfg.input_size;
    const std::size_t h = cfg.horizon;
    std::size_t head_in = 0;
    switch (cfg.family) {
        case Family::cnn: {
            const auto& c = cfg.cnn;
            std::size_t cin = 1;
            for (std::size_t l = 0; l < c.layers; ++l) {
                const std::string p = "cnn.conv" + std::to_string(l + 1);
                const std::size_t k = c.kernels[l];
                const std::size_t f = c.filters[l];
                specs.push_back({p + ".kernel", {k, cin, f}, Init::glorot, true, k * cin, k * f});
                specs.push_back({p + ".bias", {f}, Init::zeros});
                if (l == 0) {
                    specs.push_back({"cnn.bn1.gamma", {f}, Init::ones});
                    specs.push_back({"cnn.bn1.beta", {f}, Init::zeros});
                    specs.push_back({"cnn.bn1.running_mean", {f}, Init::zeros, false});
                    specs.push_back({"cnn.bn1.running_var", {f}, Init::ones, false});
                }
                cin = f;
            }
            const std::size_t steps = c.max_pooling ? w / 2 : w;
            head_in = steps * cin;
            break;
        }
        case Family::lstm: {
            const auto& l = cfg.lstm;
            const std::size_t u = l.units;
            specs.push_back({"lstm.input_kernel", {1, 4 * u}, Init::glorot, true, 1, 4 * u});
            specs.push_back({"lstm.recurrent_kernel", {u, 4 * u}, Init::glorot, true, u, 4 * u});
            specs.push_back({"lstm.bias", {4 * u}, Init::forget_bias});
            head_in = l.return_sequences ? w * u : u;
            break;
        }
        case Family::tcn: {
            const auto& t = cfg.tcn;
            const std::size_t k = t.kernel;
            const std::size_t f = t.filters;
            std::size_t cin = 1;
            for (std::size_t b = 0; b < t.dilations.size(); ++b) {
                const std::string p = tcn_block(b);
                specs.push_back({p + ".conv1.kernel", {k, cin, f}, Init::glorot, true, k * cin, k * f});
                specs.push_back({p + ".conv1.bias", {f}, Init::zeros});
                specs.push_back({p + ".conv2.kernel", {k, f, f}, Init::glorot, true, k * f, k * f});
                specs.push_back({p + ".conv2.bias", {f}, Init::zeros});
                if (cin != f) {
                    specs.push_back({p + ".skip.kernel", {1, cin, f}, Init::glorot, true, cin, f});
                    specs.push_back({p + ".skip.bias", {f}, Init::zeros});
                }
                cin = f;
            }
            head_in = t.return_sequences ? w * f : f;
            break;
        }
        default:
            throw InvalidArgument(to_string(cfg.family) + " is not a neural family");
    }
    specs.push_back({"head.weight", {head_in, h}, Init::glorot, true, head_in, h});
    specs.push_back({"head.bias", {h}, Init::zeros});
    return specs;
}

Tensor initialize(const ParamSpec& spec, Rng& rng, std::size_t lstm_units) {
    Tensor t(spec.shape);
    switch (spec.init) {
        case ParamSpec::Init::glorot: {
            const double limit =
                std::sqrt(6.0 / static_cast<double>(spec.fan_in + spec.fan_out));
            for (std::size_t i = 0; i < t.size(); ++i) {
                t[i] = rng.uniform(-limit, limit);
            }
            break;
        }
        case ParamSpec::Init::ones:
            for (std::size_t i = 0; i < t.size(); ++i) {
                t[i] = 1.0;
            }
            break;
        case ParamSpec::Init::forget_bias:
            for (std::size_t u = 0; u < lstm_units; ++u) {
                t[lstm_units + u] = 1.0;
            }
            break;
        case ParamSpec::Init::zeros:
            break;
    }
    return t;
}

}  // namespace

NeuralNetwork::NeuralNetwork(ForecasterConfig config, std::uint64_t seed, GridPolicy policy)
    : config_(std::move(config)) {
    validate(config_, policy);
    if (!is_neural(config_.family)) {
        throw InvalidArgument(to_string(config_.family) + " is not a neural family");
    }
    Rng rng(seed);
    for (const auto& spec : parameter_specs(config_)) {
        params_.add(spec.name, initialize(spec, rng, config_.lstm.units), spec.trainable);
    }
}

NeuralNetwork::NeuralNetwork(ForecasterConfig config, ad::ParameterSet parameters)
    : config_(std::move(config)), params_(std::move(parameters)) {
    validate(config_, GridPolicy::relaxed);
    const auto specs = parameter_specs(config_);
    if (specs.size() != params_.size()) {
        throw InvalidArgument("parameter set has " + std::to_string(params_.size()) +
                              " tensors; configuration needs " + std::to_string(specs.size()));
    }
    for (const auto& spec : specs) {
        if (!params_.contains(spec.name)) {
            throw InvalidArgument("missing parameter '" + spec.name + "'");
        }
        if (params_.value(spec.name).shape() != spec.shape) {
            throw ShapeError("parameter '" + spec.name + "' has shape " +
                             ad::shape_string(params_.value(spec.name).shape()) + ", expected " +
                             ad::shape_string(spec.shape));
        }
    }
}

std::vector<std::string> NeuralNetwork::head_parameter_names() {
    return {"head.bias", "head.weight"};
}

std::vector<std::string> NeuralNetwork::expected_parameter_names() const {
    std::vector<std::string> names;
    for (const auto& spec : parameter_specs(config_)) {
        names.push_back(spec.name);
    }
    return names;
}

std::size_t NeuralNetwork::receptive_field() const {
    if (config_.family != Family::tcn) {
        return config_.input_size;
    }
    std::size_t sum = 0;
    for (const auto d : config_.tcn.dilations) {
        sum += d;
    }
    return 1 + 2 * (config_.tcn.kernel - 1) * sum;
}

NodeId NeuralNetwork::forward(ad::Tape& tape, const ad::ParameterSet& params,
                              std::span<const double> input, ForwardTrace* trace) const {
    if (input.size() != config_.input_size) {
        throw ShapeError("input window has " + std::to_string(input.size()) +
                         " values; network expects " + std::to_string(config_.input_size));
    }
    NodeId features = 0;
    switch (config_.family) {
        case Family::cnn:
        case Family::tcn: {
            const NodeId x = tape.constant(
                Tensor({input.size(), 1}, std::vector<double>(input.begin(), input.end())));
            features = config_.family == Family::cnn ? forward_cnn(tape, params, x, trace)
                                                     : forward_tcn(tape, params, x);
            break;
        }
        case Family::lstm:
            features = forward_lstm(tape, params, input);
            break;
        default:
            throw InvalidArgument("not a neural family");
    }
    return ad::dense(tape, features, tape.parameter(params, "head.weight"),
                     tape.parameter(params, "head.bias"));
}

NodeId NeuralNetwork::forward_cnn(ad::Tape& tape, const ad::ParameterSet& params, NodeId x,
                                  ForwardTrace* trace) const {
    const auto& c = config_.cnn;
    NodeId y = x;
    for (std::size_t l = 0; l < c.layers; ++l) {
        const std::string p = "cnn.conv" + std::to_string(l + 1);
        y = ad::conv1d_causal(tape, y, tape.parameter(params, p + ".kernel"),
                              tape.parameter(params, p + ".bias"), 1);
        y = ad::activate(tape, y, c.activation);
        if (l == 0) {
            if (trace) {
                const Tensor& v = tape.value(y);
                const std::size_t T = v.dim(0);
                const std::size_t C = v.dim(1);
                BatchNormObservation obs{"cnn.bn1", std::vector<double>(C, 0.0),
                                         std::vector<double>(C, 0.0)};
                for (std::size_t ch = 0; ch < C; ++ch) {
                    double m = 0.0;
                    for (std::size_t s = 0; s < T; ++s) {
                        m += v.at(s, ch);
                    }
                    m /= static_cast<double>(T);
                    double var = 0.0;
                    for (std::size_t s = 0; s < T; ++s) {
                        var += (v.at(s, ch) - m) * (v.at(s, ch) - m);
                    }
                    obs.mean[ch] = m;
                    obs.variance[ch] = var / static_cast<double>(T);
                }
                trace->batch_norm.push_back(std::move(obs));
            }
            y = ad::batch_norm_inference(tape, y, tape.parameter(params, "cnn.bn1.gamma"),
                                         tape.parameter(params, "cnn.bn1.beta"),
                                         tape.parameter(params, "cnn.bn1.running_mean"),
                                         tape.parameter(params, "cnn.bn1.running_var"),
                                         kBatchNormEpsilon);
        }
    }
    if (c.max_pooling) {
        y = ad::max_pool2(tape, y);
    }
    return ad::flatten(tape, y);
}

NodeId NeuralNetwork::forward_lstm(ad::Tape& tape, const ad::ParameterSet& params,
                                   std::span<const double> input) const {
    const auto& l = config_.lstm;
    const NodeId wx = tape.parameter(params, "lstm.input_kernel");
    const NodeId wh = tape.parameter(params, "lstm.recurrent_kernel");
    const NodeId b = tape.parameter(params, "lstm.bias");
    NodeId state = tape.constant(Tensor({2 * l.units}));
    std::vector<NodeId> hidden;
    hidden.reserve(input.size());
    for (const double v : input) {
        const NodeId x = tape.constant(Tensor::scalar(v));
        state = ad::lstm_cell(tape, x, state, wx, wh, b, l.activation);
        if (l.return_sequences) {
            hidden.push_back(ad::slice(tape, state, 0, l.units));
        }
    }
    if (!l.return_sequences) {
        return ad::slice(tape, state, 0, l.units);
    }
    return ad::flatten(tape, ad::stack_rows(tape, hidden));
}

NodeId NeuralNetwork::forward_tcn(ad::Tape& tape, const ad::ParameterSet& params, NodeId x) const {
    const auto& t = config_.tcn;
    NodeId y = x;
    for (std::size_t b = 0; b < t.dilations.size(); ++b) {
        const std::string p = tcn_block(b);
        const std::size_t d = t.dilations[b];
        NodeId z = ad::conv1d_causal(tape, y, tape.parameter(params, p + ".conv1.kernel"),
                                     tape.parameter(params, p + ".conv1.bias"), d);
        z = ad::activate(tape, z, t.activation);
        z = ad::conv1d_causal(tape, z, tape.parameter(params, p + ".conv2.kernel"),
                              tape.parameter(params, p + ".conv2.bias"), d);
        z = ad::activate(tape, z, t.activation);
        NodeId skip = y;
        if (params.contains(p + ".skip.kernel")) {
            skip = ad::conv1d_causal(tape, y, tape.parameter(params, p + ".skip.kernel"),
                                     tape.parameter(params, p + ".skip.bias"), 1);
        }
        y = ad::activate(tape, ad::add(tape, skip, z), t.activation);
    }
    return t.return_sequences ? ad::flatten(tape, y) : ad::last_step(tape, y);
}

std::vector<double> NeuralNetwork::predict_scaled(std::span<const double> input) const {
    ad::Tape tape;
    const NodeId out = forward(tape, input);
    const auto& v = tape.value(out).values();
    return {v.begin(), v.end()};
}

void NeuralNetwork::update_batch_norm(const ForwardTrace& trace) {
    for (const auto& obs : trace.batch_norm) {
        Tensor& mean = params_.at(obs.layer + ".running_mean").value;
        Tensor& var = params_.at(obs.layer + ".running_var").value;
        for (std::size_t c = 0; c < mean.size(); ++c) {
            mean[c] = kBatchNormMomentum * mean[c] + (1.0 - kBatchNormMomentum) * obs.mean[c];
            var[c] = kBatchNormMomentum * var[c] + (1.0 - kBatchNormMomentum) * obs.variance[c];
        }
    }
}

}  // namespace tsforge
