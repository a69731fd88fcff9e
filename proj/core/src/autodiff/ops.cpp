#include "tsforge/autodiff/ops.hpp"

#include <cmath>

#include "tsforge/common/error.hpp"

namespace tsforge::ad {

namespace {

void expect_rank(const Tensor& t, std::size_t rank, const char* primitive, const char* what) {
    if (t.rank() != rank) {
        throw ShapeError(std::string(primitive) + ": " + what + " must have rank " +
                         std::to_string(rank) + ", got " + shape_string(t.shape()));
    }
}

[[noreturn]] void mismatch(const char* primitive, const std::string& detail) {
    throw ShapeError(std::string(primitive) + ": " + detail);
}

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double apply(Activation a, double z) {
    switch (a) {
        case Activation::tanh:
            return std::tanh(z);
        case Activation::relu:
            return z > 0.0 ? z : 0.0;
        case Activation::identity:
        default:
            return z;
    }
}

/// Derivative expressed through the input z and output y = act(z).
double derivative(Activation a, double z, double y) {
    switch (a) {
        case Activation::tanh:
            return 1.0 - y * y;
        case Activation::relu:
            return z > 0.0 ? 1.0 : 0.0;
        case Activation::identity:
        default:
            return 1.0;
    }
}

NodeId elementwise(Tape& tape, NodeId x, Activation a, const char* name) {
    const Tensor& in = tape.value(x);
    Tensor out(in.shape());
    for (std::size_t i = 0; i < in.size(); ++i) {
        out[i] = apply(a, in[i]);
    }
    return tape.record(name, std::move(out), {x}, [x, a](Tape& t, NodeId self) {
        if (!t.requires_grad(x)) {
            return;
        }
        const Tensor& z = t.value(x);
        const Tensor& y = t.value(self);
        const Tensor& gy = t.grad(self);
        Tensor& gx = t.grad_buffer(x);
        for (std::size_t i = 0; i < z.size(); ++i) {
            gx[i] += gy[i] * derivative(a, z[i], y[i]);
        }
    });
}

}  // namespace

Activation parse_activation(const std::string& name) {
    if (name == "tanh") {
        return Activation::tanh;
    }
    if (name == "relu") {
        return Activation::relu;
    }
    if (name == "linear" || name == "identity") {
        return Activation::identity;
    }
    throw InvalidArgument("unknown activation '" + name + "'");
}

std::string to_string(Activation activation) {
    switch (activation) {
        case Activation::tanh:
            return "tanh";
        case Activation::relu:
            return "relu";
        case Activation::identity:
        default:
            return "linear";
    }
}

NodeId dense(Tape& tape, NodeId x, NodeId weight, NodeId bias) {
    const Tensor& in = tape.value(x);
    const Tensor& w = tape.value(weight);
    const Tensor& b = tape.value(bias);
    expect_rank(in, 1, "dense", "input");
    expect_rank(w, 2, "dense", "weight");
    expect_rank(b, 1, "dense", "bias");
    const std::size_t n = in.size();
    const std::size_t m = w.dim(1);
    if (w.dim(0) != n || b.size() != m) {
        mismatch("dense", "input " + shape_string(in.shape()) + ", weight " +
                              shape_string(w.shape()) + ", bias " + shape_string(b.shape()));
    }
    Tensor out({m});
    for (std::size_t j = 0; j < m; ++j) {
        out[j] = b[j];
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = in[i];
        if (xi == 0.0) {
            continue;
        }
        for (std::size_t j = 0; j < m; ++j) {
            out[j] += xi * w.at(i, j);
        }
    }
    return tape.record("dense", std::move(out), {x, weight, bias},
                       [x, weight, bias, n, m](Tape& t, NodeId self) {
                           const Tensor& gy = t.grad(self);
                           if (t.requires_grad(bias)) {
                               t.grad_buffer(bias) += gy;
                           }
                           if (t.requires_grad(weight)) {
                               const Tensor& in = t.value(x);
                               Tensor& gw = t.grad_buffer(weight);
                               for (std::size_t i = 0; i < n; ++i) {
                                   for (std::size_t j = 0; j < m; ++j) {
                                       gw.at(i, j) += in[i] * gy[j];
                                   }
                               }
                           }
                           if (t.requires_grad(x)) {
                               const Tensor& w = t.value(weight);
                               Tensor& gx = t.grad_buffer(x);
                               for (std::size_t i = 0; i < n; ++i) {
                                   double acc = 0.0;
                                   for (std::size_t j = 0; j < m; ++j) {
                                       acc += w.at(i, j) * gy[j];
                                   }
                                   gx[i] += acc;
                               }
                           }
                       });
}

NodeId conv1d_causal(Tape& tape, NodeId x, NodeId kernel, NodeId bias, std::size_t dilation) {
    const Tensor& in = tape.value(x);
    const Tensor& w = tape.value(kernel);
    const Tensor& b = tape.value(bias);
    expect_rank(in, 2, "conv1d_causal", "input");
    expect_rank(w, 3, "conv1d_causal", "kernel");
    expect_rank(b, 1, "conv1d_causal", "bias");
    if (dilation == 0) {
        mismatch("conv1d_causal", "dilation must be positive");
    }
    const std::size_t T = in.dim(0);
    const std::size_t cin = in.dim(1);
    const std::size_t K = w.dim(0);
    const std::size_t cout = w.dim(2);
    if (w.dim(1) != cin || b.size() != cout) {
        mismatch("conv1d_causal", "input " + shape_string(in.shape()) + ", kernel " +
                                      shape_string(w.shape()) + ", bias " +
                                      shape_string(b.shape()));
    }
    Tensor out({T, cout});
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t o = 0; o < cout; ++o) {
            out.at(t, o) = b[o];
        }
        for (std::size_t k = 0; k < K; ++k) {
            const std::size_t back = (K - 1 - k) * dilation;
            if (back > t) {
                continue;
            }
            const std::size_t src = t - back;
            for (std::size_t i = 0; i < cin; ++i) {
                const double xv = in.at(src, i);
                for (std::size_t o = 0; o < cout; ++o) {
                    out.at(t, o) += xv * w.at(k, i, o);
                }
            }
        }
    }
    return tape.record(
        "conv1d_causal", std::move(out), {x, kernel, bias},
        [x, kernel, bias, dilation, T, cin, K, cout](Tape& t, NodeId self) {
            const Tensor& gy = t.grad(self);
            if (t.requires_grad(bias)) {
                Tensor& gb = t.grad_buffer(bias);
                for (std::size_t s = 0; s < T; ++s) {
                    for (std::size_t o = 0; o < cout; ++o) {
                        gb[o] += gy.at(s, o);
                    }
                }
            }
            const bool want_w = t.requires_grad(kernel);
            const bool want_x = t.requires_grad(x);
            if (!want_w && !want_x) {
                return;
            }
            const Tensor& in = t.value(x);
            const Tensor& w = t.value(kernel);
            Tensor* gw = want_w ? &t.grad_buffer(kernel) : nullptr;
            Tensor* gx = want_x ? &t.grad_buffer(x) : nullptr;
            for (std::size_t s = 0; s < T; ++s) {
                for (std::size_t k = 0; k < K; ++k) {
                    const std::size_t back = (K - 1 - k) * dilation;
                    if (back > s) {
                        continue;
                    }
                    const std::size_t src = s - back;
                    for (std::size_t i = 0; i < cin; ++i) {
                        double acc = 0.0;
                        const double xv = in.at(src, i);
                        for (std::size_t o = 0; o < cout; ++o) {
                            const double g = gy.at(s, o);
                            if (gw) {
                                gw->at(k, i, o) += xv * g;
                            }
                            acc += w.at(k, i, o) * g;
                        }
                        if (gx) {
                            gx->at(src, i) += acc;
                        }
                    }
                }
            }
        });
}

NodeId max_pool2(Tape& tape, NodeId x) {
    const Tensor& in = tape.value(x);
    expect_rank(in, 2, "max_pool2", "input");
    const std::size_t T = in.dim(0);
    const std::size_t C = in.dim(1);
    if (T < 2) {
        mismatch("max_pool2", "sequence length " + std::to_string(T) + " is shorter than 2");
    }
    const std::size_t P = T / 2;
    Tensor out({P, C});
    std::vector<std::size_t> argmax(P * C);
    for (std::size_t p = 0; p < P; ++p) {
        for (std::size_t c = 0; c < C; ++c) {
            const double a = in.at(2 * p, c);
            const double b = in.at(2 * p + 1, c);
            const bool first = a >= b;
            out.at(p, c) = first ? a : b;
            argmax[p * C + c] = first ? 2 * p : 2 * p + 1;
        }
    }
    return tape.record("max_pool2", std::move(out), {x},
                       [x, P, C, argmax = std::move(argmax)](Tape& t, NodeId self) {
                           if (!t.requires_grad(x)) {
                               return;
                           }
                           const Tensor& gy = t.grad(self);
                           Tensor& gx = t.grad_buffer(x);
                           for (std::size_t p = 0; p < P; ++p) {
                               for (std::size_t c = 0; c < C; ++c) {
                                   gx.at(argmax[p * C + c], c) += gy.at(p, c);
                               }
                           }
                       });
}

NodeId tanh(Tape& tape, NodeId x) { return elementwise(tape, x, Activation::tanh, "tanh"); }
NodeId relu(Tape& tape, NodeId x) { return elementwise(tape, x, Activation::relu, "relu"); }
NodeId identity(Tape& tape, NodeId x) {
    return elementwise(tape, x, Activation::identity, "identity");
}

NodeId activate(Tape& tape, NodeId x, Activation activation) {
    switch (activation) {
        case Activation::tanh:
            return tanh(tape, x);
        case Activation::relu:
            return relu(tape, x);
        case Activation::identity:
        default:
            return identity(tape, x);
    }
}

NodeId batch_norm_inference(Tape& tape, NodeId x, NodeId gamma, NodeId beta, NodeId running_mean,
                            NodeId running_var, double eps) {
    const Tensor& in = tape.value(x);
    expect_rank(in, 2, "batch_norm", "input");
    const std::size_t T = in.dim(0);
    const std::size_t C = in.dim(1);
    for (const NodeId id : {gamma, beta, running_mean, running_var}) {
        if (tape.value(id).size() != C) {
            mismatch("batch_norm", "per-channel tensors must have " + std::to_string(C) +
                                       " entries");
        }
    }
    const Tensor& g = tape.value(gamma);
    const Tensor& b = tape.value(beta);
    const Tensor& mu = tape.value(running_mean);
    const Tensor& var = tape.value(running_var);
    std::vector<double> inv_std(C);
    for (std::size_t c = 0; c < C; ++c) {
        if (!(var[c] + eps > 0.0)) {
            throw NumericError("batch_norm: running variance + eps is not positive");
        }
        inv_std[c] = 1.0 / std::sqrt(var[c] + eps);
    }
    Tensor out({T, C});
    for (std::size_t s = 0; s < T; ++s) {
        for (std::size_t c = 0; c < C; ++c) {
            out.at(s, c) = g[c] * (in.at(s, c) - mu[c]) * inv_std[c] + b[c];
        }
    }
    return tape.record(
        "batch_norm", std::move(out), {x, gamma, beta, running_mean, running_var},
        [=, inv_std = std::move(inv_std)](Tape& t, NodeId self) {
            const Tensor& gy = t.grad(self);
            const Tensor& in = t.value(x);
            const Tensor& g = t.value(gamma);
            const Tensor& mu = t.value(running_mean);
            const Tensor& var = t.value(running_var);
            Tensor* gx = t.requires_grad(x) ? &t.grad_buffer(x) : nullptr;
            Tensor* gg = t.requires_grad(gamma) ? &t.grad_buffer(gamma) : nullptr;
            Tensor* gb = t.requires_grad(beta) ? &t.grad_buffer(beta) : nullptr;
            Tensor* gm = t.requires_grad(running_mean) ? &t.grad_buffer(running_mean) : nullptr;
            Tensor* gv = t.requires_grad(running_var) ? &t.grad_buffer(running_var) : nullptr;
            for (std::size_t s = 0; s < T; ++s) {
                for (std::size_t c = 0; c < C; ++c) {
                    const double gyv = gy.at(s, c);
                    const double centered = in.at(s, c) - mu[c];
                    if (gx) {
                        gx->at(s, c) += gyv * g[c] * inv_std[c];
                    }
                    if (gg) {
                        (*gg)[c] += gyv * centered * inv_std[c];
                    }
                    if (gb) {
                        (*gb)[c] += gyv;
                    }
                    if (gm) {
                        (*gm)[c] -= gyv * g[c] * inv_std[c];
                    }
                    if (gv) {
                        (*gv)[c] += gyv * g[c] * centered * -0.5 * inv_std[c] /
                                    (var[c] + eps);
                    }
                }
            }
        });
}

NodeId lstm_cell(Tape& tape, NodeId x, NodeId state, NodeId input_kernel, NodeId recurrent_kernel,
                 NodeId bias, Activation activation) {
    const Tensor& xin = tape.value(x);
    const Tensor& st = tape.value(state);
    const Tensor& wx = tape.value(input_kernel);
    const Tensor& wh = tape.value(recurrent_kernel);
    const Tensor& b = tape.value(bias);
    expect_rank(xin, 1, "lstm_cell", "input");
    expect_rank(wx, 2, "lstm_cell", "input kernel");
    expect_rank(wh, 2, "lstm_cell", "recurrent kernel");
    const std::size_t D = xin.size();
    const std::size_t U = wh.dim(0);
    if (st.size() != 2 * U || wx.dim(0) != D || wx.dim(1) != 4 * U || wh.dim(1) != 4 * U ||
        b.size() != 4 * U) {
        mismatch("lstm_cell", "input " + shape_string(xin.shape()) + ", state " +
                                  shape_string(st.shape()) + ", input kernel " +
                                  shape_string(wx.shape()) + ", recurrent kernel " +
                                  shape_string(wh.shape()) + ", bias " +
                                  shape_string(b.shape()));
    }
    // z holds pre-activations; gates holds post-activations, both in (i, f, g, o) order.
    std::vector<double> z(4 * U);
    for (std::size_t j = 0; j < 4 * U; ++j) {
        z[j] = b[j];
    }
    for (std::size_t d = 0; d < D; ++d) {
        const double xv = xin[d];
        for (std::size_t j = 0; j < 4 * U; ++j) {
            z[j] += xv * wx.at(d, j);
        }
    }
    for (std::size_t u = 0; u < U; ++u) {
        const double hv = st[u];
        if (hv == 0.0) {
            continue;
        }
        for (std::size_t j = 0; j < 4 * U; ++j) {
            z[j] += hv * wh.at(u, j);
        }
    }
    std::vector<double> gates(4 * U);
    std::vector<double> cell_act(U);
    Tensor out({2 * U});
    for (std::size_t u = 0; u < U; ++u) {
        const double i = sigmoid(z[u]);
        const double f = sigmoid(z[U + u]);
        const double g = apply(activation, z[2 * U + u]);
        const double o = sigmoid(z[3 * U + u]);
        gates[u] = i;
        gates[U + u] = f;
        gates[2 * U + u] = g;
        gates[3 * U + u] = o;
        const double c = f * st[U + u] + i * g;
        cell_act[u] = apply(activation, c);
        out[u] = o * cell_act[u];
        out[U + u] = c;
    }
    return tape.record(
        "lstm_cell", std::move(out), {x, state, input_kernel, recurrent_kernel, bias},
        [=, z = std::move(z), gates = std::move(gates),
         cell_act = std::move(cell_act)](Tape& t, NodeId self) {
            const Tensor& gy = t.grad(self);
            const Tensor& st = t.value(state);
            const Tensor& out = t.value(self);
            std::vector<double> dz(4 * U);
            std::vector<double> dc_prev(U);
            for (std::size_t u = 0; u < U; ++u) {
                const double i = gates[u];
                const double f = gates[U + u];
                const double g = gates[2 * U + u];
                const double o = gates[3 * U + u];
                const double c = out[U + u];
                const double dh = gy[u];
                const double dc = gy[U + u] + dh * o * derivative(activation, c, cell_act[u]);
                dz[u] = dc * g * i * (1.0 - i);
                dz[U + u] = dc * st[U + u] * f * (1.0 - f);
                dz[2 * U + u] = dc * i * derivative(activation, z[2 * U + u], g);
                dz[3 * U + u] = dh * cell_act[u] * o * (1.0 - o);
                dc_prev[u] = dc * f;
            }
            if (t.requires_grad(bias)) {
                Tensor& gb = t.grad_buffer(bias);
                for (std::size_t j = 0; j < 4 * U; ++j) {
                    gb[j] += dz[j];
                }
            }
            if (t.requires_grad(input_kernel)) {
                const Tensor& xin = t.value(x);
                Tensor& gwx = t.grad_buffer(input_kernel);
                for (std::size_t d = 0; d < D; ++d) {
                    for (std::size_t j = 0; j < 4 * U; ++j) {
                        gwx.at(d, j) += xin[d] * dz[j];
                    }
                }
            }
            if (t.requires_grad(recurrent_kernel)) {
                Tensor& gwh = t.grad_buffer(recurrent_kernel);
                for (std::size_t u = 0; u < U; ++u) {
                    const double hv = st[u];
                    if (hv == 0.0) {
                        continue;
                    }
                    for (std::size_t j = 0; j < 4 * U; ++j) {
                        gwh.at(u, j) += hv * dz[j];
                    }
                }
            }
            if (t.requires_grad(x)) {
                const Tensor& wx = t.value(input_kernel);
                Tensor& gx = t.grad_buffer(x);
                for (std::size_t d = 0; d < D; ++d) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < 4 * U; ++j) {
                        acc += wx.at(d, j) * dz[j];
                    }
                    gx[d] += acc;
                }
            }
            if (t.requires_grad(state)) {
                const Tensor& wh = t.value(recurrent_kernel);
                Tensor& gs = t.grad_buffer(state);
                for (std::size_t u = 0; u < U; ++u) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < 4 * U; ++j) {
                        acc += wh.at(u, j) * dz[j];
                    }
                    gs[u] += acc;
                    gs[U + u] += dc_prev[u];
                }
            }
        });
}

NodeId slice(Tape& tape, NodeId x, std::size_t begin, std::size_t length) {
    const Tensor& in = tape.value(x);
    expect_rank(in, 1, "slice", "input");
    if (length == 0 || begin + length > in.size()) {
        mismatch("slice", "range [" + std::to_string(begin) + ", " +
                              std::to_string(begin + length) + ") outside " +
                              shape_string(in.shape()));
    }
    Tensor out({length});
    for (std::size_t i = 0; i < length; ++i) {
        out[i] = in[begin + i];
    }
    return tape.record("slice", std::move(out), {x}, [x, begin, length](Tape& t, NodeId self) {
        if (!t.requires_grad(x)) {
            return;
        }
        const Tensor& gy = t.grad(self);
        Tensor& gx = t.grad_buffer(x);
        for (std::size_t i = 0; i < length; ++i) {
            gx[begin + i] += gy[i];
        }
    });
}

NodeId stack_rows(Tape& tape, std::span<const NodeId> rows) {
    if (rows.empty()) {
        mismatch("stack_rows", "no rows");
    }
    const std::size_t n = tape.value(rows.front()).size();
    Tensor out({rows.size(), n});
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const Tensor& row = tape.value(rows[r]);
        expect_rank(row, 1, "stack_rows", "row");
        if (row.size() != n) {
            mismatch("stack_rows", "rows have different lengths");
        }
        for (std::size_t j = 0; j < n; ++j) {
            out.at(r, j) = row[j];
        }
    }
    std::vector<NodeId> inputs(rows.begin(), rows.end());
    return tape.record("stack_rows", std::move(out), inputs, [inputs, n](Tape& t, NodeId self) {
        const Tensor& gy = t.grad(self);
        for (std::size_t r = 0; r < inputs.size(); ++r) {
            if (!t.requires_grad(inputs[r])) {
                continue;
            }
            Tensor& g = t.grad_buffer(inputs[r]);
            for (std::size_t j = 0; j < n; ++j) {
                g[j] += gy.at(r, j);
            }
        }
    });
}

NodeId select_row(Tape& tape, NodeId x, std::size_t row) {
    const Tensor& in = tape.value(x);
    expect_rank(in, 2, "select_row", "input");
    if (row >= in.dim(0)) {
        mismatch("select_row", "row " + std::to_string(row) + " outside " +
                                   shape_string(in.shape()));
    }
    const std::size_t C = in.dim(1);
    Tensor out({C});
    for (std::size_t c = 0; c < C; ++c) {
        out[c] = in.at(row, c);
    }
    return tape.record("select_row", std::move(out), {x}, [x, row, C](Tape& t, NodeId self) {
        if (!t.requires_grad(x)) {
            return;
        }
        const Tensor& gy = t.grad(self);
        Tensor& gx = t.grad_buffer(x);
        for (std::size_t c = 0; c < C; ++c) {
            gx.at(row, c) += gy[c];
        }
    });
}

NodeId last_step(Tape& tape, NodeId x) {
    const Tensor& in = tape.value(x);
    expect_rank(in, 2, "last_step", "input");
    return select_row(tape, x, in.dim(0) - 1);
}

NodeId flatten(Tape& tape, NodeId x) {
    const Tensor& in = tape.value(x);
    Tensor out({in.size()}, in.values());
    return tape.record("flatten", std::move(out), {x}, [x](Tape& t, NodeId self) {
        if (!t.requires_grad(x)) {
            return;
        }
        const Tensor& gy = t.grad(self);
        Tensor& gx = t.grad_buffer(x);
        for (std::size_t i = 0; i < gy.size(); ++i) {
            gx[i] += gy[i];
        }
    });
}

NodeId add(Tape& tape, NodeId a, NodeId b) {
    const Tensor& va = tape.value(a);
    const Tensor& vb = tape.value(b);
    if (!va.same_shape(vb)) {
        mismatch("add", shape_string(va.shape()) + " vs " + shape_string(vb.shape()));
    }
    Tensor out = va;
    out += vb;
    return tape.record("add", std::move(out), {a, b}, [a, b](Tape& t, NodeId self) {
        const Tensor& gy = t.grad(self);
        if (t.requires_grad(a)) {
            t.grad_buffer(a) += gy;
        }
        if (t.requires_grad(b)) {
            t.grad_buffer(b) += gy;
        }
    });
}

NodeId mean(Tape& tape, NodeId x) {
    const Tensor& in = tape.value(x);
    double sum = 0.0;
    for (const double v : in.data()) {
        sum += v;
    }
    const double n = static_cast<double>(in.size());
    return tape.record("mean", Tensor::scalar(sum / n), {x}, [x, n](Tape& t, NodeId self) {
        if (!t.requires_grad(x)) {
            return;
        }
        const double g = t.grad(self)[0] / n;
        Tensor& gx = t.grad_buffer(x);
        for (std::size_t i = 0; i < gx.size(); ++i) {
            gx[i] += g;
        }
    });
}

double mape_loss(std::span<const double> prediction, std::span<const double> target) {
    if (prediction.size() != target.size() || target.empty()) {
        throw ShapeError("mape_loss: prediction and target lengths differ or are empty");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        if (!(std::abs(target[i]) > kMapeTargetGuard)) {
            throw NumericError("mape_loss: target element " + std::to_string(i) +
                               " is too close to zero");
        }
        sum += std::abs(target[i] - prediction[i]) / std::abs(target[i]);
    }
    return sum / static_cast<double>(target.size());
}

NodeId mape_loss(Tape& tape, NodeId prediction, const Tensor& target) {
    const Tensor& p = tape.value(prediction);
    if (p.size() != target.size()) {
        mismatch("mape_loss", "prediction " + shape_string(p.shape()) + " vs target " +
                                  shape_string(target.shape()));
    }
    const double loss = mape_loss(p.data(), target.data());
    return tape.record("mape_loss", Tensor::scalar(loss), {prediction},
                       [prediction, target](Tape& t, NodeId self) {
                           if (!t.requires_grad(prediction)) {
                               return;
                           }
                           const Tensor& p = t.value(prediction);
                           const double g = t.grad(self)[0] / static_cast<double>(p.size());
                           Tensor& gp = t.grad_buffer(prediction);
                           for (std::size_t i = 0; i < p.size(); ++i) {
                               const double diff = p[i] - target[i];
                               const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
                               gp[i] += g * sign / std::abs(target[i]);
                           }
                       });
}

}  // namespace tsforge::ad
