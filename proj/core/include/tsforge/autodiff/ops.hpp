#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tsforge/autodiff/tape.hpp"

namespace tsforge::ad {

enum class Activation { identity, tanh, relu };

[[nodiscard]] Activation parse_activation(const std::string& name);
[[nodiscard]] std::string to_string(Activation activation);

// Every primitive below records one node with an exact reverse rule.

/// x [n] -> x W + b, with W [n, m] and b [m].
NodeId dense(Tape& tape, NodeId x, NodeId weight, NodeId bias);

/// Causal dilated 1-D convolution over x [T, Cin] with kernel [K, Cin, Cout] and
/// bias [Cout]; output [T, Cout]. Tap k reads x[t - (K-1-k) * dilation], zero when
/// that index precedes the sequence.
NodeId conv1d_causal(Tape& tape, NodeId x, NodeId kernel, NodeId bias, std::size_t dilation);

/// Width-2, stride-2 max pooling along time: [T, C] -> [T / 2, C]. Ties route the
/// gradient to the earlier element.
NodeId max_pool2(Tape& tape, NodeId x);

NodeId tanh(Tape& tape, NodeId x);
NodeId relu(Tape& tape, NodeId x);
NodeId identity(Tape& tape, NodeId x);
NodeId activate(Tape& tape, NodeId x, Activation activation);

/// Inference-form batch normalization over the channel axis of x [T, C]:
/// gamma * (x - mean) / sqrt(var + eps) + beta, using stored running statistics.
NodeId batch_norm_inference(Tape& tape, NodeId x, NodeId gamma, NodeId beta,
                            NodeId running_mean, NodeId running_var, double eps = 1e-3);

/// One LSTM step. x [D]; state [2U] = [h; c]; input kernel [D, 4U]; recurrent kernel
/// [U, 4U]; bias [4U] in gate order (input, forget, candidate, output). Gates use
/// the logistic sigmoid; the candidate and the cell output use `activation`.
/// Returns the new state [2U] = [h'; c'].
NodeId lstm_cell(Tape& tape, NodeId x, NodeId state, NodeId input_kernel,
                 NodeId recurrent_kernel, NodeId bias, Activation activation);

/// Contiguous slice [begin, begin + length) of a rank-1 tensor.
NodeId slice(Tape& tape, NodeId x, std::size_t begin, std::size_t length);

/// Stacks rank-1 tensors of equal length into [rows.size(), n].
NodeId stack_rows(Tape& tape, std::span<const NodeId> rows);

/// Row `row` of x [T, C] as a rank-1 tensor; Row T-1 is the sequence-last selection.
NodeId select_row(Tape& tape, NodeId x, std::size_t row);
NodeId last_step(Tape& tape, NodeId x);

/// Reshape to rank 1 (row-major order preserved).
NodeId flatten(Tape& tape, NodeId x);

/// Elementwise sum of two equally shaped tensors.
NodeId add(Tape& tape, NodeId a, NodeId b);

/// Scalar mean of all elements.
NodeId mean(Tape& tape, NodeId x);

/// Smallest |target| accepted by the relative-error loss.
inline constexpr double kMapeTargetGuard = 1e-8;

/// mean(|t - p| / |t|); the subgradient at p == t is 0. Throws NumericError naming
/// the first target with |t| <= kMapeTargetGuard.
NodeId mape_loss(Tape& tape, NodeId prediction, const Tensor& target);

/// Same formula outside of a tape.
[[nodiscard]] double mape_loss(std::span<const double> prediction, std::span<const double> target);

}  // namespace tsforge::ad
