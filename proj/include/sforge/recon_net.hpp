#pragma once

#include "sforge/hypercube.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace sforge {

// ---------------------------------------------------------------------------
// Densely connected convolutional reconstruction network (RGB -> selected
// bands) with path-widening fusion, trained from scratch with Adam under the
// MRAE loss.  Tensors are channel-last: v[(y*width + x)*channels + c].
// ---------------------------------------------------------------------------

struct Tensor {
    int height = 0, width = 0, channels = 0;
    std::vector<double> v;

    static Tensor zeros(int h, int w, int c);
    double& at(int y, int x, int ch) {
        return v[(static_cast<std::size_t>(y) * width + x) * channels + ch];
    }
    double at(int y, int x, int ch) const {
        return v[(static_cast<std::size_t>(y) * width + x) * channels + ch];
    }
};

struct ConvLayer {
    int k = 3; // kernel side, 1 or 3, stride 1, same padding
    int c_in = 0, c_out = 0;
    std::vector<double> w; // [((ky*k + kx)*c_in + ci)*c_out + co]
    std::vector<double> b; // [co]
};

struct NetworkConfig {
    int n_dense = 3;   // dense layers D
    int growth = 8;    // feature channels g per layer
    int out_bands = 5; // output channels (selected wavelength count)

    void validate() const;
};

struct DenseLayer {
    ConvLayer path_a, path_b; // parallel 3x3 convs, k*g -> g each
    ConvLayer fuse;           // 1x1, 2g -> g
};

struct NetworkParams {
    NetworkConfig config;
    ConvLayer stem; // 3x3, 3 -> g
    std::vector<DenseLayer> dense;
    ConvLayer head; // 1x1, (D+1)*g -> out_bands
};

// Every trainable tensor in a fixed traversal order (weights and biases).
std::vector<std::vector<double>*> parameter_tensors(NetworkParams& p);
std::vector<const std::vector<double>*> parameter_tensors(const NetworkParams& p);

// He initialization: conv weights N(0, 2/fan_in) except the head, which uses
// N(0, 0.001^2); all biases zero.
NetworkParams he_init(const NetworkConfig& config, std::uint64_t seed);

Tensor conv_forward(const Tensor& in, const ConvLayer& layer);
void conv_backward(const Tensor& in, const ConvLayer& layer, const Tensor& dout,
                   Tensor& din, ConvLayer& grad, bool accumulate_din);
Tensor concat_channels(const std::vector<const Tensor*>& parts);

// One dense layer of feature reuse: concat(f_0..f_{k-1}) -> two
// parallel 3x3 convs -> concat -> 1x1 fusion -> rectifier.
Tensor dense_forward(const std::vector<Tensor>& features, const DenseLayer& layer);

// Intermediates retained for reverse mode.
struct DenseTrace {
    Tensor concat_in, pa, pb, concat_mid, fuse_pre;
};
struct ForwardTrace {
    Tensor stem_pre;
    std::vector<Tensor> features; // f_0..f_D, post-rectifier
    std::vector<DenseTrace> dense;
    Tensor concat_all;
    Tensor output;
};

Tensor network_forward(const Tensor& rgb, const NetworkParams& params);
ForwardTrace network_forward_trace(const Tensor& rgb, const NetworkParams& params);

// MRAE loss gradients for every parameter, with dense fan-out accumulation.
struct BackwardResult {
    double loss = 0.0;
    NetworkParams grads; // same shapes as the parameters
};
BackwardResult network_backward(const Tensor& rgb, const Tensor& gt,
                                const NetworkParams& params, double mrae_floor = 1e-4);

struct AdamState {
    NetworkParams m, v; // per-parameter moments
    long t = 0;
    double lr = 2e-4;
    double beta1 = 0.90, beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 1e-4;

    static AdamState init(const NetworkParams& params, double lr, double beta1,
                          double beta2, double eps, double weight_decay);
};

void adam_step(NetworkParams& params, const NetworkParams& grads, AdamState& state);

struct TrainConfig {
    int epochs = 5;
    int iters_per_epoch = 60;
    int batch = 4;
    int patch = 16;
    int stride = 4;
    double lr = 2e-4;
    double lr_decay = 0.98; // multiplicative per epoch
    double beta1 = 0.90, beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 1e-4;
    double mrae_floor = 1e-4;
    std::uint64_t seed = 0;

    void validate() const;
};

struct PatchPair {
    Tensor rgb, gt;
};

// Candidate top-left corners lie on the stride grid; the batch is drawn
// uniformly (with replacement) over the joint (image, position) candidates.
std::vector<PatchPair> sample_patches(const std::vector<PatchPair>& pairs, int patch,
                                      int stride, int batch, class Rng& rng);
std::size_t patch_candidate_count(int height, int width, int patch, int stride);

struct TrainResult {
    NetworkParams best_params;
    std::vector<double> trace;    // epoch-mean training MRAE
    std::vector<double> lr_trace; // lr in effect during each epoch
    int best_epoch = 0;           // 0-based argmin of trace
};

TrainResult train(const std::vector<PatchPair>& dataset, const NetworkConfig& net_config,
                  const TrainConfig& train_config);

// Full-image forward pass; negative outputs clipped to 0; band axis taken
// from the selected wavelength list.
Hypercube reconstruct(const NetworkParams& params, const Tensor& rgb,
                      const std::vector<double>& selected_wavelengths_nm);

// Versioned binary checkpoint, magic "HSDN1": config, wavelengths, tensors.
void save_checkpoint(const std::string& path, const NetworkParams& params,
                     const std::vector<double>& selected_wavelengths_nm);
std::pair<NetworkParams, std::vector<double>> load_checkpoint(const std::string& path);

void write_training_trace_csv(const std::string& path, const TrainResult& result);

} // namespace sforge
