#include "sforge/recon_net.hpp"
#include "sforge/csv.hpp"
#include "sforge/errors.hpp"
#include "sforge/metrics.hpp"
#include "sforge/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace sforge {

Tensor Tensor::zeros(int h, int w, int c) {
    Tensor t;
    t.height = h;
    t.width = w;
    t.channels = c;
    t.v.assign(static_cast<std::size_t>(h) * w * c, 0.0);
    return t;
}

void NetworkConfig::validate() const {
    if (n_dense < 1) throw BadConfig("network needs at least one dense layer");
    if (growth < 2) throw BadConfig("growth must be >= 2");
    if (out_bands < 1) throw BadConfig("out_bands must be >= 1");
}

namespace {

ConvLayer make_layer(int k, int c_in, int c_out) {
    ConvLayer l;
    l.k = k;
    l.c_in = c_in;
    l.c_out = c_out;
    l.w.assign(static_cast<std::size_t>(k) * k * c_in * c_out, 0.0);
    l.b.assign(c_out, 0.0);
    return l;
}

NetworkParams make_params(const NetworkConfig& config) {
    config.validate();
    NetworkParams p;
    p.config = config;
    p.stem = make_layer(3, 3, config.growth);
    p.dense.resize(config.n_dense);
    for (int d = 0; d < config.n_dense; ++d) {
        const int c_in = (d + 1) * config.growth; // stem feature + d prior layers
        p.dense[d].path_a = make_layer(3, c_in, config.growth);
        p.dense[d].path_b = make_layer(3, c_in, config.growth);
        p.dense[d].fuse = make_layer(1, 2 * config.growth, config.growth);
    }
    p.head = make_layer(1, (config.n_dense + 1) * config.growth, config.out_bands);
    return p;
}

void relu_inplace(Tensor& t) {
    for (double& x : t.v)
        if (x < 0.0) x = 0.0;
}

// dL/d(pre-activation) = dL/d(post) where pre > 0, else 0.
Tensor relu_backward(const Tensor& pre, const Tensor& dpost) {
    Tensor d = dpost;
    for (std::size_t i = 0; i < d.v.size(); ++i)
        if (pre.v[i] <= 0.0) d.v[i] = 0.0;
    return d;
}

} // namespace

std::vector<std::vector<double>*> parameter_tensors(NetworkParams& p) {
    std::vector<std::vector<double>*> out;
    out.push_back(&p.stem.w);
    out.push_back(&p.stem.b);
    for (auto& d : p.dense) {
        out.push_back(&d.path_a.w);
        out.push_back(&d.path_a.b);
        out.push_back(&d.path_b.w);
        out.push_back(&d.path_b.b);
        out.push_back(&d.fuse.w);
        out.push_back(&d.fuse.b);
    }
    out.push_back(&p.head.w);
    out.push_back(&p.head.b);
    return out;
}

std::vector<const std::vector<double>*> parameter_tensors(const NetworkParams& p) {
    auto mutable_view = parameter_tensors(const_cast<NetworkParams&>(p));
    return {mutable_view.begin(), mutable_view.end()};
}

NetworkParams he_init(const NetworkConfig& config, std::uint64_t seed) {
    NetworkParams p = make_params(config);
    Rng rng(seed);
    auto fill = [&](ConvLayer& layer, double sd) {
        for (double& w : layer.w) w = rng.gaussian(0.0, sd);
        // biases stay zero
    };
    auto he_sd = [](const ConvLayer& l) {
        return std::sqrt(2.0 / (static_cast<double>(l.k) * l.k * l.c_in));
    };
    fill(p.stem, he_sd(p.stem));
    for (auto& d : p.dense) {
        fill(d.path_a, he_sd(d.path_a));
        fill(d.path_b, he_sd(d.path_b));
        fill(d.fuse, he_sd(d.fuse));
    }
    fill(p.head, 0.001);
    return p;
}

Tensor conv_forward(const Tensor& in, const ConvLayer& layer) {
    if (in.channels != layer.c_in)
        throw ShapeMismatch("conv input channels != layer c_in");
    const int r = layer.k / 2;
    Tensor out = Tensor::zeros(in.height, in.width, layer.c_out);
    for (int y = 0; y < in.height; ++y) {
        for (int x = 0; x < in.width; ++x) {
            double* o = &out.v[(static_cast<std::size_t>(y) * out.width + x) *
                               layer.c_out];
            for (int co = 0; co < layer.c_out; ++co) o[co] = layer.b[co];
            for (int ky = 0; ky < layer.k; ++ky) {
                const int iy = y + ky - r;
                if (iy < 0 || iy >= in.height) continue;
                for (int kx = 0; kx < layer.k; ++kx) {
                    const int ix = x + kx - r;
                    if (ix < 0 || ix >= in.width) continue;
                    const double* src =
                        &in.v[(static_cast<std::size_t>(iy) * in.width + ix) *
                              layer.c_in];
                    const double* wk =
                        &layer.w[(static_cast<std::size_t>(ky) * layer.k + kx) *
                                 layer.c_in * layer.c_out];
                    for (int ci = 0; ci < layer.c_in; ++ci) {
                        const double sv = src[ci];
                        if (sv == 0.0) continue;
                        const double* wrow = wk + static_cast<std::size_t>(ci) * layer.c_out;
                        for (int co = 0; co < layer.c_out; ++co) o[co] += sv * wrow[co];
                    }
                }
            }
        }
    }
    return out;
}

void conv_backward(const Tensor& in, const ConvLayer& layer, const Tensor& dout,
                   Tensor& din, ConvLayer& grad, bool accumulate_din) {
    if (in.channels != layer.c_in || dout.channels != layer.c_out)
        throw ShapeMismatch("conv_backward channel mismatch");
    const int r = layer.k / 2;
    if (!accumulate_din) din = Tensor::zeros(in.height, in.width, layer.c_in);
    grad = make_layer(layer.k, layer.c_in, layer.c_out);

    for (int y = 0; y < in.height; ++y) {
        for (int x = 0; x < in.width; ++x) {
            const double* d =
                &dout.v[(static_cast<std::size_t>(y) * dout.width + x) * layer.c_out];
            for (int co = 0; co < layer.c_out; ++co) grad.b[co] += d[co];
            for (int ky = 0; ky < layer.k; ++ky) {
                const int iy = y + ky - r;
                if (iy < 0 || iy >= in.height) continue;
                for (int kx = 0; kx < layer.k; ++kx) {
                    const int ix = x + kx - r;
                    if (ix < 0 || ix >= in.width) continue;
                    const std::size_t in_off =
                        (static_cast<std::size_t>(iy) * in.width + ix) * layer.c_in;
                    const std::size_t w_off =
                        (static_cast<std::size_t>(ky) * layer.k + kx) * layer.c_in *
                        layer.c_out;
                    for (int ci = 0; ci < layer.c_in; ++ci) {
                        const double sv = in.v[in_off + ci];
                        const double* wrow =
                            &layer.w[w_off + static_cast<std::size_t>(ci) * layer.c_out];
                        double* grow =
                            &grad.w[w_off + static_cast<std::size_t>(ci) * layer.c_out];
                        double acc = 0.0;
                        for (int co = 0; co < layer.c_out; ++co) {
                            grow[co] += sv * d[co];
                            acc += wrow[co] * d[co];
                        }
                        din.v[in_off + ci] += acc;
                    }
                }
            }
        }
    }
}

Tensor concat_channels(const std::vector<const Tensor*>& parts) {
    if (parts.empty()) throw ShapeMismatch("concat of zero tensors");
    int channels = 0;
    for (const Tensor* t : parts) {
        if (t->height != parts[0]->height || t->width != parts[0]->width)
            throw ShapeMismatch("concat spatial dims differ");
        channels += t->channels;
    }
    Tensor out = Tensor::zeros(parts[0]->height, parts[0]->width, channels);
    const std::size_t pixels =
        static_cast<std::size_t>(out.height) * out.width;
    for (std::size_t p = 0; p < pixels; ++p) {
        double* dst = &out.v[p * channels];
        for (const Tensor* t : parts) {
            const double* src = &t->v[p * t->channels];
            std::memcpy(dst, src, sizeof(double) * t->channels);
            dst += t->channels;
        }
    }
    return out;
}

namespace {

// Scatter a channel-concatenated gradient back into per-part accumulators.
void split_accumulate(const Tensor& dconcat, std::vector<Tensor*> parts) {
    int channels = 0;
    for (Tensor* t : parts) channels += t->channels;
    if (channels != dconcat.channels) throw ShapeMismatch("split channel mismatch");
    const std::size_t pixels =
        static_cast<std::size_t>(dconcat.height) * dconcat.width;
    for (std::size_t p = 0; p < pixels; ++p) {
        const double* src = &dconcat.v[p * channels];
        for (Tensor* t : parts) {
            double* dst = &t->v[p * t->channels];
            for (int c = 0; c < t->channels; ++c) dst[c] += src[c];
            src += t->channels;
        }
    }
}

} // namespace

Tensor dense_forward(const std::vector<Tensor>& features, const DenseLayer& layer) {
    std::vector<const Tensor*> parts;
    parts.reserve(features.size());
    for (const Tensor& f : features) parts.push_back(&f);
    Tensor cat = concat_channels(parts);
    const Tensor pa = conv_forward(cat, layer.path_a);
    const Tensor pb = conv_forward(cat, layer.path_b);
    Tensor mid = concat_channels({&pa, &pb});
    Tensor out = conv_forward(mid, layer.fuse);
    relu_inplace(out);
    return out;
}

ForwardTrace network_forward_trace(const Tensor& rgb, const NetworkParams& params) {
    if (rgb.channels != 3) throw ShapeMismatch("network input must have 3 channels");
    ForwardTrace tr;
    tr.stem_pre = conv_forward(rgb, params.stem);
    Tensor f0 = tr.stem_pre;
    relu_inplace(f0);
    tr.features.push_back(std::move(f0));

    for (const DenseLayer& layer : params.dense) {
        DenseTrace dt;
        std::vector<const Tensor*> parts;
        for (const Tensor& f : tr.features) parts.push_back(&f);
        dt.concat_in = concat_channels(parts);
        dt.pa = conv_forward(dt.concat_in, layer.path_a);
        dt.pb = conv_forward(dt.concat_in, layer.path_b);
        dt.concat_mid = concat_channels({&dt.pa, &dt.pb});
        dt.fuse_pre = conv_forward(dt.concat_mid, layer.fuse);
        Tensor fk = dt.fuse_pre;
        relu_inplace(fk);
        tr.features.push_back(std::move(fk));
        tr.dense.push_back(std::move(dt));
    }

    std::vector<const Tensor*> all;
    for (const Tensor& f : tr.features) all.push_back(&f);
    tr.concat_all = concat_channels(all);
    tr.output = conv_forward(tr.concat_all, params.head);
    return tr;
}

Tensor network_forward(const Tensor& rgb, const NetworkParams& params) {
    return network_forward_trace(rgb, params).output;
}

BackwardResult network_backward(const Tensor& rgb, const Tensor& gt,
                                const NetworkParams& params, double mrae_floor) {
    const ForwardTrace tr = network_forward_trace(rgb, params);
    if (gt.v.size() != tr.output.v.size())
        throw ShapeMismatch("ground truth shape != network output");

    BackwardResult res;
    res.grads = make_params(params.config);
    auto [loss, g] = mrae_loss_grad(tr.output.v, gt.v, mrae_floor);
    res.loss = loss;

    Tensor dout = Tensor::zeros(tr.output.height, tr.output.width, tr.output.channels);
    dout.v = std::move(g);

    // Head.
    Tensor dconcat_all;
    conv_backward(tr.concat_all, params.head, dout, dconcat_all, res.grads.head, false);

    // Fan-out: every feature map collects gradient from the head concat and
    // from every later dense layer that consumed it.
    const int n_feat = static_cast<int>(tr.features.size());
    std::vector<Tensor> dfeat(n_feat);
    for (int i = 0; i < n_feat; ++i)
        dfeat[i] = Tensor::zeros(tr.features[i].height, tr.features[i].width,
                                 tr.features[i].channels);
    {
        std::vector<Tensor*> parts;
        for (auto& t : dfeat) parts.push_back(&t);
        split_accumulate(dconcat_all, parts);
    }

    for (int k = static_cast<int>(params.dense.size()); k >= 1; --k) {
        const DenseLayer& layer = params.dense[k - 1];
        const DenseTrace& dt = tr.dense[k - 1];
        DenseLayer& glayer = res.grads.dense[k - 1];

        const Tensor dfuse_pre = relu_backward(dt.fuse_pre, dfeat[k]);
        Tensor dconcat_mid;
        conv_backward(dt.concat_mid, layer.fuse, dfuse_pre, dconcat_mid, glayer.fuse,
                      false);

        Tensor dpa = Tensor::zeros(dt.pa.height, dt.pa.width, dt.pa.channels);
        Tensor dpb = Tensor::zeros(dt.pb.height, dt.pb.width, dt.pb.channels);
        split_accumulate(dconcat_mid, {&dpa, &dpb});

        Tensor dconcat_in =
            Tensor::zeros(dt.concat_in.height, dt.concat_in.width, dt.concat_in.channels);
        conv_backward(dt.concat_in, layer.path_a, dpa, dconcat_in, glayer.path_a, true);
        conv_backward(dt.concat_in, layer.path_b, dpb, dconcat_in, glayer.path_b, true);

        std::vector<Tensor*> prior;
        for (int j = 0; j < k; ++j) prior.push_back(&dfeat[j]);
        split_accumulate(dconcat_in, prior);
    }

    const Tensor dstem_pre = relu_backward(tr.stem_pre, dfeat[0]);
    Tensor din_unused;
    conv_backward(rgb, params.stem, dstem_pre, din_unused, res.grads.stem, false);
    return res;
}

AdamState AdamState::init(const NetworkParams& params, double lr, double beta1,
                          double beta2, double eps, double weight_decay) {
    AdamState s;
    s.m = make_params(params.config);
    s.v = make_params(params.config);
    s.lr = lr;
    s.beta1 = beta1;
    s.beta2 = beta2;
    s.eps = eps;
    s.weight_decay = weight_decay;
    return s;
}

void adam_step(NetworkParams& params, const NetworkParams& grads, AdamState& state) {
    ++state.t;
    const auto p_tensors = parameter_tensors(params);
    const auto g_tensors = parameter_tensors(grads);
    const auto m_tensors = parameter_tensors(state.m);
    const auto v_tensors = parameter_tensors(state.v);
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));

    for (std::size_t ti = 0; ti < p_tensors.size(); ++ti) {
        auto& p = *p_tensors[ti];
        const auto& g = *g_tensors[ti];
        auto& m = *m_tensors[ti];
        auto& v = *v_tensors[ti];
        if (p.size() != g.size()) throw ShapeMismatch("adam gradient shape mismatch");
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double gi = g[i] + state.weight_decay * p[i];
            m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * gi;
            v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * gi * gi;
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            p[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
        }
    }
}

void TrainConfig::validate() const {
    if (epochs < 1 || iters_per_epoch < 1) throw BadConfig("epochs/iters must be >= 1");
    if (batch < 1) throw BadConfig("batch must be >= 1");
    if (patch < 1 || stride < 1) throw BadConfig("patch/stride must be >= 1");
    if (!(lr > 0.0)) throw BadConfig("lr must be positive");
    if (!(lr_decay > 0.0 && lr_decay <= 1.0)) throw BadConfig("lr_decay in (0,1]");
    if (!(mrae_floor > 0.0)) throw BadConfig("mrae_floor must be positive");
}

std::size_t patch_candidate_count(int height, int width, int patch, int stride) {
    if (patch > height || patch > width) throw BadPatch("patch exceeds image");
    const std::size_t ny = static_cast<std::size_t>((height - patch) / stride) + 1;
    const std::size_t nx = static_cast<std::size_t>((width - patch) / stride) + 1;
    return ny * nx;
}

namespace {

Tensor crop(const Tensor& t, int y0, int x0, int side) {
    Tensor out = Tensor::zeros(side, side, t.channels);
    for (int y = 0; y < side; ++y)
        std::memcpy(&out.v[static_cast<std::size_t>(y) * side * t.channels],
                    &t.v[((static_cast<std::size_t>(y0) + y) * t.width + x0) *
                         t.channels],
                    sizeof(double) * side * t.channels);
    return out;
}

} // namespace

std::vector<PatchPair> sample_patches(const std::vector<PatchPair>& pairs, int patch,
                                      int stride, int batch, Rng& rng) {
    if (pairs.empty()) throw BadConfig("sample_patches: empty dataset");
    // Joint candidate index space across images.
    std::vector<std::size_t> offsets(pairs.size() + 1, 0);
    std::vector<int> nx(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const Tensor& rgb = pairs[i].rgb;
        if (rgb.height != pairs[i].gt.height || rgb.width != pairs[i].gt.width)
            throw ShapeMismatch("rgb/gt spatial dims differ");
        offsets[i + 1] =
            offsets[i] + patch_candidate_count(rgb.height, rgb.width, patch, stride);
        nx[i] = (rgb.width - patch) / stride + 1;
    }
    std::vector<PatchPair> out;
    out.reserve(batch);
    for (int b = 0; b < batch; ++b) {
        const std::size_t u = rng.below(offsets.back());
        std::size_t img = 0;
        while (u >= offsets[img + 1]) ++img;
        const std::size_t local = u - offsets[img];
        const int y0 = static_cast<int>(local / nx[img]) * stride;
        const int x0 = static_cast<int>(local % nx[img]) * stride;
        out.push_back({crop(pairs[img].rgb, y0, x0, patch),
                       crop(pairs[img].gt, y0, x0, patch)});
    }
    return out;
}

TrainResult train(const std::vector<PatchPair>& dataset, const NetworkConfig& net_config,
                  const TrainConfig& train_config) {
    net_config.validate();
    train_config.validate();
    if (dataset.empty()) throw BadConfig("train: empty dataset");
    for (const auto& pair : dataset)
        if (pair.gt.channels != net_config.out_bands)
            throw ShapeMismatch("dataset band count != network out_bands");

    NetworkParams params = he_init(net_config, train_config.seed);
    AdamState state =
        AdamState::init(params, train_config.lr, train_config.beta1, train_config.beta2,
                        train_config.eps, train_config.weight_decay);
    Rng patch_rng(train_config.seed + 0x9e3779b97f4a7c15ull);

    TrainResult result;
    result.best_params = params;
    double best_mrae = std::numeric_limits<double>::infinity();

    for (int epoch = 0; epoch < train_config.epochs; ++epoch) {
        double epoch_sum = 0.0;
        for (int iter = 0; iter < train_config.iters_per_epoch; ++iter) {
            const std::vector<PatchPair> batch =
                sample_patches(dataset, train_config.patch, train_config.stride,
                               train_config.batch, patch_rng);
            NetworkParams grads = make_params(net_config);
            auto grad_tensors = parameter_tensors(grads);
            double batch_loss = 0.0;
            for (const PatchPair& item : batch) {
                BackwardResult back = network_backward(item.rgb, item.gt, params,
                                                       train_config.mrae_floor);
                batch_loss += back.loss;
                auto item_tensors = parameter_tensors(back.grads);
                for (std::size_t t = 0; t < grad_tensors.size(); ++t)
                    for (std::size_t i = 0; i < grad_tensors[t]->size(); ++i)
                        (*grad_tensors[t])[i] += (*item_tensors[t])[i];
            }
            const double inv = 1.0 / batch.size();
            for (auto* t : grad_tensors)
                for (double& x : *t) x *= inv;
            batch_loss *= inv;
            if (!std::isfinite(batch_loss))
                throw DivergenceError("non-finite loss at epoch " +
                                      std::to_string(epoch + 1) + ", iteration " +
                                      std::to_string(iter + 1));
            adam_step(params, grads, state);
            epoch_sum += batch_loss;
        }
        const double epoch_mrae = epoch_sum / train_config.iters_per_epoch;
        result.trace.push_back(epoch_mrae);
        result.lr_trace.push_back(state.lr);
        if (epoch_mrae < best_mrae) {
            best_mrae = epoch_mrae;
            result.best_params = params;
            result.best_epoch = epoch;
        }
        state.lr *= train_config.lr_decay;
    }
    return result;
}

Hypercube reconstruct(const NetworkParams& params, const Tensor& rgb,
                      const std::vector<double>& selected_wavelengths_nm) {
    if (static_cast<int>(selected_wavelengths_nm.size()) != params.config.out_bands)
        throw ShapeMismatch("wavelength list != network out_bands");
    const Tensor out = network_forward(rgb, params);
    Hypercube cube;
    cube.height = out.height;
    cube.width = out.width;
    cube.bands = out.channels;
    cube.wavelengths_nm = selected_wavelengths_nm;
    cube.kind = CubeKind::reflectance;
    cube.data.resize(out.v.size());
    for (std::size_t i = 0; i < out.v.size(); ++i)
        cube.data[i] = out.v[i] < 0.0 ? 0.0 : out.v[i];
    return cube;
}

// -- checkpoint I/O -----------------------------------------------------------

namespace {

void put_u32(std::ofstream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::ifstream& in) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4))
        throw ParseError("checkpoint truncated");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_doubles(std::ofstream& out, const std::vector<double>& v) {
    put_u32(out, static_cast<std::uint32_t>(v.size()));
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> get_doubles(std::ifstream& in) {
    const std::uint32_t n = get_u32(in);
    std::vector<double> v(n);
    if (!in.read(reinterpret_cast<char*>(v.data()),
                 static_cast<std::streamsize>(n * sizeof(double))))
        throw ParseError("checkpoint truncated");
    return v;
}

} // namespace

void save_checkpoint(const std::string& path, const NetworkParams& params,
                     const std::vector<double>& selected_wavelengths_nm) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write("HSDN1\n", 6);
    put_u32(out, static_cast<std::uint32_t>(params.config.n_dense));
    put_u32(out, static_cast<std::uint32_t>(params.config.growth));
    put_u32(out, static_cast<std::uint32_t>(params.config.out_bands));
    put_doubles(out, selected_wavelengths_nm);
    for (const auto* t : parameter_tensors(params)) put_doubles(out, *t);
    if (!out) throw IoError("write failed: " + path);
}

std::pair<NetworkParams, std::vector<double>> load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    char magic[6];
    if (!in.read(magic, 6) || std::memcmp(magic, "HSDN1\n", 6) != 0)
        throw ParseError(path + ": missing HSDN1 magic");
    NetworkConfig config;
    config.n_dense = static_cast<int>(get_u32(in));
    config.growth = static_cast<int>(get_u32(in));
    config.out_bands = static_cast<int>(get_u32(in));
    std::vector<double> wavelengths = get_doubles(in);
    NetworkParams params = make_params(config);
    for (auto* t : parameter_tensors(params)) {
        std::vector<double> data = get_doubles(in);
        if (data.size() != t->size()) throw ParseError(path + ": tensor size mismatch");
        *t = std::move(data);
    }
    return {std::move(params), std::move(wavelengths)};
}

void write_training_trace_csv(const std::string& path, const TrainResult& result) {
    CsvTable t;
    t.header = {"epoch", "mean_mrae", "lr"};
    for (std::size_t e = 0; e < result.trace.size(); ++e)
        t.rows.push_back({std::to_string(e + 1), fmt_g17(result.trace[e]),
                          fmt_g17(result.lr_trace[e])});
    write_csv(path, t);
}

} // namespace sforge
