#include "linedraw/ranker.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "linedraw/parallel.hpp"

namespace linedraw {

void ScorerInput::validate() const {
    require_same_shape(drawing, depth, "scorer input drawing vs depth");
    for (const ScalarImage& o : shaded) require_same_shape(drawing, o, "scorer input drawing vs shaded image");
    if (drawing.empty()) throw std::invalid_argument("dimension mismatch: empty scorer input");
}

double Scorer::score_and_grad(const ScorerInput& input, ScalarImage& grad) const {
    grad = grad_drawing(input);
    return score(input);
}

// ---------------------------------------------------------------------------
// Reference and constant scorers

ReferenceScorer::ReferenceScorer(Drawing target) : target_(std::move(target)) {
    if (target_.empty()) throw std::invalid_argument("reference scorer needs a nonempty target");
}

double ReferenceScorer::score(const ScorerInput& input) const {
    require_same_shape(target_, input.drawing, "reference target vs drawing");
    double sum = 0.0;
    for (std::size_t i = 0; i < target_.size(); ++i) {
        const double d = input.drawing[i] - target_[i];
        sum += d * d;
    }
    return -sum / static_cast<double>(target_.size());
}

ScalarImage ReferenceScorer::grad_drawing(const ScorerInput& input) const {
    ScalarImage grad;
    score_and_grad(input, grad);
    return grad;
}

double ReferenceScorer::score_and_grad(const ScorerInput& input, ScalarImage& grad) const {
    require_same_shape(target_, input.drawing, "reference target vs drawing");
    const double n = static_cast<double>(target_.size());
    if (!grad.same_shape(target_)) grad = ScalarImage(target_.width(), target_.height());
    double sum = 0.0;
    for (std::size_t i = 0; i < target_.size(); ++i) {
        const double d = input.drawing[i] - target_[i];
        sum += d * d;
        grad[i] = -2.0 * d / n;
    }
    return -sum / n;
}

ScalarImage ConstantScorer::grad_drawing(const ScorerInput& input) const {
    return ScalarImage(input.drawing.width(), input.drawing.height(), 0.0);
}

// ---------------------------------------------------------------------------
// Mini scorer

namespace {

struct Layout {
    std::array<std::size_t, 3> weight{};
    std::array<std::size_t, 3> bias{};
    std::array<int, 3> cin{};
    std::size_t linear_w = 0;
    std::size_t linear_b = 0;
    std::size_t total = 0;
};

Layout layout_of(const MiniTopology& t) {
    if (t.in_channels != 8) throw std::invalid_argument("mini scorer expects 8 input channels");
    if (t.kernel < 1 || t.kernel % 2 == 0 || t.stride < 1 || t.downsample < 1)
        throw std::invalid_argument("invalid mini scorer topology");
    for (int c : t.channels)
        if (c < 1) throw std::invalid_argument("invalid mini scorer topology");
    Layout l;
    std::size_t off = 0;
    int cin = t.in_channels;
    for (int k = 0; k < 3; ++k) {
        l.cin[k] = cin;
        l.weight[k] = off;
        off += static_cast<std::size_t>(t.channels[k]) * cin * t.kernel * t.kernel;
        l.bias[k] = off;
        off += t.channels[k];
        cin = t.channels[k];
    }
    l.linear_w = off;
    off += t.channels[2];
    l.linear_b = off;
    l.total = off + 1;
    return l;
}

struct Tensor {
    int c = 0, h = 0, w = 0;
    std::vector<double> v;
    double* plane(int ch) { return v.data() + static_cast<std::size_t>(ch) * h * w; }
    const double* plane(int ch) const { return v.data() + static_cast<std::size_t>(ch) * h * w; }
};

int ceil_div(int a, int b) { return (a + b - 1) / b; }

Tensor downsample_input(const ScorerInput& input, int factor) {
    const int W = input.drawing.width(), H = input.drawing.height();
    Tensor t;
    t.c = 8;
    t.h = ceil_div(H, factor);
    t.w = ceil_div(W, factor);
    t.v.assign(static_cast<std::size_t>(t.c) * t.h * t.w, 0.0);
    const ScalarImage* channels[8] = {&input.drawing, &input.depth, &input.shaded[0], &input.shaded[1],
                                      &input.shaded[2], &input.shaded[3], &input.shaded[4], &input.shaded[5]};
    for (int ch = 0; ch < 8; ++ch) {
        double* out = t.plane(ch);
        const ScalarImage& src = *channels[ch];
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) out[(y / factor) * t.w + x / factor] += src(x, y);
        for (int cy = 0; cy < t.h; ++cy) {
            const int ny = std::min(H, (cy + 1) * factor) - cy * factor;
            for (int cx = 0; cx < t.w; ++cx) {
                const int nx = std::min(W, (cx + 1) * factor) - cx * factor;
                out[cy * t.w + cx] /= static_cast<double>(nx * ny);
            }
        }
    }
    return t;
}

void conv_forward(const Tensor& in, const double* weight, const double* bias, int cout, int k, int s, Tensor& z) {
    const int pad = k / 2;
    z.c = cout;
    z.h = (in.h + 2 * pad - k) / s + 1;
    z.w = (in.w + 2 * pad - k) / s + 1;
    z.v.assign(static_cast<std::size_t>(z.c) * z.h * z.w, 0.0);
    for (int co = 0; co < cout; ++co) {
        double* out = z.plane(co);
        std::fill(out, out + z.h * z.w, bias[co]);
        for (int ci = 0; ci < in.c; ++ci) {
            const double* src = in.plane(ci);
            for (int ky = 0; ky < k; ++ky) {
                for (int kx = 0; kx < k; ++kx) {
                    const double wv = weight[((static_cast<std::size_t>(co) * in.c + ci) * k + ky) * k + kx];
                    for (int oy = 0; oy < z.h; ++oy) {
                        const int iy = oy * s - pad + ky;
                        if (iy < 0 || iy >= in.h) continue;
                        const double* row = src + static_cast<std::size_t>(iy) * in.w;
                        double* orow = out + static_cast<std::size_t>(oy) * z.w;
                        for (int ox = 0; ox < z.w; ++ox) {
                            const int ix = ox * s - pad + kx;
                            if (ix < 0 || ix >= in.w) continue;
                            orow[ox] += wv * row[ix];
                        }
                    }
                }
            }
        }
    }
}

// dz -> weight/bias gradients (accumulated) and input gradient (overwritten).
void conv_backward(const Tensor& in, const double* weight, int k, int s, const Tensor& dz, double* dweight,
                   double* dbias, Tensor* din) {
    const int pad = k / 2;
    if (din) {
        din->c = in.c;
        din->h = in.h;
        din->w = in.w;
        din->v.assign(in.v.size(), 0.0);
    }
    for (int co = 0; co < dz.c; ++co) {
        const double* g = dz.plane(co);
        if (dbias) {
            double acc = 0.0;
            for (int i = 0; i < dz.h * dz.w; ++i) acc += g[i];
            dbias[co] += acc;
        }
        for (int ci = 0; ci < in.c; ++ci) {
            const double* src = in.plane(ci);
            double* dsrc = din ? din->plane(ci) : nullptr;
            for (int ky = 0; ky < k; ++ky) {
                for (int kx = 0; kx < k; ++kx) {
                    const std::size_t widx = ((static_cast<std::size_t>(co) * in.c + ci) * k + ky) * k + kx;
                    const double wv = weight[widx];
                    double acc = 0.0;
                    for (int oy = 0; oy < dz.h; ++oy) {
                        const int iy = oy * s - pad + ky;
                        if (iy < 0 || iy >= in.h) continue;
                        const double* grow = g + static_cast<std::size_t>(oy) * dz.w;
                        const std::size_t ibase = static_cast<std::size_t>(iy) * in.w;
                        for (int ox = 0; ox < dz.w; ++ox) {
                            const int ix = ox * s - pad + kx;
                            if (ix < 0 || ix >= in.w) continue;
                            acc += grow[ox] * src[ibase + ix];
                            if (dsrc) dsrc[ibase + ix] += wv * grow[ox];
                        }
                    }
                    if (dweight) dweight[widx] += acc;
                }
            }
        }
    }
}

}  // namespace

MiniScorer::MiniScorer(MiniTopology topology) : topology_(topology) {
    params_.assign(layout_of(topology_).total, 0.0);
}

MiniScorer::MiniScorer(MiniTopology topology, std::uint64_t seed) : MiniScorer(topology) {
    seed_ = seed;
    const Layout l = layout_of(topology_);
    std::mt19937_64 rng(seed);
    const int k = topology_.kernel;
    for (int layer = 0; layer < 3; ++layer) {
        const int fan_in = l.cin[layer] * k * k;
        std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / fan_in));
        const std::size_t n = l.bias[layer] - l.weight[layer];
        for (std::size_t i = 0; i < n; ++i)
            params_[l.weight[layer] + i] = static_cast<double>(static_cast<float>(dist(rng)));
    }
    std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / topology_.channels[2]));
    for (int i = 0; i < topology_.channels[2]; ++i)
        params_[l.linear_w + i] = static_cast<double>(static_cast<float>(dist(rng)));
}

MiniScorer MiniScorer::zeros(MiniTopology topology) { return MiniScorer(topology); }

double MiniScorer::forward_backward(const ScorerInput& input, double upstream, std::vector<double>* param_grad,
                                    ScalarImage* drawing_grad) const {
    input.validate();
    const Layout l = layout_of(topology_);
    if (params_.size() != l.total) throw std::invalid_argument("mini scorer parameter count mismatch");
    if (param_grad && param_grad->size() != l.total) param_grad->assign(l.total, 0.0);
    const int k = topology_.kernel, s = topology_.stride;

    std::array<Tensor, 4> act;  // act[0] = input, act[i+1] = relu(z[i])
    std::array<Tensor, 3> z;
    act[0] = downsample_input(input, topology_.downsample);
    for (int layer = 0; layer < 3; ++layer) {
        conv_forward(act[layer], params_.data() + l.weight[layer], params_.data() + l.bias[layer],
                     topology_.channels[layer], k, s, z[layer]);
        act[layer + 1] = z[layer];
        for (double& v : act[layer + 1].v) v = std::max(v, 0.0);
    }
    const Tensor& last = act[3];
    const int C = last.c;
    const double area = static_cast<double>(last.h) * last.w;
    std::vector<double> pooled(C, 0.0);
    for (int c = 0; c < C; ++c) {
        const double* p = last.plane(c);
        double acc = 0.0;
        for (int i = 0; i < last.h * last.w; ++i) acc += p[i];
        pooled[c] = acc / area;
    }
    double out = params_[l.linear_b];
    for (int c = 0; c < C; ++c) out += params_[l.linear_w + c] * pooled[c];

    if (!param_grad && !drawing_grad) return out;

    double* pg = param_grad ? param_grad->data() : nullptr;
    if (pg) {
        pg[l.linear_b] += upstream;
        for (int c = 0; c < C; ++c) pg[l.linear_w + c] += upstream * pooled[c];
    }
    Tensor grad;
    grad.c = C;
    grad.h = last.h;
    grad.w = last.w;
    grad.v.assign(last.v.size(), 0.0);
    for (int c = 0; c < C; ++c) {
        const double g = upstream * params_[l.linear_w + c] / area;
        double* gp = grad.plane(c);
        std::fill(gp, gp + grad.h * grad.w, g);
    }
    for (int layer = 2; layer >= 0; --layer) {
        // ReLU with subgradient 0 at 0.
        for (std::size_t i = 0; i < grad.v.size(); ++i)
            if (!(z[layer].v[i] > 0.0)) grad.v[i] = 0.0;
        const bool need_input = layer > 0 || drawing_grad != nullptr;
        Tensor din;
        conv_backward(act[layer], params_.data() + l.weight[layer], k, s, grad, pg ? pg + l.weight[layer] : nullptr,
                      pg ? pg + l.bias[layer] : nullptr, need_input ? &din : nullptr);
        if (!need_input) break;
        grad = std::move(din);
    }
    if (drawing_grad) {
        const int W = input.drawing.width(), H = input.drawing.height(), f = topology_.downsample;
        *drawing_grad = ScalarImage(W, H, 0.0);
        const double* g0 = grad.plane(0);
        for (int y = 0; y < H; ++y) {
            const int cy = y / f;
            const int ny = std::min(H, (cy + 1) * f) - cy * f;
            for (int x = 0; x < W; ++x) {
                const int cx = x / f;
                const int nx = std::min(W, (cx + 1) * f) - cx * f;
                (*drawing_grad)(x, y) = g0[cy * grad.w + cx] / static_cast<double>(nx * ny);
            }
        }
    }
    return out;
}

double MiniScorer::score(const ScorerInput& input) const { return forward_backward(input, 1.0, nullptr, nullptr); }

ScalarImage MiniScorer::grad_drawing(const ScorerInput& input) const {
    ScalarImage grad;
    forward_backward(input, 1.0, nullptr, &grad);
    return grad;
}

double MiniScorer::score_and_grad(const ScorerInput& input, ScalarImage& grad) const {
    return forward_backward(input, 1.0, nullptr, &grad);
}

// ---------------------------------------------------------------------------
// Losses

double hinge_rank_loss(std::span<const std::pair<double, double>> best_other_scores, double margin) {
    if (!(margin > 0.0)) throw std::invalid_argument("margin must be positive");
    if (best_other_scores.empty()) throw std::invalid_argument("no preference pairs");
    double loss = 0.0;
    for (const auto& [best, other] : best_other_scores) loss += std::max(margin - best + other, 0.0);
    return loss;
}

LossAndGrad hinge_rank_loss(const MiniScorer& scorer, std::span<const PreferencePair> pairs, double margin) {
    if (!(margin > 0.0)) throw std::invalid_argument("margin must be positive");
    if (pairs.empty()) throw std::invalid_argument("no preference pairs");
    const std::size_t n = pairs.size();
    const std::size_t np = scorer.param_count();
    // Fixed chunking (depends only on n) keeps the reduction order thread-independent.
    const std::size_t chunks = std::min<std::size_t>(n, 16);
    std::vector<std::vector<double>> grads(chunks);
    std::vector<double> losses(chunks, 0.0);
    parallel_for(chunks, [&](std::size_t c) {
        std::vector<double>& g = grads[c];
        g.assign(np, 0.0);
        const std::size_t begin = n * c / chunks, end = n * (c + 1) / chunks;
        for (std::size_t i = begin; i < end; ++i) {
            const double fb = scorer.score(pairs[i].best.view());
            const double fo = scorer.score(pairs[i].other.view());
            const double term = margin - fb + fo;
            if (!(term > 0.0)) continue;
            losses[c] += term;
            scorer.forward_backward(pairs[i].best.view(), -1.0, &g, nullptr);
            scorer.forward_backward(pairs[i].other.view(), 1.0, &g, nullptr);
        }
    });
    LossAndGrad out;
    out.grad.assign(np, 0.0);
    for (std::size_t c = 0; c < chunks; ++c) {
        out.loss += losses[c];
        for (std::size_t j = 0; j < np; ++j) out.grad[j] += grads[c][j];
    }
    return out;
}

CrossEntropy pixel_cross_entropy(const Drawing& predicted, const Drawing& target) {
    require_same_shape(predicted, target, "cross entropy prediction vs target");
    constexpr double lo = 1e-7, hi = 1.0 - 1e-7;
    CrossEntropy out;
    out.grad = ScalarImage(predicted.width(), predicted.height(), 0.0);
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double p = std::clamp(predicted[i], lo, hi);
        const double t = target[i];
        out.loss -= t * std::log(p) + (1.0 - t) * std::log(1.0 - p);
        out.grad[i] = (p - t) / (p * (1.0 - p));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Training

TrainResult train_mini_scorer(const MiniScorer& init, std::span<const PreferencePair> pairs,
                              const TrainOptions& options) {
    if (pairs.empty()) throw std::invalid_argument("no preference pairs");
    if (options.epochs < 0) throw std::invalid_argument("epochs must be non-negative");
    if (options.batch_size < 1) throw std::invalid_argument("batch size must be positive");
    if (!(options.learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");

    TrainResult result{init, {}, 0.0, 0.0};
    MiniScorer& net = result.scorer;
    std::vector<double>& w = net.params();
    std::vector<double> m(w.size(), 0.0), v(w.size(), 0.0);
    std::mt19937_64 rng(options.seed);
    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    long step = 0;

    result.initial_loss = hinge_rank_loss(net, pairs, options.margin).loss;
    std::vector<PreferencePair> batch;
    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        if (options.shuffle) std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
            const std::size_t end = std::min(order.size(), start + options.batch_size);
            batch.clear();
            for (std::size_t i = start; i < end; ++i) batch.push_back(pairs[order[i]]);
            const LossAndGrad lg = hinge_rank_loss(net, batch, options.margin);
            epoch_loss += lg.loss;
            ++step;
            const double bc1 = 1.0 - std::pow(options.beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(options.beta2, static_cast<double>(step));
            for (std::size_t j = 0; j < w.size(); ++j) {
                const double g = lg.grad[j];
                m[j] = options.beta1 * m[j] + (1.0 - options.beta1) * g;
                v[j] = options.beta2 * v[j] + (1.0 - options.beta2) * g * g;
                w[j] -= options.learning_rate * (m[j] / bc1) / (std::sqrt(v[j] / bc2) + options.epsilon);
            }
        }
        result.epoch_loss.push_back(epoch_loss);
    }
    net.set_epochs_trained(init.epochs_trained() + options.epochs);
    result.final_loss = options.epochs == 0 ? result.initial_loss : hinge_rank_loss(net, pairs, options.margin).loss;
    return result;
}

double pairwise_accuracy(const Scorer& scorer, std::span<const PreferencePair> pairs) {
    if (pairs.empty()) throw std::invalid_argument("no preference pairs");
    std::vector<char> correct(pairs.size(), 0);
    parallel_for(pairs.size(), [&](std::size_t i) {
        correct[i] = scorer.score(pairs[i].best.view()) > scorer.score(pairs[i].other.view()) ? 1 : 0;
    });
    return static_cast<double>(std::count(correct.begin(), correct.end(), 1)) / static_cast<double>(pairs.size());
}

namespace {

std::vector<int> stroke_template(std::mt19937_64& rng, int size) {
    std::uniform_real_distribution<double> coord(0.15 * size, 0.85 * size);
    std::vector<char> on(static_cast<std::size_t>(size) * size, 0);
    for (int stroke = 0; stroke < 3; ++stroke) {
        const double x0 = coord(rng), y0 = coord(rng), x1 = coord(rng), y1 = coord(rng);
        const int steps = 4 * size;
        for (int i = 0; i <= steps; ++i) {
            const double a = static_cast<double>(i) / steps;
            const int x = static_cast<int>(x0 + a * (x1 - x0)), y = static_cast<int>(y0 + a * (y1 - y0));
            on[static_cast<std::size_t>(y) * size + x] = 1;
        }
    }
    std::vector<int> idx;
    for (std::size_t i = 0; i < on.size(); ++i)
        if (on[i]) idx.push_back(static_cast<int>(i));
    return idx;
}

Drawing partial_drawing(std::mt19937_64& rng, int size, const std::vector<int>& tmpl,
                        const std::vector<int>& background, double fraction) {
    Drawing d(size, size, 0.0);
    const std::size_t ink = tmpl.size();
    const std::size_t on_template = std::min(ink, static_cast<std::size_t>(std::lround(fraction * ink)));
    std::vector<int> a = tmpl, b = background;
    std::shuffle(a.begin(), a.end(), rng);
    std::shuffle(b.begin(), b.end(), rng);
    for (std::size_t i = 0; i < on_template; ++i) d[a[i]] = 1.0;
    for (std::size_t i = 0; i < ink - on_template; ++i) d[b[i]] = 1.0;
    return d;
}

}  // namespace

std::vector<PreferencePair> synthetic_preference_pairs(int count, std::uint64_t seed, int size) {
    if (count < 1 || size < 8) throw std::invalid_argument("invalid synthetic dataset size");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<PreferencePair> out;
    out.reserve(count);
    for (int n = 0; n < count; ++n) {
        const std::vector<int> tmpl = stroke_template(rng, size);
        std::vector<char> is_t(static_cast<std::size_t>(size) * size, 0);
        for (int i : tmpl) is_t[i] = 1;
        std::vector<int> background;
        for (std::size_t i = 0; i < is_t.size(); ++i)
            if (!is_t[i]) background.push_back(static_cast<int>(i));

        ScalarImage context(size, size, 0.0);
        for (int i : tmpl) context[i] = 1.0;
        const double best_fraction = 0.55 + 0.45 * unit(rng);
        const double other_fraction = (best_fraction - 0.3) * unit(rng);

        PreferencePair pair;
        for (ScorerSample* s : {&pair.best, &pair.other}) {
            s->depth = context;
            for (ScalarImage& o : s->shaded) o = context;
        }
        pair.best.drawing = partial_drawing(rng, size, tmpl, background, best_fraction);
        pair.other.drawing = partial_drawing(rng, size, tmpl, background, other_fraction);
        out.push_back(std::move(pair));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Checkpoints

namespace {
constexpr char checkpoint_magic[8] = {'L', 'D', 'M', 'I', 'N', 'I', '0', '1'};
static_assert(std::endian::native == std::endian::little, "checkpoint IO assumes a little-endian host");
}  // namespace

void save_checkpoint(const std::filesystem::path& path, const MiniScorer& scorer) {
    const MiniTopology& t = scorer.topology();
    nlohmann::json header = {
        {"format", "linedraw-mini-scorer"},
        {"topology",
         {{"in_channels", t.in_channels},
          {"channels", t.channels},
          {"kernel", t.kernel},
          {"stride", t.stride},
          {"downsample", t.downsample}}},
        {"seed", scorer.seed()},
        {"epochs", scorer.epochs_trained()},
        {"param_count", scorer.param_count()},
    };
    const std::string text = header.dump();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path.string());
    out.write(checkpoint_magic, sizeof checkpoint_magic);
    const auto len = static_cast<std::uint32_t>(text.size());
    out.write(reinterpret_cast<const char*>(&len), sizeof len);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (double p : scorer.params()) {
        const float f = static_cast<float>(p);
        out.write(reinterpret_cast<const char*>(&f), sizeof f);
    }
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path.string());
}

MiniScorer load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint not found: " + path.string());
    char magic[8];
    std::uint32_t len = 0;
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, checkpoint_magic, sizeof magic) != 0)
        throw std::runtime_error("not a mini scorer checkpoint: " + path.string());
    if (!in.read(reinterpret_cast<char*>(&len), sizeof len) || len > (1u << 20))
        throw std::runtime_error("corrupt checkpoint header: " + path.string());
    std::string text(len, '\0');
    if (!in.read(text.data(), len)) throw std::runtime_error("corrupt checkpoint header: " + path.string());
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception&) {
        throw std::runtime_error("corrupt checkpoint header: " + path.string());
    }
    MiniTopology t;
    const auto& jt = header.at("topology");
    t.in_channels = jt.at("in_channels").get<int>();
    t.channels = jt.at("channels").get<std::array<int, 3>>();
    t.kernel = jt.at("kernel").get<int>();
    t.stride = jt.at("stride").get<int>();
    t.downsample = jt.at("downsample").get<int>();
    MiniScorer net(t);
    net.seed_ = header.at("seed").get<std::uint64_t>();
    net.epochs_ = header.at("epochs").get<int>();
    if (header.at("param_count").get<std::size_t>() != net.params_.size())
        throw std::runtime_error("checkpoint parameter count does not match its topology");
    for (double& p : net.params_) {
        float f = 0.0f;
        if (!in.read(reinterpret_cast<char*>(&f), sizeof f))
            throw std::runtime_error("truncated checkpoint: " + path.string());
        if (!std::isfinite(f)) throw std::runtime_error("non-finite checkpoint parameter");
        p = static_cast<double>(f);
    }
    return net;
}

}  // namespace linedraw
