#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <utility>
#include <span>
#include <string>
#include <vector>

#include "linedraw/image.hpp"

namespace linedraw {

/// Drawing I, depth E and shaded stack O of one view (8 channels).
struct ScorerInput {
    const Drawing& drawing;
    const ScalarImage& depth;
    const std::array<ScalarImage, 6>& shaded;

    /// Throws std::invalid_argument unless all channels share a shape.
    void validate() const;
};

/// Owning counterpart of ScorerInput, used for datasets.
struct ScorerSample {
    Drawing drawing;
    ScalarImage depth;
    std::array<ScalarImage, 6> shaded;

    [[nodiscard]] ScorerInput view() const { return {drawing, depth, shaded}; }
};

/// Drawing-quality score p = f(I, E, O), differentiable in I.
class Scorer {
public:
    virtual ~Scorer() = default;
    [[nodiscard]] virtual double score(const ScorerInput& input) const = 0;
    /// dp/dI with the shape of the drawing.
    [[nodiscard]] virtual ScalarImage grad_drawing(const ScorerInput& input) const = 0;
    /// Both at once; the default calls the two methods.
    virtual double score_and_grad(const ScorerInput& input, ScalarImage& grad) const;
    [[nodiscard]] virtual std::string name() const = 0;
};

/// p = -mean((I - T)^2); maximal (0) exactly at I = T.
class ReferenceScorer final : public Scorer {
public:
    explicit ReferenceScorer(Drawing target);
    [[nodiscard]] double score(const ScorerInput& input) const override;
    [[nodiscard]] ScalarImage grad_drawing(const ScorerInput& input) const override;
    double score_and_grad(const ScorerInput& input, ScalarImage& grad) const override;
    [[nodiscard]] std::string name() const override { return "reference"; }
    [[nodiscard]] const Drawing& target() const { return target_; }

private:
    Drawing target_;
};

/// Same score for every input; its gradient is zero.
class ConstantScorer final : public Scorer {
public:
    explicit ConstantScorer(double value = 0.0) : value_(value) {}
    [[nodiscard]] double score(const ScorerInput&) const override { return value_; }
    [[nodiscard]] ScalarImage grad_drawing(const ScorerInput& input) const override;
    [[nodiscard]] std::string name() const override { return "constant"; }

private:
    double value_;
};

/// Small convolutional scorer: area downsampling, three 3x3 stride-2 conv +
/// ReLU blocks, global average pooling and a linear output.
struct MiniTopology {
    int in_channels = 8;
    std::array<int, 3> channels{16, 32, 64};
    int kernel = 3;
    int stride = 2;
    int downsample = 4;

    friend bool operator==(const MiniTopology&, const MiniTopology&) = default;
};

class MiniScorer final : public Scorer {
public:
    /// He-normal weights from a seeded generator, zero biases. Initial values
    /// are rounded to float so checkpoints reproduce them exactly.
    MiniScorer(MiniTopology topology, std::uint64_t seed);
    static MiniScorer zeros(MiniTopology topology);

    [[nodiscard]] double score(const ScorerInput& input) const override;
    [[nodiscard]] ScalarImage grad_drawing(const ScorerInput& input) const override;
    double score_and_grad(const ScorerInput& input, ScalarImage& grad) const override;
    [[nodiscard]] std::string name() const override { return "mini"; }

    /// Forward pass, then back-propagates `upstream` (dL/dp). Parameter
    /// gradients are added into `param_grad` when given; the drawing
    /// gradient is written to `drawing_grad` when given.
    double forward_backward(const ScorerInput& input, double upstream, std::vector<double>* param_grad,
                            ScalarImage* drawing_grad) const;

    [[nodiscard]] const MiniTopology& topology() const { return topology_; }
    [[nodiscard]] std::vector<double>& params() { return params_; }
    [[nodiscard]] const std::vector<double>& params() const { return params_; }
    [[nodiscard]] std::size_t param_count() const { return params_.size(); }
    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] int epochs_trained() const { return epochs_; }
    void set_epochs_trained(int epochs) { epochs_ = epochs; }

    /// Index of the final linear layer's bias within params().
    [[nodiscard]] std::size_t output_bias_index() const { return params_.size() - 1; }

private:
    explicit MiniScorer(MiniTopology topology);
    friend MiniScorer load_checkpoint(const std::filesystem::path& path);
    MiniTopology topology_;
    std::vector<double> params_;
    std::uint64_t seed_ = 0;
    int epochs_ = 0;
};

struct PreferencePair {
    ScorerSample best;
    ScorerSample other;
};

/// Sum over pairs of max(margin - f(best) + f(other), 0).
double hinge_rank_loss(std::span<const std::pair<double, double>> best_other_scores, double margin = 1.0);

struct LossAndGrad {
    double loss = 0.0;
    std::vector<double> grad;
};

/// Hinge loss of the mini scorer and its parameter gradient; only pairs with
/// a positive hinge term contribute.
LossAndGrad hinge_rank_loss(const MiniScorer& scorer, std::span<const PreferencePair> pairs, double margin = 1.0);

/// -sum(T log P + (1-T) log(1-P)) with P clamped to [1e-7, 1 - 1e-7].
struct CrossEntropy {
    double loss = 0.0;
    ScalarImage grad;
};
CrossEntropy pixel_cross_entropy(const Drawing& predicted, const Drawing& target);

struct TrainOptions {
    int epochs = 10;
    double learning_rate = 2e-5;
    int batch_size = 32;
    double margin = 1.0;
    std::uint64_t seed = 0;
    bool shuffle = false;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct TrainResult {
    MiniScorer scorer;
    /// Summed batch losses of each epoch, computed before each update.
    std::vector<double> epoch_loss;
    double initial_loss = 0.0;
    double final_loss = 0.0;
};

/// Adam on the hinge ranking loss over mini-batches in dataset order (or a
/// seeded shuffle).
TrainResult train_mini_scorer(const MiniScorer& init, std::span<const PreferencePair> pairs,
                              const TrainOptions& options);

/// Fraction of pairs with f(best) > f(other).
double pairwise_accuracy(const Scorer& scorer, std::span<const PreferencePair> pairs);

/// Pairs of `size` x `size` samples whose E and O channels show a random
/// stroke template; the preferred drawing covers strictly more of the
/// template with the same amount of ink.
std::vector<PreferencePair> synthetic_preference_pairs(int count, std::uint64_t seed, int size = 32);

/// Checkpoint: 8-byte magic "LDMINI01", uint32 header length, JSON header
/// (topology, seed, epochs, parameter count), then float32 parameters.
void save_checkpoint(const std::filesystem::path& path, const MiniScorer& scorer);
MiniScorer load_checkpoint(const std::filesystem::path& path);

}  // namespace linedraw
