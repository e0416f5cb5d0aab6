#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cefs/data.hpp"
#include "cefs/infotheory.hpp"
#include "cefs/random.hpp"

namespace cefs {

// Binary selection vector over the m features.
class Mask {
public:
    Mask() = default;
    explicit Mask(std::size_t m) : bits_(m, 0) {}
    explicit Mask(std::vector<std::uint8_t> bits);

    static Mask from_indices(std::size_t m, std::span<const std::size_t> indices);

    std::size_t size() const noexcept { return bits_.size(); }
    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    void set(std::size_t i, bool on) { bits_.at(i) = on ? 1 : 0; }

    std::size_t popcount() const noexcept;
    std::vector<std::size_t> indices() const;
    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

    friend bool operator==(const Mask&, const Mask&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

// Independent Bernoulli inclusion probabilities, one per feature.
struct BernoulliModel {
    std::vector<double> p;

    static BernoulliModel uniform(std::size_t m, double value);
    std::size_t size() const noexcept { return p.size(); }
};

enum class ExtractPolicy { threshold, sample };

struct CEConfig {
    // 0 means "derive from m": s_min = m, s_max = 20 * s_min.
    std::size_t s_min = 0;
    std::size_t s_max = 0;
    double rho_coefficient = 0.05;
    double epsilon = 0.05;
    std::size_t lag = 5;
    std::size_t max_iters = 200;
    std::uint64_t seed = 0;
    double smoothing_alpha = 1.0;
    double p_init = 0.5;
    ExtractPolicy extract_policy = ExtractPolicy::threshold;
    bool adaptive_s = true;
    // Bits subtracted per selected feature when ranking samples; 0 keeps the
    // pure mutual-information objective.
    double size_penalty = 0.0;
    // Worker threads for scoring; results do not depend on this.
    std::size_t threads = 1;

    // Throws InvalidArgument when the configuration is inconsistent for m features.
    void validate(std::size_t m) const;
    std::size_t resolved_s_min(std::size_t m) const;
    std::size_t resolved_s_max(std::size_t m) const;
};

struct SelectionResult {
    BernoulliModel final_p;
    Mask mask;
    std::vector<double> gamma_trace;
    std::vector<std::size_t> sample_sizes;
    std::vector<double> rho_trace;
    std::size_t iterations = 0;
    Bits objective = 0.0;
    Bits entropy_y = 0.0;
    double delta_ir = 0.0;
    double elapsed_seconds = 0.0;
    bool converged = false;
};

// Draws count masks, z_i = 1 with probability p_i, coordinates in order.
std::vector<Mask> sample_masks(const BernoulliModel& model, std::size_t count, Rng& rng);

// I(U(mask); y); the empty mask scores 0. Throws LengthMismatch on a wrong mask size.
Bits score(const Mask& mask, const DiscretizedDataset& data);

// Batch scoring with a penalty of size_penalty bits per selected feature.
std::vector<double> score_all(std::span<const Mask> masks, const DiscretizedDataset& data,
                              double size_penalty = 0.0, std::size_t threads = 1);

struct EliteSet {
    double gamma = 0.0;
    std::vector<std::size_t> indices;
};

// gamma is the score at rank ceil(rho * S) of the descending order; the elite
// holds every index scoring >= gamma, in index order.
EliteSet elite_threshold(std::span<const double> scores, double rho);

// p_i = alpha * mean of elite bits + (1 - alpha) * previous p_i. Throws EmptyElite.
BernoulliModel update_probabilities(std::span<const Mask> elite, const BernoulliModel& previous,
                                    double alpha);

// Sample sizes tried per iteration: {m, 2m, 4m, 8m, 16m, 20m} within [s_min, s_max].
std::vector<std::size_t> sample_size_ladder(std::size_t m, std::size_t s_min, std::size_t s_max);

// Quantile parameter for a draw of s samples: clamp(coef * m / s, 1/s, 0.5).
double quantile_rho(double coefficient, std::size_t m, std::size_t s);

struct SampleRound {
    std::size_t sample_size = 0;
    double rho = 0.0;
    std::vector<Mask> masks;
    std::vector<double> scores;
    EliteSet elite;
};

// One iteration's sampling. Adaptive mode draws the ladder incrementally (each
// candidate extends the previous draw) and keeps the largest size with the
// highest gamma; static mode draws s_max once.
SampleRound adapt_sample_size(const BernoulliModel& model, const DiscretizedDataset& data,
                              const CEConfig& config, Rng& rng);

Mask extract_subset(const BernoulliModel& model, ExtractPolicy policy, Rng& rng);

// |I - H(y)| / I, +infinity when I = 0.
double relative_information_gap(Bits mi, Bits hy);

// Cross-entropy search over Bernoulli masks maximising I(U;y).
// Stops once |gamma_t - gamma_{t-lag}| < epsilon (gamma before the first
// iteration counts as +infinity) or after max_iters.
SelectionResult run(const DiscretizedDataset& data, const CEConfig& config);

// The k coordinates with the largest p, ties toward the lower index.
std::vector<std::size_t> top_k_by_probability(const BernoulliModel& model, std::size_t k);

}  // namespace cefs
