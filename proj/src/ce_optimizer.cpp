#include "cefs/ce_optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "cefs/error.hpp"

namespace cefs {

Mask::Mask(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto& b : bits_) b = b ? 1 : 0;
}

Mask Mask::from_indices(std::size_t m, std::span<const std::size_t> indices) {
    Mask out(m);
    for (auto i : indices) out.set(i, true);
    return out;
}

std::size_t Mask::popcount() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<std::size_t> Mask::indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) out.push_back(i);
    return out;
}

BernoulliModel BernoulliModel::uniform(std::size_t m, double value) {
    return BernoulliModel{std::vector<double>(m, value)};
}

std::size_t CEConfig::resolved_s_min(std::size_t m) const { return s_min ? s_min : m; }

std::size_t CEConfig::resolved_s_max(std::size_t m) const {
    return s_max ? s_max : 20 * resolved_s_min(m);
}

void CEConfig::validate(std::size_t m) const {
    if (m == 0) throw InvalidArgument("cross-entropy search needs at least one feature");
    if (resolved_s_min(m) == 0 || resolved_s_min(m) > resolved_s_max(m))
        throw InvalidArgument("sample sizes need 1 <= s_min <= s_max");
    if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
    if (lag < 1) throw InvalidArgument("lag d must be at least 1");
    if (max_iters < 1) throw InvalidArgument("max_iters must be at least 1");
    if (!(smoothing_alpha > 0.0 && smoothing_alpha <= 1.0))
        throw InvalidArgument("smoothing alpha must lie in (0, 1]");
    if (!(p_init > 0.0 && p_init < 1.0)) throw InvalidArgument("p_init must lie in (0, 1)");
    if (!(rho_coefficient > 0.0)) throw InvalidArgument("rho coefficient must be positive");
    if (!(size_penalty >= 0.0)) throw InvalidArgument("size penalty must be non-negative");
}

std::vector<Mask> sample_masks(const BernoulliModel& model, std::size_t count, Rng& rng) {
    std::vector<Mask> out;
    out.reserve(count);
    const std::size_t m = model.size();
    for (std::size_t s = 0; s < count; ++s) {
        std::vector<std::uint8_t> bits(m);
        for (std::size_t i = 0; i < m; ++i) bits[i] = bernoulli(rng, model.p[i]) ? 1 : 0;
        out.emplace_back(std::move(bits));
    }
    return out;
}

namespace {

double score_with(detail::JointEncoder& enc, const Mask& mask, const DiscretizedDataset& data,
                  double size_penalty) {
    if (mask.size() != data.m()) throw LengthMismatch(data.m(), mask.size());
    const auto selected = mask.indices();
    if (selected.empty()) return 0.0;
    enc.encode(data.codes, selected, data.n());
    const double mi = enc.mutual_information_with(data.label(), data.label_cardinality);
    return mi - size_penalty * static_cast<double>(selected.size());
}

}  // namespace

Bits score(const Mask& mask, const DiscretizedDataset& data) {
    detail::JointEncoder enc;
    return score_with(enc, mask, data, 0.0);
}

std::vector<double> score_all(std::span<const Mask> masks, const DiscretizedDataset& data,
                              double size_penalty, std::size_t threads) {
    std::vector<double> out(masks.size());
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(masks.size(), 1));
    auto work = [&](std::size_t begin, std::size_t end) {
        detail::JointEncoder enc;
        for (std::size_t s = begin; s < end; ++s) out[s] = score_with(enc, masks[s], data, size_penalty);
    };
    if (workers == 1) {
        work(0, masks.size());
        return out;
    }
    std::vector<std::jthread> pool;
    const std::size_t chunk = (masks.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(masks.size(), begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(work, begin, end);
    }
    pool.clear();
    return out;
}

EliteSet elite_threshold(std::span<const double> scores, double rho) {
    EliteSet out;
    if (scores.empty()) return out;
    const std::size_t s = scores.size();
    // Guard the ceiling against products like 0.05 * 20 / 400 * 400 = 1 + ulp.
    auto rank = static_cast<std::size_t>(std::ceil(rho * static_cast<double>(s) - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, s);
    std::vector<double> sorted(scores.begin(), scores.end());
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                     sorted.end(), std::greater<>());
    out.gamma = sorted[rank - 1];
    for (std::size_t i = 0; i < s; ++i)
        if (scores[i] >= out.gamma) out.indices.push_back(i);
    return out;
}

BernoulliModel update_probabilities(std::span<const Mask> elite, const BernoulliModel& previous,
                                    double alpha) {
    if (elite.empty()) throw EmptyElite();
    const std::size_t m = previous.size();
    std::vector<std::size_t> ones(m, 0);
    for (const auto& z : elite) {
        if (z.size() != m) throw LengthMismatch(m, z.size());
        for (std::size_t i = 0; i < m; ++i) ones[i] += z[i] ? 1 : 0;
    }
    BernoulliModel out;
    out.p.resize(m);
    const double count = static_cast<double>(elite.size());
    for (std::size_t i = 0; i < m; ++i) {
        const double raw = static_cast<double>(ones[i]) / count;
        out.p[i] = alpha == 1.0 ? raw : alpha * raw + (1.0 - alpha) * previous.p[i];
    }
    return out;
}

std::vector<std::size_t> sample_size_ladder(std::size_t m, std::size_t s_min, std::size_t s_max) {
    std::vector<std::size_t> out;
    for (std::size_t factor : {1, 2, 4, 8, 16, 20}) {
        const std::size_t s = factor * m;
        if (s >= s_min && s <= s_max) out.push_back(s);
    }
    if (out.empty()) out.push_back(s_max);
    return out;
}

double quantile_rho(double coefficient, std::size_t m, std::size_t s) {
    const double ds = static_cast<double>(s);
    return std::clamp(coefficient * static_cast<double>(m) / ds, 1.0 / ds, 0.5);
}

SampleRound adapt_sample_size(const BernoulliModel& model, const DiscretizedDataset& data,
                              const CEConfig& config, Rng& rng) {
    const std::size_t m = data.m();
    const std::size_t s_min = config.resolved_s_min(m);
    const std::size_t s_max = config.resolved_s_max(m);
    const auto ladder = config.adaptive_s ? sample_size_ladder(m, s_min, s_max)
                                          : std::vector<std::size_t>{s_max};

    SampleRound best;
    std::vector<Mask> masks;
    std::vector<double> scores;
    bool have_best = false;
    for (const std::size_t s : ladder) {
        auto extra = sample_masks(model, s - masks.size(), rng);
        auto extra_scores = score_all(extra, data, config.size_penalty, config.threads);
        masks.insert(masks.end(), std::make_move_iterator(extra.begin()),
                     std::make_move_iterator(extra.end()));
        scores.insert(scores.end(), extra_scores.begin(), extra_scores.end());

        const double rho = quantile_rho(config.rho_coefficient, m, s);
        auto elite = elite_threshold(scores, rho);
        if (elite.indices.empty()) continue;
        if (!have_best || elite.gamma >= best.elite.gamma) {
            best.sample_size = s;
            best.rho = rho;
            best.elite = std::move(elite);
            have_best = true;
        }
    }
    masks.resize(best.sample_size);
    scores.resize(best.sample_size);
    best.masks = std::move(masks);
    best.scores = std::move(scores);
    return best;
}

Mask extract_subset(const BernoulliModel& model, ExtractPolicy policy, Rng& rng) {
    Mask out(model.size());
    for (std::size_t i = 0; i < model.size(); ++i) {
        const bool on = policy == ExtractPolicy::threshold ? model.p[i] >= 0.5
                                                           : bernoulli(rng, model.p[i]);
        out.set(i, on);
    }
    return out;
}

double relative_information_gap(Bits mi, Bits hy) {
    if (mi <= 0.0) return std::numeric_limits<double>::infinity();
    return std::abs(mi - hy) / mi;
}

SelectionResult run(const DiscretizedDataset& data, const CEConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    const std::size_t m = data.m();
    config.validate(m);
    if (data.n() == 0) throw EmptyDataset();

    Rng rng(config.seed);
    SelectionResult result;
    result.final_p = BernoulliModel::uniform(m, config.p_init);
    result.entropy_y = entropy(as_state(data.label()));

    const double inf = std::numeric_limits<double>::infinity();
    for (std::size_t t = 1; t <= config.max_iters; ++t) {
        auto round = adapt_sample_size(result.final_p, data, config, rng);
        std::vector<Mask> elite;
        elite.reserve(round.elite.indices.size());
        for (auto j : round.elite.indices) elite.push_back(round.masks[j]);
        result.final_p = update_probabilities(elite, result.final_p, config.smoothing_alpha);

        result.gamma_trace.push_back(round.elite.gamma);
        result.sample_sizes.push_back(round.sample_size);
        result.rho_trace.push_back(round.rho);
        result.iterations = t;

        const double lagged = t > config.lag ? result.gamma_trace[t - 1 - config.lag] : inf;
        if (std::abs(round.elite.gamma - lagged) < config.epsilon) {
            result.converged = true;
            break;
        }
    }

    result.mask = extract_subset(result.final_p, config.extract_policy, rng);
    result.objective = score(result.mask, data);
    result.delta_ir = relative_information_gap(result.objective, result.entropy_y);
    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

std::vector<std::size_t> top_k_by_probability(const BernoulliModel& model, std::size_t k) {
    if (k < 1 || k > model.size()) throw InvalidK(k, model.size());
    std::vector<std::size_t> order(model.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return model.p[a] > model.p[b]; });
    order.resize(k);
    return order;
}

}  // namespace cefs
