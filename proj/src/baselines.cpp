#include "cefs/baselines.hpp"

#include <algorithm>
#include <limits>

#include "cefs/error.hpp"

namespace cefs {

namespace {

void check_k(const DiscretizedDataset& data, std::size_t k) {
    if (k < 1 || k > data.m()) throw InvalidK(k, data.m());
}

std::vector<JointStateColumn> feature_states(const DiscretizedDataset& data) {
    std::vector<JointStateColumn> out;
    out.reserve(data.m());
    for (std::size_t j = 0; j < data.m(); ++j) out.push_back(as_state(data.column(j)));
    return out;
}

std::vector<double> relevances(const std::vector<JointStateColumn>& xs, const JointStateColumn& y) {
    std::vector<double> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(mutual_information(x, y));
    return out;
}

// Index of the best unpicked candidate; ties within tolerance go to the lower index.
std::size_t best_candidate(const std::vector<double>& scores, const std::vector<bool>& picked) {
    std::size_t best = scores.size();
    for (std::size_t j = 0; j < scores.size(); ++j) {
        if (picked[j]) continue;
        if (best == scores.size() || scores[j] > scores[best] + criterion_tie_tolerance) best = j;
    }
    return best;
}

// Runs a greedy selection where the first pick maximises relevance and later
// picks maximise step(j, last_picked, accumulated state).
template <typename Step>
RankedSelection greedy(const DiscretizedDataset& data, std::size_t k, const std::vector<double>& first,
                       Step&& step) {
    check_k(data, k);
    RankedSelection out;
    std::vector<bool> picked(data.m(), false);
    std::vector<double> scores = first;
    for (std::size_t round = 0; round < k; ++round) {
        const auto j = best_candidate(scores, picked);
        picked[j] = true;
        out.order.push_back(j);
        out.criterion_values.push_back(scores[j]);
        if (round + 1 < k) step(j, picked, scores, round + 1);
    }
    return out;
}

}  // namespace

RankedSelection rank_mim(const DiscretizedDataset& data, std::size_t k) {
    const auto xs = feature_states(data);
    const auto rel = relevances(xs, as_state(data.label()));
    return greedy(data, k, rel, [](auto, const auto&, auto&, auto) {});
}

RankedSelection select_cmim(const DiscretizedDataset& data, std::size_t k) {
    const auto xs = feature_states(data);
    const auto y = as_state(data.label());
    const auto rel = relevances(xs, y);
    // scores[j] holds min over picked s of I(x_j; y | x_s).
    std::vector<double> running(data.m(), std::numeric_limits<double>::infinity());
    return greedy(data, k, rel,
                  [&](std::size_t last, const std::vector<bool>& picked, std::vector<double>& scores,
                      std::size_t) {
                      for (std::size_t j = 0; j < xs.size(); ++j) {
                          if (picked[j]) continue;
                          running[j] = std::min(running[j], conditional_mi(xs[j], y, xs[last]));
                          scores[j] = running[j];
                      }
                  });
}

RankedSelection select_mrmr(const DiscretizedDataset& data, std::size_t k) {
    const auto xs = feature_states(data);
    const auto rel = relevances(xs, as_state(data.label()));
    std::vector<double> redundancy(data.m(), 0.0);
    return greedy(data, k, rel,
                  [&](std::size_t last, const std::vector<bool>& picked, std::vector<double>& scores,
                      std::size_t n_picked) {
                      for (std::size_t j = 0; j < xs.size(); ++j) {
                          if (picked[j]) continue;
                          redundancy[j] += mutual_information(xs[j], xs[last]);
                          scores[j] = rel[j] - redundancy[j] / static_cast<double>(n_picked);
                      }
                  });
}

double symmetrical_relevance(const DiscretizedDataset& data, std::size_t j) {
    const auto x = as_state(data.column(j));
    const auto y = as_state(data.label());
    const double h = joint_entropy(x, y);
    return h > 0.0 ? mutual_information(x, y) / h : 0.0;
}

RankedSelection select_disr(const DiscretizedDataset& data, std::size_t k) {
    const auto xs = feature_states(data);
    const auto y = as_state(data.label());
    const auto rel = relevances(xs, y);
    std::vector<double> total(data.m(), 0.0);
    return greedy(data, k, rel,
                  [&](std::size_t last, const std::vector<bool>& picked, std::vector<double>& scores,
                      std::size_t) {
                      for (std::size_t j = 0; j < xs.size(); ++j) {
                          if (picked[j]) continue;
                          const auto pair = joint_encode(xs[j], xs[last]);
                          const double h = joint_entropy(pair, y);
                          if (h > 0.0) total[j] += mutual_information(pair, y) / h;
                          scores[j] = total[j];
                      }
                  });
}

const char* to_string(Method method) {
    switch (method) {
        case Method::ce: return "ce";
        case Method::mim: return "mim";
        case Method::cmim: return "cmim";
        case Method::mrmr: return "mrmr";
        case Method::disr: return "disr";
    }
    return "ce";
}

Method parse_method(const std::string& name) {
    for (auto m : {Method::ce, Method::mim, Method::cmim, Method::mrmr, Method::disr})
        if (name == to_string(m)) return m;
    throw InvalidArgument("unknown method '" + name + "'; valid: ce, mim, cmim, mrmr, disr");
}

RankedSelection select_baseline(Method method, const DiscretizedDataset& data, std::size_t k) {
    switch (method) {
        case Method::mim: return rank_mim(data, k);
        case Method::cmim: return select_cmim(data, k);
        case Method::mrmr: return select_mrmr(data, k);
        case Method::disr: return select_disr(data, k);
        case Method::ce: break;
    }
    throw InvalidArgument("ce is not a ranking baseline");
}

}  // namespace cefs
