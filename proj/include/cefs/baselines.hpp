#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cefs/data.hpp"
#include "cefs/infotheory.hpp"

namespace cefs {

// Greedy or ranked feature order with the criterion score at each pick.
struct RankedSelection {
    std::vector<std::size_t> order;
    std::vector<double> criterion_values;
};

// Scores closer than this are ties, resolved toward the lower feature index.
inline constexpr double criterion_tie_tolerance = 1e-12;

// Descending I(x_j; y).
RankedSelection rank_mim(const DiscretizedDataset& data, std::size_t k);

// First pick argmax I(x_j; y), then argmax_j min_s I(x_j; y | x_s).
RankedSelection select_cmim(const DiscretizedDataset& data, std::size_t k);

// Difference form: I(x_j; y) - mean_s I(x_j; x_s).
RankedSelection select_mrmr(const DiscretizedDataset& data, std::size_t k);

// First pick argmax I(x_j; y), then argmax_j sum_s I(x_j x_s; y) / H(x_j x_s y);
// zero denominators contribute 0.
RankedSelection select_disr(const DiscretizedDataset& data, std::size_t k);

// Symmetrical relevance I(x;y) / H(x,y) of a single feature, 0 when H(x,y) = 0.
double symmetrical_relevance(const DiscretizedDataset& data, std::size_t j);

enum class Method { ce, mim, cmim, mrmr, disr };

const char* to_string(Method method);
// Throws InvalidArgument listing valid names.
Method parse_method(const std::string& name);

// Dispatch over the four baselines; Method::ce is rejected.
RankedSelection select_baseline(Method method, const DiscretizedDataset& data, std::size_t k);

}  // namespace cefs
