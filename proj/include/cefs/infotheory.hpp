#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace cefs {

// All information quantities are in bits.
using Bits = double;

enum class Estimator {
    plugin,        // maximum-likelihood frequencies
    miller_madow,  // plug-in plus (K - 1) / (2 n ln 2)
};

// One discrete variable over n samples, possibly the joint state of several columns.
struct JointStateColumn {
    std::vector<std::uint32_t> codes;
    std::uint32_t cardinality = 0;

    std::size_t size() const noexcept { return codes.size(); }
};

using CodeView = std::span<const std::uint32_t>;

// Dense codes in order of first appearance of each distinct row tuple.
// Throws InvalidArgument on an empty column list, LengthMismatch on ragged input.
JointStateColumn joint_encode(std::span<const CodeView> columns);
JointStateColumn joint_encode(std::initializer_list<CodeView> columns);
JointStateColumn joint_encode(const JointStateColumn& a, const JointStateColumn& b);

// Codes may be sparse; an observed-state count is taken.
JointStateColumn as_state(CodeView codes);

Bits entropy(const JointStateColumn& x, Estimator est = Estimator::plugin);
Bits joint_entropy(const JointStateColumn& a, const JointStateColumn& b,
                   Estimator est = Estimator::plugin);

// H(u) + H(y) - H(u,y), clamped to [0, min(H(u), H(y))].
Bits mutual_information(const JointStateColumn& u, const JointStateColumn& y,
                        Estimator est = Estimator::plugin);

// H(y,u) - H(u), clamped to [0, H(y)].
Bits conditional_entropy(const JointStateColumn& y, const JointStateColumn& u,
                         Estimator est = Estimator::plugin);

// I(x;y|u) = I({x,u};y) - I(u;y), clamped at 0. An empty u (size 0) means no conditioning.
Bits conditional_mi(const JointStateColumn& x, const JointStateColumn& y, const JointStateColumn& u,
                    Estimator est = Estimator::plugin);

namespace detail {

// Reusable buffers for repeated joint encodings over the same n.
class JointEncoder {
public:
    // Encodes the selected columns; an empty selection gives a single state.
    const JointStateColumn& encode(std::span<const std::vector<std::uint32_t>> columns,
                                   std::span<const std::size_t> selected, std::size_t n);

    // H(u) + H(y) - H(u,y) for the last encoding, in bits, clamped.
    Bits mutual_information_with(CodeView y, std::uint32_t y_cardinality);

private:
    JointStateColumn state_;
    std::vector<std::uint32_t> table_;
    std::vector<std::uint32_t> counts_;
};

// sum of c log2 c over counts plus the entropy formula, in bits.
Bits entropy_from_counts(std::span<const std::uint32_t> counts, std::size_t n,
                         Estimator est = Estimator::plugin);

}  // namespace detail

}  // namespace cefs
