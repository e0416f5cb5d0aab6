#include "cefs/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "cefs/error.hpp"

namespace cefs {

namespace {

constexpr std::uint32_t unassigned = std::numeric_limits<std::uint32_t>::max();

std::size_t dense_limit(std::size_t n) { return std::max<std::size_t>(std::size_t{1} << 16, 8 * n); }

std::uint32_t span_cardinality(CodeView c) {
    std::uint32_t mx = 0;
    for (auto v : c) mx = std::max(mx, v);
    return c.empty() ? 0 : mx + 1;
}

// Replaces state codes with (state, next) pair codes, dense by first appearance.
void combine(std::vector<std::uint32_t>& state, std::uint32_t& cardinality, CodeView next,
             std::uint32_t next_cardinality, std::vector<std::uint32_t>& table) {
    const std::size_t n = state.size();
    const std::uint64_t space = static_cast<std::uint64_t>(cardinality) * next_cardinality;
    std::uint32_t fresh = 0;
    if (space <= dense_limit(n)) {
        table.assign(static_cast<std::size_t>(space), unassigned);
        for (std::size_t i = 0; i < n; ++i) {
            auto& slot = table[static_cast<std::size_t>(state[i]) * next_cardinality + next[i]];
            if (slot == unassigned) slot = fresh++;
            state[i] = slot;
        }
    } else {
        std::unordered_map<std::uint64_t, std::uint32_t> seen;
        seen.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t key = static_cast<std::uint64_t>(state[i]) * next_cardinality + next[i];
            auto [it, inserted] = seen.try_emplace(key, fresh);
            if (inserted) ++fresh;
            state[i] = it->second;
        }
    }
    cardinality = fresh;
}

JointStateColumn encode_views(std::span<const CodeView> columns) {
    if (columns.empty()) throw InvalidArgument("joint_encode needs at least one column");
    const std::size_t n = columns.front().size();
    for (const auto& c : columns)
        if (c.size() != n) throw LengthMismatch(n, c.size());
    JointStateColumn out;
    out.codes.assign(n, 0);
    out.cardinality = n == 0 ? 0 : 1;
    std::vector<std::uint32_t> table;
    for (const auto& c : columns) combine(out.codes, out.cardinality, c, span_cardinality(c), table);
    return out;
}

void check_lengths(const JointStateColumn& a, const JointStateColumn& b) {
    if (a.size() != b.size()) throw LengthMismatch(a.size(), b.size());
}

std::vector<std::uint32_t> histogram(const JointStateColumn& x) {
    std::vector<std::uint32_t> counts(std::max(x.cardinality, span_cardinality(x.codes)), 0);
    for (auto c : x.codes) ++counts[c];
    return counts;
}

}  // namespace

namespace detail {

Bits entropy_from_counts(std::span<const std::uint32_t> counts, std::size_t n, Estimator est) {
    if (n == 0) return 0.0;
    double acc = 0.0;
    std::size_t observed = 0;
    for (auto c : counts) {
        if (c == 0) continue;
        ++observed;
        const double dc = c;
        acc += dc * std::log2(dc);
    }
    const double dn = static_cast<double>(n);
    double h = std::log2(dn) - acc / dn;
    if (h < 0.0) h = 0.0;
    if (est == Estimator::miller_madow && observed > 1)
        h += static_cast<double>(observed - 1) / (2.0 * dn * std::numbers::ln2);
    return h;
}

const JointStateColumn& JointEncoder::encode(std::span<const std::vector<std::uint32_t>> columns,
                                             std::span<const std::size_t> selected, std::size_t n) {
    state_.codes.assign(n, 0);
    state_.cardinality = n == 0 ? 0 : 1;
    for (auto j : selected) {
        const auto& col = columns[j];
        combine(state_.codes, state_.cardinality, col, span_cardinality(col), table_);
    }
    return state_;
}

Bits JointEncoder::mutual_information_with(CodeView y, std::uint32_t y_cardinality) {
    const std::size_t n = state_.codes.size();
    if (y.size() != n) throw LengthMismatch(n, y.size());
    if (n == 0) return 0.0;
    const std::uint32_t ku = state_.cardinality;
    counts_.assign(ku, 0);
    for (auto c : state_.codes) ++counts_[c];
    const Bits hu = entropy_from_counts(counts_, n);

    counts_.assign(y_cardinality, 0);
    for (auto c : y) ++counts_[c];
    const Bits hy = entropy_from_counts(counts_, n);

    const std::uint64_t space = static_cast<std::uint64_t>(ku) * y_cardinality;
    Bits huy = 0.0;
    if (space <= dense_limit(n)) {
        counts_.assign(static_cast<std::size_t>(space), 0);
        for (std::size_t i = 0; i < n; ++i)
            ++counts_[static_cast<std::size_t>(state_.codes[i]) * y_cardinality + y[i]];
        huy = entropy_from_counts(counts_, n);
    } else {
        auto joint = state_;
        std::uint32_t card = joint.cardinality;
        combine(joint.codes, card, y, y_cardinality, table_);
        joint.cardinality = card;
        counts_.assign(card, 0);
        for (auto c : joint.codes) ++counts_[c];
        huy = entropy_from_counts(counts_, n);
    }
    return std::clamp(hu + hy - huy, 0.0, std::min(hu, hy));
}

}  // namespace detail

JointStateColumn joint_encode(std::span<const CodeView> columns) { return encode_views(columns); }

JointStateColumn joint_encode(std::initializer_list<CodeView> columns) {
    return encode_views(std::span<const CodeView>(columns.begin(), columns.size()));
}

JointStateColumn joint_encode(const JointStateColumn& a, const JointStateColumn& b) {
    const CodeView views[] = {a.codes, b.codes};
    return encode_views(views);
}

JointStateColumn as_state(CodeView codes) {
    const CodeView views[] = {codes};
    return encode_views(views);
}

Bits entropy(const JointStateColumn& x, Estimator est) {
    const auto counts = histogram(x);
    return detail::entropy_from_counts(counts, x.size(), est);
}

Bits joint_entropy(const JointStateColumn& a, const JointStateColumn& b, Estimator est) {
    check_lengths(a, b);
    return entropy(joint_encode(a, b), est);
}

Bits mutual_information(const JointStateColumn& u, const JointStateColumn& y, Estimator est) {
    check_lengths(u, y);
    const Bits hu = entropy(u, est);
    const Bits hy = entropy(y, est);
    const Bits huy = joint_entropy(u, y, est);
    return std::clamp(hu + hy - huy, 0.0, std::min(hu, hy));
}

Bits conditional_entropy(const JointStateColumn& y, const JointStateColumn& u, Estimator est) {
    check_lengths(y, u);
    const Bits hy = entropy(y, est);
    return std::clamp(joint_entropy(y, u, est) - entropy(u, est), 0.0, hy);
}

Bits conditional_mi(const JointStateColumn& x, const JointStateColumn& y, const JointStateColumn& u,
                    Estimator est) {
    check_lengths(x, y);
    if (u.size() == 0) return mutual_information(x, y, est);
    check_lengths(x, u);
    const Bits with = mutual_information(joint_encode(x, u), y, est);
    const Bits without = mutual_information(u, y, est);
    return std::max(with - without, 0.0);
}

}  // namespace cefs
