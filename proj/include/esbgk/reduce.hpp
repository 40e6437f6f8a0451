#pragma once

#include <cstddef>
#include <span>

namespace esbgk {

/// Leaf length of the pairwise reduction tree.
inline constexpr std::size_t kReduceLeaf = 128;

/// Fixed-shape pairwise tree over [begin, end): ranges are halved until they
/// hold at most `leaf` items, leaves are evaluated left to right and results
/// combined bottom-up. The tree depends only on the range length, so results
/// are bit-reproducible.
template <typename Leaf, typename Combine>
auto tree_reduce(std::size_t begin, std::size_t end, std::size_t leaf, Leaf&& eval, Combine&& combine)
    -> decltype(eval(begin, end)) {
    if (end - begin <= leaf) return eval(begin, end);
    const std::size_t mid = begin + (end - begin) / 2;
    auto lhs = tree_reduce(begin, mid, leaf, eval, combine);
    auto rhs = tree_reduce(mid, end, leaf, eval, combine);
    return combine(std::move(lhs), std::move(rhs));
}

/// Pairwise sum of f(i) over [0, n).
template <typename F>
double pairwise_sum(std::size_t n, F&& f) {
    if (n == 0) return 0.0;
    return tree_reduce(
        std::size_t{0}, n, kReduceLeaf,
        [&](std::size_t b, std::size_t e) {
            double s = 0.0;
            for (std::size_t i = b; i < e; ++i) s += f(i);
            return s;
        },
        [](double a, double b) { return a + b; });
}

inline double pairwise_sum(std::span<const double> xs) {
    return pairwise_sum(xs.size(), [xs](std::size_t i) { return xs[i]; });
}

}  // namespace esbgk
