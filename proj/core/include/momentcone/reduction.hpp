#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace momentcone {

// Fixed binary-tree summation over the index order. The split points depend
// only on the length, so the result is bitwise reproducible for a given
// input vector no matter how the values were produced.
double pairwise_sum(std::span<const double> values);

// Evaluates fn(i) for i in [0, count) into a dense vector, optionally on
// several threads. Each slot is written exactly once, so the output (and any
// pairwise_sum over it) does not depend on the thread count.
std::vector<double> map_indexed(std::size_t count, const std::function<double(std::size_t)>& fn,
                                bool parallel);

}  // namespace momentcone
