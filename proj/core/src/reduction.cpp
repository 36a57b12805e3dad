#include "momentcone/reduction.hpp"

#include <algorithm>
#include <thread>

namespace momentcone {

namespace {

constexpr std::size_t kLeafSize = 64;

double sum_range(std::span<const double> values, std::size_t begin, std::size_t end) {
    const std::size_t len = end - begin;
    if (len <= kLeafSize) {
        double acc = 0.0;
        for (std::size_t i = begin; i < end; ++i) acc += values[i];
        return acc;
    }
    const std::size_t mid = begin + len / 2;
    return sum_range(values, begin, mid) + sum_range(values, mid, end);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
    if (values.empty()) return 0.0;
    return sum_range(values, 0, values.size());
}

std::vector<double> map_indexed(std::size_t count, const std::function<double(std::size_t)>& fn,
                                bool parallel) {
    std::vector<double> out(count);
    if (!parallel || count < 2048) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(hw, (count + 2047) / 2048);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&out, &fn, begin, end] {
            for (std::size_t i = begin; i < end; ++i) out[i] = fn(i);
        });
    }
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace momentcone
