#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <curvebetti/polyring.hpp>

namespace testing_support {

inline curvebetti::int_poly poly(const std::vector<std::int64_t>& cs) {
    std::vector<curvebetti::integer> v;
    v.reserve(cs.size());
    for (auto c : cs) v.emplace_back(c);
    return curvebetti::int_poly(std::move(v));
}

inline curvebetti::int_poly random_poly(std::mt19937_64& rng, int max_degree, int max_abs) {
    std::uniform_int_distribution<int> deg(0, max_degree);
    std::uniform_int_distribution<int> val(-max_abs, max_abs);
    std::vector<curvebetti::integer> v(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& c : v) c = val(rng);
    return curvebetti::int_poly(std::move(v));
}

inline curvebetti::int_poly random_nonneg_poly(std::mt19937_64& rng, int degree, int max_coeff) {
    std::uniform_int_distribution<int> val(0, max_coeff);
    std::vector<curvebetti::integer> v(static_cast<std::size_t>(degree) + 1);
    for (auto& c : v) c = val(rng);
    v.front() = 1 + val(rng);
    v.back() = 1 + val(rng);
    return curvebetti::int_poly(std::move(v));
}

}  // namespace testing_support
