#ifndef PLUME_NUMERIC_HPP
#define PLUME_NUMERIC_HPP

#include <span>

namespace plume {

/// Pairwise (cascade) summation; error grows like log(n) instead of n.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

/// Pairwise sum of squares.
inline double pairwise_sum_squares(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum_squares(v.subspan(0, half)) + pairwise_sum_squares(v.subspan(half));
}

} // namespace plume

#endif
