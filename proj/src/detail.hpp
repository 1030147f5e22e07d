#pragma once

#include <cstddef>

#include "fracpl/grid.hpp"

namespace fracpl::detail {

// a + s * b
inline GridFunction axpy(const GridFunction& a, double s, const GridFunction& b) {
    GridFunction out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] += s * b.values[i];
    return out;
}

inline GridFunction scaled(const GridFunction& a, double s) {
    GridFunction out = a;
    for (double& v : out.values) v *= s;
    return out;
}

inline GridFunction diff(const GridFunction& a, const GridFunction& b) { return axpy(a, -1.0, b); }

} // namespace fracpl::detail
