#pragma once

// 4th-order finite-difference weights, numerators over 12h (first
// derivative) and 12h^2 (second derivative).

namespace ncvortex::stencil {

inline constexpr double d1_center[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
// rows for nodes 0 and 1, acting on nodes 0..4
inline constexpr double d1_edge0[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};
inline constexpr double d1_edge1[5] = {-3.0, -10.0, 18.0, -6.0, 1.0};

inline constexpr double d2_center[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};
// rows for nodes 0 and 1, acting on nodes 0..5
inline constexpr double d2_edge0[6] = {45.0, -154.0, 214.0, -156.0, 61.0, -10.0};
inline constexpr double d2_edge1[6] = {10.0, -15.0, -4.0, 14.0, -6.0, 1.0};

} // namespace ncvortex::stencil

#include <algorithm>
#include <cstddef>

namespace ncvortex::stencil {

// First derivative at position i of a line of n samples spaced by `stride`.
template <class T>
inline T d1_at(const T* f, std::ptrdiff_t s, int i, int n, double inv12h)
{
    if (i >= 2 && i <= n - 3)
        return (f[(i - 2) * s] - 8.0 * f[(i - 1) * s] + 8.0 * f[(i + 1) * s] - f[(i + 2) * s]) * inv12h;
    const double* w = (i == 0 || i == n - 1) ? d1_edge0 : d1_edge1;
    if (i <= 1) {
        T acc = w[0] * f[0];
        for (int k = 1; k < 5; ++k)
            acc += w[k] * f[k * s];
        return acc * inv12h;
    }
    const T* g = f + static_cast<std::ptrdiff_t>(n - 1) * s;
    T acc = w[0] * g[0];
    for (int k = 1; k < 5; ++k)
        acc += w[k] * g[-k * s];
    return -acc * inv12h;
}

template <class T>
inline T d2_at(const T* f, std::ptrdiff_t s, int i, int n, double inv12h2)
{
    if (i >= 2 && i <= n - 3)
        return (-f[(i - 2) * s] + 16.0 * f[(i - 1) * s] - 30.0 * f[i * s] + 16.0 * f[(i + 1) * s]
                - f[(i + 2) * s])
            * inv12h2;
    const double* w = (i == 0 || i == n - 1) ? d2_edge0 : d2_edge1;
    const T* g = i <= 1 ? f : f + static_cast<std::ptrdiff_t>(n - 1) * s;
    std::ptrdiff_t dir = i <= 1 ? s : -s;
    T acc = w[0] * g[0];
    for (int k = 1; k < 6; ++k)
        acc += w[k] * g[k * dir];
    return acc * inv12h2;
}

inline int ring_of(int i, int j, int n)
{
    return std::min(std::min(i, j), std::min(n - 1 - i, n - 1 - j));
}

} // namespace ncvortex::stencil
