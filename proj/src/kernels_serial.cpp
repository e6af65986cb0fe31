#include "ncvortex/kernels.hpp"

#include <vector>

#include "reduce.hpp"
#include "stencils.hpp"

namespace ncvortex::kernels::serial {

void diff_x(const cplx* f, cplx* out, int n, double h)
{
    const double inv = 1.0 / (12.0 * h);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            out[j * n + i] = stencil::d1_at(f + j * n, 1, i, n, inv);
}

void diff_y(const cplx* f, cplx* out, int n, double h)
{
    const double inv = 1.0 / (12.0 * h);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            out[j * n + i] = stencil::d1_at(f + i, n, j, n, inv);
}

void laplacian(const cplx* f, cplx* out, int n, double h)
{
    const double inv = 1.0 / (12.0 * h * h);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            out[j * n + i] = stencil::d2_at(f + j * n, 1, i, n, inv) + stencil::d2_at(f + i, n, j, n, inv);
}

void screened_apply(const double* u, const double* V, double* out, int n, double h, int ring)
{
    const double inv = 1.0 / (12.0 * h * h);
    auto at = [&](int i, int j) { return stencil::ring_of(i, j, n) >= ring ? u[j * n + i] : 0.0; };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (stencil::ring_of(i, j, n) < ring) {
                out[j * n + i] = 0.0;
                continue;
            }
            double c = u[j * n + i];
            double lx = -at(i - 2, j) + 16.0 * at(i - 1, j) - 30.0 * c + 16.0 * at(i + 1, j) - at(i + 2, j);
            double ly = -at(i, j - 2) + 16.0 * at(i, j - 1) - 30.0 * c + 16.0 * at(i, j + 1) - at(i, j + 2);
            out[j * n + i] = -(lx * inv + ly * inv) + V[j * n + i] * c;
        }
}

template <class T, class Get>
static T chunked(std::size_t len, const Get& get)
{
    if (len == 0)
        return T{};
    std::size_t nc = (len + kReduceChunk - 1) / kReduceChunk;
    std::vector<T> part(nc);
    for (std::size_t c = 0; c < nc; ++c) {
        std::size_t lo = c * kReduceChunk;
        std::size_t hi = std::min(len, lo + kReduceChunk);
        part[c] = detail::pairwise<T>(lo, hi, get);
    }
    return detail::pairwise<T>(0, nc, [&](std::size_t k) { return part[k]; });
}

cplx sum(const cplx* v, std::size_t len)
{
    return chunked<cplx>(len, [v](std::size_t k) { return v[k]; });
}

double sum(const double* v, std::size_t len)
{
    return chunked<double>(len, [v](std::size_t k) { return v[k]; });
}

double dot(const double* a, const double* b, std::size_t len)
{
    return chunked<double>(len, [a, b](std::size_t k) { return a[k] * b[k]; });
}

} // namespace ncvortex::kernels::serial
