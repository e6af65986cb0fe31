#include "ncvortex/kernels.hpp"

#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "reduce.hpp"
#include "stencils.hpp"

namespace ncvortex::kernels {

int max_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace omp {

void diff_x(const cplx* f, cplx* out, int n, double h)
{
    const double inv = 1.0 / (12.0 * h);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        const cplx* row = f + static_cast<std::ptrdiff_t>(j) * n;
        cplx* o = out + static_cast<std::ptrdiff_t>(j) * n;
        for (int i = 0; i < n; ++i)
            o[i] = stencil::d1_at(row, 1, i, n, inv);
    }
}

void diff_y(const cplx* f, cplx* out, int n, double h)
{
    const double inv = 1.0 / (12.0 * h);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        cplx* o = out + static_cast<std::ptrdiff_t>(j) * n;
        for (int i = 0; i < n; ++i)
            o[i] = stencil::d1_at(f + i, n, j, n, inv);
    }
}

void laplacian(const cplx* f, cplx* out, int n, double h)
{
    const double inv = 1.0 / (12.0 * h * h);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        const cplx* row = f + static_cast<std::ptrdiff_t>(j) * n;
        cplx* o = out + static_cast<std::ptrdiff_t>(j) * n;
        for (int i = 0; i < n; ++i)
            o[i] = stencil::d2_at(row, 1, i, n, inv) + stencil::d2_at(f + i, n, j, n, inv);
    }
}

void screened_apply(const double* u, const double* V, double* out, int n, double h, int ring)
{
    const double inv = 1.0 / (12.0 * h * h);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        double* o = out + static_cast<std::ptrdiff_t>(j) * n;
        if (j < ring || j > n - 1 - ring) {
            for (int i = 0; i < n; ++i)
                o[i] = 0.0;
            continue;
        }
        const double* c = u + static_cast<std::ptrdiff_t>(j) * n;
        // neighbours in the dead rings read as zero
        const double* up1 = j + 1 <= n - 1 - ring ? c + n : nullptr;
        const double* up2 = j + 2 <= n - 1 - ring ? c + 2 * n : nullptr;
        const double* dn1 = j - 1 >= ring ? c - n : nullptr;
        const double* dn2 = j - 2 >= ring ? c - 2 * n : nullptr;
        for (int i = 0; i < n; ++i) {
            if (i < ring || i > n - 1 - ring) {
                o[i] = 0.0;
                continue;
            }
            double xm2 = i - 2 >= ring ? c[i - 2] : 0.0;
            double xm1 = i - 1 >= ring ? c[i - 1] : 0.0;
            double xp1 = i + 1 <= n - 1 - ring ? c[i + 1] : 0.0;
            double xp2 = i + 2 <= n - 1 - ring ? c[i + 2] : 0.0;
            double ym2 = dn2 ? dn2[i] : 0.0;
            double ym1 = dn1 ? dn1[i] : 0.0;
            double yp1 = up1 ? up1[i] : 0.0;
            double yp2 = up2 ? up2[i] : 0.0;
            double lx = -xm2 + 16.0 * xm1 - 30.0 * c[i] + 16.0 * xp1 - xp2;
            double ly = -ym2 + 16.0 * ym1 - 30.0 * c[i] + 16.0 * yp1 - yp2;
            o[i] = -(lx * inv + ly * inv) + V[static_cast<std::ptrdiff_t>(j) * n + i] * c[i];
        }
    }
}

template <class T, class Get>
static T chunked(std::size_t len, const Get& get)
{
    if (len == 0)
        return T{};
    const std::ptrdiff_t nc = static_cast<std::ptrdiff_t>((len + kReduceChunk - 1) / kReduceChunk);
    std::vector<T> part(nc);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
        std::size_t lo = static_cast<std::size_t>(c) * kReduceChunk;
        std::size_t hi = std::min(len, lo + kReduceChunk);
        part[c] = detail::pairwise<T>(lo, hi, get);
    }
    return detail::pairwise<T>(0, static_cast<std::size_t>(nc), [&](std::size_t k) { return part[k]; });
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

} // namespace omp
} // namespace ncvortex::kernels
