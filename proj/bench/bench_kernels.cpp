// Serial reference vs OpenMP kernels on square grids.
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "ncvortex/kernels.hpp"

namespace k = ncvortex::kernels;

namespace {

struct Fields {
    int n;
    double h;
    std::vector<k::cplx> f, out;
    std::vector<double> u, V, r;

    explicit Fields(int n_) : n(n_), h(32.0 / n_), f(n_ * n_), out(n_ * n_), u(n_ * n_), V(n_ * n_), r(n_ * n_)
    {
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double x = -16 + (i + 0.5) * h, y = -16 + (j + 0.5) * h;
                f[j * n + i] = {std::exp(-0.1 * (x * x + y * y)), std::sin(x) * std::cos(y)};
                u[j * n + i] = std::exp(-0.1 * (x * x + y * y));
                V[j * n + i] = 2.0 - std::exp(-(x * x + y * y));
            }
    }
};

template <void (*Fn)(const k::cplx*, k::cplx*, int, double)>
void BM_stencil(benchmark::State& st)
{
    Fields d(static_cast<int>(st.range(0)));
    for (auto _ : st) {
        Fn(d.f.data(), d.out.data(), d.n, d.h);
        benchmark::DoNotOptimize(d.out.data());
    }
    st.SetItemsProcessed(st.iterations() * d.n * d.n);
}

template <void (*Fn)(const double*, const double*, double*, int, double, int)>
void BM_screened(benchmark::State& st)
{
    Fields d(static_cast<int>(st.range(0)));
    for (auto _ : st) {
        Fn(d.u.data(), d.V.data(), d.r.data(), d.n, d.h, 2);
        benchmark::DoNotOptimize(d.r.data());
    }
    st.SetItemsProcessed(st.iterations() * d.n * d.n);
}

template <k::cplx (*Fn)(const k::cplx*, std::size_t)>
void BM_sum(benchmark::State& st)
{
    Fields d(static_cast<int>(st.range(0)));
    for (auto _ : st)
        benchmark::DoNotOptimize(Fn(d.f.data(), d.f.size()));
    st.SetItemsProcessed(st.iterations() * d.n * d.n);
}

template <double (*Fn)(const double*, const double*, std::size_t)>
void BM_dot(benchmark::State& st)
{
    Fields d(static_cast<int>(st.range(0)));
    for (auto _ : st)
        benchmark::DoNotOptimize(Fn(d.u.data(), d.V.data(), d.u.size()));
    st.SetItemsProcessed(st.iterations() * d.n * d.n);
}

} // namespace

// wall time: CPU time of the calling thread undercounts the OpenMP versions
#define SIZES ->Arg(256)->Arg(512)->Arg(1024)->UseRealTime()

BENCHMARK(BM_stencil<k::serial::laplacian>) SIZES;
BENCHMARK(BM_stencil<k::omp::laplacian>) SIZES;
BENCHMARK(BM_stencil<k::serial::diff_x>) SIZES;
BENCHMARK(BM_stencil<k::omp::diff_x>) SIZES;
BENCHMARK(BM_screened<k::serial::screened_apply>) SIZES;
BENCHMARK(BM_screened<k::omp::screened_apply>) SIZES;
BENCHMARK(BM_sum<k::serial::sum>) SIZES;
BENCHMARK(BM_sum<k::omp::sum>) SIZES;
BENCHMARK(BM_dot<k::serial::dot>) SIZES;
BENCHMARK(BM_dot<k::omp::dot>) SIZES;

BENCHMARK_MAIN();
