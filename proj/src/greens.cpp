#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <fftw3.h>

#include "ncvortex/bessel.hpp"
#include "ncvortex/errors.hpp"
#include "ncvortex/kernels.hpp"
#include "ncvortex/schrodinger.hpp"

namespace ncvortex {
namespace {

// Average of G_c over the square cell centred on the singularity:
// 8 * int_0^{pi/4} int_0^{rho(t)} G r dr dt / h^2, and the radial integral
// of K0(a r) r is (1 - a rho K1(a rho)) / a^2.
double diagonal_cell_average(double a, double h)
{
    auto inner = [&](double t) {
        const double rho = h / (2.0 * std::cos(t));
        return (1.0 - a * rho * bessel_K1(a * rho)) / (a * a);
    };
    const double q = boost::math::quadrature::gauss<double, 20>::integrate(inner, 0.0, std::numbers::pi / 4);
    return 8.0 * q / (2.0 * std::numbers::pi) / (h * h);
}

struct FftwBuf {
    fftw_complex* p;
    explicit FftwBuf(std::size_t n) : p(fftw_alloc_complex(n)) {}
    ~FftwBuf() { fftw_free(p); }
    FftwBuf(const FftwBuf&) = delete;
    FftwBuf& operator=(const FftwBuf&) = delete;
};

} // namespace

ScalarField greens_apply(const ScalarField& f, double c)
{
    if (!(c > 0.0))
        throw Error(ErrorKind::InvalidArgument, "greens_apply needs c > 0");
    const Grid2D& g = f.grid();
    const int n = g.n, m = 2 * n;
    const double h = g.h, a = std::sqrt(c);
    const std::size_t mm = static_cast<std::size_t>(m) * m;

    // Pre-correct the source so that the point-sampled sum behaves like a
    // cell-average quadrature of a smooth f.
    std::vector<cplx> ft(g.size());
    kernels::omp::laplacian(f.data(), ft.data(), n, h);
    for (std::size_t k = 0; k < ft.size(); ++k)
        ft[k] = f.values()[k] - (h * h / 24.0) * ft[k];

    FftwBuf kb(mm), fb(mm);
    for (std::size_t k = 0; k < mm; ++k) {
        kb.p[k][0] = kb.p[k][1] = 0.0;
        fb.p[k][0] = fb.p[k][1] = 0.0;
    }
    const double g0 = 1.0 / (2.0 * std::numbers::pi);
    for (int dj = -(n - 1); dj <= n - 1; ++dj)
        for (int di = -(n - 1); di <= n - 1; ++di) {
            const std::size_t idx = static_cast<std::size_t>((dj + m) % m) * m + (di + m) % m;
            if (di == 0 && dj == 0)
                kb.p[idx][0] = h * h * diagonal_cell_average(a, h);
            else
                kb.p[idx][0] = h * h * g0 * bessel_K0(a * h * std::hypot(di, dj));
        }
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const cplx v = ft[static_cast<std::size_t>(j) * n + i];
            fb.p[static_cast<std::size_t>(j) * m + i][0] = v.real();
            fb.p[static_cast<std::size_t>(j) * m + i][1] = v.imag();
        }
    fftw_plan pk = fftw_plan_dft_2d(m, m, kb.p, kb.p, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_plan pf = fftw_plan_dft_2d(m, m, fb.p, fb.p, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_plan pb = fftw_plan_dft_2d(m, m, fb.p, fb.p, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(pk);
    fftw_execute(pf);
    for (std::size_t k = 0; k < mm; ++k) {
        const cplx z = cplx(kb.p[k][0], kb.p[k][1]) * cplx(fb.p[k][0], fb.p[k][1]);
        fb.p[k][0] = z.real();
        fb.p[k][1] = z.imag();
    }
    fftw_execute(pb);
    fftw_destroy_plan(pk);
    fftw_destroy_plan(pf);
    fftw_destroy_plan(pb);

    std::vector<cplx> u(g.size());
    const double norm = 1.0 / static_cast<double>(mm);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const std::size_t k = static_cast<std::size_t>(j) * m + i;
            u[static_cast<std::size_t>(j) * n + i] = cplx(fb.p[k][0], fb.p[k][1]) * norm;
        }
    return ScalarField(g, std::move(u));
}

} // namespace ncvortex
