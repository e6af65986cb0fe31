#include <cmath>
#include <numbers>

#include "ncvortex/bessel.hpp"
#include "ncvortex/perturbation.hpp"
#include "ncvortex/schrodinger.hpp"
#include "support.hpp"

using namespace ncvortex;

namespace {

ScalarField gaussian(const Grid2D& g, double width, double x0 = 0.0, double y0 = 0.0)
{
    return ScalarField::sample(g, [=](double x, double y) {
        return cplx(std::exp(-((x - x0) * (x - x0) + (y - y0) * (y - y0)) / (width * width)));
    });
}

// relative sup of a - b over |x| <= r_hi
double rel_gap(const ScalarField& a, const ScalarField& b, double r_hi)
{
    return interior_sup(a - b, kRecordRing, 0.0, r_hi) / interior_sup(b, kRecordRing, 0.0, r_hi);
}

} // namespace

TEST_CASE("greens_apply: zero source, point source, operator application")
{
    const Grid2D g = make_grid(8.0, 128);
    CHECK(interior_sup(greens_apply(ScalarField::zeros(g), 1.0), 0) == 0.0);

    std::vector<cplx> pt(g.size());
    pt[static_cast<std::size_t>(64) * g.n + 64] = 1.0;
    const ScalarField u = greens_apply(ScalarField(g, pt), 1.0);
    // u ~ c K0(r) away from the cell; fix c at distance 10h
    const double x0 = g.x(64);
    const double c = u(74, 64).real() / bessel_K0(g.x(74) - x0);
    double worst = 0.0;
    for (int j = 8; j < g.n - 8; ++j)
        for (int i = 8; i < g.n - 8; ++i) {
            const double d = std::hypot(g.x(i) - x0, g.x(j) - x0);
            if (d > 5.0 * g.h && d < 6.0)
                worst = std::max(worst, std::abs(u(i, j).real() / (c * bessel_K0(d)) - 1.0));
        }
    CHECK(worst <= 1e-3);
    CHECK(c == doctest::Approx(g.h * g.h / (2.0 * std::numbers::pi)).epsilon(1e-2));

    for (int n : {128, 256}) {
        const Grid2D gn = make_grid(8.0, n);
        const ScalarField f = gaussian(gn, 4.0 * gn.h);
        const ScalarField w = greens_apply(f, 1.0);
        const ScalarField back = -laplacian_std(w) + w;
        INFO("n = ", n);
        CHECK(interior_sup(back - f, 8) / interior_sup(f) <= 1e-3);
    }
}

TEST_CASE("greens_apply preserves positivity")
{
    const Grid2D g = make_grid(8.0, 128);
    const ScalarField f = gaussian(g, 0.5, 1.0, -2.0) + cplx(0.5) * gaussian(g, 1.5, -3.0, 0.0);
    double lowest = 1.0;
    for (const cplx& v : greens_apply(f, 2.0).values())
        lowest = std::min(lowest, v.real());
    CHECK(lowest >= 0.0);
    std::vector<cplx> pt(g.size());
    pt[static_cast<std::size_t>(30) * g.n + 90] = 1.0;
    for (const cplx& v : greens_apply(ScalarField(g, pt), 0.5).values())
        CHECK(v.real() >= 0.0);
}

TEST_CASE("solve_schrodinger against greens_apply for constant V")
{
    const Grid2D g = make_grid(8.0, 256);
    const ScalarField f = gaussian(g, 4.0 * g.h) + cplx(0.3) * gaussian(g, 0.8, 1.5, 1.0);
    SchrodingerProblem p{ScalarField::constant(g, 1.0), f, 1.0, 0.0};
    const SchrodingerResult s = solve_schrodinger(p, 1e-10);
    CHECK(s.relative_residual <= 1e-9);
    CHECK(rel_gap(s.u, greens_apply(f, 1.0), g.R / 2.0) <= 1e-3);
}

TEST_CASE("solve_schrodinger: trivial, validation, uniqueness")
{
    const Grid2D g = make_grid(6.0, 96);
    const ScalarField V = ScalarField::sample(g, [](double x, double y) { return cplx(1.0 + std::exp(-x * x - y * y)); });
    SchrodingerProblem zero{V, ScalarField::zeros(g), 1.0, 0.0};
    CHECK(interior_sup(solve_schrodinger(zero, 1e-10).u, 0) == 0.0);

    SchrodingerProblem neg{ScalarField::constant(g, -0.5), gaussian(g, 1.0), 0.0, 0.0};
    CHECK_ERROR_KIND(solve_schrodinger(neg, 1e-10), ErrorKind::NotSPD);
    SchrodingerProblem cplxV{ScalarField::constant(g, cplx(1.0, 1e-6)), gaussian(g, 1.0), 0.0, 0.0};
    CHECK_THROWS(solve_schrodinger(cplxV, 1e-10));
    SchrodingerProblem loose{V, gaussian(g, 1.0), 1.0, 0.0};
    CHECK_THROWS(solve_schrodinger(loose, 1e-6));

    const double tol = 1e-10;
    const SchrodingerResult a = solve_schrodinger(loose, tol);
    const ScalarField start = ScalarField::sample(g, [](double x, double y) { return cplx(std::cos(3 * x) * y); });
    const SchrodingerResult b = solve_schrodinger(loose, tol, 2, &start);
    CHECK(interior_sup(a.u - b.u, 0) / interior_sup(a.u, 0) <= 100.0 * tol);
}

TEST_CASE("vortex potential: weighted certificate and kernel bounds")
{
    const VortexProfile p = solve_radial_taubes(1, 16.0, 4096, 1e-10);
    double last = 1e300;
    for (double R : {12.0, 16.0}) {
        const Grid2D g = make_grid(R, static_cast<int>(16 * R));
        const VortexBackground bg = lift_to_grid(p, g);
        ThetaSeries s{{bg.phi}, {bg.a}, StarTruncation{1, 0.1}};
        const SchrodingerOrderSolution sol = solve_order_k_schrodinger(s, 1, 1.0, 1e-10);
        const double w4 = weighted_sup_norm(sol.varphi, {4, 0});
        INFO("R = ", R, " (1+|x|^4)|u| = ", w4);
        CHECK(std::isfinite(w4));
        CHECK(w4 <= last * 1.0001);
        last = w4;
        if (R == 16.0) {
            // (1+|x|^2)|varphi_1| bounded: no growth from the inner to the outer annulus
            double inner = 0.0, outer = 0.0;
            for (int j = kRecordRing; j < g.n - kRecordRing; ++j)
                for (int i = kRecordRing; i < g.n - kRecordRing; ++i) {
                    const double r = std::hypot(g.x(i), g.x(j));
                    const double v = (1.0 + r * r) * std::abs(sol.varphi(i, j));
                    if (r >= 2.0 && r <= 8.0)
                        inner = std::max(inner, v);
                    else if (r > 8.0 && r <= 14.0)
                        outer = std::max(outer, v);
                }
            CHECK(std::isfinite(inner));
            CHECK(outer <= inner);
            const ScalarField V = cplx(2.0) * bg.phi.abs2();
            const KernelBounds kb = fit_kernel_bounds(V, g.n / 2 + 20, g.n / 2, 1.0, 1e-10);
            CHECK(kb.finite);
            CHECK(kb.near_constant > 0.0);
            CHECK(kb.far_constant > 0.0);
        }
    }
}
