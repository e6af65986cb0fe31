#include "ncvortex/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ncvortex/bessel.hpp"
#include "ncvortex/errors.hpp"
#include "ncvortex/kernels.hpp"

namespace ncvortex {

void validate(const SchrodingerProblem& p)
{
    require_same_grid(p.V, p.f);
    const Grid2D& g = p.V.grid();
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const cplx v = p.V(i, j);
            if (std::abs(v.imag()) > 1e-12)
                throw Error(ErrorKind::InvalidArgument, "potential is not real");
            if (v.real() < -1e-12)
                throw Error(ErrorKind::NotSPD, "potential is negative (" + std::to_string(v.real()) + ")");
            if (std::hypot(g.x(i), g.x(j)) >= p.compact_radius && v.real() < p.c_floor - 1e-12)
                throw Error(ErrorKind::InvalidArgument, "potential falls below c_floor outside the compact set");
        }
}

SchrodingerResult solve_schrodinger(const SchrodingerProblem& p, double tol, int weight_power,
                                    const ScalarField* initial)
{
    validate(p);
    if (!(tol > 0.0 && tol <= 1e-8))
        throw Error(ErrorKind::InvalidArgument, "solver tolerance must lie in (0, 1e-8]");
    const Grid2D& g = p.V.grid();
    const int n = g.n;
    const std::size_t len = g.size();
    const int ring = kDirichletRings;
    std::vector<double> V(len), b(len, 0.0), x(len, 0.0), r(len), z(len), q(len), Ap(len);
    auto active = [&](std::size_t k) {
        const int i = static_cast<int>(k % n), j = static_cast<int>(k / n);
        return std::min(std::min(i, j), std::min(n - 1 - i, n - 1 - j)) >= ring;
    };
    for (std::size_t k = 0; k < len; ++k) {
        V[k] = p.V.values()[k].real();
        if (active(k)) {
            b[k] = p.f.values()[k].real();
            if (initial)
                x[k] = initial->values()[k].real();
        }
    }
    const double bnorm = std::sqrt(kernels::omp::dot(b.data(), b.data(), len));
    SchrodingerResult res;
    if (bnorm == 0.0 && !initial) {
        res.u = ScalarField::zeros(g);
        return res;
    }
    kernels::omp::screened_apply(x.data(), V.data(), Ap.data(), n, g.h, ring);
    for (std::size_t k = 0; k < len; ++k)
        r[k] = b[k] - Ap[k];
    double rr = kernels::omp::dot(r.data(), r.data(), len);
    const double scale = bnorm > 0.0 ? bnorm : 1.0;
    q = r;
    const int max_it = 50 * n;
    int it = 0;
    while (std::sqrt(rr) > tol * scale && it < max_it) {
        ++it;
        kernels::omp::screened_apply(q.data(), V.data(), Ap.data(), n, g.h, ring);
        const double alpha = rr / kernels::omp::dot(q.data(), Ap.data(), len);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(len); ++k) {
            x[k] += alpha * q[k];
            r[k] -= alpha * Ap[k];
        }
        const double rr_new = kernels::omp::dot(r.data(), r.data(), len);
        const double beta = rr_new / rr;
        rr = rr_new;
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(len); ++k)
            q[k] = r[k] + beta * q[k];
    }
    // true residual
    kernels::omp::screened_apply(x.data(), V.data(), Ap.data(), n, g.h, ring);
    for (std::size_t k = 0; k < len; ++k)
        r[k] = b[k] - Ap[k];
    res.relative_residual = std::sqrt(kernels::omp::dot(r.data(), r.data(), len)) / scale;
    res.iterations = it;
    if (!(res.relative_residual <= 10.0 * tol))
        throw Error(ErrorKind::NoConvergence, "CG stopped after " + std::to_string(it)
                                                  + " iterations, relative residual "
                                                  + std::to_string(res.relative_residual));
    std::vector<cplx> u(len);
    for (std::size_t k = 0; k < len; ++k)
        u[k] = cplx(x[k], 0.0);
    res.u = ScalarField(g, std::move(u), kDirichletRings);
    res.weighted_norm = weighted_sup_norm(res.u, WeightedNormSpec{weight_power, 0});
    return res;
}

KernelBounds fit_kernel_bounds(const ScalarField& V, int si, int sj, double c, double tol)
{
    const Grid2D& g = V.grid();
    std::vector<cplx> src(g.size());
    src[static_cast<std::size_t>(sj) * g.n + si] = 1.0 / (g.h * g.h);
    SchrodingerProblem p{V, ScalarField(g, std::move(src)), 0.0, 0.0};
    SchrodingerResult s = solve_schrodinger(p, tol);
    KernelBounds kb;
    const double x0 = g.x(si), y0 = g.x(sj);
    for (int j = kRecordRing; j < g.n - kRecordRing; ++j)
        for (int i = kRecordRing; i < g.n - kRecordRing; ++i) {
            if (i == si && j == sj)
                continue;
            const double d = std::hypot(g.x(i) - x0, g.x(j) - y0);
            const double G = s.u(i, j).real();
            if (d <= 0.5)
                kb.near_constant = std::max(kb.near_constant, G / -std::log(d));
            if (d >= 4.0) {
                const double Gc = bessel_K0(std::sqrt(c) * d) / (2.0 * std::numbers::pi);
                if (Gc > 1e-280)
                    kb.far_constant = std::max(kb.far_constant, G / Gc);
            }
        }
    kb.finite = std::isfinite(kb.near_constant) && std::isfinite(kb.far_constant);
    return kb;
}

} // namespace ncvortex
