#include "ncvortex/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include "ncvortex/errors.hpp"
#include "stencils.hpp"

namespace ncvortex {
namespace {

const cplx I(0.0, 1.0);
constexpr double kDecayLo = 8.0, kDecayHi = 14.0;

struct Tap {
    int idx;
    double w;
};

// First-derivative taps at position i of a line of n nodes, matching d1_at.
std::vector<Tap> d1_taps(int i, int n, double h)
{
    const double s = 1.0 / (12.0 * h);
    std::vector<Tap> t;
    if (i >= 2 && i <= n - 3) {
        for (int k = 0; k < 5; ++k)
            if (stencil::d1_center[k] != 0.0)
                t.push_back({i - 2 + k, stencil::d1_center[k] * s});
        return t;
    }
    const double* w = (i == 0 || i == n - 1) ? stencil::d1_edge0 : stencil::d1_edge1;
    for (int k = 0; k < 5; ++k) {
        if (i <= 1)
            t.push_back({k, w[k] * s});
        else
            t.push_back({n - 1 - k, -w[k] * s});
    }
    return t;
}

int ring_of(int i, int j, int n) { return std::min(std::min(i, j), std::min(n - 1 - i, n - 1 - j)); }

void require_background(const ThetaSeries& s, int k)
{
    if (k < 1)
        throw Error(ErrorKind::InvalidArgument, "order must be >= 1");
    if (s.populated() < k || static_cast<int>(s.a.size()) < k)
        throw Error(ErrorKind::MissingLowerOrder, "order " + std::to_string(k) + " needs orders 0.."
                                                      + std::to_string(k - 1));
}

} // namespace

DirectSolution solve_order_k_direct(const ThetaSeries& s, int k, double tol)
{
    require_background(s, k);
    const Grid2D& g = s.grid();
    const int n = g.n;
    const std::size_t len = g.size();
    const ScalarField& phi0 = s.phi[0];
    const ScalarField& abar0 = s.a[0].abar;
    const ScalarField Ck = coeff_C_k(s, k);
    const ScalarField Dk = coeff_D_k(s, k);
    const double r2 = 1.0 / std::sqrt(2.0);

    using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
    const Eigen::Index nu = static_cast<Eigen::Index>(3 * len);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(31 * len);
    Eigen::VectorXd rhs(nu);
    std::vector<std::vector<Tap>> taps(n);
    for (int i = 0; i < n; ++i)
        taps[i] = d1_taps(i, n, g.h);

    // Unknown layout: psi at q, A1 at len + q, A2 at 2 len + q. Rows: Re and
    // Im of the second equation, then the first (or psi = 0 on the rim).
    std::vector<std::pair<Eigen::Index, cplx>> row;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const std::size_t q = static_cast<std::size_t>(j) * n + i;
            const Eigen::Index qi = static_cast<Eigen::Index>(q);
            const Eigen::Index L = static_cast<Eigen::Index>(len);
            row.clear();
            // dbar(psi phi0) = (D1 + i D2)(psi phi0)/sqrt2
            for (const Tap& t : taps[i]) {
                const std::size_t p = static_cast<std::size_t>(j) * n + t.idx;
                row.push_back({static_cast<Eigen::Index>(p), r2 * t.w * phi0.values()[p]});
            }
            for (const Tap& t : taps[j]) {
                const std::size_t p = static_cast<std::size_t>(t.idx) * n + i;
                row.push_back({static_cast<Eigen::Index>(p), I * r2 * t.w * phi0.values()[p]});
            }
            const cplx f0 = phi0.values()[q];
            row.push_back({qi, -I * abar0.values()[q] * f0});
            row.push_back({L + qi, -I * f0 * r2});
            row.push_back({2 * L + qi, f0 * r2});
            for (const auto& [c, v] : row) {
                if (v.real() != 0.0)
                    trip.emplace_back(qi, c, v.real());
                if (v.imag() != 0.0)
                    trip.emplace_back(L + qi, c, v.imag());
            }
            rhs[qi] = -Dk.values()[q].real();
            rhs[L + qi] = -Dk.values()[q].imag();

            if (ring_of(i, j, n) < kDirichletRings) {
                trip.emplace_back(2 * L + qi, qi, 1.0);
                rhs[2 * L + qi] = 0.0;
                continue;
            }
            // D1 A2 - D2 A1 + 2|phi0|^2 psi = -C_k
            for (const Tap& t : taps[i])
                trip.emplace_back(2 * L + qi, 2 * L + static_cast<Eigen::Index>(j) * n + t.idx, t.w);
            for (const Tap& t : taps[j])
                trip.emplace_back(2 * L + qi, L + static_cast<Eigen::Index>(t.idx) * n + i, -t.w);
            trip.emplace_back(2 * L + qi, qi, 2.0 * std::norm(f0));
            rhs[2 * L + qi] = -Ck.values()[q].real();
        }
    SpMat A(nu, nu);
    A.setFromTriplets(trip.begin(), trip.end());
    trip.clear();
    trip.shrink_to_fit();

    // Row equilibration; the column scaling comes from the solver's
    // diagonal preconditioner on the normal equations.
    for (Eigen::Index r = 0; r < nu; ++r) {
        const double nr = A.row(r).norm();
        if (nr > 0.0) {
            A.row(r) /= nr;
            rhs[r] /= nr;
        }
    }
    DirectSolution out;
    const double bnorm = rhs.norm();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(nu);
    if (bnorm > 0.0) {
        Eigen::LeastSquaresConjugateGradient<SpMat> solver;
        solver.setTolerance(tol);
        solver.setMaxIterations(20 * n);
        solver.compute(A);
        x = solver.solve(rhs);
        out.iterations = static_cast<int>(solver.iterations());
        out.relative_residual = (A * x - rhs).norm() / bnorm;
        if (!(out.relative_residual <= 10.0 * tol) && solver.info() != Eigen::Success)
            throw Error(ErrorKind::NoConvergence, "direct order-" + std::to_string(k) + " solve stopped after "
                                                      + std::to_string(out.iterations) + " iterations, residual "
                                                      + std::to_string(out.relative_residual));
    }
    std::vector<cplx> phi(len), a1(len), a2(len);
    for (std::size_t q = 0; q < len; ++q) {
        phi[q] = x[static_cast<Eigen::Index>(q)] * phi0.values()[q];
        a1[q] = x[static_cast<Eigen::Index>(len + q)];
        a2[q] = x[static_cast<Eigen::Index>(2 * len + q)];
    }
    out.phi = ScalarField(g, std::move(phi));
    out.a = GaugeField::from_real(ScalarField(g, std::move(a1)), ScalarField(g, std::move(a2)));
    return out;
}

SchrodingerOrderSolution solve_order_k_schrodinger(const ThetaSeries& s, int k, double mask_radius, double tol)
{
    require_background(s, k);
    const Grid2D& g = s.grid();
    MaskedField E = coeff_E_k(s, k, mask_radius);
    std::vector<cplx> V(g.size()), f(g.size());
    double compact = 0.0;
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const std::size_t q = static_cast<std::size_t>(j) * g.n + i;
            V[q] = 2.0 * std::norm(s.phi[0].values()[q]);
            f[q] = 2.0 * E.field.values()[q].real();
            if (V[q].real() < 1.0)
                compact = std::max(compact, std::hypot(g.x(i), g.x(j)) + g.h);
        }
    SchrodingerProblem p{ScalarField(g, std::move(V)), ScalarField(g, std::move(f), E.field.margin()), 1.0, compact};
    SchrodingerResult r = solve_schrodinger(p, tol, 2);
    return {r.u, std::move(E.valid), r.iterations, r.relative_residual, r.weighted_norm};
}

ReconstructedGauge reconstruct_A_k(const ThetaSeries& s, const ScalarField& phi_k, int k, double mask_radius)
{
    require_background(s, k);
    const Grid2D& g = s.grid();
    require_same_grid(phi_k, s.phi[0]);
    const ScalarField& phi0 = s.phi[0];
    std::vector<unsigned char> valid = outside_radius(g, mask_radius);
    ScalarField num = derivative(phi_k, Deriv::dbar) - I * (s.a[0].abar * phi_k) + coeff_D_k(s, k);
    std::vector<cplx> ab(g.size());
    for (std::size_t q = 0; q < g.size(); ++q) {
        const double m = std::abs(phi0.values()[q]);
        if (valid[q] && m < 1e-6)
            throw Error(ErrorKind::MaskTooSmall, "|phi0| < 1e-6 outside mask radius " + std::to_string(mask_radius));
        ab[q] = m > 1e-200 ? num.values()[q] / (I * phi0.values()[q]) : cplx(0.0);
    }
    ScalarField abar(g, std::move(ab), num.margin());
    return {GaugeField{abar.conj(), abar}, std::move(valid)};
}

FluxCorrection flux_correction(const ThetaSeries& s, int k)
{
    if (s.populated() <= k || static_cast<int>(s.a.size()) <= k)
        throw Error(ErrorKind::MissingLowerOrder, "flux correction of order " + std::to_string(k)
                                                      + " needs orders 0.." + std::to_string(k));
    const Grid2D& g = s.grid();
    FluxCorrection out;
    if (k == 0)
        return out;
    ThetaSeries t = s;
    t.phi.resize(k + 1);
    t.a.resize(k + 1);
    std::vector<ScalarField> B = nc_magnetic_field(t);
    out.value = integrate(B[k]).real();

    // A1 dx1 + A2 dx2 around the circle, bilinear interpolation
    const ScalarField a1 = s.a[k].a1(), a2 = s.a[k].a2();
    const double rho = g.R - 4.0;
    out.contour_radius = rho;
    if (rho <= 0.0)
        return out;
    auto interp = [&](const ScalarField& f, double x, double y) {
        const double fx = (x + g.R) / g.h - 0.5, fy = (y + g.R) / g.h - 0.5;
        const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, g.n - 2);
        const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, g.n - 2);
        const double tx = fx - i, ty = fy - j;
        return (1 - tx) * (1 - ty) * f(i, j).real() + tx * (1 - ty) * f(i + 1, j).real()
            + (1 - tx) * ty * f(i, j + 1).real() + tx * ty * f(i + 1, j + 1).real();
    };
    constexpr int kSamples = 4096;
    double acc = 0.0;
    for (int m = 0; m < kSamples; ++m) {
        const double t = 2.0 * std::numbers::pi * m / kSamples;
        const double x = rho * std::cos(t), y = rho * std::sin(t);
        acc += -interp(a1, x, y) * std::sin(t) + interp(a2, x, y) * std::cos(t);
    }
    out.circulation = acc * rho * 2.0 * std::numbers::pi / kSamples;
    return out;
}

double cross_validation_gap(const ScalarField& varphi, const ScalarField& phi_k, const ScalarField& phi0)
{
    require_same_grid(varphi, phi_k);
    const Grid2D& g = varphi.grid();
    const double hi = g.R / 2.0;
    double num = 0.0, den = 0.0;
    for (int j = kRecordRing; j < g.n - kRecordRing; ++j)
        for (int i = kRecordRing; i < g.n - kRecordRing; ++i) {
            const double r = std::hypot(g.x(i), g.x(j));
            if (r < 2.0 || r > hi)
                continue;
            const double ref = 2.0 * (phi_k(i, j) / phi0(i, j)).real();
            num = std::max(num, std::abs(varphi(i, j).real() - ref));
            den = std::max(den, std::abs(ref));
        }
    if (den == 0.0)
        return num;
    return num / den;
}

std::map<std::string, double> order_decay_exponents(const ThetaSeries& s, int k, double mask_radius)
{
    require_background(s, k + 1);
    std::map<std::string, double> out;
    out["phi"] = decay_exponent_fit(s.phi[k], kDecayLo, kDecayHi);
    out["A"] = decay_exponent_fit(s.a[k].abar, kDecayLo, kDecayHi);
    out["D"] = decay_exponent_fit(coeff_D_k(s, k), kDecayLo, kDecayHi);
    out["E"] = decay_exponent_fit(coeff_E_k(s, k, mask_radius).field, kDecayLo, kDecayHi);
    return out;
}

void extend_series(ThetaSeries& s, int K, const DeformOptions& opt, std::vector<int>* iterations)
{
    validate(s.trunc);
    if (K > s.trunc.K)
        throw Error(ErrorKind::InvalidArgument, "requested order exceeds the truncation order");
    for (int k = s.populated(); k <= K; ++k) {
        DirectSolution d = solve_order_k_direct(s, k, opt.tol);
        s.phi.push_back(std::move(d.phi));
        s.a.push_back(std::move(d.a));
        if (iterations)
            iterations->push_back(d.iterations);
    }
}

PreservationReport preservation_report(const ThetaSeries& s, int K, const DeformOptions& opt)
{
    if (s.populated() <= K)
        throw Error(ErrorKind::MissingLowerOrder, "preservation report needs orders 0.." + std::to_string(K));
    PreservationReport rep;
    rep.K = K;
    ThetaSeries t = s;
    t.phi.resize(K + 1);
    t.a.resize(K + 1);
    const std::vector<ScalarField> B = nc_magnetic_field(t);
    rep.n0 = vortex_number(B[0]);
    rep.n_deformed = rep.n0;
    rep.pass = true;
    if (K == 0)
        return rep;
    const NcResiduals res = nc_bps_residual(t);
    double tk = 1.0;
    for (int k = 1; k <= K; ++k) {
        tk *= s.trunc.theta;
        OrderReport o;
        o.k = k;
        const FluxCorrection fc = flux_correction(t, k);
        o.flux = fc.value;
        o.circulation = fc.circulation;
        o.residual_sup = std::max(interior_sup(res.r1[k]), interior_sup(res.r2[k]));
        const SchrodingerOrderSolution sv = solve_order_k_schrodinger(t, k, opt.mask_radius, opt.tol);
        o.schrodinger_iterations = sv.iterations;
        o.cross_gap = cross_validation_gap(sv.varphi, t.phi[k], t.phi[0]);
        o.decay = order_decay_exponents(t, k, opt.mask_radius);
        rep.n_deformed += tk * o.flux / (2.0 * std::numbers::pi);
        rep.pass = rep.pass && std::abs(o.flux) / (2.0 * std::numbers::pi) <= 1e-2;
        rep.orders.push_back(std::move(o));
    }
    return rep;
}

} // namespace ncvortex
