#include "ncvortex/taubes.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "ncvortex/bessel.hpp"
#include "ncvortex/errors.hpp"

namespace ncvortex {

namespace {

const double kSqrt2 = std::numbers::sqrt2;

std::string fmt_g(double x)
{
    std::ostringstream os;
    os << std::setprecision(3) << x;
    return os.str();
}

// u - v = N log(r^2/(1+r^2))
double log_ratio(int N, double r)
{
    if (N == 0)
        return 0.0;
    if (r == 0.0)
        return -std::numeric_limits<double>::infinity();
    return N * (2.0 * std::log(r) - std::log1p(r * r));
}

long double log_ratio_l(int N, long double r)
{
    if (N == 0)
        return 0.0L;
    if (r == 0.0L)
        return -std::numeric_limits<long double>::infinity();
    return N * (2.0L * std::log(r) - std::log1p(r * r));
}

struct Discrete {
    int N;
    int J;
    double dr;
    double kappa; // sqrt2 K1/K0 at r_max
    std::vector<double> r;
};

// Residual of the radial equation and its Jacobian.
// The iterate and residual are carried in long double: the double roundoff
// of v, amplified by 1/(12 dr^2), otherwise floors the residual near 1e-10.
using Real = long double;

void assemble(const Discrete& d, const std::vector<Real>& v, std::vector<Real>& F,
              std::vector<Eigen::Triplet<double>>* jac)
{
    const int J = d.J;
    const int N = d.N;
    const Real drl = d.dr;
    const Real i12h2 = 1.0L / (12.0L * drl * drl);
    const Real i12h = 1.0L / (12.0L * drl);
    F.assign(J + 1, 0.0L);
    if (jac)
        jac->clear();
    auto add = [&](int row, int col, Real val) {
        if (jac)
            jac->emplace_back(row, col, static_cast<double>(val));
    };
    auto vat = [&](int k) { return v[std::abs(k)]; };
    for (int j = 0; j < J; ++j) {
        const Real r = static_cast<Real>(j) * drl;
        const Real u = log_ratio_l(N, r) + v[j];
        const Real eu = std::exp(u);
        const Real src = 2.0L * std::expm1(u) + 4.0L * N / ((1.0L + r * r) * (1.0L + r * r));
        Real op;
        if (j == 0) {
            op = 2.0 * (-2.0 * v[2] + 32.0 * v[1] - 30.0 * v[0]) * i12h2;
            add(0, 0, -60.0 * i12h2);
            add(0, 1, 64.0 * i12h2);
            add(0, 2, -4.0 * i12h2);
        } else if (j <= J - 2) {
            const Real c2[5] = {-1.0L, 16.0L, -30.0L, 16.0L, -1.0L};
            const Real c1[5] = {1.0L, -8.0L, 0.0L, 8.0L, -1.0L};
            Real d2 = 0.0L, d1 = 0.0L;
            for (int k = 0; k < 5; ++k) {
                d2 += c2[k] * vat(j - 2 + k);
                d1 += c1[k] * vat(j - 2 + k);
            }
            op = d2 * i12h2 + d1 * i12h / r;
            for (int k = 0; k < 5; ++k)
                add(j, std::abs(j - 2 + k), c2[k] * i12h2 + c1[k] * i12h / r);
        } else {
            // j = J-1: one-sided rows mirrored from the far end
            const Real c2[6] = {10.0L, -15.0L, -4.0L, 14.0L, -6.0L, 1.0L};
            const Real c1[5] = {-3.0L, -10.0L, 18.0L, -6.0L, 1.0L};
            Real d2 = 0.0L, d1 = 0.0L;
            for (int k = 0; k < 6; ++k)
                d2 += c2[k] * v[J - k];
            for (int k = 0; k < 5; ++k)
                d1 -= c1[k] * v[J - k];
            op = d2 * i12h2 + d1 * i12h / r;
            for (int k = 0; k < 6; ++k)
                add(j, J - k, c2[k] * i12h2 - (k < 5 ? c1[k] * i12h / r : 0.0L));
        }
        F[j] = op - src;
        add(j, j, -2.0 * eu);
    }
    // Robin condition u' = -kappa u at r_max
    const Real rm = static_cast<Real>(J) * drl;
    const Real e0[5] = {25.0L, -48.0L, 36.0L, -16.0L, 3.0L};
    Real vp = 0.0L;
    for (int k = 0; k < 5; ++k) {
        vp += e0[k] * v[J - k];
        add(J, J - k, e0[k] * i12h);
    }
    vp *= i12h;
    const Real uJ = log_ratio_l(N, rm) + v[J];
    F[J] = vp + 2.0L * N / (rm * (1.0L + rm * rm)) + d.kappa * uJ;
    add(J, J, d.kappa);
}

double sup_norm(const std::vector<Real>& F)
{
    Real m = 0.0L;
    for (Real x : F)
        m = std::max(m, std::abs(x));
    return static_cast<double>(m);
}

// 4th-order first derivative on the radial grid (even reflection at 0).
std::vector<double> radial_derivative(const std::vector<double>& v, double dr)
{
    const int J = static_cast<int>(v.size()) - 1;
    const double i12h = 1.0 / (12.0 * dr);
    std::vector<double> out(J + 1, 0.0);
    auto vat = [&](int k) { return v[std::abs(k)]; };
    for (int j = 1; j <= J - 2; ++j)
        out[j] = (vat(j - 2) - 8.0 * vat(j - 1) + 8.0 * v[j + 1] - v[j + 2]) * i12h;
    out[J - 1] = -(-3.0 * v[J] - 10.0 * v[J - 1] + 18.0 * v[J - 2] - 6.0 * v[J - 3] + v[J - 4]) * i12h;
    out[J] = (25.0 * v[J] - 48.0 * v[J - 1] + 36.0 * v[J - 2] - 16.0 * v[J - 3] + 3.0 * v[J - 4]) * i12h;
    return out;
}

void finish_profile(VortexProfile& p)
{
    const int J = p.n_r;
    const double dr = p.dr();
    p.u.assign(J + 1, 0.0);
    p.f.assign(J + 1, 0.0);
    for (int j = 0; j <= J; ++j) {
        p.u[j] = log_ratio(p.N, p.r[j]) + p.v[j];
        p.f[j] = std::exp(0.5 * p.u[j]);
    }
    std::vector<double> vp = radial_derivative(p.v, dr);
    p.q.assign(J + 1, 0.0);
    p.q[0] = (-2.0 * p.v[2] + 32.0 * p.v[1] - 30.0 * p.v[0]) / (12.0 * dr * dr) - 2.0 * p.N;
    for (int j = 1; j <= J; ++j)
        p.q[j] = vp[j] / p.r[j] - 2.0 * p.N / (1.0 + p.r[j] * p.r[j]);
}

// Cubic Lagrange interpolation of an even radial table.
double interp_even(const std::vector<double>& t, double dr, double r)
{
    const int J = static_cast<int>(t.size()) - 1;
    int k = static_cast<int>(std::floor(r / dr));
    int lo = std::clamp(k - 1, -1, J - 3);
    double s = r / dr - lo;
    double y[4];
    for (int m = 0; m < 4; ++m)
        y[m] = t[std::abs(lo + m)];
    // nodes at s = 0, 1, 2, 3
    return y[0] * (s - 1) * (s - 2) * (s - 3) / -6.0 + y[1] * s * (s - 2) * (s - 3) / 2.0
        + y[2] * s * (s - 1) * (s - 3) / -2.0 + y[3] * s * (s - 1) * (s - 2) / 6.0;
}

} // namespace

VortexProfile solve_radial_taubes(int N, double r_max, int n_r, double tol)
{
    if (N < 0)
        throw Error(ErrorKind::InvalidWinding, "winding must be >= 0, got " + std::to_string(N));
    if (!(r_max >= 12.0) || n_r < 1024 || !(tol <= 1e-8) || !(tol > 0.0))
        throw Error(ErrorKind::InvalidArgument, "taubes needs r_max >= 12, n_r >= 1024, 0 < tol <= 1e-8");
    Discrete d;
    d.N = N;
    d.J = n_r;
    d.dr = r_max / n_r;
    d.r.resize(n_r + 1);
    for (int j = 0; j <= n_r; ++j)
        d.r[j] = j * d.dr;
    d.kappa = kSqrt2 * bessel_K1(kSqrt2 * r_max) / bessel_K0(kSqrt2 * r_max);

    std::vector<Real> v(n_r + 1);
    for (int j = 0; j <= n_r; ++j) {
        const Real r = d.r[j];
        v[j] = -std::log1p(std::pow(r, 2.0L * N)) + N * std::log1p(r * r);
    }
    if (N == 0)
        std::fill(v.begin(), v.end(), 0.0L);

    std::vector<Real> F, Ft;
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::SparseMatrix<double> Jm(n_r + 1, n_r + 1);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    assemble(d, v, F, &trip);
    double res = sup_norm(F);
    int it = 0;
    const int max_it = 100;
    while (res > tol && it < max_it) {
        ++it;
        Jm.setFromTriplets(trip.begin(), trip.end());
        lu.compute(Jm);
        if (lu.info() != Eigen::Success)
            throw Error(ErrorKind::NoConvergence, "Jacobian factorization failed at iteration " + std::to_string(it));
        Eigen::VectorXd Fv(n_r + 1);
        for (int j = 0; j <= n_r; ++j)
            Fv[j] = static_cast<double>(F[j]);
        Eigen::VectorXd dv = lu.solve(-Fv);
        Real lambda = 1.0L;
        std::vector<Real> trial(n_r + 1);
        double tres = 0.0;
        for (int back = 0; back < 30; ++back) {
            for (int j = 0; j <= n_r; ++j)
                trial[j] = v[j] + lambda * dv[j];
            assemble(d, trial, Ft, nullptr);
            tres = sup_norm(Ft);
            if (std::isfinite(tres) && tres < (1.0 - 0.25 * static_cast<double>(lambda)) * res)
                break;
            lambda *= 0.5L;
        }
        if (!(tres < res))
            break; // roundoff floor reached
        v = trial;
        assemble(d, v, F, &trip);
        res = sup_norm(F);
    }
    if (!(res <= tol))
        throw Error(ErrorKind::NoConvergence, "radial Newton stopped after " + std::to_string(it)
                                                  + " iterations, residual " + fmt_g(res));

    VortexProfile p;
    p.N = N;
    p.r_max = r_max;
    p.n_r = n_r;
    p.tol = tol;
    p.residual = res;
    p.iterations = it;
    p.r = d.r;
    p.v.assign(v.begin(), v.end());
    finish_profile(p);
    return p;
}

VortexProfile::Sample VortexProfile::at(double rr) const
{
    Sample s;
    if (rr <= r_max) {
        const double vv = interp_even(v, dr(), rr);
        s.q = interp_even(q, dr(), rr);
        s.w = vv - N * std::log1p(rr * rr);
        s.u = log_ratio(N, rr) + vv;
    } else {
        const double uJ = u.back();
        const double k0m = bessel_K0(kSqrt2 * r_max);
        s.u = uJ * bessel_K0(kSqrt2 * rr) / k0m;
        const double up = -kSqrt2 * uJ * bessel_K1(kSqrt2 * rr) / k0m;
        s.w = s.u - 2.0 * N * std::log(rr);
        s.q = up / rr - 2.0 * N / (rr * rr);
    }
    s.one_minus_f2 = -std::expm1(s.u);
    return s;
}

namespace {

void check_fits(const VortexProfile& p, const Grid2D& g)
{
    if (g.R > p.r_max)
        throw Error(ErrorKind::GridLargerThanProfile, "grid half-extent " + std::to_string(g.R)
                                                          + " exceeds profile r_max " + std::to_string(p.r_max));
}

template <class F>
ScalarField lift_scalar(const VortexProfile& p, const Grid2D& g, F&& pick)
{
    check_fits(p, g);
    std::vector<cplx> out(g.size());
#pragma omp parallel for schedule(static)
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const double x1 = g.x(i), x2 = g.x(j);
            out[static_cast<std::size_t>(j) * g.n + i] = pick(p.at(std::hypot(x1, x2)), x1, x2);
        }
    return ScalarField(g, std::move(out));
}

} // namespace

VortexBackground lift_to_grid(const VortexProfile& p, const Grid2D& g)
{
    const int N = p.N;
    ScalarField phi = lift_scalar(p, g, [N](const VortexProfile::Sample& s, double x1, double x2) {
        cplx zn(1.0, 0.0);
        for (int k = 0; k < N; ++k)
            zn *= cplx(x1, x2);
        return zn * std::exp(0.5 * s.w);
    });
    ScalarField abar = lift_scalar(p, g, [](const VortexProfile::Sample& s, double x1, double x2) {
        const cplx z = cplx(x1, x2) / kSqrt2;
        return cplx(0.0, -0.5 * s.q) * z;
    });
    return {phi, GaugeField{abar.conj(), abar}};
}

ScalarField lift_w(const VortexProfile& p, const Grid2D& g)
{
    return lift_scalar(p, g, [](const VortexProfile::Sample& s, double, double) { return cplx(s.w, 0.0); });
}

ScalarField lift_one_minus_f2(const VortexProfile& p, const Grid2D& g)
{
    return lift_scalar(p, g, [](const VortexProfile::Sample& s, double, double) { return cplx(s.one_minus_f2, 0.0); });
}

ScalarField magnetic_field(const GaugeField& a)
{
    return cplx(0.0, -1.0) * (derivative(a.abar, Deriv::d) - derivative(a.a, Deriv::dbar));
}

std::pair<ScalarField, ScalarField> commutative_residuals(const ScalarField& phi, const GaugeField& a)
{
    ScalarField B = magnetic_field(a);
    ScalarField r1 = B + phi.abs2() - ScalarField::constant(phi.grid(), 1.0);
    ScalarField r2 = derivative(phi, Deriv::dbar) - cplx(0.0, 1.0) * (a.abar * phi);
    return {r1, r2};
}

double vortex_number(const ScalarField& B)
{
    double im = 0.0;
    for (const cplx& v : B.values())
        im = std::max(im, std::abs(v.imag()));
    if (im > 1e-10)
        throw Error(ErrorKind::NonRealField, "magnetic field has imaginary part " + std::to_string(im));
    return integrate(B).real() / (2.0 * std::numbers::pi);
}

namespace {

struct Shell {
    double r;
    double value;
};

// Max of val(node) over radial shells of width dw between r_lo and r_hi.
template <class F>
std::vector<Shell> shell_maxima(const Grid2D& g, double r_lo, double r_hi, double dw, F&& val)
{
    const int ns = static_cast<int>(std::floor((r_hi - r_lo) / dw));
    std::vector<Shell> sh(std::max(ns, 0), Shell{0.0, -1.0});
    const int ring = kRecordRing;
    for (int j = ring; j < g.n - ring; ++j)
        for (int i = ring; i < g.n - ring; ++i) {
            const double r = std::hypot(g.x(i), g.x(j));
            if (r < r_lo || r >= r_lo + ns * dw)
                continue;
            const int k = std::min(static_cast<int>((r - r_lo) / dw), ns - 1);
            const double v = val(i, j, r);
            if (v > sh[k].value)
                sh[k] = Shell{r, v};
        }
    std::vector<Shell> out;
    for (const Shell& s : sh)
        if (s.value >= 0.0)
            out.push_back(s);
    return out;
}

double fit_k0_mass(const std::vector<Shell>& sh)
{
    std::vector<Shell> pts;
    for (const Shell& s : sh)
        if (s.value > 1e-300)
            pts.push_back(s);
    if (pts.size() < 3)
        return 0.0;
    auto cost = [&](double m) {
        double mean = 0.0;
        for (const Shell& s : pts)
            mean += std::log(s.value) - std::log(bessel_K0(m * s.r));
        mean /= pts.size();
        double c = 0.0;
        for (const Shell& s : pts) {
            double e = std::log(s.value) - std::log(bessel_K0(m * s.r)) - mean;
            c += e * e;
        }
        return c;
    };
    double a = 0.05, b = 5.0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = cost(c), fd = cost(d);
    for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = cost(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = cost(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

DecayReport taubes_decay_check(const ScalarField& phi0, double epsilon)
{
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw Error(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1)");
    const Grid2D& g = phi0.grid();
    DecayReport rep;
    rep.epsilon = epsilon;
    const double dw = std::max(0.25, 2.0 * g.h);
    auto deficit = [&](int i, int j) { return 0.5 * (1.0 - std::norm(phi0(i, j))); };
    auto sh = shell_maxima(g, 2.0, g.R - 2.0, dw,
                           [&](int i, int j, double r) { return deficit(i, j) * std::exp(r * (1.0 - epsilon)); });
    double M = 0.0;
    for (const Shell& s : sh)
        M = std::max(M, s.value);
    bool monotone = true;
    double prev = std::numeric_limits<double>::infinity();
    for (const Shell& s : sh) {
        if (s.r < 6.0)
            continue;
        if (s.value > prev)
            monotone = false;
        prev = s.value;
    }
    rep.bound_constant = M;
    rep.pass = std::isfinite(M) && monotone;
    auto tail = shell_maxima(g, 8.0, std::min(14.0, g.R - 2.0), dw,
                             [&](int i, int j, double) { return 2.0 * deficit(i, j); });
    rep.measured_rate = fit_k0_mass(tail);
    return rep;
}

void write_profile(const std::string& path, const VortexProfile& p)
{
    std::ofstream os(path, std::ios::trunc);
    if (!os)
        throw Error(ErrorKind::IoError, "cannot open " + path);
    os << std::setprecision(17);
    os << p.N << ' ' << p.r_max << ' ' << p.n_r << ' ' << p.tol << '\n';
    for (std::size_t j = 0; j < p.r.size(); ++j)
        os << p.r[j] << ' ' << p.u[j] << ' ' << p.f[j] << '\n';
    if (!os)
        throw Error(ErrorKind::IoError, "write failed for " + path);
}

VortexProfile read_profile(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw Error(ErrorKind::IoError, "cannot open " + path);
    VortexProfile p;
    std::string line;
    if (!std::getline(is, line))
        throw Error(ErrorKind::IoError, path + " is empty");
    {
        std::istringstream hs(line);
        if (!(hs >> p.N >> p.r_max >> p.n_r >> p.tol))
            throw Error(ErrorKind::IoError, "bad profile header in " + path);
    }
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string rs, us, fs;
        if (!(ls >> rs >> us >> fs))
            throw Error(ErrorKind::IoError, "bad profile row in " + path);
        p.r.push_back(std::stod(rs));
        p.u.push_back(std::stod(us));
        p.f.push_back(std::stod(fs));
    }
    if (static_cast<int>(p.r.size()) != p.n_r + 1)
        throw Error(ErrorKind::IoError, "profile row count does not match n_r in " + path);
    p.v.resize(p.r.size());
    for (std::size_t j = 1; j < p.r.size(); ++j)
        p.v[j] = p.u[j] - log_ratio(p.N, p.r[j]);
    if (p.N == 0) {
        p.v[0] = p.u[0];
    } else {
        // v is even: quadratic in s = r^2 through nodes 1..3, evaluated at s = 0
        const double s1 = 1.0, s2 = 4.0, s3 = 9.0;
        p.v[0] = p.v[1] * s2 * s3 / ((s1 - s2) * (s1 - s3)) + p.v[2] * s1 * s3 / ((s2 - s1) * (s2 - s3))
            + p.v[3] * s1 * s2 / ((s3 - s1) * (s3 - s2));
    }
    finish_profile(p);
    return p;
}

} // namespace ncvortex
