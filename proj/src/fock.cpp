#include "ncvortex/fock.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ncvortex/errors.hpp"

namespace ncvortex {
namespace {

const cplx I(0.0, 1.0);

TruncatedOperator like(const TruncatedOperator& f, Eigen::MatrixXcd m) { return {std::move(m), f.margin}; }

void require_theta(double theta)
{
    if (!(theta > 0.0) || !std::isfinite(theta))
        throw Error(ErrorKind::InvalidArgument, "theta must be positive");
}

void require_shared(const TruncatedOperator& a, const TruncatedOperator& b)
{
    if (a.dim() != b.dim())
        throw Error(ErrorKind::InvalidArgument, "operators of different dimension");
}

double interior_max(const TruncatedOperator& f) { return f.block().cwiseAbs().maxCoeff(); }

} // namespace

void validate(const TruncatedOperator& f)
{
    if (f.m.rows() != f.m.cols())
        throw Error(ErrorKind::InvalidArgument, "operator matrix is not square");
    if (f.margin < 0 || 2 * f.margin >= f.dim())
        throw Error(ErrorKind::InvalidArgument, "margin must satisfy 0 <= m < M/2");
    if (!f.m.allFinite())
        throw Error(ErrorKind::InvalidArgument, "operator has non-finite entries");
}

Ladder ladder_ops(int M, int margin)
{
    if (M < 8)
        throw Error(ErrorKind::InvalidArgument, "ladder operators need M >= 8");
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(M, M), num = Eigen::MatrixXcd::Zero(M, M);
    for (int k = 1; k < M; ++k)
        a(k - 1, k) = std::sqrt(static_cast<double>(k));
    for (int k = 0; k < M; ++k)
        num(k, k) = k;
    Ladder L{{a, margin}, {a.adjoint(), margin}, {num, margin}};
    validate(L.a);
    return L;
}

TruncatedOperator op_derivative(const TruncatedOperator& f, Deriv which, double theta)
{
    require_theta(theta);
    const Ladder L = ladder_ops(f.dim(), f.margin);
    const double s = 1.0 / std::sqrt(theta);
    Eigen::MatrixXcd out = which == Deriv::d ? Eigen::MatrixXcd(-s * (L.adag.m * f.m - f.m * L.adag.m))
                                             : Eigen::MatrixXcd(s * (L.a.m * f.m - f.m * L.a.m));
    return {std::move(out), f.margin + 1};
}

cplx op_trace_integral(const TruncatedOperator& f, double theta)
{
    require_theta(theta);
    return 2.0 * std::numbers::pi * theta * f.block().trace();
}

BakSolution bak_solution(int M, double theta, int margin)
{
    if (M < 32)
        throw Error(ErrorKind::InvalidArgument, "Bak solution needs M >= 32");
    require_theta(theta);
    const Ladder L = ladder_ops(M, margin);
    Eigen::MatrixXcd phi = Eigen::MatrixXcd::Zero(M, M);
    for (int k = 0; k + 1 < M; ++k)
        phi(k + 1, k) = 1.0;
    // abar = (a - sqrt(n/(n+1)) a)/(i sqrt theta)
    Eigen::MatrixXcd dress = Eigen::MatrixXcd::Zero(M, M);
    for (int k = 0; k < M; ++k)
        dress(k, k) = std::sqrt(k / (k + 1.0));
    Eigen::MatrixXcd abar = (L.a.m - dress * L.a.m) / (I * std::sqrt(theta));
    return {{phi, margin}, {abar.adjoint(), margin}, {abar, margin}};
}

TruncatedOperator op_magnetic_field(const TruncatedOperator& a, const TruncatedOperator& abar, double theta)
{
    require_shared(a, abar);
    const TruncatedOperator d_abar = op_derivative(abar, Deriv::d, theta);
    const TruncatedOperator db_a = op_derivative(a, Deriv::dbar, theta);
    Eigen::MatrixXcd B = I * (d_abar.m - db_a.m) + (a.m * abar.m - abar.m * a.m);
    return {std::move(B), std::max(d_abar.margin, db_a.margin)};
}

OpResiduals op_bps_residual(const TruncatedOperator& phi, const TruncatedOperator& a, const TruncatedOperator& abar,
                            double theta)
{
    require_shared(phi, a);
    require_shared(phi, abar);
    const TruncatedOperator B = op_magnetic_field(a, abar, theta);
    const TruncatedOperator dbphi = op_derivative(phi, Deriv::dbar, theta);
    const int M = phi.dim();
    OpResiduals r;
    r.r1 = like(dbphi, dbphi.m - I * abar.m * phi.m);
    r.r2 = like(B, B.m + phi.m * phi.m.adjoint() - Eigen::MatrixXcd::Identity(M, M));
    r.sup1 = interior_max(r.r1);
    r.sup2 = interior_max(r.r2);
    return r;
}

double topological_charge(const TruncatedOperator& B, double theta)
{
    require_theta(theta);
    return theta * B.block().trace().real();
}

int unitarity_defect_rank(const TruncatedOperator& phi)
{
    const int P = phi.interior();
    Eigen::MatrixXcd d = (phi.m * phi.m.adjoint()).topLeftCorner(P, P) - Eigen::MatrixXcd::Identity(P, P);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(d);
    int rank = 0;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
        rank += svd.singularValues()[k] > 1e-10 ? 1 : 0;
    return rank;
}

ScalarField ketbra_star_field(int n, int m, double theta, const Grid2D& g)
{
    if (n < 0 || m < 0)
        throw Error(ErrorKind::InvalidArgument, "ket-bra labels must be >= 0");
    require_theta(theta);
    const double norm_log = -0.5 * (std::lgamma(n + 1.0) + std::lgamma(m + 1.0) + (n + m) * std::log(theta));
    std::vector<cplx> out(g.size());
#pragma omp parallel for schedule(static)
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            const cplx z = cplx(g.x(i), g.x(j)) / std::sqrt(2.0);
            const double t = std::norm(z) / theta;
            // sum_k (-t)^k/k! at t/2^s, then raised to the power 2^s
            int s = 0;
            double ts = t;
            while (ts > 0.5) {
                ts *= 0.5;
                ++s;
            }
            double sum = 1.0, term = 1.0;
            for (int k = 1; k < 60; ++k) {
                term *= -ts / k;
                sum += term;
                if (std::abs(term) < 1e-17 * std::abs(sum))
                    break;
            }
            const double log_series = std::ldexp(std::log(sum), s);
            const double mag = std::abs(z);
            double log_val = norm_log + log_series;
            if (n + m > 0) {
                if (mag == 0.0) {
                    out[static_cast<std::size_t>(j) * g.n + i] = 0.0;
                    continue;
                }
                log_val += (n + m) * std::log(mag);
            }
            if (log_val > std::log(std::numeric_limits<double>::max()))
                throw Error(ErrorKind::SeriesOverflow, "ket-bra symbol overflows at node "
                                                           + std::to_string(i) + "," + std::to_string(j));
            const double phase = (m - n) * std::arg(z);
            out[static_cast<std::size_t>(j) * g.n + i] = std::polar(std::exp(log_val), phase);
        }
    return ScalarField(g, std::move(out));
}

double varphi_eval(double x, double theta)
{
    require_theta(theta);
    if (x < 0.0)
        throw Error(ErrorKind::DomainError, "varphi needs x >= 0");
    if (x == 0.0)
        return 0.0;
    const double X2 = x * x / theta;
    // log of x e^{-X^2} X^{2n} / (n! sqrt((n+1) theta)), combined by log-sum-exp
    const double lx = std::log(x), lX2 = std::log(X2);
    auto log_term = [&](int k) {
        return lx - X2 + k * lX2 - std::lgamma(k + 1.0) - 0.5 * std::log((k + 1.0) * theta);
    };
    const int peak = static_cast<int>(X2);
    const double top = log_term(peak);
    double acc = 0.0;
    for (int k = peak; k >= 0; --k) {
        const double e = std::exp(log_term(k) - top);
        acc += e;
        if (e < 1e-18 && k < peak)
            break;
    }
    for (int k = peak + 1;; ++k) {
        const double e = std::exp(log_term(k) - top);
        acc += e;
        if (e < 1e-18)
            break;
    }
    const double v = std::exp(top + std::log(acc));
    if (!std::isfinite(v))
        throw Error(ErrorKind::SeriesOverflow, "varphi series not representable at x = " + std::to_string(x));
    return v;
}

double varphi_bound(double x, double theta)
{
    require_theta(theta);
    if (x < 0.0)
        throw Error(ErrorKind::DomainError, "bound needs x >= 0");
    if (x == 0.0)
        return 0.0;
    auto integrand = [&](double s) {
        if (s == 0.0)
            return 1.0 / std::sqrt(theta);
        return std::sqrt(theta) / (s * s) * -std::expm1(-s * s / theta);
    };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, x, 15, 1e-13);
}

VarphiBoundReport varphi_bound_check(double theta, double x_max, int samples)
{
    require_theta(theta);
    if (samples < 2 || !(x_max > 0.0))
        throw Error(ErrorKind::InvalidArgument, "bound check needs samples >= 2 and x_max > 0");
    VarphiBoundReport r;
    r.theta = theta;
    r.samples = samples;
    r.worst_margin = std::numeric_limits<double>::infinity();
    // log-spaced on (0, x_max], starting four decades below x_max
    const double lo = x_max * 1e-4;
    std::vector<double> vals;
    for (int k = 0; k < samples; ++k) {
        const double x = lo * std::pow(x_max / lo, static_cast<double>(k) / (samples - 1));
        const double v = std::abs(varphi_eval(x, theta));
        const double b = varphi_bound(x, theta);
        vals.push_back(v);
        r.worst_margin = std::min(r.worst_margin, b - v);
        if (v > b)
            ++r.violations;
    }
    std::size_t top = 0;
    for (std::size_t k = 1; k < vals.size(); ++k)
        if (vals[k] > vals[top])
            top = k;
    r.monotone = true;
    for (std::size_t k = 1; k <= top; ++k)
        r.monotone = r.monotone && vals[k] > vals[k - 1];
    r.value_at_8 = std::abs(varphi_eval(8.0 * std::sqrt(theta), theta));
    r.pass = r.violations == 0 && std::abs(r.value_at_8 - 1.0) <= 0.02;
    return r;
}

ScalarField gaussian_smooth(const ScalarField& f, double theta)
{
    if (!(theta >= 0.0))
        throw Error(ErrorKind::InvalidArgument, "theta must be >= 0");
    if (theta == 0.0)
        return f;
    const Grid2D& g = f.grid();
    const int n = g.n;
    // 1D kernel e^{-x^2/theta}/sqrt(pi theta), cut where it drops below e^-40
    const int half = std::min(n - 1, static_cast<int>(std::ceil(std::sqrt(40.0 * theta) / g.h)));
    std::vector<double> w(2 * half + 1);
    double total = 0.0;
    for (int k = -half; k <= half; ++k) {
        const double x = k * g.h;
        w[k + half] = std::exp(-x * x / theta);
        total += w[k + half];
    }
    for (double& v : w)
        v /= total;
    std::vector<cplx> tmp(g.size()), out(g.size());
    const cplx* src = f.data();
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            cplx acc = 0.0;
            for (int k = std::max(-half, -i); k <= std::min(half, n - 1 - i); ++k)
                acc += w[k + half] * src[static_cast<std::size_t>(j) * n + i + k];
            tmp[static_cast<std::size_t>(j) * n + i] = acc;
        }
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            cplx acc = 0.0;
            for (int k = std::max(-half, -j); k <= std::min(half, n - 1 - j); ++k)
                acc += w[k + half] * tmp[static_cast<std::size_t>(j + k) * n + i];
            out[static_cast<std::size_t>(j) * n + i] = acc;
        }
    return ScalarField(g, std::move(out), f.margin());
}

} // namespace ncvortex
