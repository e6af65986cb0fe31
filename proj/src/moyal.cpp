#include "ncvortex/moyal.hpp"

#include <cmath>
#include <string>

#include "ncvortex/errors.hpp"

namespace ncvortex {

namespace {

const cplx I(0.0, 1.0);

// t[a][b] = d^a dbar^b f for a + b <= order
struct DerivTable {
    std::vector<std::vector<ScalarField>> t;
};

DerivTable build_table(const ScalarField& f, int order)
{
    DerivTable tab;
    tab.t.resize(order + 1);
    for (int a = 0; a <= order; ++a) {
        tab.t[a].resize(order + 1 - a);
        if (a == 0)
            tab.t[0][0] = f;
        else
            tab.t[a][0] = derivative(tab.t[a - 1][0], Deriv::d);
        for (int b = 1; a + b <= order; ++b)
            tab.t[a][b] = derivative(tab.t[a][b - 1], Deriv::dbar);
    }
    return tab;
}

double binom(int n, int k)
{
    double r = 1.0;
    for (int m = 1; m <= k; ++m)
        r = r * (n - k + m) / m;
    return r;
}

double factorial(int n)
{
    double r = 1.0;
    for (int m = 2; m <= n; ++m)
        r *= m;
    return r;
}

ScalarField star_term(const DerivTable& F, const DerivTable& G, int n)
{
    if (n == 0)
        return F.t[0][0] * G.t[0][0];
    const double pre = std::pow(0.5, n) / factorial(n);
    ScalarField acc;
    for (int j = 0; j <= n; ++j) {
        const double c = pre * binom(n, j) * (j % 2 == 0 ? 1.0 : -1.0);
        ScalarField term = cplx(c) * (F.t[n - j][j] * G.t[j][n - j]);
        acc = j == 0 ? term : acc + term;
    }
    return acc;
}

void require_order(const ThetaSeries& s, int k)
{
    if (s.phi.empty())
        throw Error(ErrorKind::MissingLowerOrder, "series has no populated orders");
    if (s.populated() < k || static_cast<int>(s.a.size()) < k)
        throw Error(ErrorKind::MissingLowerOrder, "order " + std::to_string(k) + " needs orders 0.."
                                                      + std::to_string(k - 1) + ", series has "
                                                      + std::to_string(s.populated()));
}

std::vector<ScalarField> conj_all(const std::vector<ScalarField>& v)
{
    std::vector<ScalarField> out;
    out.reserve(v.size());
    for (const auto& f : v)
        out.push_back(f.conj());
    return out;
}

std::vector<ScalarField> a_part(const ThetaSeries& s, int upto)
{
    std::vector<ScalarField> out;
    for (int k = 0; k < upto; ++k)
        out.push_back(s.a[k].a);
    return out;
}

std::vector<ScalarField> abar_part(const ThetaSeries& s, int upto)
{
    std::vector<ScalarField> out;
    for (int k = 0; k < upto; ++k)
        out.push_back(s.a[k].abar);
    return out;
}

std::vector<ScalarField> phi_part(const ThetaSeries& s, int upto)
{
    return std::vector<ScalarField>(s.phi.begin(), s.phi.begin() + upto);
}

// coefficient k of [F, G]_*
ScalarField series_commutator(const std::vector<ScalarField>& F, const std::vector<ScalarField>& G, int k,
                              bool skip_top = false)
{
    return series_star(F, G, k, skip_top) - series_star(G, F, k, skip_top);
}

} // namespace

void validate(const StarTruncation& t)
{
    if (t.K < 0 || t.K > 6)
        throw Error(ErrorKind::InvalidArgument, "truncation order must be in 0..6, got " + std::to_string(t.K));
    if (!(t.theta >= 0.0) || !std::isfinite(t.theta))
        throw Error(ErrorKind::InvalidArgument, "theta must be finite and >= 0");
}

std::vector<unsigned char> outside_radius(const Grid2D& g, double radius)
{
    std::vector<unsigned char> v(g.size());
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i)
            v[static_cast<std::size_t>(j) * g.n + i] = std::hypot(g.x(i), g.x(j)) > radius ? 1 : 0;
    return v;
}

std::vector<ScalarField> star(const ScalarField& f, const ScalarField& g, const StarTruncation& t)
{
    validate(t);
    require_same_grid(f, g);
    DerivTable F = build_table(f, t.K), G = build_table(g, t.K);
    std::vector<ScalarField> out;
    for (int n = 0; n <= t.K; ++n)
        out.push_back(star_term(F, G, n));
    return out;
}

std::vector<ScalarField> star_commutator(const ScalarField& f, const ScalarField& g, const StarTruncation& t)
{
    std::vector<ScalarField> fg = star(f, g, t), gf = star(g, f, t);
    std::vector<ScalarField> out;
    for (std::size_t n = 0; n < fg.size(); ++n)
        out.push_back(fg[n] - gf[n]);
    return out;
}

ScalarField evaluate(const std::vector<ScalarField>& coeffs, double theta)
{
    if (coeffs.empty())
        throw Error(ErrorKind::InvalidArgument, "no coefficients to evaluate");
    ScalarField acc = coeffs[0];
    if (theta == 0.0)
        return acc;
    double tn = 1.0;
    for (std::size_t n = 1; n < coeffs.size(); ++n) {
        tn *= theta;
        acc = acc + cplx(tn) * coeffs[n];
    }
    return acc;
}

ScalarField series_star(const std::vector<ScalarField>& F, const std::vector<ScalarField>& G, int k, bool skip_top)
{
    if (F.empty() || G.empty())
        throw Error(ErrorKind::MissingLowerOrder, "empty series in star product");
    require_same_grid(F.front(), G.front());
    ScalarField acc = ScalarField::zeros(F.front().grid());
    const int na = std::min<int>(k, static_cast<int>(F.size()) - 1);
    for (int a = 0; a <= na; ++a) {
        const int nb = std::min<int>(k - a, static_cast<int>(G.size()) - 1);
        if (nb < 0)
            continue;
        DerivTable Ft = build_table(F[a], k - a);
        for (int b = 0; b <= nb; ++b) {
            const int n = k - a - b;
            if (skip_top && n == 0 && (a == k || b == k))
                continue;
            DerivTable Gt = build_table(G[b], n);
            acc = acc + star_term(Ft, Gt, n);
        }
    }
    return acc;
}

std::vector<ScalarField> nc_magnetic_field(const ThetaSeries& s)
{
    require_order(s, 1);
    const int m = s.populated();
    std::vector<ScalarField> A = a_part(s, m), Ab = abar_part(s, m);
    std::vector<ScalarField> out;
    for (int k = 0; k < m; ++k) {
        ScalarField lin = -I * (derivative(Ab[k], Deriv::d) - derivative(A[k], Deriv::dbar));
        out.push_back(lin - series_commutator(A, Ab, k));
    }
    return out;
}

ScalarField coeff_C_k(const ThetaSeries& s, int k)
{
    require_order(s, std::max(k, 1));
    if (k == 0)
        return ScalarField::zeros(s.grid());
    std::vector<ScalarField> A = a_part(s, k), Ab = abar_part(s, k), P = phi_part(s, k);
    return series_star(P, conj_all(P), k, true) - series_commutator(A, Ab, k, true);
}

ScalarField coeff_D_k(const ThetaSeries& s, int k)
{
    require_order(s, std::max(k, 1));
    if (k == 0)
        return ScalarField::zeros(s.grid());
    return -I * series_star(abar_part(s, k), phi_part(s, k), k, true);
}

MaskedField coeff_E_k(const ThetaSeries& s, int k, double mask_radius)
{
    if (k < 1)
        throw Error(ErrorKind::InvalidArgument, "E_k is defined for k >= 1");
    require_order(s, k);
    const Grid2D& g = s.grid();
    const ScalarField& phi0 = s.phi[0];
    std::vector<unsigned char> valid = outside_radius(g, mask_radius);
    std::vector<cplx> d(g.size());
    ScalarField Dk = coeff_D_k(s, k);
    for (std::size_t q = 0; q < g.size(); ++q) {
        const double m = std::abs(phi0.values()[q]);
        if (valid[q] && m < 1e-6)
            throw Error(ErrorKind::MaskTooSmall, "|phi0| < 1e-6 outside mask radius " + std::to_string(mask_radius));
        // inside the mask the quotient is kept where it is representable
        d[q] = m > 1e-200 ? Dk.values()[q] / phi0.values()[q] : cplx(0.0);
    }
    ScalarField dk(g, std::move(d), Dk.margin());
    ScalarField ddk = derivative(dk, Deriv::d);
    ScalarField E = -coeff_C_k(s, k) + ddk + ddk.conj();
    return {E, std::move(valid)};
}

NcResiduals nc_bps_residual(const ThetaSeries& s)
{
    require_order(s, 1);
    const int m = s.populated();
    std::vector<ScalarField> B = nc_magnetic_field(s);
    std::vector<ScalarField> P = phi_part(s, m), Pb = conj_all(P), Ab = abar_part(s, m);
    NcResiduals r;
    for (int k = 0; k < m; ++k) {
        ScalarField r1 = B[k] + series_star(P, Pb, k);
        if (k == 0)
            r1 = r1 - ScalarField::constant(s.grid(), 1.0);
        r.r1.push_back(r1);
        r.r2.push_back(derivative(P[k], Deriv::dbar) - I * series_star(Ab, P, k));
    }
    return r;
}

ActionValue action_value(const ThetaSeries& s)
{
    require_order(s, 1);
    validate(s.trunc);
    const int m = std::min(s.populated(), s.trunc.K + 1);
    const Grid2D& g = s.grid();
    std::vector<ScalarField> P = phi_part(s, m), Pb = conj_all(P), A = a_part(s, m), Ab = abar_part(s, m);
    std::vector<ScalarField> B = nc_magnetic_field(s);
    B.resize(m);
    // covariant derivatives, order by order
    std::vector<ScalarField> Dphi, Dbphib, Dbphi, Dphib, pot;
    for (int k = 0; k < m; ++k) {
        Dphi.push_back(derivative(P[k], Deriv::d) - I * series_star(A, P, k));
        Dbphib.push_back(derivative(Pb[k], Deriv::dbar) + I * series_star(Pb, Ab, k));
        Dbphi.push_back(derivative(P[k], Deriv::dbar) - I * series_star(Ab, P, k));
        Dphib.push_back(derivative(Pb[k], Deriv::d) + I * series_star(Pb, A, k));
        ScalarField pp = series_star(P, Pb, k);
        pot.push_back(k == 0 ? pp - ScalarField::constant(g, 1.0) : pp);
    }
    ActionValue out;
    double tk = 1.0;
    for (int k = 0; k < m; ++k) {
        // -1/2 F*F with F = iB gives +1/2 B*B
        ScalarField dens = cplx(0.5) * series_star(B, B, k) + series_star(Dphi, Dbphib, k)
            + series_star(Dbphi, Dphib, k) + cplx(0.5) * series_star(pot, pot, k);
        out.S += tk * integrate(dens).real();
        out.S_T += tk * integrate(B[k]).real();
        tk *= s.trunc.theta;
    }
    return out;
}

} // namespace ncvortex
