#include "ncvortex/bessel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ncvortex/errors.hpp"

namespace ncvortex {

namespace {

constexpr double kEuler = 0.57721566490153286061;

struct KPair {
    double k0, k1;
};

// Ascending series, used for x <= 2.
KPair series(double x)
{
    const double y = 0.25 * x * x;
    const double lg = std::log(0.5 * x);
    double term = 1.0;      // y^k / (k!)^2
    double harm = 0.0;      // H_k
    double i0 = 0.0, s0 = 0.0;
    double term1 = 1.0;     // y^k / (k! (k+1)!)
    double psi1 = -kEuler;  // psi(k+1)
    double psi2 = 1.0 - kEuler; // psi(k+2)
    double i1 = 0.0, s1 = 0.0;
    for (int k = 0; k < 60; ++k) {
        if (k > 0) {
            term *= y / (static_cast<double>(k) * k);
            harm += 1.0 / k;
            term1 *= y / (static_cast<double>(k) * (k + 1));
            psi1 += 1.0 / k;
            psi2 += 1.0 / (k + 1);
        }
        i0 += term;
        s0 += term * harm;
        i1 += term1;
        s1 += term1 * (psi1 + psi2);
        if (term < 1e-18 * i0 && term1 < 1e-18 * i1)
            break;
    }
    i1 *= 0.5 * x;
    KPair r;
    r.k0 = -(lg + kEuler) * i0 + s0;
    r.k1 = 1.0 / x + lg * i1 - 0.25 * x * s1;
    return r;
}

// Steed's continued fraction for K_0 and K_1, used for x > 2.
KPair continued_fraction(double x)
{
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 1; i < 100000; ++i) {
        a -= 2 * i;
        c = -a * c / (i + 1.0);
        double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < 1e-17)
            break;
    }
    h = a1 * h;
    KPair r;
    r.k0 = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
    r.k1 = r.k0 * (x + 0.5 - h) / x;
    return r;
}

KPair eval(double x)
{
    if (!(x > 0.0))
        throw Error(ErrorKind::DomainError, "Bessel K needs x > 0, got " + std::to_string(x));
    return x <= 2.0 ? series(x) : continued_fraction(x);
}

} // namespace

double bessel_K0(double x) { return eval(x).k0; }
double bessel_K1(double x) { return eval(x).k1; }

} // namespace ncvortex
