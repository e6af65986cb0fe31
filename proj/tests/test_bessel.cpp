#include <cmath>

#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "ncvortex/bessel.hpp"
#include "support.hpp"

using namespace ncvortex;

TEST_CASE("K0 against its cosine-integral representation")
{
    boost::math::quadrature::ooura_fourier_cos<double> cosint;
    auto f = [](double t) { return 1.0 / std::sqrt(t * t + 1.0); };
    for (double x : {0.1, 0.5, 1.0, 2.0, 3.7, 6.0, 10.0}) {
        const double ref = cosint.integrate(f, x).first;
        INFO("x = ", x);
        CHECK(std::abs(bessel_K0(x) - ref) <= 1e-8);
    }
}

TEST_CASE("K0 and K1 relative accuracy")
{
    double worst = 0.0;
    for (double x = 1e-3; x < 60.0; x *= 1.01) {
        worst = std::max(worst, std::abs(bessel_K0(x) / boost::math::cyl_bessel_k(0, x) - 1.0));
        worst = std::max(worst, std::abs(bessel_K1(x) / boost::math::cyl_bessel_k(1, x) - 1.0));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("K0 asymptotics")
{
    // large-x expansion through the second correction term
    const double x = 50.0, series = 1.0 - 1.0 / (8 * x) + 9.0 / (128 * x * x);
    CHECK(std::abs(bessel_K0(x) * std::exp(x) * std::sqrt(2 * x / M_PI) / series - 1.0) <= 1e-5);
    CHECK(std::abs(bessel_K0(1e-6) / -std::log(1e-6) - 1.0) <= 1e-2);
    CHECK_ERROR_KIND(bessel_K0(0.0), ErrorKind::DomainError);
    CHECK_ERROR_KIND(bessel_K0(-1.0), ErrorKind::DomainError);
}
