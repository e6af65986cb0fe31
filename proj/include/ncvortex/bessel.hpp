#pragma once

namespace ncvortex {

// Modified Bessel functions of the second kind, x > 0.
double bessel_K0(double x);
double bessel_K1(double x);

} // namespace ncvortex
