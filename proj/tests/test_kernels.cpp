#include <cstring>
#include <random>
#include <vector>

#include "ncvortex/kernels.hpp"
#include "support.hpp"

using namespace ncvortex::kernels;

namespace {

std::vector<cplx> random_field(int n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d;
    std::vector<cplx> v(static_cast<std::size_t>(n) * n);
    for (auto& x : v)
        x = cplx(d(rng), d(rng));
    return v;
}

template <class T>
bool bit_equal(const std::vector<T>& a, const std::vector<T>& b)
{
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0;
}

} // namespace

TEST_CASE("serial and parallel kernels agree bit for bit")
{
    for (int n : {32, 100, 256}) {
        const auto f = random_field(n, 7u + n);
        const double h = 0.37;
        std::vector<cplx> s(f.size()), p(f.size());
        serial::diff_x(f.data(), s.data(), n, h);
        omp::diff_x(f.data(), p.data(), n, h);
        CHECK(bit_equal(s, p));
        serial::diff_y(f.data(), s.data(), n, h);
        omp::diff_y(f.data(), p.data(), n, h);
        CHECK(bit_equal(s, p));
        serial::laplacian(f.data(), s.data(), n, h);
        omp::laplacian(f.data(), p.data(), n, h);
        CHECK(bit_equal(s, p));

        std::vector<double> u(f.size()), V(f.size()), os(f.size()), op(f.size());
        for (std::size_t k = 0; k < f.size(); ++k) {
            u[k] = f[k].real();
            V[k] = std::abs(f[k].imag());
        }
        serial::screened_apply(u.data(), V.data(), os.data(), n, h, 2);
        omp::screened_apply(u.data(), V.data(), op.data(), n, h, 2);
        CHECK(bit_equal(os, op));

        const cplx cs = serial::sum(f.data(), f.size()), cp = omp::sum(f.data(), f.size());
        CHECK(std::memcmp(&cs, &cp, sizeof(cplx)) == 0);
        const double ds = serial::dot(u.data(), V.data(), u.size()), dp = omp::dot(u.data(), V.data(), u.size());
        CHECK(std::memcmp(&ds, &dp, sizeof(double)) == 0);
    }
}

TEST_CASE("chunked pairwise sum is accurate")
{
    // 1 + many tiny values: naive left-to-right summation loses them
    std::vector<double> v(1 << 20, 1e-16);
    v[0] = 1.0;
    const double s = serial::sum(v.data(), v.size());
    CHECK(s == doctest::Approx(1.0 + (v.size() - 1) * 1e-16).epsilon(1e-15));
}

TEST_CASE("screened operator is symmetric")
{
    const int n = 48;
    const auto f = random_field(n, 3), g = random_field(n, 4);
    std::vector<double> u(f.size()), w(f.size()), V(f.size(), 0.5), Au(f.size()), Aw(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        u[k] = f[k].real();
        w[k] = g[k].real();
    }
    // zero outer rings so the operator acts on the active set only
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (std::min(std::min(i, j), std::min(n - 1 - i, n - 1 - j)) < 2)
                u[j * n + i] = w[j * n + i] = 0.0;
    serial::screened_apply(u.data(), V.data(), Au.data(), n, 0.1, 2);
    serial::screened_apply(w.data(), V.data(), Aw.data(), n, 0.1, 2);
    const double a = serial::dot(w.data(), Au.data(), u.size()), b = serial::dot(u.data(), Aw.data(), u.size());
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
}
