#include <cmath>
#include <map>
#include <filesystem>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "ncvortex/moyal.hpp"
#include "ncvortex/taubes.hpp"
#include "support.hpp"

using namespace ncvortex;

namespace {

// Independent oracle: shoot w = log(|phi|^2 / r^2N) from the origin,
// w'' + w'/r = 2 (r^2N e^w - 1), w'(0) = 0, bisecting on w(0).
// Returns f(1) = e^{w(1)/2}.
double shooting_f1(int N)
{
    using State = std::array<double, 2>;
    namespace ode = boost::numeric::odeint;
    auto rhs = [N](const State& s, State& d, double r) {
        d[0] = s[1];
        d[1] = 2.0 * (std::pow(r, 2 * N) * std::exp(s[0]) - 1.0) - s[1] / r;
    };
    // +1: overshoots (|phi| > 1), -1: turns back down
    auto fate = [&](double w0, double* f1) {
        const double r0 = 1e-6;
        State s{w0 - r0 * r0 / 2.0, -r0};
        auto stepper = ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_dopri5<State>());
        double r = r0, dr = 1e-4;
        bool recorded = false;
        while (r < 12.0) {
            const double target = (!recorded && r < 1.0) ? 1.0 : 12.0;
            double step = std::min(dr, target - r);
            while (stepper.try_step(rhs, s, r, step) == ode::fail)
                ;
            dr = step;
            if (!recorded && r >= 1.0) {
                *f1 = std::exp(0.5 * s[0]);
                recorded = true;
            }
            const double u = s[0] + 2.0 * N * std::log(r);
            const double du = s[1] + 2.0 * N / r;
            if (u > 0.0)
                return 1;
            if (du < 0.0)
                return -1;
        }
        return 0;
    };
    double lo = -10.0, hi = 5.0, f1 = 0.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const int s = fate(mid, &f1);
        if (s > 0)
            hi = mid;
        else if (s < 0)
            lo = mid;
        else
            break;
    }
    fate(0.5 * (lo + hi), &f1);
    return f1;
}

struct Solved {
    VortexProfile p;
    Grid2D g;
    VortexBackground bg;
};

const Solved& reference(int N)
{
    static std::map<int, Solved> cache;
    auto it = cache.find(N);
    if (it == cache.end()) {
        VortexProfile p = solve_radial_taubes(N, 16.0, 4096, 1e-10);
        Grid2D g = make_grid(16.0, 512);
        VortexBackground bg = lift_to_grid(p, g);
        it = cache.emplace(N, Solved{std::move(p), g, std::move(bg)}).first;
    }
    return it->second;
}

} // namespace

TEST_CASE("vacuum profile")
{
    const VortexProfile p = solve_radial_taubes(0, 16.0, 1024, 1e-10);
    for (std::size_t j = 0; j < p.f.size(); ++j) {
        CHECK(p.u[j] == 0.0);
        CHECK(p.f[j] == 1.0);
    }
    const Grid2D g = make_grid(16.0, 64);
    const VortexBackground bg = lift_to_grid(p, g);
    CHECK(interior_sup(bg.phi - ScalarField::constant(g, 1.0), 0) == 0.0);
    CHECK(interior_sup(bg.a.a, 0) == 0.0);
    const auto [r1, r2] = commutative_residuals(bg.phi, bg.a);
    CHECK(interior_sup(r1) == 0.0);
    CHECK(interior_sup(r2) == 0.0);
    const DecayReport d = taubes_decay_check(bg.phi, 0.1);
    CHECK(d.bound_constant == 0.0);
    CHECK(d.pass);
}

TEST_CASE("solver preconditions")
{
    CHECK_ERROR_KIND(solve_radial_taubes(-1, 16.0, 4096, 1e-10), ErrorKind::InvalidWinding);
    CHECK_THROWS(solve_radial_taubes(1, 8.0, 4096, 1e-10));
    CHECK_THROWS(solve_radial_taubes(1, 16.0, 512, 1e-10));
    CHECK_THROWS(solve_radial_taubes(1, 16.0, 4096, 1e-6));
    const VortexProfile p = solve_radial_taubes(1, 16.0, 1024, 1e-10);
    CHECK_ERROR_KIND(lift_to_grid(p, make_grid(20.0, 64)), ErrorKind::GridLargerThanProfile);
}

TEST_CASE("N=1 profile: monotone, saturating, matches a shooting integrator")
{
    const VortexProfile& p = reference(1).p;
    CHECK(p.residual <= 1e-10);
    for (std::size_t j = 1; j < p.f.size(); ++j)
        CHECK_MESSAGE(p.f[j] > p.f[j - 1], "at r = ", p.r[j]);
    CHECK(p.f.back() >= 1.0 - 1e-6);
    CHECK(p.f.back() < 1.0);
    const double f1 = std::exp(0.5 * p.at(1.0).u);
    const double oracle = shooting_f1(1);
    INFO("profile ", f1, " shooting ", oracle);
    CHECK(std::abs(f1 - oracle) <= 1e-6);
}

TEST_CASE("N=2 multiplicity law near the origin")
{
    const VortexProfile p = solve_radial_taubes(2, 16.0, 4096, 1e-10);
    const double r1 = p.r[1], r2 = 20.0 * r1;
    const double slope = (std::log(std::exp(0.5 * p.at(r2).u)) - std::log(std::exp(0.5 * p.at(r1).u)))
        / (std::log(r2) - std::log(r1));
    CHECK(std::abs(slope - 2.0) <= 0.02);
}

TEST_CASE("lifted N=1 background on the reference grid")
{
    const Solved& s = reference(1);
    const auto [r1, r2] = commutative_residuals(s.bg.phi, s.bg.a);
    CHECK(interior_sup(r1) <= 1e-5);
    CHECK(interior_sup(r2) <= 1e-5);
    // abar = conj(a) for a physical field
    CHECK(interior_sup(s.bg.a.abar - s.bg.a.a.conj(), 0) == 0.0);
    // two constructions of B0
    const ScalarField B_dual = cplx(-0.5) * laplacian_std(lift_w(s.p, s.g));
    CHECK(interior_sup(B_dual - lift_one_minus_f2(s.p, s.g)) <= 1e-5);
    // 0 < (1 - |phi0|^2)/2
    const ScalarField om = lift_one_minus_f2(s.p, s.g);
    double lowest = 1.0;
    for (const cplx& v : om.values())
        lowest = std::min(lowest, v.real());
    CHECK(lowest > 0.0);
}

TEST_CASE("vortex number quantization and B0 cross-check")
{
    for (int N : {1, 2, 3}) {
        const Solved& s = reference(N);
        const ScalarField B = magnetic_field(s.bg.a);
        INFO("N = ", N);
        CHECK(std::abs(vortex_number(B) - N) <= 1e-3);
        ThetaSeries series{{s.bg.phi}, {s.bg.a}, StarTruncation{0, 0.0}};
        CHECK(interior_sup(nc_magnetic_field(series)[0] - lift_one_minus_f2(s.p, s.g)) <= 1e-5);
    }
}

TEST_CASE("vortex_number basics")
{
    const Grid2D g = make_grid(8.0, 256);
    CHECK(vortex_number(ScalarField::zeros(g)) == 0.0);
    const ScalarField gauss = ScalarField::sample(g, [](double x, double y) { return std::exp(-(x * x + y * y)); });
    CHECK(std::abs(vortex_number(gauss) - 0.5) <= 1e-6);
    CHECK_ERROR_KIND(vortex_number(cplx(0.0, 1.0) * gauss), ErrorKind::NonRealField);
}

TEST_CASE("decay check")
{
    for (int N : {1, 2}) {
        const DecayReport d = taubes_decay_check(reference(N).bg.phi, 0.1);
        INFO("N = ", N, " rate ", d.measured_rate);
        CHECK(d.pass);
        CHECK(d.measured_rate >= 1.3);
        CHECK(d.measured_rate <= 1.45);
    }
    CHECK_THROWS(taubes_decay_check(reference(1).bg.phi, 1.5));
}

TEST_CASE("profile file round trip")
{
    const VortexProfile& p = reference(1).p;
    const auto path = std::filesystem::temp_directory_path() / "ncvortex_profile_test.txt";
    write_profile(path.string(), p);
    const VortexProfile q = read_profile(path.string());
    CHECK(q.N == p.N);
    CHECK(q.n_r == p.n_r);
    CHECK(std::abs(q.at(1.0).u - p.at(1.0).u) <= 1e-12);
    CHECK(std::abs(q.at(7.3).one_minus_f2 / p.at(7.3).one_minus_f2 - 1.0) <= 1e-9);
    std::filesystem::remove(path);
}
