#include "ncvortex/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "ncvortex/errors.hpp"
#include "ncvortex/kernels.hpp"

namespace ncvortex {

Grid2D make_grid(double R, int n)
{
    if (!(R > 0.0) || !std::isfinite(R))
        throw Error(ErrorKind::NonPositiveExtent, "R must be positive, got " + std::to_string(R));
    if (n % 2 != 0)
        throw Error(ErrorKind::OddGridSize, "n must be even, got " + std::to_string(n));
    if (n < 32)
        throw Error(ErrorKind::GridTooSmall, "n must be at least 32, got " + std::to_string(n));
    return Grid2D{R, n, 2.0 * R / n};
}

ScalarField::ScalarField(const Grid2D& g, std::vector<cplx> values, int margin)
    : grid_(g), values_(std::move(values)), margin_(margin)
{
    if (values_.size() != g.size())
        throw Error(ErrorKind::InvalidArgument,
                    "field has " + std::to_string(values_.size()) + " values, grid needs " + std::to_string(g.size()));
    for (const cplx& v : values_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error(ErrorKind::InvalidArgument, "field contains a non-finite value");
}

ScalarField ScalarField::zeros(const Grid2D& g) { return ScalarField(g, std::vector<cplx>(g.size())); }

ScalarField ScalarField::constant(const Grid2D& g, cplx c) { return ScalarField(g, std::vector<cplx>(g.size(), c)); }

namespace {

template <class Op>
ScalarField map1(const ScalarField& a, Op op)
{
    const std::size_t len = a.values().size();
    std::vector<cplx> out(len);
    const cplx* p = a.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(len); ++k)
        out[k] = op(p[k]);
    return ScalarField(a.grid(), std::move(out), a.margin());
}

template <class Op>
ScalarField map2(const ScalarField& a, const ScalarField& b, Op op)
{
    require_same_grid(a, b);
    const std::size_t len = a.values().size();
    std::vector<cplx> out(len);
    const cplx* p = a.data();
    const cplx* q = b.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(len); ++k)
        out[k] = op(p[k], q[k]);
    return ScalarField(a.grid(), std::move(out), std::max(a.margin(), b.margin()));
}

} // namespace

ScalarField ScalarField::with_margin(int m) const
{
    ScalarField f = *this;
    f.margin_ = m;
    return f;
}

ScalarField ScalarField::conj() const { return map1(*this, [](cplx v) { return std::conj(v); }); }
ScalarField ScalarField::real() const { return map1(*this, [](cplx v) { return cplx(v.real(), 0.0); }); }
ScalarField ScalarField::imag() const { return map1(*this, [](cplx v) { return cplx(v.imag(), 0.0); }); }
ScalarField ScalarField::abs2() const { return map1(*this, [](cplx v) { return cplx(std::norm(v), 0.0); }); }

double ScalarField::max_abs_imag(int ring) const
{
    return interior_sup(imag(), ring);
}

ScalarField operator+(const ScalarField& a, const ScalarField& b)
{
    return map2(a, b, [](cplx x, cplx y) { return x + y; });
}
ScalarField operator-(const ScalarField& a, const ScalarField& b)
{
    return map2(a, b, [](cplx x, cplx y) { return x - y; });
}
ScalarField operator*(const ScalarField& a, const ScalarField& b)
{
    return map2(a, b, [](cplx x, cplx y) { return x * y; });
}
ScalarField operator*(cplx c, const ScalarField& a)
{
    return map1(a, [c](cplx x) { return c * x; });
}
ScalarField operator-(const ScalarField& a)
{
    return map1(a, [](cplx x) { return -x; });
}

GaugeField GaugeField::zeros(const Grid2D& g) { return {ScalarField::zeros(g), ScalarField::zeros(g)}; }

GaugeField GaugeField::from_real(const ScalarField& a1, const ScalarField& a2)
{
    const double s = 1.0 / std::sqrt(2.0);
    const cplx i(0.0, 1.0);
    return {s * (a1 - i * a2), s * (a1 + i * a2)};
}

ScalarField GaugeField::a1() const { return (1.0 / std::sqrt(2.0)) * (a + abar); }
ScalarField GaugeField::a2() const { return cplx(0.0, 1.0 / std::sqrt(2.0)) * (a - abar); }

void require_same_grid(const ScalarField& a, const ScalarField& b)
{
    if (!(a.grid() == b.grid()))
        throw Error(ErrorKind::GridMismatch,
                    "grids differ: n=" + std::to_string(a.grid().n) + " vs n=" + std::to_string(b.grid().n));
}

ScalarField partial1(const ScalarField& f)
{
    std::vector<cplx> out(f.grid().size());
    kernels::omp::diff_x(f.data(), out.data(), f.grid().n, f.grid().h);
    return ScalarField(f.grid(), std::move(out), f.margin() + 2);
}

ScalarField partial2(const ScalarField& f)
{
    std::vector<cplx> out(f.grid().size());
    kernels::omp::diff_y(f.data(), out.data(), f.grid().n, f.grid().h);
    return ScalarField(f.grid(), std::move(out), f.margin() + 2);
}

ScalarField derivative(const ScalarField& f, Deriv which)
{
    const Grid2D& g = f.grid();
    std::vector<cplx> dx(g.size()), dy(g.size());
    kernels::omp::diff_x(f.data(), dx.data(), g.n, g.h);
    kernels::omp::diff_y(f.data(), dy.data(), g.n, g.h);
    const double s = 1.0 / std::sqrt(2.0);
    const cplx iy = which == Deriv::d ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(g.size()); ++k)
        dx[k] = s * (dx[k] + iy * dy[k]);
    return ScalarField(g, std::move(dx), f.margin() + 2);
}

ScalarField laplacian_std(const ScalarField& f)
{
    std::vector<cplx> out(f.grid().size());
    kernels::omp::laplacian(f.data(), out.data(), f.grid().n, f.grid().h);
    return ScalarField(f.grid(), std::move(out), f.margin() + 2);
}

cplx integrate(const ScalarField& f)
{
    const double h = f.grid().h;
    return h * h * kernels::omp::sum(f.data(), f.values().size());
}

double interior_sup(const ScalarField& f, int ring, double r_lo, double r_hi)
{
    const Grid2D& g = f.grid();
    const int rr = std::max(ring, 0);
    double m = 0.0;
    for (int j = rr; j < g.n - rr; ++j)
        for (int i = rr; i < g.n - rr; ++i) {
            double r = std::hypot(g.x(i), g.x(j));
            if (r < r_lo || r > r_hi)
                continue;
            m = std::max(m, std::abs(f(i, j)));
        }
    return m;
}

double weighted_sup_norm(const ScalarField& f, const WeightedNormSpec& spec)
{
    if (spec.weight_power < 0 || spec.derivative_order < 0 || spec.derivative_order > 2)
        throw Error(ErrorKind::InvalidArgument, "weighted norm needs n >= 0 and l in {0,1,2}");
    std::vector<ScalarField> terms{f};
    if (spec.derivative_order >= 1) {
        ScalarField fx = partial1(f), fy = partial2(f);
        terms.push_back(fx);
        terms.push_back(fy);
        if (spec.derivative_order >= 2) {
            terms.push_back(partial1(fx));
            terms.push_back(partial2(fx));
            terms.push_back(partial2(fy));
        }
    }
    const Grid2D& g = f.grid();
    double best = 0.0;
    for (const ScalarField& t : terms) {
        const int ring = std::max(kRecordRing, t.margin());
        for (int j = ring; j < g.n - ring; ++j)
            for (int i = ring; i < g.n - ring; ++i) {
                double r = std::hypot(g.x(i), g.x(j));
                best = std::max(best, (1.0 + std::pow(r, spec.weight_power)) * std::abs(t(i, j)));
            }
    }
    return best;
}

double decay_exponent_fit(const ScalarField& f, double r_min, double r_max)
{
    const Grid2D& g = f.grid();
    if (!(r_min > 0.0) || !(r_max > r_min) || r_max > g.R * std::sqrt(2.0))
        throw Error(ErrorKind::InvalidArgument, "decay fit needs 0 < r_min < r_max within the grid");
    constexpr int kShells = 12;
    std::vector<double> edge(kShells + 1);
    for (int k = 0; k <= kShells; ++k)
        edge[k] = r_min * std::pow(r_max / r_min, static_cast<double>(k) / kShells);
    std::vector<double> best(kShells, -1.0), at(kShells, 0.0);
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i) {
            double r = std::hypot(g.x(i), g.x(j));
            if (r < r_min || r > r_max)
                continue;
            int k = static_cast<int>(std::upper_bound(edge.begin(), edge.end(), r) - edge.begin()) - 1;
            k = std::clamp(k, 0, kShells - 1);
            double a = std::abs(f(i, j));
            if (a > best[k]) {
                best[k] = a;
                at[k] = r;
            }
        }
    std::vector<double> xs, ys;
    int occupied = 0;
    for (int k = 0; k < kShells; ++k) {
        if (best[k] < 0.0)
            continue;
        ++occupied;
        if (best[k] < 1e-300)
            continue;
        xs.push_back(std::log(at[k]));
        ys.push_back(std::log(best[k]));
    }
    if (occupied < 2)
        throw Error(ErrorKind::EmptyAnnulus, "fewer than two occupied shells in the annulus");
    if (xs.size() < 2)
        throw Error(ErrorKind::DegenerateFit, "shell maxima vanish in the annulus");
    const double m = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sx += xs[k];
        sy += ys[k];
        sxx += xs[k] * xs[k];
        sxy += xs[k] * ys[k];
    }
    const double den = m * sxx - sx * sx;
    if (!(std::abs(den) > 0.0))
        throw Error(ErrorKind::DegenerateFit, "shell radii coincide");
    return -(m * sxy - sx * sy) / den;
}

namespace {

template <class T>
void put(std::ofstream& os, T v)
{
    static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is)
{
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is)
        throw Error(ErrorKind::IoError, "truncated snapshot");
    return v;
}

} // namespace

void write_snapshot(const std::string& path, const ScalarField& f)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw Error(ErrorKind::IoError, "cannot open " + path);
    os.write("NCVF", 4);
    put<std::uint32_t>(os, 1);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid().n));
    put<double>(os, f.grid().R);
    for (const cplx& v : f.values()) {
        put<double>(os, v.real());
        put<double>(os, v.imag());
    }
    if (!os)
        throw Error(ErrorKind::IoError, "write failed for " + path);
}

ScalarField read_snapshot(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw Error(ErrorKind::IoError, "cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "NCVF", 4) != 0)
        throw Error(ErrorKind::IoError, path + " is not an NCVF snapshot");
    auto version = get<std::uint32_t>(is);
    if (version != 1)
        throw Error(ErrorKind::IoError, "unsupported snapshot version " + std::to_string(version));
    auto n = static_cast<int>(get<std::uint32_t>(is));
    double R = get<double>(is);
    Grid2D g = make_grid(R, n);
    std::vector<cplx> v(g.size());
    for (auto& c : v) {
        double re = get<double>(is);
        double im = get<double>(is);
        c = cplx(re, im);
    }
    return ScalarField(g, std::move(v));
}

} // namespace ncvortex
