#pragma once

#include <complex>
#include <string>
#include <vector>

namespace ncvortex {

using cplx = std::complex<double>;

// Rings of nodes nearest the boundary that never enter quantities of record.
inline constexpr int kRecordRing = 4;

struct Grid2D {
    double R = 0.0; // domain is [-R, R]^2
    int n = 0;
    double h = 0.0;

    double x(int i) const { return -R + (i + 0.5) * h; }
    std::size_t size() const { return static_cast<std::size_t>(n) * static_cast<std::size_t>(n); }
    bool operator==(const Grid2D& o) const { return R == o.R && n == o.n; }
};

Grid2D make_grid(double R, int n);

class ScalarField {
public:
    ScalarField() = default;
    // margin: number of outer rings whose values are not of record
    ScalarField(const Grid2D& g, std::vector<cplx> values, int margin = 0);

    static ScalarField zeros(const Grid2D& g);
    static ScalarField constant(const Grid2D& g, cplx c);
    template <class F>
    static ScalarField sample(const Grid2D& g, F&& f)
    {
        std::vector<cplx> v(g.size());
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i)
                v[static_cast<std::size_t>(j) * g.n + i] = f(g.x(i), g.x(j));
        return ScalarField(g, std::move(v));
    }

    const Grid2D& grid() const { return grid_; }
    const std::vector<cplx>& values() const { return values_; }
    const cplx* data() const { return values_.data(); }
    int margin() const { return margin_; }
    cplx operator()(int i, int j) const { return values_[static_cast<std::size_t>(j) * grid_.n + i]; }

    ScalarField with_margin(int m) const;
    ScalarField conj() const;
    ScalarField real() const;
    ScalarField imag() const;
    ScalarField abs2() const;
    double max_abs_imag(int ring = kRecordRing) const;

    friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(cplx c, const ScalarField& a);
    friend ScalarField operator-(const ScalarField& a);

private:
    Grid2D grid_;
    std::vector<cplx> values_;
    int margin_ = 0;
};

struct GaugeField {
    ScalarField a;    // A = (A1 - i A2)/sqrt2
    ScalarField abar; // Abar = (A1 + i A2)/sqrt2

    static GaugeField zeros(const Grid2D& g);
    static GaugeField from_real(const ScalarField& a1, const ScalarField& a2);
    ScalarField a1() const;
    ScalarField a2() const;
};

struct WeightedNormSpec {
    int weight_power = 0;
    int derivative_order = 0;
};

enum class Deriv { d, dbar };

void require_same_grid(const ScalarField& a, const ScalarField& b);

ScalarField partial1(const ScalarField& f);
ScalarField partial2(const ScalarField& f);
ScalarField derivative(const ScalarField& f, Deriv which);
ScalarField laplacian_std(const ScalarField& f);
cplx integrate(const ScalarField& f);
double weighted_sup_norm(const ScalarField& f, const WeightedNormSpec& spec);
double decay_exponent_fit(const ScalarField& f, double r_min, double r_max);

// sup |f| over nodes at least `ring` rings in, optionally restricted to
// r_lo <= |x| <= r_hi
double interior_sup(const ScalarField& f, int ring = kRecordRing, double r_lo = 0.0, double r_hi = 1e300);

void write_snapshot(const std::string& path, const ScalarField& f);
ScalarField read_snapshot(const std::string& path);

} // namespace ncvortex
