#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ncvortex/grid.hpp"

namespace ncvortex {

// Operator on span{|0>, ..., |M-1>}. Norms and traces use the leading
// (M - margin) block, where truncation effects have not reached.
struct TruncatedOperator {
    Eigen::MatrixXcd m;
    int margin = 16;

    int dim() const { return static_cast<int>(m.rows()); }
    int interior() const { return dim() - margin; }
    Eigen::MatrixXcd block() const { return m.topLeftCorner(interior(), interior()); }
};

void validate(const TruncatedOperator& f);

struct Ladder {
    TruncatedOperator a, adag, num;
};
Ladder ladder_ops(int M, int margin = 16);

TruncatedOperator op_derivative(const TruncatedOperator& f, Deriv which, double theta);
cplx op_trace_integral(const TruncatedOperator& f, double theta);

struct BakSolution {
    TruncatedOperator phi, a, abar;
};
BakSolution bak_solution(int M, double theta, int margin = 16);

TruncatedOperator op_magnetic_field(const TruncatedOperator& a, const TruncatedOperator& abar, double theta);

struct OpResiduals {
    TruncatedOperator r1, r2;
    double sup1 = 0.0, sup2 = 0.0; // max |entry| on the interior block
};
OpResiduals op_bps_residual(const TruncatedOperator& phi, const TruncatedOperator& a, const TruncatedOperator& abar,
                            double theta);

double topological_charge(const TruncatedOperator& B, double theta);

// Rank of phi phi^dag - 1 on the interior block (singular values > 1e-10).
int unitarity_defect_rank(const TruncatedOperator& phi);

// Star symbol of |n><m| on the grid.
ScalarField ketbra_star_field(int n, int m, double theta, const Grid2D& g);

double varphi_eval(double x, double theta);
// int_0^x sqrt(theta)/s^2 (1 - e^{-s^2/theta}) ds
double varphi_bound(double x, double theta);

struct VarphiBoundReport {
    double theta = 0.0;
    int samples = 0;
    int violations = 0;
    double worst_margin = 0.0; // min over samples of bound - |varphi|
    double value_at_8 = 0.0;   // |varphi(8 sqrt theta)|
    bool monotone = false;     // increasing on the sampled points below the maximum
    bool pass = false;
};
VarphiBoundReport varphi_bound_check(double theta, double x_max, int samples);

// Convolution with the heat kernel at time theta/4 (zero extension).
ScalarField gaussian_smooth(const ScalarField& f, double theta);

} // namespace ncvortex
