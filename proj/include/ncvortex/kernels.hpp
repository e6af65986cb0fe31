#pragma once

// Per-node grid kernels. Fields are n*n row-major arrays, index j*n + i with
// i along x1. Each kernel exists as a plain serial loop (reference) and an
// OpenMP version; both produce bit-identical output for any thread count.

#include <complex>
#include <cstddef>

namespace ncvortex::kernels {

using cplx = std::complex<double>;

// Reductions are split into fixed chunks, each summed pairwise, then the
// chunk partials are summed pairwise. The tree does not depend on threads.
inline constexpr std::size_t kReduceChunk = 4096;

namespace serial {
void diff_x(const cplx* f, cplx* out, int n, double h);
void diff_y(const cplx* f, cplx* out, int n, double h);
void laplacian(const cplx* f, cplx* out, int n, double h);
// out = (-lap + V) u on nodes at least `ring` rings in, 0 elsewhere; u is
// taken as zero on the outer `ring` rings.
void screened_apply(const double* u, const double* V, double* out, int n, double h, int ring);
cplx sum(const cplx* v, std::size_t len);
double sum(const double* v, std::size_t len);
double dot(const double* a, const double* b, std::size_t len);
} // namespace serial

namespace omp {
void diff_x(const cplx* f, cplx* out, int n, double h);
void diff_y(const cplx* f, cplx* out, int n, double h);
void laplacian(const cplx* f, cplx* out, int n, double h);
void screened_apply(const double* u, const double* V, double* out, int n, double h, int ring);
cplx sum(const cplx* v, std::size_t len);
double sum(const double* v, std::size_t len);
double dot(const double* a, const double* b, std::size_t len);
} // namespace omp

int max_threads();

} // namespace ncvortex::kernels
