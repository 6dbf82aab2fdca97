#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace sqr {

using cdouble = std::complex<double>;

// Complex division without the scaled library routine; our operands are far
// from overflow/underflow.
inline cdouble cdiv(cdouble a, cdouble b) {
  const double d = b.real() * b.real() + b.imag() * b.imag();
  return {(a.real() * b.real() + a.imag() * b.imag()) / d,
          (a.imag() * b.real() - a.real() * b.imag()) / d};
}

// Thomas algorithm for A x = d with sub/super diagonals a, c (a[0] and
// c[n-1] unused). No pivoting; Crank-Nicolson matrices are diagonally
// dominant. x may alias d. scratch must hold n entries.
inline void solve_tridiagonal(const cdouble* a, const cdouble* b, const cdouble* c,
                              const cdouble* d, cdouble* x, cdouble* scratch,
                              std::size_t n) {
  cdouble* cp = scratch;
  cdouble inv = cdiv(1.0, b[0]);
  cp[0] = c[0] * inv;
  x[0] = d[0] * inv;
  for (std::size_t i = 1; i < n; ++i) {
    inv = cdiv(1.0, b[i] - a[i] * cp[i - 1]);
    cp[i] = c[i] * inv;
    x[i] = (d[i] - a[i] * x[i - 1]) * inv;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp[i] * x[i + 1];
}

// Specialisation for constant off-diagonal entries (1D kinetic sweep).
inline void solve_tridiagonal_const_offdiag(cdouble off, const cdouble* b,
                                            const cdouble* d, cdouble* x,
                                            cdouble* scratch, std::size_t n) {
  cdouble* cp = scratch;
  cdouble inv = cdiv(1.0, b[0]);
  cp[0] = off * inv;
  x[0] = d[0] * inv;
  for (std::size_t i = 1; i < n; ++i) {
    inv = cdiv(1.0, b[i] - off * cp[i - 1]);
    cp[i] = off * inv;
    x[i] = (d[i] - off * x[i - 1]) * inv;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp[i] * x[i + 1];
}

}  // namespace sqr
