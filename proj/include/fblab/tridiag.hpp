#pragma once

// Thomas algorithm for tridiagonal systems.  Every system assembled in this
// library is strictly diagonally dominant (implicit heat steps, M-matrices
// after upwinding), so no pivoting is needed.

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fblab {

/// Solves A x = rhs in place (solution returned in rhs) for tridiagonal A
/// with subdiagonal `lower` (size n-1), diagonal `diag` (size n) and
/// superdiagonal `upper` (size n-1).  `diag` and `rhs` are overwritten.
inline void solve_tridiagonal(const std::vector<double>& lower,
                              std::vector<double>& diag,
                              const std::vector<double>& upper,
                              std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    if (n == 0 || lower.size() != n - 1 || upper.size() != n - 1 || rhs.size() != n)
        throw std::invalid_argument("solve_tridiagonal: inconsistent band sizes");
    for (std::size_t i = 1; i < n; ++i) {
        const double m = lower[i - 1] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

}  // namespace fblab
