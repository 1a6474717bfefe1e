#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "focalis/errors.hpp"
#include "focalis/jet.hpp"

// Dense helpers for the tiny systems this library solves (dimension m+1,
// typically 2..5). Templated so the same elimination runs on plain doubles
// and on jets; pivots compare by the magnitude of the constant term.

namespace focalis {

using VecD = std::vector<double>;
using MatD = std::vector<VecD>;

inline double mag(double x) { return std::fabs(x); }
inline double mag(const Jet& x) { return std::fabs(x.value()); }

inline double sqrt_scalar(double x) {
    if (!(x > 0.0)) throw DomainError("sqrt of non-positive value");
    return std::sqrt(x);
}
inline Jet sqrt_scalar(const Jet& x) { return sqrt(x); }

template <typename T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
    T s = a[0] * b[0];
    for (size_t i = 1; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const VecD& a) { return std::sqrt(dot(a, a)); }

template <typename T>
std::vector<T> solve_linear(std::vector<std::vector<T>> A, std::vector<T> b,
                            double* condition_proxy = nullptr) {
    const size_t n = A.size();
    double row_scale = 0.0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) row_scale = std::max(row_scale, mag(A[i][j]));
    double min_pivot = row_scale, max_pivot = 0.0;

    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (mag(A[r][col]) > mag(A[piv][col])) piv = r;
        if (piv != col) {
            std::swap(A[piv], A[col]);
            std::swap(b[piv], b[col]);
        }
        const double p = mag(A[col][col]);
        min_pivot = std::min(min_pivot, p);
        max_pivot = std::max(max_pivot, p);
        if (!(p > 1e-14 * row_scale)) {
            throw IllConditionedSystem("linear system is singular to working precision (pivot " +
                                       std::to_string(p) + ", scale " + std::to_string(row_scale) + ")");
        }
        for (size_t r = col + 1; r < n; ++r) {
            const T f = A[r][col] / A[col][col];
            for (size_t j = col; j < n; ++j) A[r][j] = A[r][j] - f * A[col][j];
            b[r] = b[r] - f * b[col];
        }
    }
    std::vector<T> x = b;
    for (size_t i = n; i-- > 0;) {
        T s = b[i];
        for (size_t j = i + 1; j < n; ++j) s = s - A[i][j] * x[j];
        x[i] = s / A[i][i];
    }
    if (condition_proxy) *condition_proxy = (min_pivot > 0.0) ? max_pivot / min_pivot : INFINITY;
    return x;
}

// Division-free Laplace expansion. Fine for the n <= 8 matrices used here,
// and unlike pivoted elimination it cannot trip on a zero jet constant term.
template <typename T>
T det_laplace(const std::vector<std::vector<T>>& A) {
    const size_t n = A.size();
    if (n == 1) return A[0][0];
    if (n == 2) return A[0][0] * A[1][1] - A[0][1] * A[1][0];
    std::vector<size_t> cols(n);
    for (size_t j = 0; j < n; ++j) cols[j] = j;

    struct Rec {
        const std::vector<std::vector<T>>& M;
        T run(size_t row, std::vector<size_t>& cs) {
            const size_t k = cs.size();
            if (k == 1) return M[row][cs[0]];
            T acc = M[row][cs[0]] * minor_at(row, cs, 0);
            for (size_t j = 1; j < k; ++j) {
                const T term = M[row][cs[j]] * minor_at(row, cs, j);
                acc = (j % 2 == 0) ? acc + term : acc - term;
            }
            return acc;
        }
        T minor_at(size_t row, std::vector<size_t>& cs, size_t skip) {
            std::vector<size_t> sub;
            sub.reserve(cs.size() - 1);
            for (size_t j = 0; j < cs.size(); ++j)
                if (j != skip) sub.push_back(cs[j]);
            return run(row + 1, sub);
        }
    } rec{A};
    return rec.run(0, cols);
}

// Gram-Schmidt completion of orthonormal rows to a positively oriented basis:
// the last row is the generalized cross product of the given m rows.
template <typename T>
std::vector<T> cross_completion(const std::vector<std::vector<T>>& rows) {
    const size_t m = rows.size();
    const size_t dim = m + 1;
    std::vector<T> out;
    out.reserve(dim);
    for (size_t j = 0; j < dim; ++j) {
        std::vector<std::vector<T>> minor(m, std::vector<T>());
        for (size_t r = 0; r < m; ++r) {
            minor[r].reserve(m);
            for (size_t cc = 0; cc < dim; ++cc)
                if (cc != j) minor[r].push_back(rows[r][cc]);
        }
        T d = det_laplace(minor);
        if ((m + j) % 2 != 0) d = -d;
        out.push_back(d);
    }
    return out;
}

}  // namespace focalis
