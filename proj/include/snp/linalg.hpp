#ifndef SNP_LINALG_HPP
#define SNP_LINALG_HPP

// Exact integer linear algebra: fraction-free rank, column Hermite-style
// echelon forms, and the integer solution lattice of A x = b.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "snp/int_matrix.hpp"

namespace snp {

using BigInt = boost::multiprecision::cpp_int;
using BigMatrix = Matrix<BigInt>;
using BigVector = std::vector<BigInt>;

inline BigMatrix to_big(const IntMatrix& a) {
    BigMatrix out(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            out(r, c) = a(r, c);
    return out;
}

inline std::int64_t to_int64(const BigInt& v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("integer result does not fit in 64 bits");
    return static_cast<std::int64_t>(v);
}

/// Rank over the rationals by Bareiss fraction-free elimination.
inline std::size_t row_rank(const IntMatrix& mat) {
    BigMatrix a = to_big(mat);
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    BigInt prev = 1;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t pivot = rank;
        while (pivot < rows && a(pivot, c) == 0)
            ++pivot;
        if (pivot == rows)
            continue;
        if (pivot != rank)
            for (std::size_t j = 0; j < cols; ++j)
                std::swap(a(pivot, j), a(rank, j));
        for (std::size_t i = rank + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                BigInt num = a(rank, c) * a(i, j) - a(i, c) * a(rank, j);
                // Bareiss: the division is exact.
                a(i, j) = num / prev;
            }
            a(i, c) = 0;
        }
        prev = a(rank, c);
        ++rank;
    }
    return rank;
}

struct ColumnEchelon {
    BigMatrix reduced;   // a * transform
    BigMatrix transform; // unimodular, cols x cols
    std::vector<std::size_t> pivot_rows; // pivot_rows[k]: row of the pivot in column k
};

/// Column-echelon form by unimodular column operations. Rows are processed in
/// order; column k of the result is zero above pivot_rows[k], and columns past
/// the last pivot are zero.
inline ColumnEchelon column_echelon(BigMatrix a) {
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    BigMatrix u = BigMatrix::identity(cols);
    std::vector<std::size_t> pivots;

    // col_a <- p col_a + q col_b ; col_b <- s col_a + t col_b, with pt - qs = 1
    auto combine = [&](BigMatrix& m, std::size_t ca, std::size_t cb, const BigInt& p, const BigInt& q,
                       const BigInt& s, const BigInt& t) {
        for (std::size_t r = 0; r < m.rows(); ++r) {
            BigInt x = m(r, ca);
            BigInt y = m(r, cb);
            m(r, ca) = p * x + q * y;
            m(r, cb) = s * x + t * y;
        }
    };

    std::size_t col = 0;
    for (std::size_t r = 0; r < rows && col < cols; ++r) {
        for (std::size_t j = col + 1; j < cols; ++j) {
            if (a(r, j) == 0)
                continue;
            // Extended gcd of x = a(r,col), y = a(r,j).
            BigInt x = a(r, col);
            BigInt y = a(r, j);
            BigInt old_r = x, cur_r = y, old_s = 1, cur_s = 0, old_t = 0, cur_t = 1;
            while (cur_r != 0) {
                BigInt q = old_r / cur_r;
                BigInt tmp = old_r - q * cur_r;
                old_r = cur_r;
                cur_r = tmp;
                tmp = old_s - q * cur_s;
                old_s = cur_s;
                cur_s = tmp;
                tmp = old_t - q * cur_t;
                old_t = cur_t;
                cur_t = tmp;
            }
            BigInt g = old_r;
            if (g < 0) {
                g = -g;
                old_s = -old_s;
                old_t = -old_t;
            }
            // new col = old_s*col + old_t*colj ; new colj = (-y/g)*col + (x/g)*colj
            const BigInt s = -y / g;
            const BigInt t = x / g;
            combine(a, col, j, old_s, old_t, s, t);
            combine(u, col, j, old_s, old_t, s, t);
        }
        if (a(r, col) != 0) {
            if (a(r, col) < 0) {
                for (std::size_t i = 0; i < rows; ++i)
                    a(i, col) = -a(i, col);
                for (std::size_t i = 0; i < cols; ++i)
                    u(i, col) = -u(i, col);
            }
            pivots.push_back(r);
            ++col;
        }
    }
    return {std::move(a), std::move(u), std::move(pivots)};
}

/// Integer solutions of a x = b as `particular + kernel * t`, t integral.
struct IntegerLattice {
    BigVector particular;
    BigMatrix kernel; // n x f, column echelon: column k is zero above kernel_pivots[k]
    std::vector<std::size_t> kernel_pivots;
};

/// nullopt when a x = b has no integer solution.
inline std::optional<IntegerLattice> solve_integer(const IntMatrix& a_in, const IntVector& b) {
    if (b.size() != a_in.rows())
        throw std::invalid_argument("solve_integer: right-hand side length mismatch");
    const std::size_t n = a_in.cols();
    ColumnEchelon ce = column_echelon(to_big(a_in));
    const std::size_t rank = ce.pivot_rows.size();

    // Forward substitution on the echelon form.
    BigVector y(n, 0);
    std::size_t next_pivot = 0;
    for (std::size_t r = 0; r < a_in.rows(); ++r) {
        BigInt rest = b[r];
        for (std::size_t k = 0; k < next_pivot; ++k)
            rest -= ce.reduced(r, k) * y[k];
        if (next_pivot < rank && ce.pivot_rows[next_pivot] == r) {
            const BigInt& piv = ce.reduced(r, next_pivot);
            if (rest % piv != 0)
                return std::nullopt;
            y[next_pivot] = rest / piv;
            ++next_pivot;
        } else if (rest != 0) {
            return std::nullopt;
        }
    }

    IntegerLattice lat;
    lat.particular.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < rank; ++k)
            lat.particular[i] += ce.transform(i, k) * y[k];

    BigMatrix kernel(n, n - rank);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = rank; k < n; ++k)
            kernel(i, k - rank) = ce.transform(i, k);
    ColumnEchelon kce = column_echelon(std::move(kernel));
    lat.kernel = std::move(kce.reduced);
    lat.kernel_pivots = std::move(kce.pivot_rows);
    if (lat.kernel_pivots.size() != lat.kernel.cols())
        throw std::logic_error("kernel basis is not of full column rank");
    return lat;
}

/// Visits every x = particular + kernel * t with x >= 0 and sum(x) <= bound.
inline void enumerate_bounded(const IntegerLattice& lat, std::int64_t bound,
                              const std::function<void(const IntVector&)>& visit) {
    const std::size_t n = lat.particular.size();
    const std::size_t f = lat.kernel.cols();
    std::vector<BigInt> t(f, 0);

    auto floor_div = [](const BigInt& a, const BigInt& b) {
        BigInt q = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0)))
            --q;
        return q;
    };
    auto ceil_div = [&](const BigInt& a, const BigInt& b) { return -floor_div(-a, b); };

    auto emit = [&] {
        IntVector x(n);
        BigInt total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            BigInt v = lat.particular[i];
            for (std::size_t k = 0; k < f; ++k)
                v += lat.kernel(i, k) * t[k];
            if (v < 0)
                return;
            total += v;
            if (total > bound)
                return;
            x[i] = to_int64(v);
        }
        visit(x);
    };

    std::function<void(std::size_t)> recurse = [&](std::size_t k) {
        if (k == f) {
            emit();
            return;
        }
        const std::size_t row = lat.kernel_pivots[k];
        BigInt base = lat.particular[row];
        for (std::size_t l = 0; l < k; ++l)
            base += lat.kernel(row, l) * t[l];
        const BigInt& coeff = lat.kernel(row, k);
        // 0 <= base + coeff * t_k <= bound
        BigInt lo, hi;
        if (coeff > 0) {
            lo = ceil_div(-base, coeff);
            hi = floor_div(BigInt(bound) - base, coeff);
        } else {
            lo = ceil_div(BigInt(bound) - base, coeff);
            hi = floor_div(-base, coeff);
        }
        for (BigInt v = lo; v <= hi; ++v) {
            t[k] = v;
            recurse(k + 1);
        }
    };
    if (bound < 0)
        return;
    recurse(0);
}

} // namespace snp

#endif // SNP_LINALG_HPP
