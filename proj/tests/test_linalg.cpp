#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "support.hpp"

using namespace snp_test;
using snp::BigInt;
using snp::BigMatrix;

namespace {

/// Determinant by cofactor expansion; the test matrices are tiny.
BigInt det(const BigMatrix& a) {
    const std::size_t n = a.rows();
    if (n == 0)
        return 1;
    if (n == 1)
        return a(0, 0);
    BigInt total = 0;
    for (std::size_t c = 0; c < n; ++c) {
        BigMatrix minor(n - 1, n - 1);
        for (std::size_t r = 1; r < n; ++r)
            for (std::size_t k = 0, kk = 0; k < n; ++k)
                if (k != c)
                    minor(r - 1, kk++) = a(r, k);
        total += (c % 2 ? -1 : 1) * a(0, c) * det(minor);
    }
    return total;
}

BigMatrix multiply(const BigMatrix& a, const BigMatrix& b) {
    BigMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            for (std::size_t k = 0; k < a.cols(); ++k)
                out(i, j) += a(i, k) * b(k, j);
    return out;
}

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, std::int64_t lo, std::int64_t hi) {
    IntMatrix a(rows, cols);
    std::uniform_int_distribution<std::int64_t> d(lo, hi);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            a(r, c) = d(rng);
    return a;
}

/// Gaussian elimination over doubles; only used to cross-check small ranks.
std::size_t float_rank(const IntMatrix& m) {
    std::vector<std::vector<double>> a(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            a[r][c] = static_cast<double>(m(r, c));
    std::size_t rank = 0;
    for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
        std::size_t piv = rank;
        for (std::size_t r = rank; r < m.rows(); ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c]))
                piv = r;
        if (std::abs(a[piv][c]) < 1e-9)
            continue;
        std::swap(a[piv], a[rank]);
        for (std::size_t r = rank + 1; r < m.rows(); ++r) {
            const double f = a[r][c] / a[rank][c];
            for (std::size_t k = c; k < m.cols(); ++k)
                a[r][k] -= f * a[rank][k];
        }
        ++rank;
    }
    return rank;
}

} // namespace

TEST_CASE("fraction-free rank matches floating elimination on small matrices", "[linalg][property]") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 500; ++round) {
        const auto rows = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
        const auto cols = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
        const IntMatrix a = random_matrix(rng, rows, cols, -2, 2);
        REQUIRE(snp::row_rank(a) == float_rank(a));
        REQUIRE(snp::row_rank(a) == snp::row_rank(a.transposed()));
    }
}

TEST_CASE("column echelon uses a unimodular transform", "[linalg][property]") {
    std::mt19937_64 rng(12);
    for (int round = 0; round < 300; ++round) {
        const auto rows = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
        const auto cols = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
        const IntMatrix a = random_matrix(rng, rows, cols, -3, 3);
        const auto ce = snp::column_echelon(snp::to_big(a));
        REQUIRE(multiply(snp::to_big(a), ce.transform) == ce.reduced);
        const BigInt d = det(ce.transform);
        REQUIRE((d == 1 || d == -1));
        REQUIRE(ce.pivot_rows.size() == snp::row_rank(a));
        for (std::size_t k = 0; k < ce.pivot_rows.size(); ++k) {
            REQUIRE(ce.reduced(ce.pivot_rows[k], k) > 0);
            for (std::size_t r = 0; r < ce.pivot_rows[k]; ++r)
                REQUIRE(ce.reduced(r, k) == 0);
            if (k > 0)
                REQUIRE(ce.pivot_rows[k] > ce.pivot_rows[k - 1]);
        }
        for (std::size_t k = ce.pivot_rows.size(); k < cols; ++k)
            for (std::size_t r = 0; r < rows; ++r)
                REQUIRE(ce.reduced(r, k) == 0);
    }
}

TEST_CASE("bounded lattice enumeration equals brute force over a box", "[linalg][property]") {
    std::mt19937_64 rng(13);
    constexpr std::int64_t bound = 6;
    int feasible = 0;
    for (int round = 0; round < 400; ++round) {
        const auto rows = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
        const auto cols = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
        const IntMatrix a = random_matrix(rng, rows, cols, -2, 2);
        // Half of the right-hand sides come from a known solution.
        IntVector b(rows);
        if (round % 2 == 0) {
            const IntVector x = random_config(rng, cols, 2);
            b = snp::row_times(x, a.transposed());
        } else {
            b = random_config(rng, rows, 3);
        }

        std::set<IntVector> expected;
        IntVector x(cols, 0);
        std::function<void(std::size_t, std::int64_t)> box = [&](std::size_t i, std::int64_t left) {
            if (i == cols) {
                if (snp::row_times(x, a.transposed()) == b)
                    expected.insert(x);
                return;
            }
            for (std::int64_t v = 0; v <= left; ++v) {
                x[i] = v;
                box(i + 1, left - v);
            }
            x[i] = 0;
        };
        box(0, bound);

        std::set<IntVector> got;
        std::size_t visits = 0;
        if (const auto lat = snp::solve_integer(a, b)) {
            ++feasible;
            snp::enumerate_bounded(*lat, bound, [&](const IntVector& s) {
                ++visits;
                got.insert(s);
            });
        }
        INFO("round " << round);
        REQUIRE(got == expected);
        REQUIRE(visits == got.size());
    }
    CHECK(feasible > 100);
}

TEST_CASE("integer infeasibility is detected", "[linalg]") {
    // 2x = 1 has no integer solution.
    CHECK_FALSE(snp::solve_integer(IntMatrix{{2}}, IntVector{1}));
    // x + y = 1 and x + y = 2 are inconsistent.
    CHECK_FALSE(snp::solve_integer(IntMatrix{{1, 1}, {1, 1}}, IntVector{1, 2}));
    const auto lat = snp::solve_integer(IntMatrix{{2, 4}}, IntVector{6});
    REQUIRE(lat);
    CHECK(lat->kernel.cols() == 1);
}

TEST_CASE("int64 conversion guards overflow", "[linalg]") {
    BigInt huge = BigInt(1) << 70;
    CHECK_THROWS_AS(snp::to_int64(huge), std::overflow_error);
    CHECK(snp::to_int64(BigInt(-5)) == -5);
}

TEST_CASE("vector helpers reject mismatched shapes", "[linalg]") {
    CHECK_THROWS_AS(snp::row_times(IntVector{1, 2}, IntMatrix{{1}}), std::invalid_argument);
    CHECK_THROWS_AS(snp::hadamard(IntVector{1}, IntVector{1, 2}), std::invalid_argument);
    const IntMatrix one{{1}}, wide{{1, 2}};
    CHECK_THROWS_AS(one - wide, std::invalid_argument);
}
