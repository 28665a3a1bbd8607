#ifndef SNP_INT_MATRIX_HPP
#define SNP_INT_MATRIX_HPP

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace snp {

/// Dense row-major matrix. Entries are exact; no floating point anywhere.
template <typename T>
class Matrix {
public:
    using value_type = T;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Matrix(std::initializer_list<std::initializer_list<T>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_)
                throw std::invalid_argument("ragged matrix literal");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = T{1};
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    const std::vector<T>& data() const noexcept { return data_; }

    std::vector<std::vector<T>> to_rows() const {
        std::vector<std::vector<T>> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            out[r].assign(row(r).begin(), row(r).end());
        return out;
    }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                t(c, r) = (*this)(r, c);
        return t;
    }

    /// Leading `n` columns.
    Matrix left_columns(std::size_t n) const {
        if (n > cols_)
            throw std::out_of_range("left_columns: too many columns");
        Matrix out(rows_, n);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < n; ++c)
                out(r, c) = (*this)(r, c);
        return out;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("matrix subtraction: shape mismatch");
        Matrix out(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.data_.size(); ++i)
            out.data_[i] = a.data_[i] - b.data_[i];
        return out;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = Matrix<std::int64_t>;
using IntVector = std::vector<std::int64_t>;

/// Row vector times matrix: (v · A)_j = sum_i v_i A_ij.
template <typename T>
std::vector<T> row_times(std::span<const T> v, const Matrix<T>& a) {
    if (v.size() != a.rows())
        throw std::invalid_argument("row_times: vector length " + std::to_string(v.size()) +
                                    " does not match matrix rows " + std::to_string(a.rows()));
    std::vector<T> out(a.cols(), T{});
    for (std::size_t i = 0; i < a.rows(); ++i) {
        if (v[i] == T{})
            continue;
        for (std::size_t j = 0; j < a.cols(); ++j)
            out[j] += v[i] * a(i, j);
    }
    return out;
}

template <typename T>
std::vector<T> row_times(const std::vector<T>& v, const Matrix<T>& a) {
    return row_times(std::span<const T>(v), a);
}

/// Entrywise (Hadamard) product.
template <typename T>
std::vector<T> hadamard(const std::vector<T>& a, const std::vector<T>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("hadamard: length mismatch");
    std::vector<T> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] * b[i];
    return out;
}

template <typename T>
std::vector<T> add(const std::vector<T>& a, const std::vector<T>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("add: length mismatch");
    std::vector<T> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] + b[i];
    return out;
}

template <typename T>
std::vector<T> subtract(const std::vector<T>& a, const std::vector<T>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("subtract: length mismatch");
    std::vector<T> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] - b[i];
    return out;
}

} // namespace snp

#endif // SNP_INT_MATRIX_HPP
