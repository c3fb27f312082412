#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "surro/errors.hpp"

namespace surro::math {

using Vector = std::vector<double>;

// Small dense row-major matrix. Everything in this project is k x k with
// k <= 8, so no effort is spent on blocking or views.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(const Vector& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const Matrix&) const = default;

    Matrix transposed() const;
    bool is_symmetric(double tol = 1e-12) const;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& x);

double dot(const Vector& a, const Vector& b);

// Lower Cholesky factor of a symmetric positive definite matrix.
// Pivot tolerance is 1e-10 relative to the largest diagonal entry; a failing
// pivot raises NumericError naming its index instead of regularizing.
Matrix cholesky(const Matrix& a);

// Solve L y = b (L lower triangular) / L^T x = y.
Vector solve_lower(const Matrix& l, const Vector& b);
Vector solve_upper_transposed(const Matrix& l, const Vector& b);

// Solve A x = b via a precomputed Cholesky factor of A.
Vector cholesky_solve(const Matrix& l, const Vector& b);

// Inverse of an SPD matrix through its Cholesky factor.
Matrix spd_inverse(const Matrix& a);

// x^T A^{-1} x via the Cholesky factor of A.
double quad_form_inv(const Matrix& l, const Vector& x);

} // namespace surro::math
