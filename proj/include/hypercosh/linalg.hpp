#pragma once

#include <span>
#include <vector>

#include "hypercosh/errors.hpp"

namespace hypercosh {

/// Dense row-major rectangular matrix.
class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols, 0.0) {}
    Matrix(int rows, int cols, std::vector<double> data);

    static Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double operator()(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }
    double& operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
    const std::vector<double>& data() const { return data_; }
    std::span<const double> row(int i) const {
        return {data_.data() + std::size_t(i) * cols_, std::size_t(cols_)};
    }

    Matrix transposed() const;
    Matrix operator*(const Matrix& rhs) const;
    Matrix& operator-=(const Matrix& rhs);
    double max_abs() const;

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

/// Dense symmetric matrix; entries (i,j) and (j,i) are the same stored value
/// mirrored through set(), and construction from full data requires exact
/// equality of the two triangles.
class SymMatrix {
  public:
    SymMatrix() = default;
    explicit SymMatrix(int n);
    SymMatrix(int n, std::vector<double> entries);

    static SymMatrix identity(int n);
    static SymMatrix diagonal(const std::vector<double>& d);
    static SymMatrix outer(std::span<const double> x);            // x ⊗ x
    static SymMatrix from_matrix(const Matrix& m);                // exact symmetry required

    int size() const { return n_; }
    double operator()(int i, int j) const { return entries_[std::size_t(i) * n_ + j]; }
    void set(int i, int j, double v);
    void add(int i, int j, double v);
    const std::vector<double>& entries() const { return entries_; }
    Matrix to_matrix() const { return Matrix(n_, n_, entries_); }

    SymMatrix& operator+=(const SymMatrix& rhs);
    SymMatrix& operator-=(const SymMatrix& rhs);
    SymMatrix& operator*=(double s);
    friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
    friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
    friend SymMatrix operator*(SymMatrix a, double s) { return a *= s; }

    /// Rank-one accumulation  this += scale * x ⊗ x.
    void add_outer(std::span<const double> x, double scale = 1.0);

    double trace() const;
    double max_abs() const;
    double frobenius() const;

  private:
    int n_ = 0;
    std::vector<double> entries_;
};

struct EigDecomposition {
    std::vector<double> eigenvalues;  // descending
    Matrix eigenvectors;              // column j pairs with eigenvalues[j]
};

/// Cyclic Jacobi eigensolver; 100-sweep cap, throws NumericError with the
/// matrix size and off-diagonal residual on non-convergence.
EigDecomposition sym_eig(const SymMatrix& a);
std::vector<double> sym_eigvalues(const SymMatrix& a);  // descending, no vectors

/// exp(A) = Q exp(Λ) Qᵀ.
SymMatrix matrix_exp(const SymMatrix& a);

/// Closed form exp(±x⊗x) = I ± ((1 - e^{∓‖x‖²})/±‖x‖²)·x⊗x; x must be nonzero.
SymMatrix rank_one_exp(std::span<const double> x, int sign);

/// Σᵢ cosh(λᵢ(A)); throws NumericError past the double exp range (callers
/// that only compare potentials should use log_two_trace_cosh instead).
double trace_cosh(const SymMatrix& a);

/// log(2 Σᵢ cosh(λᵢ)) evaluated stably from a list of eigenvalues.
double log_two_trace_cosh(std::span<const double> eigenvalues);

/// The symmetric block matrix [[0, A],[Aᵀ, 0]] of size rows+cols.
SymMatrix dilation(const Matrix& a);

/// Largest singular value (for symmetric input: max |λ|).
double operator_norm(const Matrix& a);
double operator_norm(const SymMatrix& a);

/// Max row absolute sum.
double inf_norm(const SymMatrix& a);

/// True iff λ_min(B − A) ≥ −slack.
bool psd_leq(const SymMatrix& a, const SymMatrix& b, double slack);

/// λ_min of a symmetric matrix.
double min_eigenvalue(const SymMatrix& a);

/// Power iteration estimate of ‖A‖ (deterministic start vector); a cheap
/// stand-in where an exact eigensolve would be out of budget.
double operator_norm_estimate(const SymMatrix& a, int iterations = 200);

}  // namespace hypercosh
