#include "hypercosh/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hypercosh {

Matrix::Matrix(int rows, int cols, std::vector<double> data) : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != std::size_t(rows) * cols) throw InputError("matrix data size does not match shape");
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw InputError("matrix product shape mismatch");
    Matrix out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int k = 0; k < cols_; ++k) {
            const double a = (*this)(i, k);
            if (a == 0.0) continue;
            const double* rrow = rhs.data_.data() + std::size_t(k) * rhs.cols_;
            double* orow = out.data_.data() + std::size_t(i) * rhs.cols_;
            for (int j = 0; j < rhs.cols_; ++j) orow[j] += a * rrow[j];
        }
    }
    return out;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw InputError("matrix difference shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::fabs(v));
    return m;
}

SymMatrix::SymMatrix(int n) : n_(n), entries_(std::size_t(n) * n, 0.0) {
    if (n < 1) throw InputError("SymMatrix requires n >= 1");
}

SymMatrix::SymMatrix(int n, std::vector<double> entries) : n_(n), entries_(std::move(entries)) {
    if (n < 1) throw InputError("SymMatrix requires n >= 1");
    if (entries_.size() != std::size_t(n) * n) throw InputError("SymMatrix data size does not match n");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (entries_[std::size_t(i) * n + j] != entries_[std::size_t(j) * n + i])
                throw InputError("SymMatrix entries are not exactly symmetric at (" + std::to_string(i) + "," +
                                 std::to_string(j) + ")");
}

SymMatrix SymMatrix::identity(int n) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
    return m;
}

SymMatrix SymMatrix::diagonal(const std::vector<double>& d) {
    SymMatrix m(int(d.size()));
    for (int i = 0; i < int(d.size()); ++i) m.set(i, i, d[i]);
    return m;
}

SymMatrix SymMatrix::outer(std::span<const double> x) {
    SymMatrix m(int(x.size()));
    m.add_outer(x);
    return m;
}

SymMatrix SymMatrix::from_matrix(const Matrix& m) {
    if (m.rows() != m.cols()) throw InputError("from_matrix requires a square matrix");
    return SymMatrix(m.rows(), m.data());
}

void SymMatrix::set(int i, int j, double v) {
    entries_[std::size_t(i) * n_ + j] = v;
    entries_[std::size_t(j) * n_ + i] = v;
}

void SymMatrix::add(int i, int j, double v) {
    entries_[std::size_t(i) * n_ + j] += v;
    if (i != j) entries_[std::size_t(j) * n_ + i] = entries_[std::size_t(i) * n_ + j];
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& rhs) {
    if (n_ != rhs.n_) throw InputError("SymMatrix sum dimension mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += rhs.entries_[i];
    return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& rhs) {
    if (n_ != rhs.n_) throw InputError("SymMatrix difference dimension mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= rhs.entries_[i];
    return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
    for (double& v : entries_) v *= s;
    return *this;
}

void SymMatrix::add_outer(std::span<const double> x, double scale) {
    if (int(x.size()) != n_) throw InputError("add_outer dimension mismatch");
    for (int i = 0; i < n_; ++i) {
        const double xi = scale * x[i];
        if (xi == 0.0) continue;
        double* row = entries_.data() + std::size_t(i) * n_;
        for (int j = 0; j < n_; ++j) row[j] += xi * x[j];
    }
    // Re-mirror: a*b vs b*a round identically, but keep the invariant airtight.
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) entries_[std::size_t(j) * n_ + i] = entries_[std::size_t(i) * n_ + j];
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

double SymMatrix::max_abs() const {
    double m = 0.0;
    for (double v : entries_) m = std::max(m, std::fabs(v));
    return m;
}

double SymMatrix::frobenius() const {
    double s = 0.0;
    for (double v : entries_) s += v * v;
    return std::sqrt(s);
}

namespace {

constexpr int kJacobiSweepCap = 100;

// Cyclic Jacobi on a working copy; accumulates rotations into v when given.
void jacobi(int n, std::vector<double>& a, std::vector<double>* v, int& sweeps_used, double& off_residual) {
    auto at = [&](int i, int j) -> double& { return a[std::size_t(i) * n + j]; };
    double scale = 0.0;
    for (double x : a) scale = std::max(scale, std::fabs(x));
    const double stop = 1e-15 * std::max(1.0, scale);

    sweeps_used = 0;
    off_residual = 0.0;
    for (int sweep = 0; sweep < kJacobiSweepCap; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off = std::max(off, std::fabs(at(p, q)));
        off_residual = off;
        if (off <= stop) return;
        ++sweeps_used;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (std::fabs(apq) <= stop * 1e-2) continue;
                const double app = at(p, p), aqq = at(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
                if (v) {
                    for (int k = 0; k < n; ++k) {
                        const double vkp = (*v)[std::size_t(k) * n + p], vkq = (*v)[std::size_t(k) * n + q];
                        (*v)[std::size_t(k) * n + p] = c * vkp - s * vkq;
                        (*v)[std::size_t(k) * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    double off = 0.0;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) off = std::max(off, std::fabs(at(p, q)));
    off_residual = off;
    if (off > stop) {
        std::ostringstream msg;
        msg << "jacobi eigensolver did not converge for n=" << n << " after " << kJacobiSweepCap
            << " sweeps; off-diagonal residual " << off;
        throw NumericError(msg.str());
    }
}

}  // namespace

EigDecomposition sym_eig(const SymMatrix& m) {
    const int n = m.size();
    std::vector<double> a = m.entries();
    std::vector<double> v(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[std::size_t(i) * n + i] = 1.0;
    int sweeps;
    double off;
    jacobi(n, a, &v, sweeps, off);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return a[std::size_t(x) * n + x] > a[std::size_t(y) * n + y]; });

    EigDecomposition d;
    d.eigenvalues.resize(n);
    d.eigenvectors = Matrix(n, n);
    for (int j = 0; j < n; ++j) {
        d.eigenvalues[j] = a[std::size_t(order[j]) * n + order[j]];
        for (int i = 0; i < n; ++i) d.eigenvectors(i, j) = v[std::size_t(i) * n + order[j]];
    }
    return d;
}

std::vector<double> sym_eigvalues(const SymMatrix& m) {
    const int n = m.size();
    std::vector<double> a = m.entries();
    int sweeps;
    double off;
    jacobi(n, a, nullptr, sweeps, off);
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i) vals[i] = a[std::size_t(i) * n + i];
    std::sort(vals.begin(), vals.end(), std::greater<double>());
    return vals;
}

SymMatrix matrix_exp(const SymMatrix& m) {
    const EigDecomposition d = sym_eig(m);
    const int n = m.size();
    SymMatrix out(n);
    for (int k = 0; k < n; ++k) {
        std::vector<double> col(n);
        for (int i = 0; i < n; ++i) col[i] = d.eigenvectors(i, k);
        out.add_outer(col, std::exp(d.eigenvalues[k]));
    }
    return out;
}

SymMatrix rank_one_exp(std::span<const double> x, int sign) {
    double norm_sq = 0.0;
    for (double v : x) norm_sq += v * v;
    if (norm_sq == 0.0) throw InputError("rank_one_exp requires a nonzero vector");
    if (sign != 1 && sign != -1) throw InputError("rank_one_exp sign must be +1 or -1");
    const double coeff = std::expm1(sign * norm_sq) / norm_sq;
    SymMatrix out = SymMatrix::identity(int(x.size()));
    out.add_outer(x, coeff);
    return out;
}

double trace_cosh(const SymMatrix& m) {
    const std::vector<double> vals = sym_eigvalues(m);
    double max_abs = 0.0;
    for (double v : vals) max_abs = std::max(max_abs, std::fabs(v));
    if (max_abs > 700.0)
        throw NumericError("trace_cosh overflow: max |eigenvalue| " + std::to_string(max_abs) +
                           " exceeds the double exp range; use log_two_trace_cosh");
    double sum = 0.0;
    for (double v : vals) sum += std::cosh(v);
    return sum;
}

double log_two_trace_cosh(std::span<const double> eigenvalues) {
    double peak = 0.0;  // cosh(0) term dominates only when all λ are 0
    for (double v : eigenvalues) peak = std::max(peak, std::fabs(v));
    double sum = 0.0;
    for (double v : eigenvalues) sum += std::exp(v - peak) + std::exp(-v - peak);
    return peak + std::log(sum);
}

SymMatrix dilation(const Matrix& a) {
    const int m = a.rows(), n = a.cols();
    SymMatrix d(m + n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) d.set(i, m + j, a(i, j));
    return d;
}

double operator_norm(const Matrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    // Gram route: ‖A‖² = λ_max(AᵀA), built on the smaller side.
    const bool tall = a.rows() >= a.cols();
    const Matrix& b = a;
    const int k = tall ? a.cols() : a.rows();
    SymMatrix gram(k);
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            double s = 0.0;
            if (tall) {
                for (int r = 0; r < a.rows(); ++r) s += b(r, i) * b(r, j);
            } else {
                for (int c = 0; c < a.cols(); ++c) s += b(i, c) * b(j, c);
            }
            gram.set(i, j, s);
        }
    }
    const std::vector<double> vals = sym_eigvalues(gram);
    return std::sqrt(std::max(0.0, vals.front()));
}

double operator_norm(const SymMatrix& a) {
    const std::vector<double> vals = sym_eigvalues(a);
    return std::max(std::fabs(vals.front()), std::fabs(vals.back()));
}

double inf_norm(const SymMatrix& a) {
    double best = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        double s = 0.0;
        for (int j = 0; j < a.size(); ++j) s += std::fabs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

bool psd_leq(const SymMatrix& a, const SymMatrix& b, double slack) {
    if (a.size() != b.size()) throw InputError("psd_leq dimension mismatch");
    if (slack < 0.0) throw InputError("psd_leq slack must be nonnegative");
    SymMatrix diff = b;
    diff -= a;
    return min_eigenvalue(diff) >= -slack;
}

double min_eigenvalue(const SymMatrix& a) { return sym_eigvalues(a).back(); }

double operator_norm_estimate(const SymMatrix& a, int iterations) {
    const int n = a.size();
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = 1.0 + 1e-3 * (i % 7);  // fixed, deterministic start
    double norm = 0.0;
    for (int it = 0; it < iterations; ++it) {
        std::vector<double> y(n, 0.0);
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += a(i, j) * x[j];
            y[i] = s;
        }
        norm = 0.0;
        for (double v : y) norm += v * v;
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;
        for (int i = 0; i < n; ++i) x[i] = y[i] / norm;
    }
    return norm;
}

}  // namespace hypercosh
