#include "hypercosh/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hypercosh {

SymMatrix random_symmetric(Rng& rng, int n, double entry_scale) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m.set(i, j, entry_scale * rng.normal());
    return m;
}

SymMatrix random_unit_norm_symmetric(Rng& rng, int n) {
    SymMatrix m = random_symmetric(rng, n);
    const double norm = operator_norm(m);
    m *= 1.0 / norm;
    return m;
}

Matrix random_orthonormal_columns(Rng& rng, int m, int n) {
    if (m < n) throw InputError("random_orthonormal_columns needs m >= n");
    Matrix a(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
    // Modified Gram-Schmidt on the columns, twice for orthogonality.
    for (int pass = 0; pass < 2; ++pass) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < j; ++k) {
                double dot = 0.0;
                for (int i = 0; i < m; ++i) dot += a(i, j) * a(i, k);
                for (int i = 0; i < m; ++i) a(i, j) -= dot * a(i, k);
            }
            double norm = 0.0;
            for (int i = 0; i < m; ++i) norm += a(i, j) * a(i, j);
            norm = std::sqrt(norm);
            if (norm == 0.0) throw NumericError("degenerate random columns");
            for (int i = 0; i < m; ++i) a(i, j) /= norm;
        }
    }
    return a;
}

std::vector<double> random_vector(Rng& rng, int n) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal();
    return v;
}

namespace {

// Circulant from a deterministic first row; commutes with J/n.
SymMatrix random_circulant(Rng& rng, int n) {
    std::vector<double> row(n);
    for (int k = 0; k < n; ++k) row[k] = rng.normal();
    for (int k = 1; k < n; ++k) {
        const double s = 0.5 * (row[k] + row[n - k]);
        row[k] = s;
        row[n - k] = s;  // symmetric circulant
    }
    SymMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m.set(i, j, row[(j - i) % n]);
    return m;
}

SymMatrix cosh_via_exp(const SymMatrix& a) {
    SymMatrix neg = a;
    neg *= -1.0;
    SymMatrix out = matrix_exp(a);
    out += matrix_exp(neg);
    out *= 0.5;
    return out;
}

}  // namespace

LemmaSuiteResult run_lemma_suite(int trials, std::uint64_t seed) {
    Rng rng(seed);
    LemmaSuiteResult r;
    r.trials = trials;
    r.golden_thompson_min_slack = std::numeric_limits<double>::infinity();
    r.tsuda_min_slack = std::numeric_limits<double>::infinity();

    for (int trial = 0; trial < trials; ++trial) {
        const int n = 3 + (trial % 6);

        // exp(±x⊗x) closed form vs the eigensolver route. Moderate norms keep
        // e^{‖x‖²} in the range where 1e-10 absolute agreement is meaningful.
        {
            std::vector<double> x = random_vector(rng, n);
            for (double& v : x) v *= 0.5;
            SymMatrix outer = SymMatrix::outer(x);
            SymMatrix closed = rank_one_exp(x, 1);
            closed -= matrix_exp(outer);
            r.rank_one_max_dev = std::max(r.rank_one_max_dev, closed.max_abs());
            SymMatrix closed_neg = rank_one_exp(x, -1);
            outer *= -1.0;
            closed_neg -= matrix_exp(outer);
            r.rank_one_max_dev = std::max(r.rank_one_max_dev, closed_neg.max_abs());
        }

        // trace exp(dilation(A)) = 2 trace cosh(A).
        {
            const SymMatrix a = random_symmetric(rng, n, 0.5);
            const double lhs = matrix_exp(dilation(a.to_matrix())).trace();
            const double rhs = 2.0 * trace_cosh(a);
            r.dilation_max_rel_dev = std::max(r.dilation_max_rel_dev, std::fabs(lhs - rhs) / std::fabs(rhs));
        }

        // cosh(PA) = P cosh(A) + I − P with P = J/n and circulant A. The
        // product P·A is symmetric up to roundoff only; fold the stray ulps.
        {
            const SymMatrix a = random_circulant(rng, n);
            SymMatrix p(n);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) p.set(i, j, 1.0 / n);
            const Matrix pa = p.to_matrix() * a.to_matrix();
            SymMatrix pa_sym(n);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) pa_sym.set(i, j, 0.5 * (pa(i, j) + pa(j, i)));
            SymMatrix lhs = cosh_via_exp(pa_sym);
            Matrix rhs = p.to_matrix() * cosh_via_exp(a).to_matrix();
            for (int i = 0; i < n; ++i) {
                rhs(i, i) += 1.0;
                for (int j = 0; j < n; ++j) rhs(i, j) -= p(i, j);
            }
            Matrix dev = lhs.to_matrix();
            dev -= rhs;
            r.projector_max_dev = std::max(r.projector_max_dev, dev.max_abs());
        }

        // Golden–Thompson: trace exp(A+B) <= trace(exp(A) exp(B)).
        {
            const SymMatrix a = random_symmetric(rng, n, 0.4);
            const SymMatrix b = random_symmetric(rng, n, 0.4);
            SymMatrix sum = a;
            sum += b;
            const double lhs = matrix_exp(sum).trace();
            double prod_trace = 0.0;
            const Matrix ea = matrix_exp(a).to_matrix(), eb = matrix_exp(b).to_matrix();
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) prod_trace += ea(i, k) * eb(k, i);
            r.golden_thompson_min_slack = std::min(r.golden_thompson_min_slack, prod_trace - lhs);
        }

        // Tsuda monotonicity: psd A and B ⪯ C give tr(AB) <= tr(AC).
        {
            SymMatrix a(n);
            for (int k = 0; k < 2; ++k) a.add_outer(random_vector(rng, n));
            const SymMatrix b = random_symmetric(rng, n, 0.5);
            SymMatrix c = b;
            for (int k = 0; k < 2; ++k) c.add_outer(random_vector(rng, n), 0.5);
            double tr_ab = 0.0, tr_ac = 0.0;
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) {
                    tr_ab += a(i, k) * b(k, i);
                    tr_ac += a(i, k) * c(k, i);
                }
            r.tsuda_min_slack = std::min(r.tsuda_min_slack, tr_ac - tr_ab);
        }

        // Taylor truncation: ‖exp(B) − T_l(B)‖ <= ‖B‖^{l+1}/(l+1)! · e^{‖B‖}.
        {
            const SymMatrix b = random_symmetric(rng, n, 0.4);
            const double norm = operator_norm(b);
            const int l = std::max(2, int(std::ceil(norm)) + 2 + trial % 4);
            Matrix term = Matrix::identity(n);
            Matrix partial = Matrix::identity(n);
            for (int k = 1; k <= l; ++k) {
                term = term * b.to_matrix();
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        term(i, j) /= double(k);
                        partial(i, j) += term(i, j);
                    }
            }
            Matrix dev = matrix_exp(b).to_matrix();
            dev -= partial;
            double bound = std::exp(norm);
            for (int k = 1; k <= l + 1; ++k) bound *= norm / double(k);
            r.taylor_max_excess = std::max(r.taylor_max_excess, operator_norm(dev) - bound);
        }
    }

    r.pass = r.rank_one_max_dev <= 1e-10 && r.dilation_max_rel_dev <= 1e-10 && r.projector_max_dev <= 1e-10 &&
             r.golden_thompson_min_slack >= -1e-10 && r.tsuda_min_slack >= -1e-10 && r.taylor_max_excess <= 0.0;
    return r;
}

}  // namespace hypercosh
