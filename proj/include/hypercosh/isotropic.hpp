#pragma once

#include <span>
#include <vector>

#include "hypercosh/hypercosine.hpp"
#include "hypercosh/linalg.hpp"

namespace hypercosh {

/// Rows in isotropic position (Σ rowᵀrow = I) with the sampling weights
/// p_k = ‖row_k‖²/n. Zero rows are dropped at ingestion; source_index maps
/// retained positions back to the caller's numbering.
struct RowFamily {
    int m = 0, n = 0;
    Matrix rows;
    std::vector<double> p;
    std::vector<int> source_index;
    int dropped = 0;

    static RowFamily from_rows(const Matrix& rows);
};

struct DiagonalPlusRankOne {
    std::vector<double> sigma;
    std::vector<double> z;
};

struct SecularEigs {
    std::vector<double> eigenvalues;  // ascending
    Matrix eigenvectors;              // column k pairs with eigenvalues[k]; empty unless requested
};

/// All eigenvalues (and optionally vectors) of diag(sigma) + z⊗z via the
/// secular equation: interlacing brackets each root, safeguarded Newton
/// refines it, and Gu–Eisenstat deflation handles tiny z entries and tied
/// sigmas. Interlacing and trace conservation are asserted on every call.
SecularEigs secular_eigs(const DiagonalPlusRankOne& d, bool want_vectors = false);

/// Exact O(mn) Cauchy product y_i = Σ_j x_j/(t_i − s_j). The overload with an
/// error budget is the slot for a fast approximate backend; the exact backend
/// accepts and ignores it.
std::vector<double> cauchy_apply(std::span<const double> t_nodes, std::span<const double> s_nodes,
                                 std::span<const double> x);
std::vector<double> cauchy_apply(std::span<const double> t_nodes, std::span<const double> s_nodes,
                                 std::span<const double> x, double error_budget);

struct SparseIsotropicResult {
    std::vector<int> indices;      // caller numbering, one per step
    std::vector<double> scalars;   // 1/(t·p) per selection
    double residual = 0.0;         // ‖Σ s·row⊗row − I‖, certified
    long t = 0;
    int c_factor = 8;              // effective c after any doublings
    std::vector<double> potential_log;
};

/// Greedy rank-one selection in a rotating eigenbasis (diagonal-plus-rank-one
/// eigensolves per candidate, basis rotation per step); certified against a
/// direct eigensolve, doubling the step budget on failure at most 3 times.
SparseIsotropicResult isotropic_sparsify(const RowFamily& family, double epsilon);

/// Fixed-parameter core of the sparsifier; exposed for audits and tests.
SparseIsotropicResult isotropic_select(const RowFamily& family, double theta, long t);

/// The same selection as a generic hypercosine family, f(i) = row⊗row/p − I
/// with γ = ρ² = n (the slow path the fast loop must reproduce).
SampleFamily isotropic_sample_family(const RowFamily& family);

/// True iff the fast path and the generic selector pick identical index
/// sequences for t_small steps. Guard: m·n³·t_small ≤ 1e9.
bool equivalence_audit(const RowFamily& family, double epsilon, long t_small);

}  // namespace hypercosh
