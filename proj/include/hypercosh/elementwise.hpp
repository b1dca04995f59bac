#pragma once

#include <cstdint>
#include <optional>
#include <tuple>
#include <vector>

#include "hypercosh/linalg.hpp"

namespace hypercosh {

/// (‖A‖_∞/‖A‖)², the least θ for which A is θ-SDD; always ≤ n, and ≤ 4 for
/// diagonally dominant matrices.
double theta_of(const SymMatrix& a);

/// ‖A‖_F²/‖A‖².
double stable_rank(const SymMatrix& a);

/// Zeroes entries with |A_ij| < ε/(2n); assumes the caller normalized ‖A‖=1,
/// so the dropped mass costs at most ε/2 in operator norm.
SymMatrix zero_small_entries(const SymMatrix& a, double epsilon);

/// Sparse output in coordinate form; SDD producers emit symmetric patterns,
/// the generic sampler may not (its estimator picks (i,j) and (j,i)
/// independently, as does the scheme it derandomizes).
struct SparsifiedMatrix {
    int n = 0;
    std::vector<std::tuple<int, int, double>> entries;
    std::optional<double> error_bound;  // certified ‖A − Ã‖ when computed

    long nnz() const { return long(entries.size()); }
    Matrix to_dense() const;
    bool pattern_symmetric() const;
};

struct GenericSparsifyResult {
    SparsifiedMatrix sparsified;   // approximates the input A (unnormalized)
    long t = 0;                    // greedy steps = sample budget
    long budget = 0;               // ⌊28 n ln(√(2n)) sr(A)/ε²⌋
    double stable_rank = 0.0;
    double scale = 0.0;            // ‖A‖ divided out internally
    double epsilon_alg = 0.0;
    double bound = 0.0;            // hypercosine guarantee on the zeroed part
    double normalized_error = 0.0; // certified ‖A/‖A‖ − Ã/‖A‖‖
    std::vector<double> potential_log;
};

/// Derandomized element-wise sparsification of any nonzero symmetric A: at
/// most 28·n·ln(√(2n))·sr(A)/ε² nonzeros with certified ‖A − Ã‖ ≤ ε‖A‖.
/// Deterministic path, guarded to n ≤ 64 (use the SDD path above that).
GenericSparsifyResult sparsify_generic(const SymMatrix& a, double epsilon);

/// A = CCᵀ + diag(A) − R with C columns √|A_ij|·e_i + sign(A_ij)√|A_ij|·e_j
/// over nonzero entries i < j, and R_i = Σ_{j≠i}|A_ij|.
struct SddDecomposition {
    int n = 0;
    std::vector<std::tuple<int, int, double>> pairs;  // (i, j, A_ij), i < j, A_ij ≠ 0
    std::vector<double> diag;
    std::vector<double> row_abs;  // R
};

SddDecomposition sdd_decompose(const SymMatrix& a);
SymMatrix sdd_reconstruct(const SddDecomposition& d);

struct SddRandomizedResult {
    SparsifiedMatrix sparsified;
    long t = 0;          // samples drawn
    double theta = 0.0;
    std::uint64_t seed = 0;
};

/// One pass + O(t) sampling, t = ⌈38·n·θ·ln(√2·n)/ε²⌉; holds ‖A − Ã‖ ≤ ε‖A‖
/// with probability ≥ 1 − 1/n (validated statistically, optionally certified
/// per run via the eigensolver).
SddRandomizedResult sdd_sparsify_randomized(const SymMatrix& a, double norm_estimate, double epsilon,
                                            std::uint64_t seed, bool certify = false);

struct SddDeterministicResult {
    SparsifiedMatrix sparsified;
    double theta = 0.0;
    double epsilon_inner = 0.0;  // ε′ = ε/(10√θ)
    long support_budget = 0;     // ⌈n/ε′²⌉ columns
    bool reweighted = false;     // false when the budget already covers every column
};

/// Decompose, spectrally sparsify CCᵀ at ε′ = ε/(10√θ), reassemble;
/// certified ‖A − Ã‖ ≤ ε‖A‖ by direct eigensolve. Requires ε < 1/2.
SddDeterministicResult sdd_sparsify_deterministic(const SymMatrix& a, double epsilon);

}  // namespace hypercosh
