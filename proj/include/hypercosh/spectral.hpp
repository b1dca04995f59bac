#pragma once

#include <vector>

#include "hypercosh/isotropic.hpp"
#include "hypercosh/linalg.hpp"

namespace hypercosh {

/// A = Σ vᵢ⊗vᵢ, materialized alongside the vectors that generate it.
struct OuterProductSum {
    int n = 0;
    Matrix vectors;  // m×n, row i = vᵢ
    SymMatrix a;

    static OuterProductSum from_vectors(const Matrix& vectors);
};

struct WeightVector {
    std::vector<double> s;  // one weight per input vector, all >= 0
    int support_size = 0;
};

/// Pseudo-inverse square root on the range: eigenvalues below
/// rank_tol·λ_max become exact-zero directions.
SymMatrix inverse_sqrt(const SymMatrix& a, double rank_tol = 1e-10);

/// Deterministic two-barrier reweighting of isotropic vectors: ⌈n/ε²⌉
/// single-vector steps, each keeping both barrier potentials non-increasing,
/// ending in (1−ε)² I ⪯ Σ s·u⊗u ⪯ (1+ε)² I.
WeightVector bss_reweight(const Matrix& rows, double epsilon);

struct SpectralResult {
    WeightVector weights;
    int n_effective = 0;        // rank actually sparsified
    bool stage1_ran = false;    // isotropic greedy (skipped when t ≥ m)
    bool stage2_ran = false;    // barrier reweighting (skipped when budget ≥ support)
    long stage1_t = 0;
    long stage2_steps = 0;
    double lower_margin = 0.0;  // λ_min(Ã − (1−ε)³A)
    double upper_margin = 0.0;  // λ_min((1+ε)³A − Ã)
};

/// (1−ε)³A ⪯ Ã ⪯ (1+ε)³A with at most ⌈n_eff/ε²⌉ surviving vectors:
/// reduce to isotropic position, run the rank-one greedy, then the barrier
/// stage; certified by psd comparison with slack 1e−8·‖A‖.
SpectralResult spectral_sparsify(const OuterProductSum& ops, double epsilon);

struct Edge {
    int u = 0, v = 0;   // 0-based endpoints, u < v
    double w = 1.0;
};

/// Vertex-edge decomposition of the weighted Laplacian: one vector
/// sqrt(w)·(e_u − e_v) per edge. Self-loops are rejected.
OuterProductSum laplacian_from_graph(const std::vector<Edge>& edges, int n);

}  // namespace hypercosh
