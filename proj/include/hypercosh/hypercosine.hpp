#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hypercosh/linalg.hpp"

namespace hypercosh {

/// Indexed family f_j : [m] -> SymMatrix(n) with its zero-mean distribution
/// and the (γ, ρ²) bounds the selector's guarantee is stated against.
struct SampleFamily {
    int m = 0;                 // candidate count
    int n = 0;                 // matrix dimension
    long steps = 0;            // number of distinct f_j; 0 = stationary (one f reused forever)
    double gamma = 0.0;        // uniform bound on ‖f_j(k)‖
    double rho_sq = 0.0;       // bound on ‖E f_j(X)²‖
    std::vector<double> weights;
    std::function<SymMatrix(long step, int k)> evaluate;  // step and candidate are 0-based
};

struct SelectionResult {
    std::vector<int> indices;          // chosen candidate per step
    double final_norm = 0.0;           // ‖(1/t) Σ f_j(x_j*)‖, certified by eigensolve
    double bound = 0.0;                // γ ln(2n)/(tε) + ε ρ²/γ
    std::vector<double> potential_log; // log Φ⁽ⁱ⁾ for i = 0..t; Φ⁽⁰⁾ = 2n
};

/// Greedy potential minimization: per step picks the candidate minimizing
/// trace cosh(θ·(running sum + f_i(k))) with θ = ε/γ, smallest index on ties.
/// Certifies both the final norm bound and the per-step potential growth.
SelectionResult select_indices(const SampleFamily& family, double epsilon, long t);

struct BalanceResult {
    std::vector<int> signs;  // ±1 per input matrix
    double value;            // ‖Σ sᵢ Mᵢ‖
    double bound;            // 2 sqrt(N ln 2n) when ε is interior
};

/// Deterministic signs with ‖Σ sᵢ Mᵢ‖ ≤ 2·sqrt(N·ln(2n)); inputs must have
/// ‖Mᵢ‖ ≤ 1 (violations are rejected naming the offending index).
BalanceResult balance_matrices(const std::vector<SymMatrix>& mats);

/// Uniform seeded signs, the randomized strategy the greedy derandomizes.
std::vector<int> random_signs_baseline(const std::vector<SymMatrix>& mats, std::uint64_t seed);

struct FamilyReport {
    double max_candidate_norm = 0.0;  // worst ‖f_j(k)‖ over all j, k
    double mean_residual = 0.0;       // worst max-entry of Σ_k w_k f_j(k)
    double variance_norm = 0.0;       // worst ‖Σ_k w_k f_j(k)²‖
    bool within_bounds = false;
};

/// Full enumeration of the SampleFamily invariants; refuses when the
/// enumeration cost steps·m·n² exceeds 1e8.
FamilyReport verify_family(const SampleFamily& family);

struct StepPlan {
    double epsilon;       // ε to hand to select_indices
    long t;               // steps making the bound meet the target
    std::string formula;  // how the numbers were derived
};

/// Picks (ε, t) so the selection bound γln(2n)/(tε) + ερ²/γ meets eps_total:
/// ε = min(eps_total·γ/(2ρ²), 0.999) and t = ⌈γ ln(2n)/(ε(eps_total − ερ²/γ))⌉.
StepPlan plan_steps(double gamma, double rho_sq, int n, double eps_total);

/// Smallest index whose score sits within tol of the minimum. Mathematical
/// ties (equal candidates, symmetric first steps) land on the same index no
/// matter which evaluation route produced the scores.
int argmin_with_ties(std::span<const double> scores, double tol);

}  // namespace hypercosh
