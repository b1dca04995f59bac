#pragma once

#include <cstdint>
#include <random>

#include "hypercosh/linalg.hpp"

namespace hypercosh {

/// Deterministic generator for verification inputs. Distributions are
/// hand-rolled on top of the mt19937_64 bit stream so the sequence is
/// identical across standard libraries.
struct Rng {
    std::mt19937_64 engine;
    explicit Rng(std::uint64_t seed) : engine(seed) {}

    double uniform() { return double(engine() >> 11) * 0x1.0p-53; }
    double normal() {
        // Box-Muller; consumes exactly two draws.
        double u1 = uniform(), u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }
    int uniform_int(int lo, int hi) { return lo + int(engine() % std::uint64_t(hi - lo + 1)); }
};

SymMatrix random_symmetric(Rng& rng, int n, double entry_scale = 1.0);
SymMatrix random_unit_norm_symmetric(Rng& rng, int n);
Matrix random_orthonormal_columns(Rng& rng, int m, int n);  // AᵀA = I
std::vector<double> random_vector(Rng& rng, int n);

/// The closed-form matrix-function identities, each exercised on fresh
/// random inputs: rank-one exponentials vs the eigensolver route, the
/// dilation trace identity, projector-cosh on circulants, Golden–Thompson,
/// and trace monotonicity under the psd order.
struct LemmaSuiteResult {
    int trials = 0;
    double rank_one_max_dev = 0.0;
    double dilation_max_rel_dev = 0.0;
    double projector_max_dev = 0.0;
    double golden_thompson_min_slack = 0.0;  // min tr(e^A e^B) − tr(e^{A+B})
    double tsuda_min_slack = 0.0;            // min tr(AC) − tr(AB) with B ⪯ C
    double taylor_max_excess = 0.0;          // max ‖exp(B) − T_l(B)‖ − bound
    bool pass = false;
};

LemmaSuiteResult run_lemma_suite(int trials, std::uint64_t seed);

}  // namespace hypercosh
