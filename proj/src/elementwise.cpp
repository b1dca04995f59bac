#include "hypercosh/elementwise.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "hypercosh/parallel.hpp"
#include "hypercosh/spectral.hpp"

namespace hypercosh {

double theta_of(const SymMatrix& a) {
    if (a.max_abs() == 0.0) throw InputError("theta_of rejected the zero matrix");
    const double ratio = inf_norm(a) / operator_norm(a);
    return ratio * ratio;
}

double stable_rank(const SymMatrix& a) {
    const double norm = operator_norm(a);
    if (norm == 0.0) throw InputError("stable_rank rejected the zero matrix");
    const double f = a.frobenius();
    return f * f / (norm * norm);
}

SymMatrix zero_small_entries(const SymMatrix& a, double epsilon) {
    const int n = a.size();
    const double threshold = epsilon / (2.0 * n);
    SymMatrix out(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            if (std::fabs(a(i, j)) >= threshold) out.set(i, j, a(i, j));
    return out;
}

Matrix SparsifiedMatrix::to_dense() const {
    Matrix m(n, n);
    for (const auto& [i, j, v] : entries) m(i, j) += v;
    return m;
}

bool SparsifiedMatrix::pattern_symmetric() const {
    std::map<std::pair<int, int>, int> seen;
    for (const auto& [i, j, v] : entries) ++seen[{i, j}];
    for (const auto& [key, cnt] : seen) {
        auto mirror = seen.find({key.second, key.first});
        if (mirror == seen.end() || mirror->second != cnt) return false;
    }
    return true;
}

GenericSparsifyResult sparsify_generic(const SymMatrix& a, double epsilon) {
    const int n = a.size();
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0,1)");
    if (a.max_abs() == 0.0) throw InputError("sparsify_generic rejected the zero matrix");
    if (n > 64) throw InputError("sparsify_generic is the dense deterministic path, guarded to n <= 64; "
                                 "use the SDD sparsifiers for larger matrices");

    const double scale = operator_norm(a);
    SymMatrix normalized = a;
    normalized *= 1.0 / scale;
    const double sr = stable_rank(a);
    const SymMatrix zeroed = zero_small_entries(normalized, epsilon);

    // Candidates are the surviving entries, in row-major (i,j) order over
    // both triangles, matching the bijection l ↦ (⌈l/n⌉, (l−1) mod n + 1).
    struct Candidate {
        int i, j;
        double value;   // zeroed(i,j)
        double prob;    // value²/‖·‖_F²
    };
    std::vector<Candidate> cand;
    double fro_sq = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (zeroed(i, j) != 0.0) {
                cand.push_back({i, j, zeroed(i, j), 0.0});
                fro_sq += zeroed(i, j) * zeroed(i, j);
            }
    const int m = int(cand.size());
    for (auto& c : cand) c.prob = c.value * c.value / fro_sq;

    // Exact family parameters: γ = max ‖value/p·E − A‖ per candidate,
    // ρ² = ‖F²·diag(row nnz) − A²‖ from the closed-form second moment.
    double gamma = 0.0;
    {
        std::vector<double> norms(m);
        parallel_for(m, [&](int k) {
            Matrix y(n, n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) y(r, c) = -zeroed(r, c);
            y(cand[k].i, cand[k].j) += cand[k].value / cand[k].prob;
            norms[k] = operator_norm(y);
        });
        for (double v : norms) gamma = std::max(gamma, v);
    }
    double rho_sq;
    {
        std::vector<int> row_nnz(n, 0);
        for (const auto& c : cand) ++row_nnz[c.i];
        const Matrix z = zeroed.to_matrix();
        const Matrix zsq = z * z;
        SymMatrix second(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) second.set(i, j, (i == j ? fro_sq * row_nnz[i] : 0.0) - zsq(i, j));
        rho_sq = operator_norm(second);
    }

    const long budget = std::max<long>(1, long(std::floor(28.0 * n * std::log(std::sqrt(2.0 * n)) * sr /
                                                          (epsilon * epsilon))));
    const long t = budget;

    // ε_alg minimizes γ ln(4n)/(t ε) + ε ρ²/γ over (0,1); the dilated samples
    // live in S^{2n×2n}, hence ln(2·2n).
    const double log_dim = std::log(4.0 * n);
    double eps_alg = gamma * std::sqrt(log_dim / (double(t) * rho_sq));
    eps_alg = std::min(std::max(eps_alg, 1e-8), 0.999);
    const double theta = eps_alg / gamma;
    const double growth = eps_alg * eps_alg * rho_sq / (gamma * gamma);
    const double bound = gamma * log_dim / (double(t) * eps_alg) + eps_alg * rho_sq / gamma;

    GenericSparsifyResult result;
    result.t = t;
    result.budget = budget;
    result.stable_rank = sr;
    result.scale = scale;
    result.epsilon_alg = eps_alg;
    result.bound = bound;
    result.potential_log.push_back(std::log(4.0 * n));

    // Running B_i = θ(Σ chosen single-entry samples − i·A); the candidate
    // potential is Σ cosh over ±singular values of B + θ(X_l − A), evaluated
    // through the Gram matrix with an O(n) correction per candidate.
    Matrix b(n, n);
    std::vector<long> counts(m, 0);
    for (long step = 1; step <= t; ++step) {
        Matrix bc = b;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) bc(r, c) -= theta * zeroed(r, c);
        const Matrix gram0 = bc.transposed() * bc;

        std::vector<double> pot(m);
        parallel_for(m, [&](int k) {
            const double alpha = theta * cand[k].value / cand[k].prob;
            const int ci = cand[k].i, cj = cand[k].j;
            SymMatrix g(n);
            for (int r = 0; r < n; ++r)
                for (int c = r; c < n; ++c) g.set(r, c, gram0(r, c));
            // MᵀM = G0 + α(e_j rᵀ + r e_jᵀ) + α² e_je_jᵀ with r = row ci of Bc;
            // the (j,j) slot receives the rank-two term twice.
            for (int c = 0; c < n; ++c) g.add(cj, c, alpha * bc(ci, c));
            g.add(cj, cj, alpha * bc(ci, cj) + alpha * alpha);
            std::vector<double> eigs = sym_eigvalues(g);
            std::vector<double> folded;
            folded.reserve(2 * eigs.size());
            for (double lam : eigs) {
                const double s = std::sqrt(std::max(0.0, lam));
                folded.push_back(s);
                folded.push_back(-s);
            }
            pot[k] = log_two_trace_cosh(folded);
        });
        const int best = argmin_with_ties(pot, 1e-11);
        if (pot[best] > result.potential_log.back() + growth + 1e-9)
            throw NumericError("element-wise potential outgrew its per-step bound at step " + std::to_string(step));
        result.potential_log.push_back(pot[best]);
        ++counts[best];
        b = bc;
        b(cand[best].i, cand[best].j) += theta * cand[best].value / cand[best].prob;
    }

    const double final_norm = operator_norm(b) / (theta * double(t));
    if (final_norm > bound + 1e-8)
        throw NumericError("element-wise selection norm " + std::to_string(final_norm) + " exceeds its bound " +
                           std::to_string(bound));

    Matrix approx(n, n);
    result.sparsified.n = n;
    for (int k = 0; k < m; ++k) {
        if (counts[k] == 0) continue;
        const double value = cand[k].value / cand[k].prob * double(counts[k]) / double(t);
        approx(cand[k].i, cand[k].j) += value;
        result.sparsified.entries.emplace_back(cand[k].i, cand[k].j, value * scale);
    }
    Matrix diff = normalized.to_matrix();
    diff -= approx;
    result.normalized_error = operator_norm(diff);
    result.sparsified.error_bound = result.normalized_error * scale;
    if (result.normalized_error > epsilon)
        throw CertificationError("element-wise sparsification error " + std::to_string(result.normalized_error) +
                                     " exceeds epsilon after normalization",
                                 result.normalized_error, epsilon);
    return result;
}

SddDecomposition sdd_decompose(const SymMatrix& a) {
    const int n = a.size();
    SddDecomposition d;
    d.n = n;
    d.diag.resize(n);
    d.row_abs.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        d.diag[i] = a(i, i);
        for (int j = 0; j < n; ++j)
            if (j != i) d.row_abs[i] += std::fabs(a(i, j));
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (a(i, j) != 0.0) d.pairs.emplace_back(i, j, a(i, j));
    return d;
}

SymMatrix sdd_reconstruct(const SddDecomposition& d) {
    SymMatrix out(d.n);
    std::vector<double> cc_diag(d.n, 0.0);
    for (const auto& [i, j, v] : d.pairs) {
        cc_diag[i] += std::fabs(v);
        cc_diag[j] += std::fabs(v);
        out.add(i, j, v);
    }
    for (int i = 0; i < d.n; ++i) out.add(i, i, cc_diag[i] + d.diag[i] - d.row_abs[i]);
    return out;
}

namespace {

// Shared reassembly Ã = Σ w_l·C_l⊗C_l + diag(A) − R, accumulated in pair
// order so that an all-ones weight vector reproduces A exactly (the diagonal
// partial sums then cancel bit-for-bit against R).
SparsifiedMatrix assemble_sdd(const SddDecomposition& d, const std::vector<double>& column_weight) {
    SparsifiedMatrix out;
    out.n = d.n;
    std::vector<double> diag_acc(d.n, 0.0);
    std::map<std::pair<int, int>, double> off;
    for (std::size_t l = 0; l < d.pairs.size(); ++l) {
        const double w = column_weight[l];
        if (w == 0.0) continue;
        const auto& [i, j, v] = d.pairs[l];
        diag_acc[i] += w * std::fabs(v);
        diag_acc[j] += w * std::fabs(v);
        off[{i, j}] += w * v;
    }
    for (int i = 0; i < d.n; ++i) {
        // (acc − R) first: for unit weights the two sums are bit-identical,
        // so the diagonal reproduces A_ii exactly.
        const double value = (diag_acc[i] - d.row_abs[i]) + d.diag[i];
        if (value != 0.0) out.entries.emplace_back(i, i, value);
    }
    for (const auto& [key, v] : off) {
        if (v == 0.0) continue;
        out.entries.emplace_back(key.first, key.second, v);
        out.entries.emplace_back(key.second, key.first, v);
    }
    return out;
}

}  // namespace

SddRandomizedResult sdd_sparsify_randomized(const SymMatrix& a, double norm_estimate, double epsilon,
                                            std::uint64_t seed, bool certify) {
    const int n = a.size();
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0,1)");
    if (!(norm_estimate > 0.0)) throw InputError("norm estimate must be positive");

    SymMatrix normalized = a;
    normalized *= 1.0 / norm_estimate;
    const double theta_ratio = inf_norm(normalized);  // ‖Â‖_∞ with ‖Â‖ ≈ 1
    const double theta = theta_ratio * theta_ratio;

    const SddDecomposition d = sdd_decompose(normalized);
    SddRandomizedResult result;
    result.theta = theta;
    result.seed = seed;

    std::vector<double> weight(d.pairs.size(), 0.0);
    if (!d.pairs.empty()) {
        // p_l = ‖C_l‖²/‖C‖_F² = 2|a_ij| / Σ2|a_ij|.
        std::vector<double> cumulative(d.pairs.size());
        double total = 0.0;
        for (std::size_t l = 0; l < d.pairs.size(); ++l) {
            total += 2.0 * std::fabs(std::get<2>(d.pairs[l]));
            cumulative[l] = total;
        }
        const long t = std::max<long>(
            1, long(std::ceil(38.0 * n * theta * std::log(std::sqrt(2.0) * n) / (epsilon * epsilon))));
        result.t = t;

        std::mt19937_64 rng(seed);
        for (long s = 0; s < t; ++s) {
            const double u = double(rng() >> 11) * 0x1.0p-53 * total;
            const std::size_t l = std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
            const std::size_t pick = std::min(l, d.pairs.size() - 1);
            const double p = 2.0 * std::fabs(std::get<2>(d.pairs[pick])) / total;
            weight[pick] += 1.0 / (double(t) * p);
        }
    }

    result.sparsified = assemble_sdd(d, weight);
    for (auto& [i, j, v] : result.sparsified.entries) v *= norm_estimate;
    result.sparsified.n = n;
    if (certify) {
        Matrix diff = a.to_matrix();
        diff -= result.sparsified.to_dense();
        result.sparsified.error_bound = operator_norm(diff);
    }
    return result;
}

SddDeterministicResult sdd_sparsify_deterministic(const SymMatrix& a, double epsilon) {
    const int n = a.size();
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw InputError("the deterministic SDD path requires epsilon in (0, 1/2)");
    if (a.max_abs() == 0.0) throw InputError("sdd_sparsify_deterministic rejected the zero matrix");

    const double norm = operator_norm(a);
    SddDeterministicResult result;
    result.theta = theta_of(a);
    result.epsilon_inner = epsilon / (10.0 * std::sqrt(result.theta));
    result.support_budget = long(std::ceil(double(n) / (result.epsilon_inner * result.epsilon_inner)));

    const SddDecomposition d = sdd_decompose(a);
    std::vector<double> weight(d.pairs.size(), 1.0);
    if (result.support_budget < long(d.pairs.size())) {
        // The budget genuinely sparsifies; run the spectral pipeline on CCᵀ.
        result.reweighted = true;
        Matrix columns(int(d.pairs.size()), n);
        for (std::size_t l = 0; l < d.pairs.size(); ++l) {
            const auto& [i, j, v] = d.pairs[l];
            const double root = std::sqrt(std::fabs(v));
            columns(int(l), i) = root;
            columns(int(l), j) = v >= 0.0 ? root : -root;
        }
        const SpectralResult spectral = spectral_sparsify(OuterProductSum::from_vectors(columns), result.epsilon_inner);
        weight = spectral.weights.s;
    }

    result.sparsified = assemble_sdd(d, weight);
    result.sparsified.n = n;
    Matrix diff = a.to_matrix();
    diff -= result.sparsified.to_dense();
    const double err = operator_norm(diff);
    result.sparsified.error_bound = err;
    if (err > epsilon * norm)
        throw CertificationError("deterministic SDD sparsification error " + std::to_string(err) + " exceeds " +
                                     std::to_string(epsilon * norm),
                                 err, epsilon * norm);
    return result;
}

}  // namespace hypercosh
