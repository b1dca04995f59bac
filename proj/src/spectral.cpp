#include "hypercosh/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hypercosh {

OuterProductSum OuterProductSum::from_vectors(const Matrix& vectors) {
    if (vectors.rows() < 1 || vectors.cols() < 1) throw InputError("outer-product sum needs at least one vector");
    OuterProductSum ops;
    ops.n = vectors.cols();
    ops.vectors = vectors;
    ops.a = SymMatrix(ops.n);
    for (int i = 0; i < vectors.rows(); ++i) ops.a.add_outer(vectors.row(i));
    const std::vector<double> vals = sym_eigvalues(ops.a);
    if (vals.back() < -1e-9 * std::max(1.0, vals.front()))
        throw InputError("outer-product sum is not psd within slack: lambda_min = " + std::to_string(vals.back()));
    return ops;
}

SymMatrix inverse_sqrt(const SymMatrix& a, double rank_tol) {
    const EigDecomposition eig = sym_eig(a);
    const double top = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
    if (top <= 0.0) throw InputError("inverse_sqrt needs a nonzero psd matrix");
    const int n = a.size();
    SymMatrix out(n);
    std::vector<double> col(n);
    for (int k = 0; k < n; ++k) {
        const double lam = eig.eigenvalues[k];
        if (lam < -1e-9 * top)
            throw InputError("inverse_sqrt rejected: eigenvalue " + std::to_string(lam) + " below the psd slack");
        if (lam <= rank_tol * top) continue;  // null direction
        for (int i = 0; i < n; ++i) col[i] = eig.eigenvectors(i, k);
        out.add_outer(col, 1.0 / std::sqrt(lam));
    }
    return out;
}

WeightVector bss_reweight(const Matrix& rows, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0,1)");
    const int m = rows.rows(), n = rows.cols();
    if (m < 1 || n < 1) throw InputError("bss_reweight needs nonempty input");

    {
        SymMatrix gram(n);
        for (int i = 0; i < m; ++i) gram.add_outer(rows.row(i));
        gram -= SymMatrix::identity(n);
        if (gram.max_abs() > 1e-6)
            throw InputError("bss_reweight input is not isotropic: max deviation " + std::to_string(gram.max_abs()));
    }

    // Barrier schedule: δ_L = 1, δ_U = (1+ε)/(1−ε), ε_L = ε,
    // ε_U = ε(1−ε)/(1+ε); then 1/δ_U + ε_U = 1/δ_L − ε_L holds with equality
    // and one vector per step stays feasible.
    const double delta_l = 1.0;
    const double delta_u = (1.0 + epsilon) / (1.0 - epsilon);
    const double eps_l = epsilon;
    const double eps_u = epsilon * (1.0 - epsilon) / (1.0 + epsilon);
    double lower = -double(n) / eps_l;
    double upper = double(n) / eps_u;
    const long steps = long(std::ceil(double(n) / (epsilon * epsilon)));

    SymMatrix running(n);
    std::vector<double> weight(m, 0.0);
    for (long step = 0; step < steps; ++step) {
        const double upper_next = upper + delta_u;
        const double lower_next = lower + delta_l;
        const EigDecomposition eig = sym_eig(running);

        double phi_u = 0.0, phi_l = 0.0, phi_u_next = 0.0, phi_l_next = 0.0;
        for (double lam : eig.eigenvalues) {
            phi_u += 1.0 / (upper - lam);
            phi_l += 1.0 / (lam - lower);
            phi_u_next += 1.0 / (upper_next - lam);
            phi_l_next += 1.0 / (lam - lower_next);
        }

        // Quadratic forms against the resolvent powers via the eigenbasis.
        int best = -1;
        double best_margin = 0.0, best_u_score = 0.0, best_l_score = 0.0;
        std::vector<double> y(n);
        for (int i = 0; i < m; ++i) {
            for (int c = 0; c < n; ++c) {
                double s = 0.0;
                for (int r = 0; r < n; ++r) s += eig.eigenvectors(r, c) * rows(i, r);
                y[c] = s;
            }
            double q_u1 = 0.0, q_u2 = 0.0, q_l1 = 0.0, q_l2 = 0.0;
            for (int c = 0; c < n; ++c) {
                const double du = upper_next - eig.eigenvalues[c];
                const double dl = eig.eigenvalues[c] - lower_next;
                q_u1 += y[c] * y[c] / du;
                q_u2 += y[c] * y[c] / (du * du);
                q_l1 += y[c] * y[c] / dl;
                q_l2 += y[c] * y[c] / (dl * dl);
            }
            const double u_score = q_u2 / (phi_u - phi_u_next) + q_u1;
            const double l_score = q_l2 / (phi_l_next - phi_l) - q_l1;
            const double margin = l_score - u_score;
            if (l_score > 0.0 && u_score > 0.0 && margin >= 0.0 && (best < 0 || margin > best_margin)) {
                best = i;
                best_margin = margin;
                best_u_score = u_score;
                best_l_score = l_score;
            }
        }
        if (best < 0)
            throw NumericError("barrier reweighting found no feasible vector at step " + std::to_string(step + 1) +
                               " (input drifted from isotropic position?)");

        const double t = 2.0 / (best_u_score + best_l_score);  // 1/t midway in [U, L]
        running.add_outer(rows.row(best), t);
        weight[best] += t;
        upper = upper_next;
        lower = lower_next;

        // Both barrier potentials must be non-increasing.
        const std::vector<double> after = sym_eigvalues(running);
        double phi_u_after = 0.0, phi_l_after = 0.0;
        for (double lam : after) {
            if (lam >= upper || lam <= lower)
                throw NumericError("barrier crossed at step " + std::to_string(step + 1));
            phi_u_after += 1.0 / (upper - lam);
            phi_l_after += 1.0 / (lam - lower);
        }
        if (phi_u_after > phi_u * (1.0 + 1e-9) + 1e-12 || phi_l_after > phi_l * (1.0 + 1e-9) + 1e-12)
            throw NumericError("barrier potential increased at step " + std::to_string(step + 1));
    }

    // λ(running) ⊂ (lower, upper) with upper/lower = ((1+ε)/(1−ε))²; rescale
    // so the sandwich lands on (1−ε)², (1+ε)².
    const double kappa = (1.0 - epsilon) * (1.0 - epsilon) / lower;
    WeightVector out;
    out.s.resize(m);
    for (int i = 0; i < m; ++i) {
        out.s[i] = kappa * weight[i];
        if (out.s[i] > 0.0) ++out.support_size;
    }
    return out;
}

SpectralResult spectral_sparsify(const OuterProductSum& ops, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0,1)");
    const int n = ops.n;
    const int m = ops.vectors.rows();

    // Range reduction: coordinates ū = Λ_r^{-1/2} Q_rᵀ v live in R^r where
    // Σ ū⊗ū = I_r exactly in exact arithmetic.
    const EigDecomposition eig = sym_eig(ops.a);
    const double top = eig.eigenvalues.front();
    if (top <= 0.0) throw InputError("spectral_sparsify rejected a zero matrix (rank collapse)");
    const double rank_tol = 1e-10;
    int rank = 0;
    while (rank < n && eig.eigenvalues[rank] > rank_tol * top) ++rank;
    if (rank == 0) throw InputError("spectral_sparsify rejected: rank collapse");
    if (m < rank) throw InputError("spectral_sparsify needs m >= rank(A)");

    Matrix u(m, rank);
    for (int i = 0; i < m; ++i) {
        for (int c = 0; c < rank; ++c) {
            double s = 0.0;
            for (int r = 0; r < n; ++r) s += eig.eigenvectors(r, c) * ops.vectors(i, r);
            u(i, c) = s / std::sqrt(eig.eigenvalues[c]);
        }
    }

    SpectralResult result;
    result.n_effective = rank;

    // Stage 1: rank-one greedy, worthwhile only when it can shrink the support.
    std::vector<double> tau(m, 1.0);
    result.stage1_t = std::max<long>(1, long(std::ceil(4.0 * rank * std::log(2.0 * rank) / (epsilon * epsilon))));
    if (result.stage1_t < m) {
        result.stage1_ran = true;
        const RowFamily family = RowFamily::from_rows(u);
        const SparseIsotropicResult iso = isotropic_sparsify(family, epsilon);
        std::fill(tau.begin(), tau.end(), 0.0);
        for (std::size_t j = 0; j < iso.indices.size(); ++j) tau[iso.indices[j]] += iso.scalars[j];
    }

    std::vector<int> support;
    for (int i = 0; i < m; ++i)
        if (tau[i] > 0.0) support.push_back(i);

    // Stage 2: barrier reweighting down to ⌈r/ε²⌉ vectors, after renormalizing
    // the stage-1 output back to exact isotropic position.
    std::vector<double> s_final(m, 0.0);
    const long budget = long(std::ceil(double(rank) / (epsilon * epsilon)));
    result.stage2_steps = budget;
    if (budget < long(support.size())) {
        result.stage2_ran = true;
        SymMatrix mid(rank);
        for (int i : support) mid.add_outer(u.row(i), tau[i]);
        const SymMatrix mid_inv_sqrt = inverse_sqrt(mid, 1e-12);
        Matrix q(int(support.size()), rank);
        for (std::size_t idx = 0; idx < support.size(); ++idx) {
            const int i = support[idx];
            const double scale = std::sqrt(tau[i]);
            for (int c = 0; c < rank; ++c) {
                double s = 0.0;
                for (int r = 0; r < rank; ++r) s += mid_inv_sqrt(c, r) * u(i, r);
                q(int(idx), c) = scale * s;
            }
        }
        const WeightVector w = bss_reweight(q, epsilon);
        for (std::size_t idx = 0; idx < support.size(); ++idx) s_final[support[idx]] = tau[support[idx]] * w.s[idx];
    } else {
        for (int i : support) s_final[i] = tau[i];
    }

    result.weights.s = std::move(s_final);
    result.weights.support_size = 0;
    for (double v : result.weights.s)
        if (v > 0.0) ++result.weights.support_size;

    // Certification: (1−ε)³A ⪯ Ã ⪯ (1+ε)³A with slack 1e−8·‖A‖.
    SymMatrix approx(n);
    for (int i = 0; i < m; ++i)
        if (result.weights.s[i] > 0.0) approx.add_outer(ops.vectors.row(i), result.weights.s[i]);
    const double lo = std::pow(1.0 - epsilon, 3), hi = std::pow(1.0 + epsilon, 3);
    const double slack = 1e-8 * top;
    SymMatrix lower_gap = approx;
    {
        SymMatrix scaled = ops.a;
        scaled *= lo;
        lower_gap -= scaled;
    }
    SymMatrix upper_gap = ops.a;
    {
        upper_gap *= hi;
        upper_gap -= approx;
    }
    result.lower_margin = min_eigenvalue(lower_gap);
    result.upper_margin = min_eigenvalue(upper_gap);
    if (result.lower_margin < -slack || result.upper_margin < -slack) {
        std::ostringstream msg;
        msg << "spectral sandwich certification failed: lower margin " << result.lower_margin << ", upper margin "
            << result.upper_margin << ", slack " << slack;
        throw CertificationError(msg.str(), std::min(result.lower_margin, result.upper_margin), -slack);
    }
    const long support_cap = long(std::ceil(double(rank) / (epsilon * epsilon)));
    if (result.weights.support_size > support_cap)
        throw CertificationError("support exceeded ceil(n_eff/eps^2)", double(result.weights.support_size),
                                 double(support_cap));
    return result;
}

OuterProductSum laplacian_from_graph(const std::vector<Edge>& edges, int n) {
    if (n < 1) throw InputError("graph needs at least one vertex");
    if (edges.empty()) throw InputError("graph needs at least one edge");
    Matrix vectors(int(edges.size()), n);
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const Edge& e = edges[k];
        if (e.u == e.v) throw InputError("self-loop rejected at edge " + std::to_string(k + 1));
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n || e.u >= e.v)
            throw InputError("edge " + std::to_string(k + 1) + " must satisfy 1 <= i < j <= n");
        if (!(e.w > 0.0)) throw InputError("edge " + std::to_string(k + 1) + " needs a positive weight");
        const double s = std::sqrt(e.w);
        vectors(int(k), e.u) = s;
        vectors(int(k), e.v) = -s;
    }
    return OuterProductSum::from_vectors(vectors);
}

}  // namespace hypercosh
