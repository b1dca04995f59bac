#include "hypercosh/isotropic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "hypercosh/parallel.hpp"

namespace hypercosh {

RowFamily RowFamily::from_rows(const Matrix& rows) {
    if (rows.rows() < 1 || rows.cols() < 1) throw InputError("row family needs at least one row and column");
    const int n = rows.cols();

    SymMatrix gram(n);
    for (int k = 0; k < rows.rows(); ++k) gram.add_outer(rows.row(k));
    SymMatrix dev = gram;
    dev -= SymMatrix::identity(n);
    if (dev.max_abs() > 1e-8)
        throw InputError("rows are not in isotropic position: max |Σ row⊗row − I| = " + std::to_string(dev.max_abs()));

    RowFamily fam;
    fam.n = n;
    std::vector<double> kept;
    for (int k = 0; k < rows.rows(); ++k) {
        double norm_sq = 0.0;
        for (double v : rows.row(k)) norm_sq += v * v;
        if (norm_sq == 0.0) {
            ++fam.dropped;
            continue;
        }
        fam.source_index.push_back(k);
        fam.p.push_back(norm_sq / double(n));
        kept.insert(kept.end(), rows.row(k).begin(), rows.row(k).end());
    }
    fam.m = int(fam.source_index.size());
    if (fam.m < fam.n) throw InputError("row family needs m >= n nonzero rows");
    fam.rows = Matrix(fam.m, n, std::move(kept));

    double psum = 0.0;
    for (double v : fam.p) psum += v;
    if (std::fabs(psum - 1.0) > 1e-12)
        throw InputError("sampling weights sum to " + std::to_string(psum) + " instead of 1");
    return fam;
}

namespace {

struct Root {
    int anchor;     // pole index the offset is measured from
    double offset;  // eigenvalue = d[anchor] + offset, offset >= 0
};

// Secular function in the shifted variable x = λ - d[anchor]:
//   g(x) = 1 + Σ_j w_j² / ((d_j - d_anchor) - x)
// monotone increasing between consecutive poles.
struct ShiftedSecular {
    const std::vector<double>& gaps;  // d_j - d_anchor for active j
    const std::vector<double>& wsq;

    void eval(double x, double& g, double& gp) const {
        g = 1.0;
        gp = 0.0;
        for (std::size_t j = 0; j < gaps.size(); ++j) {
            const double den = gaps[j] - x;
            const double q = wsq[j] / den;
            g += q;
            gp += q / den;
        }
    }
};

Root solve_interval(const std::vector<double>& d, const std::vector<double>& wsq, int k, double rho, double tol) {
    const int r = int(d.size());
    const int anchor = k;
    std::vector<double> gaps(r);
    for (int j = 0; j < r; ++j) gaps[j] = d[j] - d[anchor];
    const double hi = (k + 1 < r) ? gaps[k + 1] : rho;
    ShiftedSecular fn{gaps, wsq};

    double lo_x = 0.0, hi_x = hi;
    double x = 0.5 * hi;
    double g, gp;
    for (int iter = 0; iter < 200; ++iter) {
        fn.eval(x, g, gp);
        if (g == 0.0) break;
        if (g < 0.0)
            lo_x = x;
        else
            hi_x = x;
        double step = -g / gp;  // gp > 0 always
        double next = x + step;
        if (!(next > lo_x && next < hi_x)) next = 0.5 * (lo_x + hi_x);
        if (std::fabs(next - x) <= tol || hi_x - lo_x <= tol) {
            x = next;
            break;
        }
        x = next;
    }
    return {anchor, x};
}

// One guarded Newton polish at machine precision; the rotation path feeds
// long products of these roots, so the extra iterations are spent only on
// the per-step winner, not on candidate scoring.
void polish_roots(const std::vector<double>& d, const std::vector<double>& wsq, double rho, std::vector<Root>& roots) {
    const int r = int(d.size());
    for (int k = 0; k < r; ++k) {
        std::vector<double> gaps(r);
        for (int j = 0; j < r; ++j) gaps[j] = d[j] - d[roots[k].anchor];
        const double hi = (k + 1 < r) ? gaps[k + 1] : rho;
        ShiftedSecular fn{gaps, wsq};
        double x = roots[k].offset;
        for (int iter = 0; iter < 40; ++iter) {
            double g, gp;
            fn.eval(x, g, gp);
            if (g == 0.0 || gp <= 0.0) break;
            const double next = x - g / gp;
            if (!(next > 0.0 && next < hi)) break;
            if (std::fabs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(next)) {
                x = next;
                break;
            }
            x = next;
        }
        roots[k].offset = x;
    }
}

}  // namespace

SecularEigs secular_eigs(const DiagonalPlusRankOne& input, bool want_vectors) {
    const int n = int(input.sigma.size());
    if (n < 1) throw InputError("secular_eigs needs a nonempty diagonal");
    if (int(input.z.size()) != n) throw InputError("secular_eigs dimension mismatch");
    for (double v : input.sigma)
        if (!std::isfinite(v)) throw InputError("secular_eigs: non-finite diagonal");
    for (double v : input.z)
        if (!std::isfinite(v)) throw InputError("secular_eigs: non-finite update vector");

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return input.sigma[a] < input.sigma[b]; });

    std::vector<double> d(n), w(n);
    for (int j = 0; j < n; ++j) {
        d[j] = input.sigma[perm[j]];
        w[j] = input.z[perm[j]];
    }

    double z_norm_sq = 0.0;
    for (double v : w) z_norm_sq += v * v;
    const double z_norm = std::sqrt(z_norm_sq);
    const double d_scale = std::max(std::fabs(d.front()), std::fabs(d.back()));
    const double tol_z = 1e-14 * z_norm;
    const double tol_tie = 1e-14 * std::max(1.0, d_scale + z_norm_sq);
    const double tol_sec = 1e-12 * std::max(1.0, d_scale + z_norm_sq);

    // Deflation: drop coordinates with negligible weight, then merge tied
    // poles by Givens rotations that move all weight onto the last member.
    std::vector<char> active(n, 1);
    for (int j = 0; j < n; ++j)
        if (std::fabs(w[j]) <= tol_z) {
            active[j] = 0;
            w[j] = 0.0;
        }
    struct Givens {
        int from, to;
        double c, s;
    };
    std::vector<Givens> rotations;
    {
        int group_end = -1;  // last active index of the current tie group
        for (int j = 0; j < n; ++j) {
            if (!active[j]) continue;
            if (group_end >= 0 && d[j] - d[group_end] <= tol_tie) {
                const double norm = std::hypot(w[group_end], w[j]);
                const Givens g{group_end, j, w[j] / norm, w[group_end] / norm};
                // Rotate so coordinate group_end loses its weight.
                w[j] = norm;
                w[group_end] = 0.0;
                active[group_end] = 0;
                rotations.push_back(g);
            }
            group_end = j;
        }
    }

    std::vector<int> act;
    for (int j = 0; j < n; ++j)
        if (active[j]) act.push_back(j);
    const int r = int(act.size());

    std::vector<Root> roots(r);
    std::vector<double> act_d(r), act_wsq(r);
    for (int j = 0; j < r; ++j) {
        act_d[j] = d[act[j]];
        act_wsq[j] = w[act[j]] * w[act[j]];
    }
    double rho = 0.0;
    for (double v : act_wsq) rho += v;
    for (int k = 0; k < r; ++k) roots[k] = solve_interval(act_d, act_wsq, k, rho, tol_sec);
    if (want_vectors) polish_roots(act_d, act_wsq, rho, roots);

    // Interlacing d_k <= λ_k <= d_{k+1} (last: <= d_r + ‖z‖²) is structural;
    // violations mean the bracketing logic broke.
    for (int k = 0; k < r; ++k) {
        const double upper = (k + 1 < r) ? act_d[k + 1] - act_d[k] : rho;
        if (roots[k].offset < -tol_sec || roots[k].offset > upper + tol_sec)
            throw NumericError("secular root escaped its interlacing bracket at position " + std::to_string(k));
    }

    SecularEigs out;
    struct Pair {
        double value;
        int kind;  // 0 = secular root, 1 = deflated
        int index; // root index or coordinate
    };
    std::vector<Pair> merged;
    merged.reserve(n);
    for (int k = 0; k < r; ++k) merged.push_back({act_d[roots[k].anchor] + roots[k].offset, 0, k});
    for (int j = 0; j < n; ++j)
        if (!active[j]) merged.push_back({d[j], 1, j});
    std::stable_sort(merged.begin(), merged.end(), [](const Pair& a, const Pair& b) { return a.value < b.value; });

    out.eigenvalues.resize(n);
    for (int k = 0; k < n; ++k) out.eigenvalues[k] = merged[k].value;

    double trace_in = z_norm_sq, trace_out = 0.0, trace_scale = z_norm_sq;
    for (double v : d) {
        trace_in += v;
        trace_scale += std::fabs(v);
    }
    for (double v : out.eigenvalues) trace_out += v;
    trace_scale = std::max(1.0, trace_scale);
    if (std::fabs(trace_out - trace_in) > 1e-9 * trace_scale)
        throw NumericError("secular eigenvalues lost the trace: " + std::to_string(trace_out) + " vs " +
                           std::to_string(trace_in));

    if (!want_vectors) return out;

    // Gu–Eisenstat: recompute weights from the computed roots so the vector
    // set is orthogonal to machine precision.
    std::vector<double> zhat(r);
    for (int j = 0; j < r; ++j) {
        double log_sq = 0.0;
        for (int k = 0; k < r; ++k) {
            const double num = (act_d[roots[k].anchor] - act_d[j]) + roots[k].offset;
            log_sq += std::log(std::fabs(num));
            if (k != j) log_sq -= std::log(std::fabs(act_d[k] - act_d[j]));
        }
        zhat[j] = std::copysign(std::exp(0.5 * log_sq), w[act[j]]);
    }

    out.eigenvectors = Matrix(n, n);
    std::vector<double> col(n);
    for (int slot = 0; slot < n; ++slot) {
        std::fill(col.begin(), col.end(), 0.0);
        const Pair& pr = merged[slot];
        if (pr.kind == 1) {
            col[pr.index] = 1.0;
        } else {
            const Root& root = roots[pr.index];
            double norm_sq = 0.0;
            for (int j = 0; j < r; ++j) {
                const double den = (act_d[j] - act_d[root.anchor]) - root.offset;
                const double v = zhat[j] / den;
                col[act[j]] = v;
                norm_sq += v * v;
            }
            const double inv = 1.0 / std::sqrt(norm_sq);
            for (int j = 0; j < r; ++j) col[act[j]] *= inv;
        }
        // Undo the deflation rotations (reverse order, transposed action).
        for (auto it = rotations.rbegin(); it != rotations.rend(); ++it) {
            const double a = col[it->from], b = col[it->to];
            col[it->from] = it->c * a + it->s * b;
            col[it->to] = -it->s * a + it->c * b;
        }
        for (int j = 0; j < n; ++j) out.eigenvectors(perm[j], slot) = col[j];
    }
    return out;
}

std::vector<double> cauchy_apply(std::span<const double> t_nodes, std::span<const double> s_nodes,
                                 std::span<const double> x) {
    if (s_nodes.size() != x.size()) throw InputError("cauchy_apply: x length must match s node count");
    for (std::size_t i = 0; i < t_nodes.size(); ++i)
        for (std::size_t j = 0; j < s_nodes.size(); ++j)
            if (t_nodes[i] == s_nodes[j])
                throw InputError("cauchy_apply: node collision t[" + std::to_string(i) + "] == s[" + std::to_string(j) +
                                 "]");
    std::vector<double> y(t_nodes.size(), 0.0);
    for (std::size_t i = 0; i < t_nodes.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < s_nodes.size(); ++j) acc += x[j] / (t_nodes[i] - s_nodes[j]);
        y[i] = acc;
    }
    return y;
}

std::vector<double> cauchy_apply(std::span<const double> t_nodes, std::span<const double> s_nodes,
                                 std::span<const double> x, double /*error_budget*/) {
    // Exact backend; the budget parameter exists for a fast multipole drop-in.
    return cauchy_apply(t_nodes, s_nodes, x);
}

namespace {

double certified_residual(const RowFamily& family, const std::vector<int>& picks, long t) {
    SymMatrix acc(family.n);
    for (int k : picks) acc.add_outer(family.rows.row(k), 1.0 / (double(t) * family.p[k]));
    acc -= SymMatrix::identity(family.n);
    return operator_norm(acc);
}

}  // namespace

SparseIsotropicResult isotropic_select(const RowFamily& family, double theta, long t) {
    const int m = family.m, n = family.n;
    if (t < 1) throw InputError("isotropic_select needs t >= 1");
    if (theta <= 0.0) throw InputError("isotropic_select needs theta > 0");

    // Rescaled rows ẑ_k = sqrt(theta/p_k) · row_k, kept in the rotating basis.
    Matrix z(m, n);
    for (int k = 0; k < m; ++k) {
        const double s = std::sqrt(theta / family.p[k]);
        for (int j = 0; j < n; ++j) z(k, j) = s * family.rows(k, j);
    }

    std::vector<double> lambda(n, 0.0);
    Matrix basis = Matrix::identity(n);
    SymMatrix audit_sum(n);  // running Σ ẑ⊗ẑ in the original coordinates

    SparseIsotropicResult result;
    result.t = t;
    result.potential_log.push_back(std::log(2.0 * n));

    std::vector<int> picks;
    for (long i = 1; i <= t; ++i) {
        const double shift = theta * double(i);
        std::vector<double> pot(m);
        parallel_for(m, [&](int k) {
            DiagonalPlusRankOne cand{lambda, std::vector<double>(z.row(k).begin(), z.row(k).end())};
            const SecularEigs eigs = secular_eigs(cand, false);
            std::vector<double> shifted(eigs.eigenvalues);
            for (double& v : shifted) v -= shift;
            pot[k] = log_two_trace_cosh(shifted);
        });
        const int best = argmin_with_ties(pot, 1e-11);
        picks.push_back(best);
        result.potential_log.push_back(pot[best]);

        DiagonalPlusRankOne chosen{lambda, std::vector<double>(z.row(best).begin(), z.row(best).end())};
        const SecularEigs eigs = secular_eigs(chosen, true);
        lambda = eigs.eigenvalues;
        z = z * eigs.eigenvectors;
        basis = basis * eigs.eigenvectors;

        if (n <= 64) {
            audit_sum.add_outer(
                std::vector<double>(family.rows.row(best).begin(), family.rows.row(best).end()),
                theta / family.p[best]);
            if (i % 10 == 0) {
                // Q Λ Qᵀ must still reconstruct the running sum.
                Matrix recon(n, n);
                for (int c = 0; c < n; ++c)
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b) recon(a, b) += basis(a, c) * lambda[c] * basis(b, c);
                recon -= audit_sum.to_matrix();
                if (recon.max_abs() > 1e-7)
                    throw NumericError("rotating-basis bookkeeping drifted by " + std::to_string(recon.max_abs()) +
                                       " at step " + std::to_string(i));
            }
        }
    }

    result.residual = certified_residual(family, picks, t);
    result.indices.reserve(picks.size());
    result.scalars.reserve(picks.size());
    for (int k : picks) {
        result.indices.push_back(family.source_index[k]);
        result.scalars.push_back(1.0 / (double(t) * family.p[k]));
    }
    return result;
}

SparseIsotropicResult isotropic_sparsify(const RowFamily& family, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0,1)");
    const int n = family.n;
    const double theta = epsilon / (2.0 * n);  // ε_alg = ε/2 with γ = n
    const long t0 = std::max<long>(1, long(std::ceil(4.0 * n * std::log(2.0 * n) / (epsilon * epsilon))));

    double last_residual = 0.0;
    for (int attempt = 0; attempt < 4; ++attempt) {
        const long t = t0 << attempt;
        SparseIsotropicResult result = isotropic_select(family, theta, t);
        result.c_factor = 8 << attempt;
        if (result.residual <= epsilon) return result;
        last_residual = result.residual;
    }
    throw CertificationError("isotropic sparsification failed certification: residual " +
                                 std::to_string(last_residual) + " > epsilon after 3 doublings",
                             last_residual, epsilon);
}

SampleFamily isotropic_sample_family(const RowFamily& family) {
    SampleFamily f;
    f.m = family.m;
    f.n = family.n;
    f.steps = 0;
    f.gamma = double(family.n);
    f.rho_sq = double(family.n);
    f.weights = family.p;
    const Matrix rows = family.rows;   // value copy: the family must outlive callers
    const std::vector<double> p = family.p;
    const int n = family.n;
    f.evaluate = [rows, p, n](long, int k) {
        SymMatrix out(n);
        out.add_outer(rows.row(k), 1.0 / p[k]);
        out -= SymMatrix::identity(n);
        return out;
    };
    return f;
}

bool equivalence_audit(const RowFamily& family, double epsilon, long t_small) {
    const double cost = double(family.m) * std::pow(double(family.n), 3) * double(t_small);
    if (cost > 1e9) throw InputError("equivalence_audit cost guard exceeded");
    const double eps_alg = epsilon / 2.0;
    const SelectionResult generic = select_indices(isotropic_sample_family(family), eps_alg, t_small);
    const SparseIsotropicResult fast = isotropic_select(family, eps_alg / double(family.n), t_small);
    if (generic.indices.size() != fast.indices.size()) return false;
    for (std::size_t i = 0; i < generic.indices.size(); ++i)
        if (family.source_index[generic.indices[i]] != fast.indices[i]) return false;
    return true;
}

}  // namespace hypercosh
