#include "hypercosh/hypercosine.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "hypercosh/parallel.hpp"

namespace hypercosh {

namespace {

void check_family(const SampleFamily& family) {
    if (family.m < 1 || family.n < 1) throw InputError("sample family needs m >= 1 and n >= 1");
    if (family.gamma <= 0.0 || family.rho_sq <= 0.0) throw InputError("sample family needs gamma > 0 and rho_sq > 0");
    if (int(family.weights.size()) != family.m) throw InputError("sample family weight vector has wrong length");
    if (!family.evaluate) throw InputError("sample family has no oracle");
}

}  // namespace

int argmin_with_ties(std::span<const double> scores, double tol) {
    int raw = 0;
    for (int k = 1; k < int(scores.size()); ++k)
        if (scores[k] < scores[raw]) raw = k;
    for (int k = 0; k < raw; ++k)
        if (scores[k] <= scores[raw] + tol) return k;
    return raw;
}

SelectionResult select_indices(const SampleFamily& family, double epsilon, long t) {
    check_family(family);
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0,1)");
    if (t < 1) throw InputError("t must be >= 1");
    if (family.steps > 0 && t > family.steps)
        throw InputError("family provides only " + std::to_string(family.steps) + " steps, t=" + std::to_string(t) +
                         " requested");

    const int n = family.n;
    const double theta = epsilon / family.gamma;
    const double growth = epsilon * epsilon * family.rho_sq / (family.gamma * family.gamma);

    SelectionResult result;
    result.potential_log.reserve(t + 1);
    result.potential_log.push_back(std::log(2.0 * n));

    SymMatrix running(n);
    for (long i = 0; i < t; ++i) {
        std::vector<double> pot(family.m);
        parallel_for(family.m, [&](int k) {
            SymMatrix cand;
            try {
                cand = family.evaluate(i, k);
            } catch (const std::exception& e) {
                throw NumericError("sample oracle failed at step " + std::to_string(i + 1) + ", candidate " +
                                   std::to_string(k + 1) + ": " + e.what());
            }
            if (cand.size() != n) throw InputError("sample oracle returned wrong dimension");
            cand *= theta;
            cand += running;
            pot[k] = log_two_trace_cosh(sym_eigvalues(cand));
        });
        // log-domain scores: 1e-11 absolute = 1e-11 relative on the potential.
        const int best = argmin_with_ties(pot, 1e-11);

        if (pot[best] > result.potential_log.back() + growth + 1e-9)
            throw NumericError("potential grew faster than exp(eps^2 rho^2/gamma^2) at step " + std::to_string(i + 1) +
                               "; the family bounds are likely wrong");
        result.potential_log.push_back(pot[best]);
        result.indices.push_back(best);
        SymMatrix chosen = family.evaluate(i, best);
        chosen *= theta;
        running += chosen;
    }

    result.final_norm = operator_norm(running) / (theta * double(t));
    result.bound = family.gamma * std::log(2.0 * n) / (double(t) * epsilon) + epsilon * family.rho_sq / family.gamma;
    if (result.final_norm > result.bound + 1e-8) {
        std::ostringstream msg;
        msg << "selection norm " << result.final_norm << " exceeds the guaranteed bound " << result.bound;
        throw NumericError(msg.str());
    }
    return result;
}

BalanceResult balance_matrices(const std::vector<SymMatrix>& mats) {
    if (mats.empty()) throw InputError("balance_matrices needs at least one matrix");
    const int n = mats.front().size();
    for (std::size_t i = 0; i < mats.size(); ++i) {
        if (mats[i].size() != n) throw InputError("balance_matrices: matrix " + std::to_string(i + 1) + " has wrong dimension");
        const double norm = operator_norm(mats[i]);
        if (norm > 1.0 + 1e-9)
            throw InputError("balance_matrices: matrix " + std::to_string(i + 1) + " has norm " + std::to_string(norm) +
                             " > 1");
    }

    const long steps = long(mats.size());
    SampleFamily family;
    family.m = 2;
    family.n = n;
    family.steps = steps;
    family.gamma = 1.0;
    family.rho_sq = 1.0;
    family.weights = {0.5, 0.5};
    family.evaluate = [&mats](long step, int k) {
        SymMatrix f = mats[std::size_t(step)];
        if (k == 0) f *= -1.0;
        return f;
    };

    // ε = sqrt(ln(2n)/N) balances the two bound terms at 2·sqrt(N ln 2n)/N.
    const double eps = std::min(0.999, std::sqrt(std::log(2.0 * n) / double(steps)));
    const SelectionResult sel = select_indices(family, eps, steps);

    BalanceResult out;
    out.signs.reserve(mats.size());
    for (int k : sel.indices) out.signs.push_back(k == 0 ? -1 : 1);
    out.value = sel.final_norm * double(steps);
    out.bound = sel.bound * double(steps);
    return out;
}

std::vector<int> random_signs_baseline(const std::vector<SymMatrix>& mats, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<int> signs(mats.size());
    for (auto& s : signs) s = (rng() & 1u) ? 1 : -1;
    return signs;
}

FamilyReport verify_family(const SampleFamily& family) {
    check_family(family);
    const long steps = std::max<long>(1, family.steps);
    const double cost = double(steps) * family.m * double(family.n) * family.n;
    if (cost > 1e8)
        throw InputError("verify_family enumeration would cost " + std::to_string(cost) +
                         " > 1e8 entry visits (steps=" + std::to_string(steps) + ", m=" + std::to_string(family.m) +
                         ", n=" + std::to_string(family.n) + ")");

    FamilyReport report;
    for (long j = 0; j < steps; ++j) {
        SymMatrix mean(family.n);
        SymMatrix second(family.n);
        for (int k = 0; k < family.m; ++k) {
            const SymMatrix f = family.evaluate(j, k);
            report.max_candidate_norm = std::max(report.max_candidate_norm, operator_norm(f));
            const double w = family.weights[k];
            SymMatrix wf = f;
            wf *= w;
            mean += wf;
            // w·f², accumulated symmetrically.
            const Matrix fm = f.to_matrix();
            Matrix sq = fm * fm;
            for (int r = 0; r < family.n; ++r)
                for (int c = r; c < family.n; ++c) second.add(r, c, w * (r == c ? sq(r, c) : (sq(r, c) + sq(c, r)) / 2.0));
        }
        report.mean_residual = std::max(report.mean_residual, mean.max_abs());
        report.variance_norm = std::max(report.variance_norm, operator_norm(second));
    }
    report.within_bounds = report.max_candidate_norm <= family.gamma * (1.0 + 1e-9) &&
                           report.mean_residual <= 1e-8 &&
                           report.variance_norm <= family.rho_sq * (1.0 + 1e-9);
    return report;
}

StepPlan plan_steps(double gamma, double rho_sq, int n, double eps_total) {
    if (!(eps_total > 0.0)) throw InputError("plan_steps needs eps_total > 0");
    const double eps = std::min(eps_total * gamma / (2.0 * rho_sq), 0.999);
    const double room = eps_total - eps * rho_sq / gamma;
    if (room <= 0.0) throw InputError("plan_steps: eps_total below the variance floor eps*rho^2/gamma");
    const long t = long(std::ceil(gamma * std::log(2.0 * n) / (eps * room)));
    StepPlan plan;
    plan.epsilon = eps;
    plan.t = std::max<long>(1, t);
    std::ostringstream f;
    f << "epsilon = min(eps_total*gamma/(2 rho^2), 0.999) = " << eps << "; t = ceil(gamma ln(2n)/(epsilon*(eps_total - "
         "epsilon rho^2/gamma))) = "
      << plan.t;
    plan.formula = f.str();
    return plan;
}

}  // namespace hypercosh
