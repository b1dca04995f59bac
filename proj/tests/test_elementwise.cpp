#include "hypercosh/elementwise.hpp"

#include <cmath>

#include "hypercosh/spectral.hpp"
#include "test_support.hpp"

using namespace hypercosh;

TEST_CASE("theta_of closed cases") {
    CHECK(theta_of(SymMatrix::identity(4)) == doctest::Approx(1.0).epsilon(1e-12));
    const SymMatrix k2(2, {1.0, -1.0, -1.0, 1.0});
    CHECK(theta_of(k2) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(theta_of(SymMatrix(3)), InputError);

    Rng rng(163);
    for (int trial = 0; trial < 10; ++trial) {
        const SymMatrix dd = ts::random_diag_dominant(rng, 12);
        const double theta = theta_of(dd);
        CHECK(theta <= 4.0 + 1e-9);
        CHECK(theta <= 12.0 + 1e-9);
    }
}

TEST_CASE("stable rank agrees between entry sums and eigenvalue sums") {
    Rng rng(167);
    const SymMatrix a = random_symmetric(rng, 10);
    const double via_entries = stable_rank(a);
    const std::vector<double> eigs = sym_eigvalues(a);
    double sum_sq = 0.0, top = 0.0;
    for (double v : eigs) {
        sum_sq += v * v;
        top = std::max(top, std::fabs(v));
    }
    CHECK(via_entries == doctest::Approx(sum_sq / (top * top)).epsilon(1e-10));
}

TEST_CASE("zero_small_entries thresholds at eps/(2n)") {
    const int n = 4;
    const double eps = 0.4;
    SymMatrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) a.set(i, j, eps / (2.0 * n) * 1.5);
    CHECK(ts::max_entry_diff(zero_small_entries(a, eps), a) == 0.0);

    SymMatrix small(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) small.set(i, j, eps / (4.0 * n));
    const SymMatrix zeroed = zero_small_entries(small, eps);
    CHECK(zeroed.max_abs() == 0.0);
    CHECK(operator_norm(small) <= eps / 2.0);  // the dropped mass is affordable

    SymMatrix mixed(n);
    mixed.set(0, 0, 1.0);
    mixed.set(1, 2, eps / (8.0 * n));
    const SymMatrix mz = zero_small_entries(mixed, eps);
    CHECK(mz(0, 0) == 1.0);
    CHECK(mz(1, 2) == 0.0);
}

TEST_CASE("sparsify_generic on a rank-one basis matrix is exact") {
    std::vector<double> e1 = {1.0, 0.0, 0.0};
    const SymMatrix a = SymMatrix::outer(e1);
    const GenericSparsifyResult r = sparsify_generic(a, 0.5);
    CHECK(r.sparsified.nnz() == 1);
    CHECK(std::get<0>(r.sparsified.entries[0]) == 0);
    CHECK(std::get<1>(r.sparsified.entries[0]) == 0);
    CHECK(std::get<2>(r.sparsified.entries[0]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.normalized_error < 1e-12);
}

TEST_CASE("sparsify_generic on the identity keeps the diagonal accurate") {
    const SymMatrix a = SymMatrix::identity(2);
    const GenericSparsifyResult r = sparsify_generic(a, 0.5);
    CHECK(r.normalized_error <= 0.5);
    for (const auto& [i, j, v] : r.sparsified.entries) CHECK(i == j);
}

TEST_CASE("sparsify_generic respects budget and certified error on a random 8x8") {
    Rng rng(173);
    const SymMatrix a = random_symmetric(rng, 8);
    const double eps = 0.6;
    const GenericSparsifyResult r = sparsify_generic(a, eps);
    CHECK(r.normalized_error <= eps);
    CHECK(r.sparsified.nnz() <= r.budget);
    CHECK(r.budget == long(std::floor(28.0 * 8 * std::log(std::sqrt(16.0)) * r.stable_rank / (eps * eps))));
    // Potential growth stayed within its per-step cap.
    for (std::size_t i = 1; i < r.potential_log.size(); ++i)
        CHECK(r.potential_log[i] <= r.potential_log[i - 1] + r.epsilon_alg * r.epsilon_alg + 1e-9);
    CHECK(r.potential_log.front() == doctest::Approx(std::log(4.0 * 8)));
    CHECK_THROWS_AS(sparsify_generic(SymMatrix(3), eps), InputError);
}

TEST_CASE("generic sample family bounds: mean zero, norm and variance caps") {
    Rng rng(179);
    const int n = 6;
    SymMatrix a = random_symmetric(rng, n);
    a *= 1.0 / operator_norm(a);
    const double eps = 0.5;
    const SymMatrix zeroed = zero_small_entries(a, eps);
    double fro_sq = 0.0;
    int nnz = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (zeroed(i, j) != 0.0) {
                fro_sq += zeroed(i, j) * zeroed(i, j);
                ++nnz;
            }
    const double sr = stable_rank(a);
    SymMatrix mean(2 * n);
    double max_norm = 0.0;
    SymMatrix second(2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (zeroed(i, j) == 0.0) continue;
            const double p = zeroed(i, j) * zeroed(i, j) / fro_sq;
            Matrix y(n, n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) y(r, c) = -zeroed(r, c);
            y(i, j) += zeroed(i, j) / p;
            const SymMatrix h = dilation(y);
            max_norm = std::max(max_norm, operator_norm(h));
            SymMatrix weighted = h;
            weighted *= p;
            mean += weighted;
            const Matrix sq = h.to_matrix() * h.to_matrix();
            for (int r = 0; r < 2 * n; ++r)
                for (int c = r; c < 2 * n; ++c) second.add(r, c, p * sq(r, c));
        }
    CHECK(mean.max_abs() < 1e-10);
    CHECK(max_norm <= 4.0 * n * sr / eps * (1.0 + 1e-9));
    CHECK(operator_norm(second) <= n * sr * (1.0 + 1e-9));
}

TEST_CASE("sdd_decompose closed cases and exact reconstruction") {
    const SymMatrix a(2, {2.0, -1.0, -1.0, 2.0});
    const SddDecomposition d = sdd_decompose(a);
    REQUIRE(d.pairs.size() == 1);
    CHECK(std::get<0>(d.pairs[0]) == 0);
    CHECK(std::get<1>(d.pairs[0]) == 1);
    CHECK(std::get<2>(d.pairs[0]) == -1.0);
    CHECK(d.diag == std::vector<double>{2.0, 2.0});
    CHECK(d.row_abs == std::vector<double>{1.0, 1.0});
    CHECK(ts::max_entry_diff(sdd_reconstruct(d), a) == 0.0);

    const SymMatrix diag = SymMatrix::diagonal({3.0, -2.0, 0.5});
    const SddDecomposition dd = sdd_decompose(diag);
    CHECK(dd.pairs.empty());
    CHECK(ts::max_entry_diff(sdd_reconstruct(dd), diag) == 0.0);

    // K3 Laplacian: the vertex-edge case where diag(A) = R.
    SymMatrix k3(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) k3.set(i, j, i == j ? 2.0 : -1.0);
    const SddDecomposition dk = sdd_decompose(k3);
    CHECK(dk.diag == dk.row_abs);
    CHECK(ts::max_entry_diff(sdd_reconstruct(dk), k3) == 0.0);
}

TEST_CASE("decomposition reconstruction is exact on 100 random integer matrices") {
    Rng rng(181);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + rng.uniform_int(0, 30);
        SymMatrix a(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) a.set(i, j, double(rng.uniform_int(-9, 9)));
        const SymMatrix recon = sdd_reconstruct(sdd_decompose(a));
        CHECK(ts::max_entry_diff(recon, a) == 0.0);
    }
}

TEST_CASE("sdd randomized: diagonal matrices reproduce exactly for any seed") {
    const SymMatrix diag = SymMatrix::diagonal({2.0, -1.0, 0.25});
    for (std::uint64_t seed : {1ull, 7ull, 99ull}) {
        const SddRandomizedResult r = sdd_sparsify_randomized(diag, 2.0, 0.5, seed, true);
        CHECK(r.sparsified.error_bound.value() < 1e-12);
        CHECK(r.sparsified.nnz() == 3);
    }
}

TEST_CASE("sdd randomized: K2 Laplacian reconstructs exactly (single column)") {
    const SymMatrix k2(2, {1.0, -1.0, -1.0, 1.0});
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const SddRandomizedResult r = sdd_sparsify_randomized(k2, 2.0, 0.9, seed, true);
        if (r.sparsified.error_bound.value() <= 0.9 * 2.0) ++hits;
    }
    CHECK(hits == 50);  // p = 1 makes every seed exact
}

TEST_CASE("sdd randomized hits the epsilon guarantee on most seeds") {
    Rng rng(191);
    const SymMatrix a = ts::random_diag_dominant(rng, 32);
    const double norm = operator_norm(a);
    const double eps = 0.5;
    int hits = 0;
    long worst_nnz = 0;
    double theta = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const SddRandomizedResult r = sdd_sparsify_randomized(a, norm, eps, seed, true);
        theta = r.theta;
        worst_nnz = std::max(worst_nnz, r.sparsified.nnz());
        if (r.sparsified.error_bound.value() <= eps * norm) ++hits;
        CHECK(r.sparsified.pattern_symmetric());
    }
    CHECK(hits >= 18);
    CHECK(worst_nnz <= 32 + 2 * long(std::ceil(38.0 * 32 * theta * std::log(std::sqrt(2.0) * 32) / (eps * eps))));
}

TEST_CASE("sdd randomized is deterministic per seed") {
    Rng rng(193);
    const SymMatrix a = ts::random_diag_dominant(rng, 16);
    const SddRandomizedResult r1 = sdd_sparsify_randomized(a, operator_norm(a), 0.5, 42, false);
    const SddRandomizedResult r2 = sdd_sparsify_randomized(a, operator_norm(a), 0.5, 42, false);
    CHECK(r1.sparsified.entries == r2.sparsified.entries);
}

TEST_CASE("sdd deterministic: diagonal and K3 closed cases") {
    const SymMatrix diag = SymMatrix::diagonal({3.0, 1.0, -0.5});
    const SddDeterministicResult r = sdd_sparsify_deterministic(diag, 0.4);
    CHECK(r.sparsified.error_bound.value() < 1e-12);
    CHECK(r.sparsified.nnz() == 3);

    SymMatrix k3(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) k3.set(i, j, i == j ? 2.0 : -1.0);
    const SddDeterministicResult rk = sdd_sparsify_deterministic(k3, 0.45);
    CHECK(rk.sparsified.error_bound.value() <= 0.45 * 3.0);
    CHECK(rk.sparsified.nnz() <= 3 + 2 * rk.support_budget);
    CHECK_THROWS_AS(sdd_sparsify_deterministic(k3, 0.6), InputError);  // theorem needs eps < 1/2
}

TEST_CASE("sdd deterministic certifies a random diagonally dominant matrix") {
    Rng rng(197);
    const SymMatrix a = ts::random_diag_dominant(rng, 24);
    const double eps = 0.4;
    const SddDeterministicResult r = sdd_sparsify_deterministic(a, eps);
    CHECK(r.theta <= 4.0 + 1e-9);
    CHECK(r.epsilon_inner == doctest::Approx(eps / (10.0 * std::sqrt(r.theta))));
    CHECK(r.sparsified.error_bound.value() <= eps * operator_norm(a));
    CHECK(r.sparsified.nnz() <= 24 + 2 * r.support_budget);
    CHECK(r.sparsified.pattern_symmetric());

    // Off-diagonal entries keep their signs (columns scale positively).
    const Matrix dense = r.sparsified.to_dense();
    for (int i = 0; i < 24; ++i)
        for (int j = 0; j < 24; ++j)
            if (i != j && dense(i, j) != 0.0) CHECK(dense(i, j) * a(i, j) > 0.0);
}

TEST_CASE("sdd deterministic genuinely reweights when the budget binds") {
    // Budget ⌈n/ε′²⌉ < number of columns requires a dense enough matrix; the
    // internal spectral stage is exercised directly instead, via a weighted
    // complete graph pushed through the same assembly.
    Rng rng(199);
    const int n = 10;
    SymMatrix a(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) a.set(i, j, -(0.5 + rng.uniform()));
    }
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i) row += std::fabs(a(i, j));
        a.set(i, i, row);
    }
    // a is a weighted Laplacian: decompose and reweight its CCᵀ at a large
    // eps to force support below the column count.
    const SddDecomposition d = sdd_decompose(a);
    REQUIRE(long(d.pairs.size()) == n * (n - 1) / 2);
    Matrix columns(int(d.pairs.size()), n);
    for (std::size_t l = 0; l < d.pairs.size(); ++l) {
        const auto& [i, j, v] = d.pairs[l];
        const double root = std::sqrt(std::fabs(v));
        columns(int(l), i) = root;
        columns(int(l), j) = v >= 0.0 ? root : -root;
    }
    const OuterProductSum ops = OuterProductSum::from_vectors(columns);
    const double eps_inner = 0.55;
    const SpectralResult spectral = spectral_sparsify(ops, eps_inner);
    CHECK(spectral.weights.support_size < int(d.pairs.size()));
    CHECK(spectral.weights.support_size <= long(std::ceil(spectral.n_effective / (eps_inner * eps_inner))));
}
