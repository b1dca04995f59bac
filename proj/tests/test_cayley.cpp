#include "hypercosh/cayley.hpp"

#include <cmath>
#include <sstream>

#include "test_support.hpp"

using namespace hypercosh;

namespace {

// θ Σ f over a symmetric multiset, assembled from integer walk counts so the
// result is exactly symmetric: entry (a,b) = θ(cnt(a,b)/2 − |S|/(2n)).
SymMatrix f_sum(const GroupTable& t, const std::vector<int>& closure, double theta) {
    const int n = t.n;
    std::vector<long> cnt(std::size_t(n) * n, 0);
    for (int g : closure)
        for (int a = 0; a < n; ++a) ++cnt[std::size_t(a) * n + t.mul(a, g)];
    SymMatrix sum(n);
    const double shift = double(closure.size()) / (2.0 * n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) sum.set(a, b, theta * (0.5 * double(cnt[std::size_t(a) * n + b]) - shift));
    return sum;
}

}  // namespace


TEST_CASE("parse_group_table reads Z_3 and discovers identity and inverses") {
    std::istringstream in("3\n1 2 3\n2 3 1\n3 1 2\n");
    const GroupTable t = parse_group_table(in);
    CHECK(t.n == 3);
    CHECK(t.identity == 0);
    CHECK(t.inverse == std::vector<int>{0, 2, 1});
}

TEST_CASE("parse_group_table rejects a repeated row entry") {
    std::istringstream in("3\n1 2 2\n2 3 1\n3 1 2\n");
    CHECK_THROWS_WITH_AS(parse_group_table(in), doctest::Contains("repeats"), InputError);
}

TEST_CASE("generated S_4 table is a valid group of order 24") {
    const GroupTable t = symmetric_group(4);
    CHECK(t.n == 24);
    // Identity row/column behave, inverses close.
    for (int g = 0; g < t.n; ++g) {
        CHECK(t.mul(t.identity, g) == g);
        CHECK(t.mul(g, t.inverse[g]) == t.identity);
    }
}

TEST_CASE("cyclic group of order 2") {
    const GroupTable t = cyclic_group(2);
    CHECK(t.product == std::vector<int>{0, 1, 1, 0});
}

TEST_CASE("dihedral 3 is non-abelian; symmetric 3 has the same Cayley spectrum") {
    const GroupTable d3 = dihedral_group(3);
    CHECK(d3.n == 6);
    bool noncommutative = false;
    for (int g = 0; g < 6 && !noncommutative; ++g)
        for (int h = 0; h < 6 && !noncommutative; ++h) noncommutative = d3.mul(g, h) != d3.mul(h, g);
    CHECK(noncommutative);

    const GroupTable s3 = symmetric_group(3);
    CHECK(s3.n == 6);
    // The full-generator Cayley graphs of isomorphic groups are isospectral.
    GeneratorMultiset all_d3, all_s3;
    for (int g = 0; g < 6; ++g) {
        all_d3.elements.push_back(g);
        all_s3.elements.push_back(g);
    }
    CHECK(lambda_of_cayley(d3, all_d3) == doctest::Approx(lambda_of_cayley(s3, all_s3)).epsilon(1e-10));
}

TEST_CASE("convolution basics in Z_3") {
    const GroupTable t = cyclic_group(3);
    const GroupAlgebraElement b{{0.3, -1.2, 2.0}};
    const GroupAlgebraElement id = delta(t.identity, 3);
    CHECK(convolve(id, b, t).coeffs == b.coeffs);
    // Element 2 (1-based) squared is element 3 under cyclic labels.
    const GroupAlgebraElement sq = convolve(delta(1, 3), delta(1, 3), t);
    CHECK(sq.coeffs == std::vector<double>{0.0, 0.0, 1.0});
}

TEST_CASE("convolution matches the regular representation product in S_3") {
    const GroupTable t = symmetric_group(3);
    Rng rng(101);
    GroupAlgebraElement a{random_vector(rng, 6)}, b{random_vector(rng, 6)};
    // R(a⋆b) must equal R(a)·R(b).
    auto rep = [&](const GroupAlgebraElement& x) {
        Matrix m(6, 6);
        for (int g = 0; g < 6; ++g) {
            const Matrix r = right_regular(g, t);
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j) m(i, j) += x.coeffs[g] * r(i, j);
        }
        return m;
    };
    const Matrix lhs = rep(convolve(a, b, t));
    const Matrix rhs = rep(a) * rep(b);
    CHECK(ts::max_entry_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("right regular representation is a homomorphism") {
    CHECK(ts::max_entry_diff(right_regular(0, cyclic_group(4)), Matrix::identity(4)) == 0.0);

    const GroupTable z2 = cyclic_group(2);
    const Matrix flip = right_regular(1, z2);
    CHECK(flip(0, 1) == 1.0);
    CHECK(flip(1, 0) == 1.0);
    CHECK(flip(0, 0) == 0.0);

    const GroupTable d4 = dihedral_group(4);
    Rng rng(103);
    for (int trial = 0; trial < 10; ++trial) {
        const int g = rng.uniform_int(0, 7), h = rng.uniform_int(0, 7);
        const Matrix prod = right_regular(g, d4) * right_regular(h, d4);
        CHECK(ts::max_entry_diff(prod, right_regular(d4.mul(g, h), d4)) == 0.0);
    }
}

TEST_CASE("estrada_even closed forms") {
    const GroupTable z2 = cyclic_group(2);
    // S = {g, g} for the self-inverse generator: A = 2·[[0,1],[1,0]].
    GeneratorMultiset s{{1, 1}};
    const double theta = 0.37;
    CHECK(estrada_even(s, theta, 1e-12, z2) == doctest::Approx(2.0 * std::cosh(2.0 * theta)).epsilon(1e-10));

    // theta → 0 leaves only the k = 0 term, which counts the group order.
    const GroupTable z5 = cyclic_group(5);
    GeneratorMultiset tiny{{1, 4}};
    CHECK(estrada_even(tiny, 1e-9, 1e-10, z5) == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("estrada_even matches the dense trace-cosh oracle on Z_8") {
    const GroupTable z8 = cyclic_group(8);
    GeneratorMultiset s{{1, 7, 2, 6}};  // symmetric closure of {1, 2} (0-based)
    const double theta = 0.3;
    // Dense oracle: trace cosh(theta A) for the adjacency A = Σ R(s).
    Matrix adj(8, 8);
    for (int g : s.elements) {
        const Matrix r = right_regular(g, z8);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) adj(i, j) += theta * r(i, j);
    }
    const double dense = trace_cosh(SymMatrix::from_matrix(adj));
    CHECK(estrada_even(s, theta, 1e-6, z8) == doctest::Approx(dense).epsilon(1e-6));
}

TEST_CASE("truncation honesty: extending the series moves the value less than delta") {
    const GroupTable z8 = cyclic_group(8);
    GeneratorMultiset s{{1, 7, 3, 5}};
    const double theta = 0.4, delta = 1e-8;
    const double base = estrada_even(s, theta, delta, z8);
    // Same evaluation with a strictly deeper truncation.
    const double deeper = estrada_even(s, theta, delta * std::pow(2.0, -5), z8);
    CHECK(std::fabs(base - deeper) < delta);
}

TEST_CASE("trace of the regular representation is n times the identity coefficient") {
    const GroupTable t = dihedral_group(3);
    Rng rng(105);
    const GroupAlgebraElement x{random_vector(rng, 6)};
    Matrix rep(6, 6);
    for (int g = 0; g < 6; ++g) {
        const Matrix r = right_regular(g, t);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) rep(i, j) += x.coeffs[g] * r(i, j);
    }
    double trace = 0.0;
    for (int i = 0; i < 6; ++i) trace += rep(i, i);
    CHECK(trace == 6.0 * x.coeffs[t.identity]);
}

TEST_CASE("Estrada/potential identity on random multisets at theta 0.1 and 0.5") {
    const GroupTable z8 = cyclic_group(8);
    Rng rng(111);
    for (double theta : {0.1, 0.5}) {
        GeneratorMultiset s;
        for (int pick = 0; pick < 3; ++pick) {
            const int g = 1 + rng.uniform_int(0, 6);  // skip the identity
            s.elements.push_back(g);
            s.elements.push_back(z8.inverse[g]);
        }
        // Σ over the closed multiset of (R(s)/2 − J/(2n)) equals Σ_{base} f.
        const double dense = trace_cosh(f_sum(z8, s.elements, theta));
        const double base_count = double(s.elements.size()) / 2.0;
        const double via =
            estrada_even(s, theta / 2.0, 1e-10, z8) + 1.0 - std::cosh(theta * base_count);
        CHECK(std::fabs(dense - via) < 1e-8);
    }
}

TEST_CASE("lambda_of_cayley closed cases") {
    const GroupTable z3 = cyclic_group(3);
    GeneratorMultiset tri{{1, 2}};
    CHECK(lambda_of_cayley(z3, tri) == doctest::Approx(0.5).epsilon(1e-10));

    // Every group element: normalized adjacency J/n, lambda = 0.
    const GroupTable z4 = cyclic_group(4);
    GeneratorMultiset all{{0, 1, 2, 3}};
    CHECK(lambda_of_cayley(z4, all) == doctest::Approx(0.0).epsilon(1e-10));

    // Self-inverse generator only: disconnected matching, lambda = 1.
    GeneratorMultiset matching{{2, 2}};
    CHECK(lambda_of_cayley(z4, matching) == doctest::Approx(1.0).epsilon(1e-10));

    GeneratorMultiset asymmetric{{1}};
    CHECK_THROWS_AS(lambda_of_cayley(z4, asymmetric), InputError);
}

TEST_CASE("build_expander on Z_2 cannot beat lambda=1 and reports failure") {
    CHECK_THROWS_AS(build_expander(cyclic_group(2), 0.999), CertificationError);
}

TEST_CASE("build_expander certifies a sub-epsilon expander on Z_16") {
    const GroupTable z16 = cyclic_group(16);
    const ExpanderResult r = build_expander(z16, 0.6);
    CHECK(r.lambda <= 0.6);
    CHECK(long(r.s.elements.size()) == 2 * r.t);
    CHECK(is_symmetric_multiset(r.s, z16));
    // λ re-certifies from the returned multiset.
    CHECK(lambda_of_cayley(z16, r.s) == doctest::Approx(r.lambda));
    // ... and stays below the selector guarantee with gamma = rho^2 = 2.
    const double eps_alg = 0.6 / 2.0;
    const double bound = 2.0 * std::log(32.0) / (double(r.t) * eps_alg) + eps_alg;
    CHECK(r.lambda <= bound + 1e-8);
}

TEST_CASE("expander greedy potential identity holds on every step of a Z_8 run") {
    const GroupTable z8 = cyclic_group(8);
    const ExpanderResult r = build_expander(z8, 0.5);
    CHECK(r.lambda <= 0.5);

    // Replay: trace cosh(θ Σ f(s)) = EE_even(A, θ/2) + 1 − cosh(θ|base|)
    // with f(g) = (R(g)+R(g⁻¹))/2 − J/n, |base| = step count so far.
    std::vector<int> closure;
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
        closure.push_back(r.steps[i].chosen);
        closure.push_back(z8.inverse[r.steps[i].chosen]);
        const double dense = trace_cosh(f_sum(z8, closure, r.theta));
        const GeneratorMultiset base{closure};
        const double estrada = estrada_even(base, r.theta / 2.0, 1e-10, z8);
        const double via_estrada = estrada + 1.0 - std::cosh(r.theta * double(i + 1));
        CHECK(std::fabs(dense - via_estrada) < 1e-8);
    }
}

TEST_CASE("cayley sample family satisfies the paper bounds for Z_8") {
    const GroupTable t = cyclic_group(8);
    // f(g) = (R(g)+R(g⁻¹))/2 − J/n has mean zero, ‖f‖ ≤ 2, ‖E f²‖ ≤ 2.
    SymMatrix mean(8), second(8);
    double max_norm = 0.0;
    for (int g = 0; g < 8; ++g) {
        const Matrix rg = right_regular(g, t), rginv = right_regular(t.inverse[g], t);
        Matrix f(8, 8);
        for (int a = 0; a < 8; ++a)
            for (int b = 0; b < 8; ++b) f(a, b) = 0.5 * (rg(a, b) + rginv(a, b)) - 0.125;
        const SymMatrix fs = SymMatrix::from_matrix(f);
        max_norm = std::max(max_norm, operator_norm(fs));
        SymMatrix scaled = fs;
        scaled *= 0.125;
        mean += scaled;
        const Matrix sq = f * f;
        for (int a = 0; a < 8; ++a)
            for (int b = a; b < 8; ++b) second.add(a, b, 0.125 * sq(a, b));
    }
    CHECK(mean.max_abs() < 1e-12);
    CHECK(max_norm <= 2.0 + 1e-12);
    CHECK(operator_norm(second) <= 2.0 + 1e-12);
}

TEST_CASE("group generator and table guards") {
    CHECK_THROWS_AS(symmetric_group(8), InputError);   // 40320 > 1e4
    CHECK_THROWS_AS(build_expander(cyclic_group(1), 0.5), InputError);
    // Latin square without a two-sided identity.
    CHECK_THROWS_WITH_AS(make_group_table(3, {0, 1, 2, 2, 0, 1, 1, 2, 0}), doctest::Contains("identity"), InputError);
}
