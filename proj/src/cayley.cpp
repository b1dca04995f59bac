#include "hypercosh/cayley.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <sstream>

#include "hypercosh/hypercosine.hpp"
#include "hypercosh/parallel.hpp"

namespace hypercosh {

namespace {

// Deterministic 64-bit mix for the sampled associativity triples.
std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

GroupTable make_group_table(int n, std::vector<int> product, bool full_associativity) {
    if (n < 1) throw InputError("group order must be >= 1");
    if (product.size() != std::size_t(n) * n) throw InputError("group table has wrong size");
    for (std::size_t i = 0; i < product.size(); ++i)
        if (product[i] < 0 || product[i] >= n)
            throw InputError("group table entry out of range at position " + std::to_string(i));

    GroupTable t;
    t.n = n;
    t.product = std::move(product);

    // Latin square: each row and column is a permutation.
    std::vector<char> seen(n);
    for (int g = 0; g < n; ++g) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int h = 0; h < n; ++h) {
            const int v = t.mul(g, h);
            if (seen[v]) throw InputError("group table row " + std::to_string(g + 1) + " repeats element " + std::to_string(v + 1));
            seen[v] = 1;
        }
    }
    for (int h = 0; h < n; ++h) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int g = 0; g < n; ++g) {
            const int v = t.mul(g, h);
            if (seen[v]) throw InputError("group table column " + std::to_string(h + 1) + " repeats element " + std::to_string(v + 1));
            seen[v] = 1;
        }
    }

    // Identity is discovered, not declared.
    int id = -1;
    for (int e = 0; e < n; ++e) {
        bool ok = true;
        for (int g = 0; g < n && ok; ++g) ok = t.mul(e, g) == g && t.mul(g, e) == g;
        if (ok) {
            id = e;
            break;
        }
    }
    if (id < 0) throw InputError("group table has no identity element");
    t.identity = id;

    t.inverse.assign(n, -1);
    for (int g = 0; g < n; ++g) {
        for (int h = 0; h < n; ++h) {
            if (t.mul(g, h) == id) {
                if (t.mul(h, g) != id) throw InputError("element " + std::to_string(g + 1) + " has only a one-sided inverse");
                t.inverse[g] = h;
                break;
            }
        }
        if (t.inverse[g] < 0) throw InputError("element " + std::to_string(g + 1) + " has no inverse");
    }

    if (full_associativity) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    if (t.mul(t.mul(a, b), c) != t.mul(a, t.mul(b, c)))
                        throw InputError("associativity fails on (" + std::to_string(a + 1) + "," + std::to_string(b + 1) +
                                         "," + std::to_string(c + 1) + ")");
    } else {
        std::uint64_t state = 0x5eedu ^ (std::uint64_t(n) << 20);
        for (int trial = 0; trial < 10 * n; ++trial) {
            const int a = int(splitmix64(state) % n);
            const int b = int(splitmix64(state) % n);
            const int c = int(splitmix64(state) % n);
            if (t.mul(t.mul(a, b), c) != t.mul(a, t.mul(b, c)))
                throw InputError("associativity fails on sampled triple (" + std::to_string(a + 1) + "," +
                                 std::to_string(b + 1) + "," + std::to_string(c + 1) + ")");
        }
    }
    return t;
}

GroupTable parse_group_table(std::istream& in) {
    int n = 0;
    if (!(in >> n) || n < 1) throw InputError("group table file must start with the group order");
    std::vector<int> product(std::size_t(n) * n);
    for (std::size_t i = 0; i < product.size(); ++i) {
        int v;
        if (!(in >> v)) throw InputError("group table file truncated at entry " + std::to_string(i));
        if (v < 1 || v > n) throw InputError("group table entry " + std::to_string(v) + " outside 1.." + std::to_string(n));
        product[i] = v - 1;
    }
    return make_group_table(n, std::move(product));
}

GroupTable cyclic_group(int n) {
    if (n < 1 || n > 10000) throw InputError("cyclic group order must be in 1..10000");
    std::vector<int> product(std::size_t(n) * n);
    for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h) product[std::size_t(g) * n + h] = (g + h) % n;
    return make_group_table(n, std::move(product));
}

GroupTable dihedral_group(int k) {
    if (k < 1 || 2 * k > 10000) throw InputError("dihedral group parameter out of range");
    const int n = 2 * k;
    // Element g = rotation r^a for g < k, reflection s·r^a for g >= k.
    auto enc = [&](int flip, int a) { return flip * k + ((a % k) + k) % k; };
    std::vector<int> product(std::size_t(n) * n);
    for (int g = 0; g < n; ++g) {
        const int fg = g / k, ag = g % k;
        for (int h = 0; h < n; ++h) {
            const int fh = h / k, ah = h % k;
            // (s^fg r^ag)(s^fh r^ah) = s^{fg+fh} r^{±ag+ah}
            const int a = fh == 0 ? ag + ah : -ag + ah;
            product[std::size_t(g) * n + h] = enc((fg + fh) % 2, a);
        }
    }
    return make_group_table(n, std::move(product));
}

GroupTable symmetric_group(int k) {
    if (k < 1) throw InputError("symmetric group parameter out of range");
    long order = 1;
    for (int i = 2; i <= k; ++i) {
        order *= i;
        if (order > 10000) throw InputError("symmetric group order exceeds the 1e4 guard");
    }
    // Enumerate permutations in lexicographic order; compose by table lookup.
    std::vector<std::vector<int>> perms;
    std::vector<int> p(k);
    std::iota(p.begin(), p.end(), 0);
    do {
        perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    const int n = int(perms.size());
    auto index_of = [&](const std::vector<int>& q) {
        return int(std::lower_bound(perms.begin(), perms.end(), q) - perms.begin());
    };
    std::vector<int> product(std::size_t(n) * n);
    std::vector<int> comp(k);
    for (int g = 0; g < n; ++g) {
        for (int h = 0; h < n; ++h) {
            for (int i = 0; i < k; ++i) comp[i] = perms[g][perms[h][i]];
            product[std::size_t(g) * n + h] = index_of(comp);
        }
    }
    return make_group_table(n, std::move(product));
}

GroupAlgebraElement delta(int g, int n) {
    GroupAlgebraElement e;
    e.coeffs.assign(n, 0.0);
    e.coeffs.at(g) = 1.0;
    return e;
}

GroupAlgebraElement convolve(const GroupAlgebraElement& a, const GroupAlgebraElement& b, const GroupTable& table) {
    const int n = table.n;
    if (int(a.coeffs.size()) != n || int(b.coeffs.size()) != n) throw InputError("convolve dimension mismatch");
    GroupAlgebraElement out;
    out.coeffs.assign(n, 0.0);
    for (int h = 0; h < n; ++h) {
        const double bh = b.coeffs[h];
        if (bh == 0.0) continue;
        for (int g = 0; g < n; ++g) {
            const double ag = a.coeffs[g];
            if (ag != 0.0) out.coeffs[table.mul(g, h)] += ag * bh;
        }
    }
    return out;
}

Matrix right_regular(int g, const GroupTable& table) {
    if (g < 0 || g >= table.n) throw InputError("right_regular element out of range");
    Matrix r(table.n, table.n);
    for (int x = 0; x < table.n; ++x) r(x, table.mul(x, g)) = 1.0;
    return r;
}

bool is_symmetric_multiset(const GeneratorMultiset& s, const GroupTable& table) {
    std::vector<long> count(table.n, 0);
    for (int g : s.elements) {
        if (g < 0 || g >= table.n) throw InputError("generator id out of range");
        ++count[g];
    }
    for (int g = 0; g < table.n; ++g)
        if (count[g] != count[table.inverse[g]]) return false;
    return true;
}

namespace {

struct SparseElement {
    std::vector<int> support;
    std::vector<double> coeff;
};

// Even-index part of n·[T_l(h)]_id for h = theta · Σ_{s∈S} s, the group
// algebra route to EE_even; cost O(n · supp · l).
double estrada_even_sparse(const SparseElement& h, long multiset_size, double theta, double delta, int n,
                           const GroupTable& table, int identity) {
    if (delta <= 0.0) throw InputError("estrada_even needs delta > 0");
    const double norm_bound = theta * double(multiset_size);
    const long l = long(std::ceil(std::max(std::log2(double(n) / delta), 2.0 * std::exp(2.0) * norm_bound)));
    const long terms = std::max<long>(2, l);

    std::vector<double> term(n, 0.0);
    term[identity] = 1.0;
    double acc = 1.0;  // k = 0
    std::vector<double> next(n);
    for (long k = 1; k <= terms; ++k) {
        std::fill(next.begin(), next.end(), 0.0);
        const double inv_k = 1.0 / double(k);
        for (std::size_t idx = 0; idx < h.support.size(); ++idx) {
            const int s = h.support[idx];
            const double c = h.coeff[idx] * inv_k;
            for (int g = 0; g < n; ++g) {
                const double tg = term[g];
                if (tg != 0.0) next[table.mul(g, s)] += tg * c;
            }
        }
        term.swap(next);
        if (k % 2 == 0) acc += term[identity];
    }
    return double(n) * acc;
}

SparseElement sparse_from_counts(const std::vector<long>& counts, double scale) {
    SparseElement h;
    for (int g = 0; g < int(counts.size()); ++g) {
        if (counts[g] != 0) {
            h.support.push_back(g);
            h.coeff.push_back(scale * double(counts[g]));
        }
    }
    return h;
}

}  // namespace

double estrada_even(const GeneratorMultiset& s, double theta, double delta, const GroupTable& table) {
    if (s.elements.empty()) throw InputError("estrada_even needs a nonempty multiset");
    if (theta <= 0.0) throw InputError("estrada_even needs theta > 0");
    std::vector<long> counts(table.n, 0);
    for (int g : s.elements) {
        if (g < 0 || g >= table.n) throw InputError("generator id out of range");
        ++counts[g];
    }
    const SparseElement h = sparse_from_counts(counts, theta);
    return estrada_even_sparse(h, long(s.elements.size()), theta, delta, table.n, table, table.identity);
}

double lambda_of_cayley(const GroupTable& table, const GeneratorMultiset& s) {
    if (s.elements.empty()) throw InputError("lambda_of_cayley needs a nonempty multiset");
    if (table.n < 2) throw InputError("lambda is undefined for the trivial group");
    if (!is_symmetric_multiset(s, table)) throw InputError("generator multiset is not closed under inversion");
    const int n = table.n;
    const double w = 1.0 / double(s.elements.size());
    Matrix adj(n, n);
    for (int g : s.elements)
        for (int x = 0; x < n; ++x) adj(x, table.mul(x, g)) += w;
    const std::vector<double> vals = sym_eigvalues(SymMatrix::from_matrix(adj));
    if (std::fabs(vals.front() - 1.0) > 1e-8)
        throw NumericError("normalized Cayley adjacency lost its top eigenvalue 1: got " + std::to_string(vals.front()));
    return std::max(std::fabs(vals[1]), std::fabs(vals.back()));
}

ExpanderResult build_expander(const GroupTable& table, double epsilon) {
    if (table.n < 2) throw InputError("no expander is definable over the trivial group");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in (0,1)");
    const int n = table.n;

    // Selector reduction with the family f(g) = (R(g)+R(g⁻¹))/2 − J/n:
    // γ = ρ² = 2, run at ε/2 so the certified bound lands on ε.
    const double gamma = 2.0;
    const double eps_alg = epsilon / 2.0;
    const double theta = eps_alg / gamma;
    const double delta = std::exp(eps_alg * eps_alg) / std::pow(double(n), 4);

    // Candidate g and g⁻¹ add the same pair {g, g⁻¹}; scoring one
    // representative per pair keeps the same argmin as the full loop. The
    // identity is excluded: it only contributes self-loops, and a loop-padded
    // graph certifies a lambda it does not earn as an expander.
    std::vector<int> reps;
    for (int g = 0; g < n; ++g)
        if (g != table.identity && g <= table.inverse[g]) reps.push_back(g);

    double lambda = 2.0;
    for (int c = 8;; c *= 2) {
        const long t = long(std::ceil(double(c) * std::log(double(n)) / (epsilon * epsilon)));

        ExpanderResult result;
        result.t = t;
        result.growth_constant = c;
        result.theta = theta;
        result.delta = delta;

        std::vector<long> counts(n, 0);
        long total = 0;
        for (long i = 1; i <= t; ++i) {
            std::vector<double> score(reps.size());
            parallel_for(int(reps.size()), [&](int r) {
                const int g = reps[std::size_t(r)];
                std::vector<long> cand = counts;
                cand[g] += (g == table.inverse[g]) ? 2 : 1;
                if (g != table.inverse[g]) cand[table.inverse[g]] += 1;
                const SparseElement h = sparse_from_counts(cand, theta / 2.0);
                score[std::size_t(r)] =
                    estrada_even_sparse(h, total + 2, theta / 2.0, delta, n, table, table.identity);
            });
            // Evaluations carry an additive budget of delta each; scores
            // within 2·delta are indistinguishable by design.
            double raw_min = score[0];
            for (double s : score) raw_min = std::min(raw_min, s);
            const int best = argmin_with_ties(score, 2.0 * delta + 1e-11 * std::max(1.0, std::fabs(raw_min)));
            const int g = reps[std::size_t(best)];
            counts[g] += (g == table.inverse[g]) ? 2 : 1;
            if (g != table.inverse[g]) counts[table.inverse[g]] += 1;
            total += 2;

            // Φ = 2(EE_even(A, θ/2) + 1 − cosh(θ i)) with i base elements chosen.
            const double phi = 2.0 * (score[std::size_t(best)] + 1.0 - std::cosh(theta * double(i)));
            if (phi <= 0.0) throw NumericError("expander potential collapsed to a non-positive value");
            result.steps.push_back({g, score[std::size_t(best)], std::log(phi)});
        }

        result.s.elements.clear();
        for (const ExpanderStep& st : result.steps) {
            result.s.elements.push_back(st.chosen);
            result.s.elements.push_back(table.inverse[st.chosen]);
        }
        lambda = lambda_of_cayley(table, result.s);
        result.lambda = lambda;
        if (lambda <= epsilon) return result;
        if (c >= 64) break;  // initial constant plus three doublings
    }
    throw CertificationError("expander certification failed: lambda " + std::to_string(lambda) + " > epsilon " +
                                 std::to_string(epsilon) + " after 3 doublings of the step constant",
                             lambda, epsilon);
}

}  // namespace hypercosh
