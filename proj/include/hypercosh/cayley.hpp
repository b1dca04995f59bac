#pragma once

#include <iosfwd>
#include <vector>

#include "hypercosh/linalg.hpp"

namespace hypercosh {

/// Multiplication table of a finite group; element ids are 0-based here,
/// 1-based only in the text file format.
struct GroupTable {
    int n = 0;
    std::vector<int> product;  // row g: g·h for h = 0..n-1
    int identity = 0;
    std::vector<int> inverse;

    int mul(int g, int h) const { return product[std::size_t(g) * n + h]; }
};

/// Validates Latin-square structure, identity, inverses and sampled
/// associativity (10n deterministic triples), then derives the inverse map.
GroupTable make_group_table(int n, std::vector<int> product, bool full_associativity = false);

/// Text format: line 1 = n, then n rows of n whitespace-separated 1-based ids.
GroupTable parse_group_table(std::istream& in);

GroupTable cyclic_group(int n);
GroupTable dihedral_group(int k);    // order 2k
GroupTable symmetric_group(int k);   // order k!, guard k! <= 1e4

/// Real group-algebra element; coeffs[g] is the coefficient of g.
struct GroupAlgebraElement {
    std::vector<double> coeffs;
};

GroupAlgebraElement delta(int g, int n);

/// (a ⋆ b)[g·h] += a[g]·b[h]; cost O(n · supp(b)).
GroupAlgebraElement convolve(const GroupAlgebraElement& a, const GroupAlgebraElement& b, const GroupTable& table);

/// Permutation matrix of the right action, R(g)[x][y] = 1 iff y = x·g;
/// satisfies R(g)R(h) = R(gh). Oracle use only, never in the hot path.
Matrix right_regular(int g, const GroupTable& table);

/// Multiset of generators, closed under inversion.
struct GeneratorMultiset {
    std::vector<int> elements;
};

bool is_symmetric_multiset(const GeneratorMultiset& s, const GroupTable& table);

/// Additive-δ approximation of EE_even(A, θ) = Σ_k m_{2k}(θA)/(2k)! for the
/// Cayley adjacency A = Σ_{s∈S} R(s), computed entirely in the group algebra
/// (trace R(x) = n·x[id]); truncation l = ⌈max(log₂(n/δ), 2e²|S|θ)⌉.
double estrada_even(const GeneratorMultiset& s, double theta, double delta, const GroupTable& table);

/// Second-largest |eigenvalue| of the normalized adjacency of Cay(G,S);
/// disconnected graphs simply return 1.
double lambda_of_cayley(const GroupTable& table, const GeneratorMultiset& s);

struct ExpanderStep {
    int chosen;            // base element picked this step (its inverse is added too)
    double estrada_even;   // budgeted group-algebra evaluation used by the argmin
    double potential_log;  // log Φ after the step, Φ = 2 trace cosh(θ Σ f(s))
};

struct ExpanderResult {
    GeneratorMultiset s;   // 2t elements, symmetric closure
    double lambda;         // certified by a direct eigensolve
    long t;
    int growth_constant;   // c in t = ⌈c ln(n)/ε²⌉ after any doublings
    double theta;          // greedy scale; Estrada evaluations run at theta/2
    double delta;          // per-evaluation Estrada budget
    std::vector<ExpanderStep> steps;
};

/// Greedy even-Estrada-index minimization; the constant c starts at 8 and
/// doubles on certification failure, at most 3 times.
ExpanderResult build_expander(const GroupTable& table, double epsilon);

}  // namespace hypercosh
