#pragma once

#include <doctest.h>

#include <cmath>
#include <vector>

#include "hypercosh/checks.hpp"
#include "hypercosh/linalg.hpp"

namespace ts {

using hypercosh::Matrix;
using hypercosh::Rng;
using hypercosh::SymMatrix;

inline double max_entry_diff(const SymMatrix& a, const SymMatrix& b) {
    SymMatrix d = a;
    d -= b;
    return d.max_abs();
}

inline double max_entry_diff(const Matrix& a, const Matrix& b) {
    Matrix d = a;
    d -= b;
    return d.max_abs();
}

// Random diagonally dominant matrix; strictly dominant so theta <= 4.
inline SymMatrix random_diag_dominant(Rng& rng, int n) {
    SymMatrix m = hypercosh::random_symmetric(rng, n);
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i) row += std::fabs(m(i, j));
        m.set(i, i, row + 0.1 + rng.uniform());
    }
    return m;
}

}  // namespace ts
