#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hypercosh/linalg.hpp"
#include "hypercosh/spectral.hpp"

namespace hypercosh {

/// Dense whitespace format: first line "m n", then m rows of n numbers.
/// Matrix Market "array" and "coordinate" files are detected by their
/// %%MatrixMarket banner (coordinate input must be square; symmetric files
/// carry the lower triangle).
Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);

/// Square symmetric read; rejects asymmetric data instead of fixing it up.
SymMatrix read_sym_matrix_file(const std::string& path);

/// Stacked symmetric matrices: first line "k n", then k·n rows of n numbers.
std::vector<SymMatrix> read_matrix_list_file(const std::string& path);

/// Edge list: "n m" then m lines "i j w" with 1-based 1 <= i < j <= n.
struct GraphFile {
    int n = 0;
    std::vector<Edge> edges;
};
GraphFile read_graph_file(const std::string& path);

void write_matrix_market(std::ostream& out, const Matrix& m);

}  // namespace hypercosh
