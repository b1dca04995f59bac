#include "hypercosh/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hypercosh {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::tolower(c)); });
    return s;
}

Matrix read_matrix_market(std::istream& in, const std::string& banner) {
    std::istringstream head(banner);
    std::string tag, object, format, field, symmetry;
    head >> tag >> object >> format >> field >> symmetry;
    if (lower(object) != "matrix") throw InputError("unsupported MatrixMarket object: " + object);
    if (lower(field) == "complex" || lower(field) == "pattern")
        throw InputError("unsupported MatrixMarket field: " + field);
    const bool symmetric = lower(symmetry) == "symmetric";
    if (!symmetric && lower(symmetry) != "general")
        throw InputError("unsupported MatrixMarket symmetry: " + symmetry);

    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '%') break;
    }
    std::istringstream sizes(line);

    if (lower(format) == "array") {
        int rows, cols;
        if (!(sizes >> rows >> cols) || rows < 1 || cols < 1) throw InputError("bad MatrixMarket array sizes");
        Matrix m(rows, cols);
        // Array data is column-major; symmetric arrays carry the lower triangle.
        for (int j = 0; j < cols; ++j) {
            for (int i = symmetric ? j : 0; i < rows; ++i) {
                double v;
                if (!(in >> v)) throw InputError("MatrixMarket array data truncated");
                m(i, j) = v;
                if (symmetric) m(j, i) = v;
            }
        }
        return m;
    }
    if (lower(format) == "coordinate") {
        int rows, cols;
        long nnz;
        if (!(sizes >> rows >> cols >> nnz) || rows < 1 || cols < 1 || nnz < 0)
            throw InputError("bad MatrixMarket coordinate sizes");
        Matrix m(rows, cols);
        for (long k = 0; k < nnz; ++k) {
            int i, j;
            double v;
            if (!(in >> i >> j >> v)) throw InputError("MatrixMarket coordinate data truncated");
            if (i < 1 || i > rows || j < 1 || j > cols) throw InputError("MatrixMarket index out of range");
            m(i - 1, j - 1) = v;
            if (symmetric) m(j - 1, i - 1) = v;
        }
        return m;
    }
    throw InputError("unsupported MatrixMarket format: " + format);
}

}  // namespace

Matrix read_matrix(std::istream& in) {
    // Peek the first non-empty line to branch on the MatrixMarket banner.
    std::string first;
    while (std::getline(in, first)) {
        if (first.find_first_not_of(" \t\r\n") != std::string::npos) break;
    }
    if (first.rfind("%%MatrixMarket", 0) == 0 || first.rfind("%%matrixmarket", 0) == 0)
        return read_matrix_market(in, first);

    std::istringstream header(first);
    int rows, cols;
    if (!(header >> rows >> cols) || rows < 1 || cols < 1)
        throw InputError("dense matrix file must start with 'm n'");
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            double v;
            if (!(in >> v))
                throw InputError("dense matrix file truncated at row " + std::to_string(i + 1) + ", column " +
                                 std::to_string(j + 1));
            m(i, j) = v;
        }
    return m;
}

Matrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return read_matrix(in);
}

SymMatrix read_sym_matrix_file(const std::string& path) {
    const Matrix m = read_matrix_file(path);
    if (m.rows() != m.cols()) throw InputError(path + " is not square");
    for (int i = 0; i < m.rows(); ++i)
        for (int j = i + 1; j < m.cols(); ++j)
            if (m(i, j) != m(j, i))
                throw InputError(path + " is not symmetric at (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + "); symmetric input is required exactly");
    return SymMatrix::from_matrix(m);
}

std::vector<SymMatrix> read_matrix_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    int count, n;
    if (!(in >> count >> n) || count < 1 || n < 1) throw InputError(path + " must start with 'count n'");
    std::vector<SymMatrix> mats;
    mats.reserve(count);
    for (int k = 0; k < count; ++k) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double v;
                if (!(in >> v)) throw InputError(path + " truncated inside matrix " + std::to_string(k + 1));
                m(i, j) = v;
            }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (m(i, j) != m(j, i))
                    throw InputError(path + ": matrix " + std::to_string(k + 1) + " is not symmetric");
        mats.push_back(SymMatrix::from_matrix(m));
    }
    return mats;
}

GraphFile read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    GraphFile g;
    long m;
    if (!(in >> g.n >> m) || g.n < 1 || m < 1) throw InputError(path + " must start with 'n m'");
    g.edges.reserve(m);
    for (long k = 0; k < m; ++k) {
        long i, j;
        double w;
        if (!(in >> i >> j >> w)) throw InputError(path + " truncated at edge " + std::to_string(k + 1));
        if (i < 1 || j < 1 || i > g.n || j > g.n || i >= j)
            throw InputError(path + ": edge " + std::to_string(k + 1) + " must satisfy 1 <= i < j <= n");
        g.edges.push_back({int(i - 1), int(j - 1), w});
    }
    return g;
}

void write_matrix_market(std::ostream& out, const Matrix& m) {
    long nnz = 0;
    for (double v : m.data())
        if (v != 0.0) ++nnz;
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows() << " " << m.cols() << " " << nnz << "\n";
    char buffer[64];
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0.0) {
                std::snprintf(buffer, sizeof(buffer), "%.17g", m(i, j));
                out << (i + 1) << " " << (j + 1) << " " << buffer << "\n";
            }
}

}  // namespace hypercosh
