#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hypercosh/cayley.hpp"
#include "hypercosh/elementwise.hpp"
#include "hypercosh/hypercosine.hpp"
#include "hypercosh/isotropic.hpp"
#include "hypercosh/parallel.hpp"
#include "hypercosh/spectral.hpp"

namespace py = pybind11;
using namespace hypercosh;

namespace {

Matrix matrix_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw InputError("expected a 2-d array");
    Matrix m(int(arr.shape(0)), int(arr.shape(1)));
    const auto view = arr.unchecked<2>();
    for (py::ssize_t i = 0; i < arr.shape(0); ++i)
        for (py::ssize_t j = 0; j < arr.shape(1); ++j) m(int(i), int(j)) = view(i, j);
    return m;
}

SymMatrix sym_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    Matrix m = matrix_from_array(arr);
    if (m.rows() != m.cols()) throw InputError("expected a square array");
    // Mirror the upper triangle so float round-trips stay exactly symmetric.
    for (int i = 0; i < m.rows(); ++i)
        for (int j = i + 1; j < m.cols(); ++j) {
            if (std::fabs(m(i, j) - m(j, i)) > 1e-12 * std::max(1.0, std::fabs(m(i, j))))
                throw InputError("array is not symmetric");
            m(j, i) = m(i, j);
        }
    return SymMatrix::from_matrix(m);
}

py::array_t<double> array_from_matrix(const Matrix& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    auto view = out.mutable_unchecked<2>();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) view(i, j) = m(i, j);
    return out;
}

GroupTable table_from_array(const py::array_t<long, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2 || arr.shape(0) != arr.shape(1)) throw InputError("expected a square table");
    const int n = int(arr.shape(0));
    std::vector<int> product(std::size_t(n) * n);
    const auto view = arr.unchecked<2>();
    for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h) product[std::size_t(g) * n + h] = int(view(g, h));
    return make_group_table(n, std::move(product));
}

}  // namespace

PYBIND11_MODULE(hypercosh, m) {
    m.doc() = "matrix hyperbolic cosine toolkit: balancing, Cayley expanders, "
              "spectral and element-wise sparsification";

    m.def("set_max_threads", &set_max_threads, py::arg("k"));

    m.def(
        "sym_eig",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
            const EigDecomposition d = sym_eig(sym_from_array(a));
            return py::make_tuple(py::cast(d.eigenvalues), array_from_matrix(d.eigenvectors));
        },
        py::arg("a"), "Eigenvalues (descending) and eigenvectors of a symmetric matrix");

    m.def(
        "trace_cosh",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
            return trace_cosh(sym_from_array(a));
        },
        py::arg("a"));

    m.def(
        "balance",
        [](const std::vector<py::array_t<double, py::array::c_style | py::array::forcecast>>& mats) {
            std::vector<SymMatrix> ms;
            ms.reserve(mats.size());
            for (const auto& a : mats) ms.push_back(sym_from_array(a));
            const BalanceResult r = balance_matrices(ms);
            py::dict out;
            out["signs"] = r.signs;
            out["value"] = r.value;
            out["bound"] = r.bound;
            return out;
        },
        py::arg("matrices"), "Deterministic ±1 signs with certified norm bound");

    m.def(
        "build_expander",
        [](const py::array_t<long, py::array::c_style | py::array::forcecast>& table, double epsilon) {
            const GroupTable t = table_from_array(table);
            const ExpanderResult r = build_expander(t, epsilon);
            py::dict out;
            out["S"] = r.s.elements;
            out["lambda"] = r.lambda;
            out["t"] = r.t;
            return out;
        },
        py::arg("table"), py::arg("epsilon"),
        "Expanding Cayley multiset from a 0-based multiplication table");

    m.def(
        "cyclic_table",
        [](int n) {
            const GroupTable t = cyclic_group(n);
            py::array_t<long> out({n, n});
            auto view = out.mutable_unchecked<2>();
            for (int g = 0; g < n; ++g)
                for (int h = 0; h < n; ++h) view(g, h) = t.mul(g, h);
            return out;
        },
        py::arg("n"));

    m.def(
        "isotropic_sparsify",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& rows, double epsilon) {
            const RowFamily fam = RowFamily::from_rows(matrix_from_array(rows));
            const SparseIsotropicResult r = isotropic_sparsify(fam, epsilon);
            py::dict out;
            out["indices"] = r.indices;
            out["scalars"] = r.scalars;
            out["residual"] = r.residual;
            out["t"] = r.t;
            return out;
        },
        py::arg("rows"), py::arg("epsilon"), "Greedy row selection for Σ row⊗row = I families");

    m.def(
        "spectral_sparsify",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& vectors, double epsilon) {
            const OuterProductSum ops = OuterProductSum::from_vectors(matrix_from_array(vectors));
            const SpectralResult r = spectral_sparsify(ops, epsilon);
            py::dict out;
            out["weights"] = r.weights.s;
            out["support_size"] = r.weights.support_size;
            out["lower_margin"] = r.lower_margin;
            out["upper_margin"] = r.upper_margin;
            return out;
        },
        py::arg("vectors"), py::arg("epsilon"), "(1±eps)^3 reweighting of Σ v⊗v with ⌈n/eps²⌉ support");

    m.def(
        "theta_of",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
            return theta_of(sym_from_array(a));
        },
        py::arg("a"));

    m.def(
        "sdd_sparsify_deterministic",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a, double epsilon) {
            const SddDeterministicResult r = sdd_sparsify_deterministic(sym_from_array(a), epsilon);
            py::dict out;
            out["dense"] = array_from_matrix(r.sparsified.to_dense());
            out["nnz"] = r.sparsified.nnz();
            out["error"] = r.sparsified.error_bound.value();
            out["theta"] = r.theta;
            return out;
        },
        py::arg("a"), py::arg("epsilon"));

    m.def(
        "sdd_sparsify_randomized",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a, double norm, double epsilon,
           std::uint64_t seed) {
            const SddRandomizedResult r = sdd_sparsify_randomized(sym_from_array(a), norm, epsilon, seed, true);
            py::dict out;
            out["dense"] = array_from_matrix(r.sparsified.to_dense());
            out["nnz"] = r.sparsified.nnz();
            out["error"] = r.sparsified.error_bound.value();
            out["theta"] = r.theta;
            return out;
        },
        py::arg("a"), py::arg("norm"), py::arg("epsilon"), py::arg("seed"));

    m.def(
        "sparsify_generic",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a, double epsilon) {
            const GenericSparsifyResult r = sparsify_generic(sym_from_array(a), epsilon);
            py::dict out;
            out["dense"] = array_from_matrix(r.sparsified.to_dense());
            out["nnz"] = r.sparsified.nnz();
            out["error"] = r.normalized_error;
            out["budget"] = r.budget;
            return out;
        },
        py::arg("a"), py::arg("epsilon"));

    py::register_exception<InputError>(m, "InputError");
    py::register_exception<CertificationError>(m, "CertificationError");
}
