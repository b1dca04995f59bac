// Command-line front end: one subcommand per pipeline, JSON reports on
// stdout, exit 0 on certified success, 2 on input errors, 3 on
// certification failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hypercosh/cayley.hpp"
#include "hypercosh/checks.hpp"
#include "hypercosh/elementwise.hpp"
#include "hypercosh/hypercosine.hpp"
#include "hypercosh/io.hpp"
#include "hypercosh/isotropic.hpp"
#include "hypercosh/parallel.hpp"
#include "hypercosh/spectral.hpp"

namespace {

using namespace hypercosh;

// Tiny ordered JSON emitter; every double prints with 17 significant digits
// so reports are reproducible byte for byte.
std::string json_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') (out += '\\') += c;
        else if (c == '\n') out += "\\n";
        else out += c;
    }
    return out + "\"";
}

class Json {
  public:
    static Json object() { return Json('{'); }
    static Json array() { return Json('['); }

    Json& put(const std::string& key, const std::string& v) { return raw(key, json_escape(v)); }
    Json& put(const std::string& key, const char* v) { return raw(key, json_escape(v)); }
    Json& put(const std::string& key, double v) { return raw(key, json_number(v)); }
    Json& put(const std::string& key, long v) { return raw(key, std::to_string(v)); }
    Json& put(const std::string& key, int v) { return raw(key, std::to_string(v)); }
    Json& put(const std::string& key, bool v) { return raw(key, v ? "true" : "false"); }
    Json& put(const std::string& key, const Json& v) { return raw(key, v.str()); }
    template <typename T>
    Json& put_list(const std::string& key, const std::vector<T>& values) {
        Json arr = Json::array();
        for (const T& v : values) arr.push(v);
        return raw(key, arr.str());
    }

    Json& push(double v) { return raw("", json_number(v)); }
    Json& push(int v) { return raw("", std::to_string(v)); }
    Json& push(long v) { return raw("", std::to_string(v)); }
    Json& push(const std::string& v) { return raw("", json_escape(v)); }
    Json& push(const Json& v) { return raw("", v.str()); }

    std::string str() const {
        std::string out;
        out += open_;
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (i) out += ",";
            out += parts_[i];
        }
        out += open_ == '{' ? '}' : ']';
        return out;
    }

  private:
    explicit Json(char open) : open_(open) {}
    Json& raw(const std::string& key, const std::string& value) {
        parts_.push_back(open_ == '{' ? json_escape(key) + ":" + value : value);
        return *this;
    }
    char open_;
    std::vector<std::string> parts_;
};

Json certification(const std::string& metric, double value, double bound, bool pass) {
    Json c = Json::object();
    c.put("metric", metric).put("value", value).put("bound", bound).put("pass", pass);
    return c;
}

struct Emitter {
    std::string out_path;
    int emit(const std::string& subcommand, const Json& inputs, const Json& outputs, const Json& cert, bool pass,
             double seconds) {
        Json report = Json::object();
        report.put("subcommand", subcommand)
            .put("inputs", inputs)
            .put("outputs", outputs)
            .put("certification", cert)
            .put("timing_seconds", seconds);
        const std::string text = report.str();
        std::cout << text << "\n";
        if (!out_path.empty()) {
            std::ofstream f(out_path);
            if (!f) throw InputError("cannot write " + out_path);
            f << text << "\n";
        }
        return pass ? 0 : 3;
    }
};

std::vector<int> one_based(const std::vector<int>& idx) {
    std::vector<int> out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = idx[i] + 1;
    return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int run_balance(const std::string& file, Emitter& em) {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<SymMatrix> mats = read_matrix_list_file(file);
    const BalanceResult res = balance_matrices(mats);
    Json inputs = Json::object();
    inputs.put("matrices", file).put("count", long(mats.size())).put("n", mats.front().size());
    Json outputs = Json::object();
    outputs.put_list("signs", res.signs).put("value", res.value);
    const bool pass = res.value <= res.bound + 1e-8;
    return em.emit("balance", inputs, outputs, certification("norm_of_signed_sum", res.value, res.bound, pass), pass,
                   seconds_since(start));
}

int run_cayley(const std::string& file, double epsilon, Emitter& em) {
    const auto start = std::chrono::steady_clock::now();
    std::ifstream in(file);
    if (!in) throw InputError("cannot open " + file);
    const GroupTable table = parse_group_table(in);
    const ExpanderResult res = build_expander(table, epsilon);
    Json inputs = Json::object();
    inputs.put("table", file).put("n", table.n).put("epsilon", epsilon);
    Json outputs = Json::object();
    outputs.put("n", table.n)
        .put("epsilon", epsilon)
        .put_list("S", one_based(res.s.elements))
        .put("lambda", res.lambda)
        .put("t", res.t)
        .put("growth_constant", res.growth_constant);
    const bool pass = res.lambda <= epsilon;
    return em.emit("cayley", inputs, outputs, certification("lambda", res.lambda, epsilon, pass), pass,
                   seconds_since(start));
}

int run_isotropic(const std::string& file, double epsilon, long t_override, Emitter& em) {
    const auto start = std::chrono::steady_clock::now();
    const Matrix rows = read_matrix_file(file);
    const RowFamily family = RowFamily::from_rows(rows);
    if (family.dropped > 0) std::cerr << "warning: dropped " << family.dropped << " zero rows\n";
    const SparseIsotropicResult res = t_override > 0
                                          ? isotropic_select(family, epsilon / (2.0 * family.n), t_override)
                                          : isotropic_sparsify(family, epsilon);
    Json inputs = Json::object();
    inputs.put("rows", file).put("m", family.m).put("n", family.n).put("epsilon", epsilon);
    Json outputs = Json::object();
    outputs.put_list("indices", one_based(res.indices))
        .put_list("scalars", res.scalars)
        .put("residual", res.residual)
        .put("t", res.t)
        .put("c_factor", res.c_factor);
    const bool pass = res.residual <= epsilon;
    return em.emit("isotropic", inputs, outputs, certification("residual", res.residual, epsilon, pass), pass,
                   seconds_since(start));
}

Json spectral_outputs(const SpectralResult& res) {
    std::vector<int> support;
    std::vector<double> weights;
    for (int i = 0; i < int(res.weights.s.size()); ++i)
        if (res.weights.s[i] > 0.0) {
            support.push_back(i + 1);
            weights.push_back(res.weights.s[i]);
        }
    Json outputs = Json::object();
    outputs.put_list("support", support)
        .put_list("weights", weights)
        .put("support_size", res.weights.support_size)
        .put("n_effective", res.n_effective)
        .put("stage1_ran", res.stage1_ran)
        .put("stage2_ran", res.stage2_ran)
        .put("lower_margin", res.lower_margin)
        .put("upper_margin", res.upper_margin);
    return outputs;
}

int run_spectral(const std::string& file, double epsilon, Emitter& em) {
    const auto start = std::chrono::steady_clock::now();
    const Matrix vectors = read_matrix_file(file);
    const OuterProductSum ops = OuterProductSum::from_vectors(vectors);
    const SpectralResult res = spectral_sparsify(ops, epsilon);
    Json inputs = Json::object();
    inputs.put("vectors", file).put("m", vectors.rows()).put("n", vectors.cols()).put("epsilon", epsilon);
    const double margin = std::min(res.lower_margin, res.upper_margin);
    const bool pass = margin >= -1e-8 * operator_norm(ops.a);
    return em.emit("spectral", inputs, spectral_outputs(res), certification("sandwich_margin", margin, 0.0, pass),
                   pass, seconds_since(start));
}

int run_graph(const std::string& file, double epsilon, const std::string& emit_path, Emitter& em) {
    const auto start = std::chrono::steady_clock::now();
    const GraphFile graph = read_graph_file(file);
    const OuterProductSum ops = laplacian_from_graph(graph.edges, graph.n);
    const SpectralResult res = spectral_sparsify(ops, epsilon);
    if (!emit_path.empty()) {
        std::ofstream out(emit_path);
        if (!out) throw InputError("cannot write " + emit_path);
        long kept = 0;
        for (double s : res.weights.s)
            if (s > 0.0) ++kept;
        out << graph.n << " " << kept << "\n";
        for (std::size_t k = 0; k < graph.edges.size(); ++k)
            if (res.weights.s[k] > 0.0)
                out << (graph.edges[k].u + 1) << " " << (graph.edges[k].v + 1) << " "
                    << json_number(res.weights.s[k] * graph.edges[k].w) << "\n";
    }
    Json inputs = Json::object();
    inputs.put("graph", file).put("n", graph.n).put("edges", long(graph.edges.size())).put("epsilon", epsilon);
    const double margin = std::min(res.lower_margin, res.upper_margin);
    const bool pass = margin >= -1e-8 * operator_norm(ops.a);
    return em.emit("graph", inputs, spectral_outputs(res), certification("sandwich_margin", margin, 0.0, pass), pass,
                   seconds_since(start));
}

void emit_sparse(const std::string& path, const SparsifiedMatrix& s) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << s.n << " " << s.n << " " << s.nnz() << "\n";
    for (const auto& [i, j, v] : s.entries) out << (i + 1) << " " << (j + 1) << " " << json_number(v) << "\n";
}

int run_elementwise(const std::string& file, double epsilon, const std::string& emit_path, Emitter& em) {
    const auto start = std::chrono::steady_clock::now();
    const SymMatrix a = read_sym_matrix_file(file);
    const GenericSparsifyResult res = sparsify_generic(a, epsilon);
    if (!emit_path.empty()) emit_sparse(emit_path, res.sparsified);
    Json inputs = Json::object();
    inputs.put("matrix", file).put("n", a.size()).put("epsilon", epsilon);
    Json outputs = Json::object();
    outputs.put("nnz", res.sparsified.nnz())
        .put("error", res.normalized_error)
        .put("theta", theta_of(a))
        .put("budget", res.budget)
        .put("t", res.t)
        .put("stable_rank", res.stable_rank)
        .put("scale", res.scale);
    const bool pass = res.normalized_error <= epsilon && res.sparsified.nnz() <= res.budget;
    return em.emit("elementwise", inputs, outputs,
                   certification("normalized_error", res.normalized_error, epsilon, pass), pass, seconds_since(start));
}

int run_sdd(const std::string& file, double epsilon, const std::string& mode, std::uint64_t seed, double norm_arg,
            bool certify, const std::string& emit_path, Emitter& em) {
    const auto start = std::chrono::steady_clock::now();
    const SymMatrix a = read_sym_matrix_file(file);
    Json inputs = Json::object();
    inputs.put("matrix", file).put("n", a.size()).put("epsilon", epsilon).put("mode", mode);

    if (mode == "det") {
        const SddDeterministicResult res = sdd_sparsify_deterministic(a, epsilon);
        if (!emit_path.empty()) emit_sparse(emit_path, res.sparsified);
        const double norm = operator_norm(a);
        const double err = res.sparsified.error_bound.value();
        Json outputs = Json::object();
        outputs.put("nnz", res.sparsified.nnz())
            .put("error", err)
            .put("theta", res.theta)
            .put("epsilon_inner", res.epsilon_inner)
            .put("support_budget", res.support_budget)
            .put("reweighted", res.reweighted);
        const bool pass = err <= epsilon * norm;
        return em.emit("sdd", inputs, outputs, certification("error", err, epsilon * norm, pass), pass,
                       seconds_since(start));
    }
    if (mode != "rand") throw InputError("--mode must be det or rand");

    // The theorem takes ‖A‖ as an input; power iteration is a convenience
    // estimate, outside its accounting.
    const double norm_est = norm_arg > 0.0 ? norm_arg : operator_norm_estimate(a) * 1.005;
    const SddRandomizedResult res = sdd_sparsify_randomized(a, norm_est, epsilon, seed, certify);
    if (!emit_path.empty()) emit_sparse(emit_path, res.sparsified);
    inputs.put("seed", long(seed)).put("norm_estimate", norm_est);
    Json outputs = Json::object();
    outputs.put("nnz", res.sparsified.nnz()).put("theta", res.theta).put("t", res.t).put("seed", long(seed));
    bool pass = true;
    Json cert = Json::object();
    if (certify) {
        const double err = res.sparsified.error_bound.value();
        outputs.put("error", err);
        pass = err <= epsilon * norm_est;
        cert = certification("error", err, epsilon * norm_est, pass);
    } else {
        cert = certification("skipped", 0.0, 0.0, true);
    }
    return em.emit("sdd", inputs, outputs, cert, pass, seconds_since(start));
}

int run_verify(const std::string& suite, const std::string& file, long trials, std::uint64_t seed, Emitter& em) {
    const auto start = std::chrono::steady_clock::now();
    Json inputs = Json::object();
    inputs.put("suite", suite).put("trials", trials).put("seed", long(seed));

    if (suite == "lemmas") {
        const LemmaSuiteResult res = run_lemma_suite(int(trials), seed);
        Json outputs = Json::object();
        outputs.put("rank_one_max_dev", res.rank_one_max_dev)
            .put("dilation_max_rel_dev", res.dilation_max_rel_dev)
            .put("projector_max_dev", res.projector_max_dev)
            .put("golden_thompson_min_slack", res.golden_thompson_min_slack)
            .put("tsuda_min_slack", res.tsuda_min_slack)
            .put("taylor_max_excess", res.taylor_max_excess);
        const double worst = std::max({res.rank_one_max_dev, res.dilation_max_rel_dev, res.projector_max_dev,
                                       -res.golden_thompson_min_slack, -res.tsuda_min_slack});
        return em.emit("verify", inputs, outputs, certification("max_identity_deviation", worst, 1e-10, res.pass),
                       res.pass, seconds_since(start));
    }

    SampleFamily family;
    if (suite == "balance-family") {
        const std::vector<SymMatrix> mats = read_matrix_list_file(file);
        family.m = 2;
        family.n = mats.front().size();
        family.steps = long(mats.size());
        family.gamma = 1.0;
        family.rho_sq = 1.0;
        family.weights = {0.5, 0.5};
        family.evaluate = [mats](long step, int k) {
            SymMatrix f = mats[std::size_t(step)];
            if (k == 0) f *= -1.0;
            return f;
        };
        inputs.put("file", file);
    } else if (suite == "isotropic-family") {
        const RowFamily rows = RowFamily::from_rows(read_matrix_file(file));
        family = isotropic_sample_family(rows);
        inputs.put("file", file);
    } else if (suite == "cayley-family") {
        std::ifstream in(file);
        if (!in) throw InputError("cannot open " + file);
        const GroupTable table = parse_group_table(in);
        family.m = table.n;
        family.n = table.n;
        family.steps = 0;
        family.gamma = 2.0;
        family.rho_sq = 2.0;
        family.weights.assign(table.n, 1.0 / table.n);
        family.evaluate = [table](long, int g) {
            Matrix f = right_regular(g, table);
            const Matrix finv = right_regular(table.inverse[g], table);
            for (int i = 0; i < table.n; ++i)
                for (int j = 0; j < table.n; ++j) f(i, j) = 0.5 * (f(i, j) + finv(i, j)) - 1.0 / table.n;
            return SymMatrix::from_matrix(f);
        };
        inputs.put("file", file);
    } else {
        throw InputError("unknown verify suite: " + suite);
    }

    const FamilyReport report = verify_family(family);
    Json outputs = Json::object();
    outputs.put("max_candidate_norm", report.max_candidate_norm)
        .put("mean_residual", report.mean_residual)
        .put("variance_norm", report.variance_norm)
        .put("gamma", family.gamma)
        .put("rho_sq", family.rho_sq);
    return em.emit("verify", inputs, outputs,
                   certification("family_invariants", report.mean_residual, 1e-8, report.within_bounds),
                   report.within_bounds, seconds_since(start));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"matrix hyperbolic cosine toolkit"};
    app.require_subcommand(1);

    int threads = 1;
    std::string out_path;
    app.add_option("--threads", threads, "worker thread cap (results are independent of it)");
    app.add_option("--out", out_path, "also write the JSON report to this path");

    double epsilon = 0.5;
    long t_arg = 0;
    std::uint64_t seed = 1;
    std::string certify = "on";
    std::string matrices, table, rows, vectors, graph, matrix, mode = "det", suite = "lemmas", family_file, emit_path;
    double norm_arg = 0.0;
    long trials = 100;

    CLI::App* balance = app.add_subcommand("balance", "deterministic matrix balancing signs");
    balance->add_option("--matrices", matrices, "stacked symmetric matrices file")->required();

    CLI::App* cayley = app.add_subcommand("cayley", "expanding Cayley graph construction");
    cayley->add_option("--table", table, "group multiplication table file")->required();
    cayley->add_option("--epsilon", epsilon, "target lambda")->required();

    CLI::App* isotropic = app.add_subcommand("isotropic", "isotropic row sparsification");
    isotropic->add_option("--rows", rows, "row matrix file (dense or MatrixMarket array)")->required();
    isotropic->add_option("--epsilon", epsilon, "target residual")->required();
    isotropic->add_option("--t", t_arg, "fixed step count (skips the automatic budget)");

    CLI::App* spectral = app.add_subcommand("spectral", "psd outer-product sparsification");
    spectral->add_option("--vectors", vectors, "vector rows file")->required();
    spectral->add_option("--epsilon", epsilon, "per-stage epsilon; guarantee is (1±eps)^3")->required();

    CLI::App* graph_cmd = app.add_subcommand("graph", "spectral graph sparsification");
    graph_cmd->add_option("--graph", graph, "edge list file: 'n m' then 'i j w'")->required();
    graph_cmd->add_option("--epsilon", epsilon, "per-stage epsilon")->required();
    graph_cmd->add_option("--emit", emit_path, "write the sparsified edge list here");

    CLI::App* elementwise = app.add_subcommand("elementwise", "generic element-wise sparsification");
    elementwise->add_option("--matrix", matrix, "symmetric matrix file")->required();
    elementwise->add_option("--epsilon", epsilon, "target normalized error")->required();
    elementwise->add_option("--emit", emit_path, "write the sparsified matrix (MatrixMarket coordinate)");

    CLI::App* sdd = app.add_subcommand("sdd", "SDD element-wise sparsification");
    sdd->add_option("--matrix", matrix, "symmetric matrix file")->required();
    sdd->add_option("--epsilon", epsilon, "target relative error")->required();
    sdd->add_option("--mode", mode, "det or rand");
    sdd->add_option("--seed", seed, "sampling seed (rand mode)");
    sdd->add_option("--norm", norm_arg, "operator norm estimate; power iteration when absent");
    sdd->add_option("--certify", certify, "on/off: per-run eigensolve certification (rand mode)");
    sdd->add_option("--emit", emit_path, "write the sparsified matrix (MatrixMarket coordinate)");

    CLI::App* verify = app.add_subcommand("verify", "lemma identity and family invariant suites");
    verify->add_option("--suite", suite, "lemmas | balance-family | isotropic-family | cayley-family");
    verify->add_option("--file", family_file, "input for the family suites");
    verify->add_option("--trials", trials, "trial count for the lemma suite");
    verify->add_option("--seed", seed, "seed for the lemma suite");

    // Global flags (--threads, --out) may appear after the subcommand.
    for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);  // prints usage or help
        return rc == 0 ? 0 : 2;
    }
    hypercosh::set_max_threads(threads);
    Emitter em{out_path};

    try {
        if (balance->parsed()) return run_balance(matrices, em);
        if (cayley->parsed()) return run_cayley(table, epsilon, em);
        if (isotropic->parsed()) return run_isotropic(rows, epsilon, t_arg, em);
        if (spectral->parsed()) return run_spectral(vectors, epsilon, em);
        if (graph_cmd->parsed()) return run_graph(graph, epsilon, emit_path, em);
        if (elementwise->parsed()) return run_elementwise(matrix, epsilon, emit_path, em);
        if (sdd->parsed()) return run_sdd(matrix, epsilon, mode, seed, norm_arg, certify != "off", emit_path, em);
        if (verify->parsed()) return run_verify(suite, family_file, trials, seed, em);
    } catch (const hypercosh::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const hypercosh::CertificationError& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
