// qdsfm: command-line front end.
//
//   qdsfm solve    --instance FILE [--algorithm rcd|ap] [--method mnp|fw|exact] ...
//   qdsfm project  --instance FILE [--atom R] [--method ...] [--delta D] [--max-iter K]
//   qdsfm ssl      (--synthetic [...] | --hypergraph FILE | --dataset CSV --schema FILE) [--labels FILE] ...
//   qdsfm pagerank --graph FILE --alpha A ...
//   qdsfm compare  (--instance FILE | --synthetic) --methods rcd:exact,ap:exact ...
//
// Exit status: 0 converged, 1 usage or input error, 2 budget exhausted.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "qdsfm/io.hpp"
#include "qdsfm/qdsfm.hpp"

namespace {

using qdsfm::io::json;

constexpr int kConverged = 0;
constexpr int kInputError = 1;
constexpr int kBudget = 2;

struct Budget
{
    std::size_t max_iters = 1000000;
    double max_seconds = std::numeric_limits<double>::infinity();
    double target_gap = 1e-10;
    std::size_t stride = 0;
    std::string method;
    std::string algorithm = "rcd";
};

struct Globals
{
    std::uint64_t seed = qdsfm::kDefaultSeed;
    std::size_t threads = 1;
    bool quiet = false;
};

struct SyntheticOptions
{
    bool enabled = false;
    qdsfm::SyntheticParams params;
};

void add_budget(CLI::App* cmd, Budget& b)
{
    cmd->add_option("--algorithm", b.algorithm, "rcd or ap")->check(CLI::IsMember({"rcd", "ap"}));
    cmd->add_option("--method", b.method, "projection oracle: mnp, fw or exact (default: exact for cuts)")
        ->check(CLI::IsMember({"mnp", "fw", "exact"}));
    cmd->add_option("--max-iters", b.max_iters, "iteration budget");
    cmd->add_option("--max-seconds", b.max_seconds, "wall-clock budget of the solve loop")->check(CLI::PositiveNumber);
    cmd->add_option("--target-gap", b.target_gap, "stop once the duality gap is at most this")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--stride", b.stride, "checkpoint every k iterations (default: R for rcd, 1 for ap)");
}

void add_synthetic(CLI::App* cmd, SyntheticOptions& s)
{
    cmd->add_flag("--synthetic", s.enabled, "use the two-cluster random hypergraph");
    cmd->add_option("--n", s.params.n, "synthetic: number of vertices");
    cmd->add_option("--within", s.params.within_per_cluster, "synthetic: hyperedges inside each cluster");
    cmd->add_option("--across", s.params.across, "synthetic: hyperedges over all vertices");
    cmd->add_option("--edge-size", s.params.edge_size, "synthetic: vertices per hyperedge");
    cmd->add_option("--labeled", s.params.labeled_per_cluster, "synthetic: labelled vertices per cluster");
    cmd->add_option("--data-seed", s.params.seed, "synthetic: generator seed");
}

std::optional<qdsfm::ProjectionMethod> parse_method(const std::string& m)
{
    if (m.empty()) return std::nullopt;
    if (m == "mnp") return qdsfm::ProjectionMethod::MNP;
    if (m == "fw") return qdsfm::ProjectionMethod::FW;
    return qdsfm::ProjectionMethod::Exact;
}

qdsfm::Algorithm parse_algorithm(const std::string& a)
{
    return a == "ap" ? qdsfm::Algorithm::AP : qdsfm::Algorithm::RCD;
}

qdsfm::SolverConfig make_config(const Budget& b, const Globals& g)
{
    qdsfm::SolverConfig cfg;
    cfg.seed = g.seed;
    cfg.threads = g.threads;
    cfg.max_iters = b.max_iters;
    cfg.max_seconds = b.max_seconds;
    cfg.target_gap = b.target_gap;
    cfg.stride = b.stride;
    cfg.method = parse_method(b.method);
    return cfg;
}

/// Fails before any compute if an output directory does not exist.
void check_output(const std::string& path)
{
    if (path.empty() || path == "-") return;
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent))
        throw qdsfm::InvalidArgument("output directory '" + parent.string() + "' does not exist");
}

void check_input(const std::string& path, const char* what)
{
    if (path.empty()) throw qdsfm::InvalidArgument(std::string("missing ") + what);
    if (!std::filesystem::is_regular_file(path))
        throw qdsfm::InvalidArgument(std::string(what) + " '" + path + "' not found");
}

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw qdsfm::InvalidArgument("cannot write '" + path + "'");
    out << text;
}

void write_json(const std::string& path, const json& j)
{
    write_text(path, j.dump(2) + "\n");
}

void write_trace(const std::string& path, const qdsfm::ConvergenceTrace& trace)
{
    if (path.empty()) return;
    std::ostringstream os;
    trace.write_csv(os);
    write_text(path, os.str());
}

std::vector<std::size_t> truth_vector(const qdsfm::LabeledDataset& full)
{
    std::vector<std::size_t> truth(full.n);
    for (std::size_t i = 0; i < full.n; ++i) {
        const auto it = full.labels.find(i);
        if (it == full.labels.end())
            throw qdsfm::InvalidArgument("truth file has no label for vertex " + std::to_string(i));
        truth[i] = it->second;
    }
    return truth;
}

// ---------------------------------------------------------------------------

struct SolveOptions
{
    std::string instance;
    std::string out;
    std::string trace;
    Budget budget;
};

int cmd_solve(const SolveOptions& o, const Globals& g)
{
    check_input(o.instance, "instance file");
    check_output(o.out);
    check_output(o.trace);
    const auto inst = qdsfm::io::instance_from_json(qdsfm::io::load_json(o.instance));
    spdlog::info("instance: n = {}, R = {}, incidence = {}", inst.n, inst.num_atoms(), inst.total_incidence());
    const auto res = qdsfm::solve(inst, parse_algorithm(o.budget.algorithm), make_config(o.budget, g));
    spdlog::info("{} iterations, gap {:.3e}, {:.3f} s", res.iterations, res.gap, res.seconds);
    write_json(o.out, qdsfm::io::solution_to_json(res));
    write_trace(o.trace, res.trace);
    return res.converged ? kConverged : kBudget;
}

// ---------------------------------------------------------------------------

struct ProjectOptions
{
    std::string instance;
    std::size_t atom = 0;
    std::string method = "mnp";
    double delta = 1e-12;
    std::size_t max_iter = 0;
    std::string out;
};

int cmd_project(const ProjectOptions& o)
{
    check_input(o.instance, "instance file");
    check_output(o.out);
    const auto inst = qdsfm::io::instance_from_json(qdsfm::io::load_json(o.instance));
    if (o.atom >= inst.num_atoms())
        throw qdsfm::InvalidArgument("atom " + std::to_string(o.atom) + " does not exist");
    const auto& atom = inst.atoms[o.atom];
    // The instance's a and w, restricted to the atom, play the roles of a and W~.
    const auto wtilde = inst.w.gather(atom.members());
    const auto a = qdsfm::restrict_to(atom, inst.a);
    qdsfm::ProjectionParams p;
    p.method = *parse_method(o.method);
    p.delta = o.delta;
    p.max_major = o.max_iter;
    const auto r = qdsfm::project(atom, wtilde, a, p);
    json j;
    j["members"] = std::vector<std::size_t>(atom.members().begin(), atom.members().end());
    j["y"] = r.point.y;
    j["phi"] = r.point.phi;
    j["h"] = r.objective;
    j["certificate"] = r.certificate;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    write_json(o.out, j);
    return r.converged ? kConverged : kBudget;
}

// ---------------------------------------------------------------------------

struct SslOptions
{
    SyntheticOptions synthetic;
    std::string hypergraph;
    std::string dataset;
    std::string schema;
    std::string labels;
    std::string truth;
    double beta = 0.02;
    std::string normalization = "degree";
    std::string volume = "min";
    std::string out;
    std::string trace;
    Budget budget;
};

int cmd_ssl(const SslOptions& o, const Globals& g)
{
    check_output(o.out);
    check_output(o.trace);
    qdsfm::Hypergraph hg;
    qdsfm::LabeledDataset ds;
    std::vector<std::size_t> truth;
    if (o.synthetic.enabled) {
        auto data = qdsfm::generate_synthetic_hypergraph(o.synthetic.params);
        hg = std::move(data.hypergraph);
        ds = std::move(data.labels);
        truth = std::move(data.truth);
    } else {
        if (!o.hypergraph.empty()) {
            check_input(o.hypergraph, "hypergraph file");
            hg = qdsfm::io::hypergraph_from_json(qdsfm::io::load_json(o.hypergraph));
        } else {
            check_input(o.dataset, "dataset file");
            check_input(o.schema, "schema file");
            const auto schema = qdsfm::io::schema_from_json(qdsfm::io::load_json(o.schema));
            std::ifstream in(o.dataset);
            auto rows = qdsfm::read_csv(in);
            if (schema.has_header && !rows.empty()) rows.erase(rows.begin());
            auto ingested = qdsfm::ingest_tabular_dataset(rows, schema);
            for (const auto& note : ingested.notes) spdlog::warn("{}", note);
            hg = std::move(ingested.hypergraph);
        }
        check_input(o.labels, "labels file");
        ds = qdsfm::io::labels_from_json(qdsfm::io::load_json(o.labels), hg.n);
        if (!o.truth.empty()) {
            check_input(o.truth, "truth file");
            truth = truth_vector(qdsfm::io::labels_from_json(qdsfm::io::load_json(o.truth), hg.n));
        }
    }
    spdlog::info("hypergraph: N = {}, R = {}, incidence = {}", hg.n, hg.edges.size(), hg.total_incidence());

    const auto norm = o.normalization == "identity" ? qdsfm::Normalization::Identity : qdsfm::Normalization::Degree;
    const auto cfg = make_config(o.budget, g);
    const auto alg = parse_algorithm(o.budget.algorithm);
    json j;
    qdsfm::SslRun run;
    if (ds.num_classes == 2) {
        run = qdsfm::run_binary_ssl(hg, ds, truth, o.beta, norm, alg, cfg,
                                        o.volume == "max" ? qdsfm::VolumeRule::Max : qdsfm::VolumeRule::Min);
        j["c_value"] = run.conductance;
    } else {
        run = qdsfm::run_multiclass_ssl(hg, ds, truth, o.beta, norm, alg, cfg);
        j["c_value"] = nullptr;
        j["scores"] = run.scores;
    }
    j["classification_error"] = truth.empty() ? json(nullptr) : json(run.error);
    j["labels"] = run.predicted;
    j["gap"] = run.gap;
    j["iters"] = run.iterations;
    j["converged"] = run.converged;
    j["seconds"] = run.seconds;
    spdlog::info("error {}, gap {:.3e}, {:.3f} s", j["classification_error"].dump(), run.gap, run.seconds);
    write_json(o.out, j);
    if (!o.trace.empty()) {
        std::ostringstream os;
        for (std::size_t k = 0; k < run.solves.size(); ++k) {
            if (run.solves.size() > 1) os << "# class " << k << "\n";
            run.solves[k].trace.write_csv(os);
        }
        write_text(o.trace, os.str());
    }
    return run.converged ? kConverged : kBudget;
}

// ---------------------------------------------------------------------------

struct PageRankOptions
{
    std::string graph;
    double alpha = 0.85;
    std::string out;
    std::string trace;
    Budget budget;
};

int cmd_pagerank(const PageRankOptions& o, const Globals& g)
{
    check_input(o.graph, "graph file");
    check_output(o.out);
    check_output(o.trace);
    auto file = qdsfm::io::graph_from_json(qdsfm::io::load_json(o.graph));
    if (file.seed_vector.empty()) {
        file.seed_vector.assign(file.graph.n, 0.0);
        if (file.graph.n > 0) file.seed_vector[0] = 1.0;
    }
    const auto pr = qdsfm::build_pagerank_instance(file.graph, o.alpha, file.seed_vector);
    const auto res = qdsfm::solve(pr.instance, parse_algorithm(o.budget.algorithm), make_config(o.budget, g));
    const auto p = pr.to_pagerank(res.x);
    json j;
    j["p"] = p;
    j["residual"] = qdsfm::pagerank_residual(file.graph, o.alpha, file.seed_vector, p);
    j["gap"] = res.gap;
    j["iters"] = res.iterations;
    j["converged"] = res.converged;
    write_json(o.out, j);
    write_trace(o.trace, res.trace);
    return res.converged ? kConverged : kBudget;
}

// ---------------------------------------------------------------------------

struct CompareOptions
{
    std::string instance;
    SyntheticOptions synthetic;
    double beta = 0.02;
    std::string methods = "rcd:exact,ap:exact";
    std::string out;
    Budget budget;
};

int cmd_compare(const CompareOptions& o, const Globals& g)
{
    check_output(o.out);
    qdsfm::ProblemInstance inst;
    if (o.synthetic.enabled) {
        const auto data = qdsfm::generate_synthetic_hypergraph(o.synthetic.params);
        inst = qdsfm::build_ssl_instance(data.hypergraph, data.labels, 0, o.beta).instance;
    } else {
        check_input(o.instance, "instance file");
        inst = qdsfm::io::instance_from_json(qdsfm::io::load_json(o.instance));
    }
    std::vector<std::pair<std::string, std::string>> pairs;
    std::stringstream ss(o.methods);
    for (std::string item; std::getline(ss, item, ',');) {
        const auto colon = item.find(':');
        std::string alg = item.substr(0, colon);
        std::string method = colon == std::string::npos ? "" : item.substr(colon + 1);
        if (alg != "rcd" && alg != "ap") throw qdsfm::InvalidArgument("unknown algorithm '" + alg + "'");
        if (!method.empty() && method != "mnp" && method != "fw" && method != "exact")
            throw qdsfm::InvalidArgument("unknown projection method '" + method + "'");
        pairs.emplace_back(alg, method);
    }
    if (pairs.empty()) throw qdsfm::InvalidArgument("no methods given");

    std::ostringstream csv;
    csv << "method,iter,seconds,gap\n" << std::setprecision(17);
    bool all_converged = true;
    for (const auto& [alg, method] : pairs) {
        Budget b = o.budget;
        b.algorithm = alg;
        b.method = method;
        const auto res = qdsfm::solve(inst, parse_algorithm(alg), make_config(b, g));
        const std::string name = alg + "+" + (method.empty() ? "default" : method);
        spdlog::info("{}: {} iterations, gap {:.3e}, {:.3f} s", name, res.iterations, res.gap, res.seconds);
        for (const auto& p : res.trace.points) csv << name << ',' << p.iteration << ',' << p.seconds << ',' << p.gap << '\n';
        all_converged = all_converged && res.converged;
    }
    write_text(o.out, csv.str());
    return all_converged ? kConverged : kBudget;
}

void configure_logging(bool quiet)
{
    auto logger = spdlog::stderr_color_mt("qdsfm");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("QDSFM_LOG")) spdlog::set_level(spdlog::level::from_str(env));
    if (quiet) spdlog::set_level(spdlog::level::err);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Quadratic decomposable submodular function minimization"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "random seed (default is a fixed constant)");
    app.add_option("--threads", g.threads, "worker threads for alternating projections")->check(CLI::PositiveNumber);
    app.add_flag("--quiet", g.quiet, "only log errors");

    SolveOptions solve_o;
    auto* solve = app.add_subcommand("solve", "solve an instance file");
    solve->add_option("--instance", solve_o.instance, "instance JSON")->required();
    solve->add_option("--out", solve_o.out, "solution JSON (default stdout)");
    solve->add_option("--trace", solve_o.trace, "convergence trace CSV");
    add_budget(solve, solve_o.budget);

    ProjectOptions project_o;
    auto* project = app.add_subcommand("project", "project one atom's vector onto its cone");
    project->add_option("--instance", project_o.instance, "instance JSON")->required();
    project->add_option("--atom", project_o.atom, "atom index");
    project->add_option("--method", project_o.method, "mnp, fw or exact")->check(CLI::IsMember({"mnp", "fw", "exact"}));
    project->add_option("--delta", project_o.delta, "termination tolerance")->check(CLI::PositiveNumber);
    project->add_option("--max-iter", project_o.max_iter, "major-loop cap (0: default)");
    project->add_option("--out", project_o.out, "result JSON (default stdout)");

    SslOptions ssl_o;
    auto* ssl = app.add_subcommand("ssl", "semi-supervised classification on a hypergraph");
    add_synthetic(ssl, ssl_o.synthetic);
    ssl->add_option("--hypergraph", ssl_o.hypergraph, "hypergraph JSON");
    ssl->add_option("--dataset", ssl_o.dataset, "CSV table");
    ssl->add_option("--schema", ssl_o.schema, "column schema JSON for --dataset");
    ssl->add_option("--labels", ssl_o.labels, "observed labels JSON");
    ssl->add_option("--truth", ssl_o.truth, "labels JSON covering every vertex, for the error rate");
    ssl->add_option("--beta", ssl_o.beta, "weight of the label term")->check(CLI::PositiveNumber);
    ssl->add_option("--normalization", ssl_o.normalization, "degree or identity")
        ->check(CLI::IsMember({"degree", "identity"}));
    ssl->add_option("--volume-rule", ssl_o.volume, "sweep-cut denominator: min or max side volume")
        ->check(CLI::IsMember({"min", "max"}));
    ssl->add_option("--out", ssl_o.out, "result JSON (default stdout)");
    ssl->add_option("--trace", ssl_o.trace, "convergence trace CSV");
    add_budget(ssl, ssl_o.budget);

    PageRankOptions pr_o;
    auto* pagerank = app.add_subcommand("pagerank", "personalized PageRank on a graph");
    pagerank->add_option("--graph", pr_o.graph, "graph JSON")->required();
    pagerank->add_option("--alpha", pr_o.alpha, "damping in (0, 1)");
    pagerank->add_option("--out", pr_o.out, "result JSON (default stdout)");
    pagerank->add_option("--trace", pr_o.trace, "convergence trace CSV");
    add_budget(pagerank, pr_o.budget);

    CompareOptions cmp_o;
    auto* compare = app.add_subcommand("compare", "gap-versus-time traces of several solvers");
    compare->add_option("--instance", cmp_o.instance, "instance JSON");
    add_synthetic(compare, cmp_o.synthetic);
    compare->add_option("--beta", cmp_o.beta, "synthetic: weight of the label term")->check(CLI::PositiveNumber);
    compare->add_option("--methods", cmp_o.methods, "comma list of algorithm:method pairs");
    compare->add_option("--out", cmp_o.out, "long-format CSV (default stdout)");
    add_budget(compare, cmp_o.budget);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }
    configure_logging(g.quiet);

    try {
        if (*solve) return cmd_solve(solve_o, g);
        if (*project) return cmd_project(project_o);
        if (*ssl) return cmd_ssl(ssl_o, g);
        if (*pagerank) return cmd_pagerank(pr_o, g);
        if (*compare) return cmd_compare(cmp_o, g);
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kInputError;
    }
    return kInputError;
}
