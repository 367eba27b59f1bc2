// Command line front end: generate, detect, eval, bench, experiment.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "predassign/assignment.hpp"
#include "predassign/error.hpp"
#include "predassign/generators.hpp"
#include "predassign/graph.hpp"
#include "predassign/harness.hpp"
#include "predassign/metrics.hpp"
#include "predassign/sampling.hpp"

using namespace predassign;

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParams("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidParams("cannot open '" + path + "' for writing");
  return out;
}

std::vector<double> parse_doubles(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

void print_report(std::ostream& out, const ErrorReport& r) {
  out << std::setprecision(6) << "delta_S: " << r.delta_S << '\n'
      << "delta_Sc: " << r.delta_Sc << '\n'
      << "delta: " << r.delta << '\n'
      << "delta_tilde_S: " << r.delta_tilde_S << '\n';
}

struct GenerateArgs {
  std::string model = "sbm";
  NodeId n = 1000;
  Label k = 2;
  double alpha = 0.05;
  double density = 0.01;
  double h = 3.0;
  std::string proportions;
  std::string theta = "1,5";
  std::uint64_t seed = 1;
  std::string edges_out, labels_out, theta_out;
};

int run_generate(const GenerateArgs& a) {
  const std::vector<double> props = a.proportions.empty() ? balanced_proportions(a.k)
                                                          : parse_doubles(a.proportions);
  SparseGraph g;
  Membership truth;
  std::vector<double> theta;
  if (parse_model(a.model) == Model::Sbm) {
    SbmSample s = sample_sbm(a.n, sbm_block_matrix(a.k, a.alpha, a.h), props, a.seed);
    g = std::move(s.graph);
    truth = std::move(s.membership);
  } else {
    ThetaDistribution dist;
    if (a.theta == "constant") {
      dist = ThetaDistribution::constant();
    } else {
      const auto ab = parse_doubles(a.theta);
      if (ab.size() != 2) throw InvalidParams("--theta expects 'a,b' or 'constant'");
      dist = ThetaDistribution::beta(ab[0], ab[1]);
    }
    DcbmSample s = sample_dcbm(a.n, dcbm_block_matrix(a.k, 1.0, a.h), props, a.density, dist, a.seed);
    g = std::move(s.graph);
    truth = std::move(s.membership);
    theta = std::move(s.theta);
  }
  auto edges = open_out(a.edges_out);
  write_edge_list(g, edges);
  auto labels = open_out(a.labels_out);
  write_labels(labels, truth.labels);
  if (!a.theta_out.empty()) {
    if (theta.empty()) throw InvalidParams("--theta-out is only available for the dcbm model");
    auto out = open_out(a.theta_out);
    out << std::setprecision(17);
    for (double t : theta) out << t << '\n';
  }
  std::cerr << "generated n=" << g.num_nodes() << " edges=" << g.num_edges() << '\n';
  return 0;
}

struct DetectArgs {
  std::string edges;
  std::string model = "sbm";
  Label k = 2;
  std::string m = "n^0.85";
  std::string sampler = "srs";
  std::string method = "sc";
  std::uint64_t seed = 1;
  unsigned threads = 1;
  double eig_tol = 1e-8;
  std::size_t kmeans_restarts = 10;
  double laplacian_tau = -1.0;
  bool largest_component = false;
  std::string labels_out, subsample_out, nodes_out, truth;
};

int run_detect(const DetectArgs& a) {
  auto in = open_in(a.edges);
  SparseGraph g = read_edge_list(in);
  std::vector<NodeId> kept;
  if (a.largest_component) {
    kept = largest_component(g);
    g = induced_subgraph(g, kept);
  }

  PredictiveConfig cfg;
  cfg.model = parse_model(a.model);
  cfg.sampler = parse_sampler(a.sampler);
  cfg.method = parse_variant(a.method);
  cfg.m = resolve_m(a.m, g.num_nodes());
  cfg.seed = a.seed;
  cfg.threads = a.threads;
  cfg.spectral.eig.tol = a.eig_tol;
  cfg.spectral.kmeans.restarts = a.kmeans_restarts;
  if (a.laplacian_tau >= 0.0) cfg.spectral.laplacian_tau = a.laplacian_tau;

  const PredictiveResult res = predictive_assign(g, a.k, cfg);
  if (!a.labels_out.empty()) {
    auto out = open_out(a.labels_out);
    write_labels(out, res.labels.labels);
  }
  if (!a.subsample_out.empty()) {
    auto out = open_out(a.subsample_out);
    write_node_ids(out, res.subsample.selected());
  }
  if (!a.nodes_out.empty()) {
    if (!a.largest_component) throw InvalidParams("--nodes-out requires --largest-component");
    auto out = open_out(a.nodes_out);
    write_node_ids(out, kept);
  }
  std::cout << std::setprecision(6) << "n: " << g.num_nodes() << '\n'
            << "m: " << cfg.m << '\n'
            << "t_sample_s: " << res.timings.sample_s << '\n'
            << "t_cluster_s: " << res.timings.cluster_s << '\n'
            << "t_assign_s: " << res.timings.assign_s << '\n'
            << "t_total_s: " << res.timings.total_s << '\n'
            << "fallback_count: " << res.fallback_count << '\n';
  if (!a.truth.empty()) {
    auto tin = open_in(a.truth);
    Membership truth = read_labels(tin);
    truth.K = std::max(truth.K, a.k);
    print_report(std::cout, matched_errors(truth, res.labels, res.subsample));
  }
  return 0;
}

int run_eval(const std::string& truth_path, const std::string& est_path, const std::string& subsample_path) {
  auto tin = open_in(truth_path);
  auto ein = open_in(est_path);
  Membership truth = read_labels(tin);
  Membership est = read_labels(ein);
  if (truth.size() != est.size()) {
    throw InvalidParams("truth has " + std::to_string(truth.size()) + " labels, estimate has " +
                        std::to_string(est.size()));
  }
  const auto n = static_cast<NodeId>(truth.size());
  SubsampleIndex s = SubsampleIndex::all(n);
  if (!subsample_path.empty()) {
    auto sin = open_in(subsample_path);
    s = SubsampleIndex(n, read_node_ids(sin));
  }
  print_report(std::cout, matched_errors(truth, est, s));
  return 0;
}

struct BenchArgs {
  std::string ns = "10000,20000,40000,60000,80000";
  NodeId m = 2000;
  Label k = 5;
  double mean_degree = 40.0;
  double h = 4.0;
  std::size_t repeats = 3;
  std::uint64_t seed = 1;
  std::string method = "sc";
  unsigned threads = 1;
  NodeId compare_n = 0;
  double compare_alpha = 0.02;
  std::string compare_m = "n^0.8";
};

int run_bench(const BenchArgs& a) {
  BenchConfig cfg;
  cfg.ns.clear();
  for (double v : parse_doubles(a.ns)) cfg.ns.push_back(static_cast<NodeId>(v));
  cfg.m = a.m;
  cfg.K = a.k;
  cfg.mean_degree = a.mean_degree;
  cfg.h = a.h;
  cfg.repeats = a.repeats;
  cfg.seed = a.seed;
  cfg.method = parse_variant(a.method);
  cfg.threads = a.threads;
  const BenchResult res = benchmark_scaling(cfg);
  std::cout << "n,m,t_assign_s,t_cluster_s,t_total_s\n" << std::setprecision(6);
  for (const auto& p : res.points) {
    std::cout << p.n << ',' << p.m << ',' << p.t_assign_s << ',' << p.t_cluster_s << ',' << p.t_total_s << '\n';
  }
  std::cout << "# t_assign ~ n-m: slope=" << res.fit.slope << " intercept=" << res.fit.intercept
            << " r2=" << res.fit.r2 << '\n';

  if (a.compare_n > 0) {
    const SbmSample net = sample_sbm(a.compare_n, sbm_block_matrix(a.k, a.compare_alpha, a.h),
                                     balanced_proportions(a.k), a.seed);
    PredictiveConfig pc;
    pc.m = resolve_m(a.compare_m, a.compare_n);
    pc.method = cfg.method;
    pc.seed = a.seed;
    pc.threads = a.threads;
    const SpeedComparison cmp = compare_with_full(net.graph, net.membership, a.k, pc);
    std::cout << "# full-vs-predictive n=" << a.compare_n << " m=" << pc.m
              << ": predictive_s=" << cmp.predictive_s << " full_s=" << cmp.full_s
              << " speedup=" << cmp.full_s / cmp.predictive_s
              << " delta_predictive=" << cmp.predictive_errors.delta
              << " delta_full=" << cmp.full_errors.delta << '\n';
  }
  return 0;
}

int run_experiment_cmd(const std::string& config_path, const std::string& out_override, bool summary) {
  ExperimentConfig cfg = load_config(config_path);
  if (!out_override.empty()) cfg.output = out_override;
  const auto rows = run_experiment(cfg);
  if (cfg.output.empty() || cfg.output == "-") {
    write_csv(std::cout, rows);
  } else {
    auto out = open_out(cfg.output);
    write_csv(out, rows);
  }
  if (summary) write_summary(std::cerr, summarize(rows));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predictive assignment community detection for large sparse networks"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Sample an SBM or DCBM network");
  g->add_option("--model", gen.model, "sbm or dcbm")->check(CLI::IsMember({"sbm", "dcbm"}));
  g->add_option("--n", gen.n, "Number of nodes")->required();
  g->add_option("--k", gen.k, "Number of communities")->required();
  g->add_option("--alpha", gen.alpha, "SBM expected density");
  g->add_option("--density", gen.density, "DCBM expected density target");
  g->add_option("--h", gen.h, "Homophily factor");
  g->add_option("--proportions", gen.proportions, "Comma separated community proportions");
  g->add_option("--theta", gen.theta, "DCBM degree distribution: 'a,b' Beta shape or 'constant'");
  g->add_option("--seed", gen.seed);
  g->add_option("--edges-out", gen.edges_out)->required();
  g->add_option("--labels-out", gen.labels_out)->required();
  g->add_option("--theta-out", gen.theta_out);

  DetectArgs det;
  auto* d = app.add_subcommand("detect", "Run predictive assignment on an edge list");
  d->add_option("--edges", det.edges, "Edge list file")->required();
  d->add_option("--model", det.model, "sbm or dcbm")->check(CLI::IsMember({"sbm", "dcbm"}));
  d->add_option("--k", det.k, "Number of communities")->required();
  d->add_option("--m", det.m, "Subsample size: integer, n, or n^gamma");
  d->add_option("--sampler", det.sampler)->check(CLI::IsMember({"srs", "rws"}));
  d->add_option("--method", det.method)->check(CLI::IsMember({"sc", "sc_lap", "rsc", "rsc_lap", "basc"}));
  d->add_option("--seed", det.seed);
  d->add_option("--threads", det.threads);
  d->add_option("--eig-tol", det.eig_tol);
  d->add_option("--kmeans-restarts", det.kmeans_restarts);
  d->add_option("--laplacian-tau", det.laplacian_tau, "Laplacian regulariser (default: mean degree)");
  d->add_flag("--largest-component", det.largest_component, "Restrict to the largest connected component");
  d->add_option("--labels-out", det.labels_out);
  d->add_option("--subsample-out", det.subsample_out, "Write the subsampled node ids");
  d->add_option("--nodes-out", det.nodes_out, "Original ids of the kept component");
  d->add_option("--truth", det.truth, "Ground-truth labels; prints matched errors");

  std::string truth_path, est_path, subsample_path;
  auto* e = app.add_subcommand("eval", "Matched error rates of estimated labels");
  e->add_option("--truth", truth_path)->required();
  e->add_option("--est", est_path)->required();
  e->add_option("--subsample", subsample_path, "Node ids of S; default: all nodes");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Assignment-time scaling in n at fixed m");
  b->add_option("--ns", bench.ns, "Comma separated node counts");
  b->add_option("--m", bench.m);
  b->add_option("--k", bench.k);
  b->add_option("--mean-degree", bench.mean_degree);
  b->add_option("--h", bench.h);
  b->add_option("--repeats", bench.repeats);
  b->add_option("--seed", bench.seed);
  b->add_option("--method", bench.method)->check(CLI::IsMember({"sc", "sc_lap", "rsc", "rsc_lap", "basc"}));
  b->add_option("--threads", bench.threads);
  b->add_option("--compare-n", bench.compare_n, "Also time full-network clustering at this n");
  b->add_option("--compare-alpha", bench.compare_alpha);
  b->add_option("--compare-m", bench.compare_m);

  std::string config_path, out_override;
  bool summary = false;
  auto* x = app.add_subcommand("experiment", "Run a key=value experiment config");
  x->add_option("config", config_path)->required();
  x->add_option("--out", out_override, "CSV path ('-' for stdout); overrides the config");
  x->add_flag("--summary", summary, "Print mean and standard error per m to stderr");

  CLI11_PARSE(app, argc, argv);

  try {
    if (g->parsed()) return run_generate(gen);
    if (d->parsed()) return run_detect(det);
    if (e->parsed()) return run_eval(truth_path, est_path, subsample_path);
    if (b->parsed()) return run_bench(bench);
    if (x->parsed()) return run_experiment_cmd(config_path, out_override, summary);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 1;
}
