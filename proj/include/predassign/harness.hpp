#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "predassign/assignment.hpp"
#include "predassign/generators.hpp"
#include "predassign/metrics.hpp"

namespace predassign {

/// One experiment: a generative design, a method, a grid of subsample sizes
/// and a number of replicates. Read from a flat key=value file.
struct ExperimentConfig {
  std::string name = "experiment";
  Model model = Model::Sbm;
  NodeId n = 0;
  Label K = 0;
  double alpha = 0.0;    // SBM expected density
  double density = 0.0;  // DCBM expected density target
  double h = 1.0;
  std::vector<double> proportions;  // empty means balanced
  ThetaDistribution theta;
  Sampler sampler = Sampler::Srs;
  SpectralVariant method = SpectralVariant::Sc;
  std::vector<std::string> m_specs{"n^0.85"};
  std::size_t replicates = 1;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool shuffle = false;  // apply a seeded node permutation after generation
  SpectralParams spectral;
  std::string output;

  /// Throws InvalidParams on an inconsistent configuration.
  void validate() const;
  std::vector<double> resolved_proportions() const;
  std::vector<NodeId> resolved_m() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

struct ReportRow {
  std::string run_id;
  Model model = Model::Sbm;
  NodeId n = 0;
  Label K = 0;
  NodeId m = 0;
  Sampler sampler = Sampler::Srs;
  SpectralVariant method = SpectralVariant::Sc;
  std::uint64_t seed = 0;
  ErrorReport report;
  double f = 0.0;  // fraction of the adjacency matrix used in step 2
  std::string status = "ok";
};

/// m^2/n^2 for subgraph methods, (2nm - m^2)/n^2 for basc.
double fraction_used(NodeId n, NodeId m, SpectralVariant method);

struct GeneratedNetwork {
  SparseGraph graph;
  Membership truth;
};

/// Draws one network from the configuration's design.
GeneratedNetwork generate_network(const ExperimentConfig& cfg, std::uint64_t seed);

std::vector<ReportRow> run_experiment(const ExperimentConfig& cfg);

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const ReportRow& row);
void write_csv(std::ostream& out, const std::vector<ReportRow>& rows);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs);

struct SummaryRow {
  NodeId m = 0;
  double f = 0.0;
  std::size_t runs = 0;
  std::size_t failures = 0;
  MeanSe delta_S, delta_Sc, delta, t_total;
};

/// Mean and standard error per subsample size over successful rows.
std::vector<SummaryRow> summarize(const std::vector<ReportRow>& rows);
void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct BenchConfig {
  std::vector<NodeId> ns{10000, 20000, 40000, 60000, 80000};
  NodeId m = 2000;
  Label K = 5;
  double mean_degree = 40.0;  // alpha = mean_degree / n keeps degrees fixed across n
  double h = 4.0;
  std::size_t repeats = 3;
  std::uint64_t seed = 1;
  SpectralVariant method = SpectralVariant::Sc;
  unsigned threads = 1;
};

struct BenchPoint {
  NodeId n = 0;
  NodeId m = 0;
  double t_assign_s = 0.0;  // median over repeats
  double t_cluster_s = 0.0;
  double t_total_s = 0.0;
};

struct BenchResult {
  std::vector<BenchPoint> points;
  LinearFit fit;  // t_assign against n - m
};

BenchResult benchmark_scaling(const BenchConfig& cfg);

struct SpeedComparison {
  double predictive_s = 0.0;
  double full_s = 0.0;
  ErrorReport predictive_errors;
  ErrorReport full_errors;
};

/// Times predictive assignment against the same spectral variant on the whole
/// graph; both timings exclude generation.
SpeedComparison compare_with_full(const SparseGraph& g, const Membership& truth, Label K,
                                  const PredictiveConfig& cfg);

/// One integer label per line; K is one more than the largest label.
Membership read_labels(std::istream& in);
void write_labels(std::ostream& out, std::span<const Label> labels);

/// One node id per line.
std::vector<NodeId> read_node_ids(std::istream& in);
void write_node_ids(std::ostream& out, std::span<const NodeId> ids);

}  // namespace predassign
