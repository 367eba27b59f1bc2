#include "predassign/harness.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include <omp.h>

#include "predassign/error.hpp"
#include "predassign/rng.hpp"

namespace predassign {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_number(const std::string& value, std::size_t line, const std::string& key) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (in.fail() || !(in >> std::ws).eof()) {
    throw ParseError(line, "invalid value '" + value + "' for key '" + key + "'");
  }
  return out;
}

bool parse_bool(const std::string& value, std::size_t line, const std::string& key) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ParseError(line, "invalid boolean '" + value + "' for key '" + key + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n < 2) throw InvalidParams("n must be at least 2");
  if (K < 1) throw InvalidParams("k must be at least 1");
  if (replicates < 1) throw InvalidParams("replicates must be at least 1");
  if (model == Model::Sbm) {
    sbm_block_matrix(K, alpha, h);
  } else {
    dcbm_block_matrix(K, 1.0, h);
    if (!(density > 0.0 && density < 1.0)) throw InvalidParams("density must lie in (0, 1)");
  }
  block_sizes(n, resolved_proportions());
  if (m_specs.empty()) throw InvalidParams("at least one m value is required");
  for (NodeId m : resolved_m()) {
    if (m < K) throw InvalidParams("subsample size " + std::to_string(m) + " is below K");
  }
}

std::vector<double> ExperimentConfig::resolved_proportions() const {
  if (proportions.empty()) return balanced_proportions(K);
  if (proportions.size() != K) throw InvalidParams("need one proportion per community");
  return proportions;
}

std::vector<NodeId> ExperimentConfig::resolved_m() const {
  std::vector<NodeId> ms;
  for (const auto& spec : m_specs) ms.push_back(resolve_m(spec, n));
  return ms;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "name") cfg.name = value;
      else if (key == "model") cfg.model = parse_model(value);
      else if (key == "n") cfg.n = parse_number<NodeId>(value, line_no, key);
      else if (key == "k") cfg.K = parse_number<Label>(value, line_no, key);
      else if (key == "alpha") cfg.alpha = parse_number<double>(value, line_no, key);
      else if (key == "density") cfg.density = parse_number<double>(value, line_no, key);
      else if (key == "h") cfg.h = value == "inf" ? std::numeric_limits<double>::infinity()
                                                  : parse_number<double>(value, line_no, key);
      else if (key == "proportions") {
        cfg.proportions.clear();
        for (const auto& p : split_list(value)) cfg.proportions.push_back(parse_number<double>(p, line_no, key));
      } else if (key == "theta") {
        if (value == "constant") {
          cfg.theta = ThetaDistribution::constant();
        } else {
          const auto parts = split_list(value);
          if (parts.size() != 2) throw ParseError(line_no, "theta expects 'a,b' or 'constant'");
          cfg.theta = ThetaDistribution::beta(parse_number<double>(parts[0], line_no, key),
                                              parse_number<double>(parts[1], line_no, key));
        }
      } else if (key == "sampler") cfg.sampler = parse_sampler(value);
      else if (key == "method") cfg.method = parse_variant(value);
      else if (key == "m") cfg.m_specs = split_list(value);
      else if (key == "replicates") cfg.replicates = parse_number<std::size_t>(value, line_no, key);
      else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(value, line_no, key);
      else if (key == "threads") cfg.threads = parse_number<unsigned>(value, line_no, key);
      else if (key == "shuffle") cfg.shuffle = parse_bool(value, line_no, key);
      else if (key == "eig_tol") cfg.spectral.eig.tol = parse_number<double>(value, line_no, key);
      else if (key == "eig_max_iter") cfg.spectral.eig.max_iter = parse_number<std::size_t>(value, line_no, key);
      else if (key == "kmeans_restarts") cfg.spectral.kmeans.restarts = parse_number<std::size_t>(value, line_no, key);
      else if (key == "kmeans_max_iter") cfg.spectral.kmeans.max_lloyd = parse_number<std::size_t>(value, line_no, key);
      else if (key == "laplacian_tau") cfg.spectral.laplacian_tau = parse_number<double>(value, line_no, key);
      else if (key == "output") cfg.output = value;
      else throw ParseError(line_no, "unknown key '" + key + "'");
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParams("cannot open config file '" + path + "'");
  return parse_config(in);
}

double fraction_used(NodeId n, NodeId m, SpectralVariant method) {
  const double nn = n, mm = m;
  if (method == SpectralVariant::Basc) return (2.0 * nn * mm - mm * mm) / (nn * nn);
  return (mm * mm) / (nn * nn);
}

GeneratedNetwork generate_network(const ExperimentConfig& cfg, std::uint64_t seed) {
  const auto proportions = cfg.resolved_proportions();
  GeneratedNetwork net;
  if (cfg.model == Model::Sbm) {
    SbmSample s = sample_sbm(cfg.n, sbm_block_matrix(cfg.K, cfg.alpha, cfg.h), proportions, seed);
    net.graph = std::move(s.graph);
    net.truth = std::move(s.membership);
  } else {
    DcbmSample s = sample_dcbm(cfg.n, dcbm_block_matrix(cfg.K, 1.0, cfg.h), proportions,
                               cfg.density, cfg.theta, seed);
    net.graph = std::move(s.graph);
    net.truth = std::move(s.membership);
  }
  if (cfg.shuffle) {
    std::vector<NodeId> perm(cfg.n);
    std::iota(perm.begin(), perm.end(), NodeId{0});
    Rng rng(derive_seed(seed, 99));
    for (NodeId i = cfg.n; i > 1; --i) {
      std::swap(perm[i - 1], perm[uniform_below(rng, i)]);
    }
    net.graph = permute_nodes(net.graph, perm);
    std::vector<Label> labels(cfg.n);
    for (NodeId v = 0; v < cfg.n; ++v) labels[perm[v]] = net.truth.labels[v];
    net.truth.labels = std::move(labels);
  }
  return net;
}

std::vector<ReportRow> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto ms = cfg.resolved_m();
  const std::size_t R = cfg.replicates;
  std::vector<ReportRow> rows(ms.size() * R);

  const auto reps = static_cast<std::int64_t>(R);
#pragma omp parallel for num_threads(static_cast<int>(std::max(cfg.threads, 1u))) schedule(dynamic, 1)
  for (std::int64_t r = 0; r < reps; ++r) {
    const std::uint64_t rep_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(r));
    std::string gen_error;
    GeneratedNetwork net;
    try {
      net = generate_network(cfg, derive_seed(rep_seed, 0));
    } catch (const std::exception& e) {
      gen_error = e.what();
    }
    for (std::size_t gi = 0; gi < ms.size(); ++gi) {
      ReportRow& row = rows[gi * R + static_cast<std::size_t>(r)];
      row.run_id = cfg.name + "-m" + std::to_string(gi) + "-r" + std::to_string(r);
      row.model = cfg.model;
      row.n = cfg.n;
      row.K = cfg.K;
      row.m = ms[gi];
      row.sampler = cfg.sampler;
      row.method = cfg.method;
      row.seed = rep_seed;
      row.f = fraction_used(cfg.n, ms[gi], cfg.method);
      if (!gen_error.empty()) {
        row.status = "error: " + gen_error;
        continue;
      }
      try {
        PredictiveConfig pc;
        pc.model = cfg.model;
        pc.sampler = cfg.sampler;
        pc.m = ms[gi];
        pc.method = cfg.method;
        pc.seed = derive_seed(rep_seed, 1 + gi);
        pc.threads = 1;
        pc.spectral = cfg.spectral;
        const PredictiveResult res = predictive_assign(net.graph, cfg.K, pc);
        row.report = matched_errors(net.truth, res.labels, res.subsample);
        row.report.timings = res.timings;
        row.report.fallback_count = res.fallback_count;
        row.report.peak_mem_bytes = peak_memory_bytes();
      } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
      }
    }
  }
  return rows;
}

void write_csv_header(std::ostream& out) {
  out << "run_id,model,n,K,m,sampler,method,seed,delta_S,delta_Sc,delta,delta_tilde_S,"
         "t_sample_s,t_cluster_s,t_assign_s,t_total_s,peak_mem_bytes,fallback_count,f,status\n";
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + "\"";
}

}  // namespace

void write_csv_row(std::ostream& out, const ReportRow& row) {
  const ErrorReport& r = row.report;
  const bool ok = row.status == "ok";
  std::ostringstream line;
  line << std::setprecision(10);
  line << csv_field(row.run_id) << ',' << to_string(row.model) << ',' << row.n << ',' << row.K << ','
       << row.m << ',' << to_string(row.sampler) << ',' << to_string(row.method) << ',' << row.seed << ',';
  if (ok) {
    line << r.delta_S << ',' << r.delta_Sc << ',' << r.delta << ',' << r.delta_tilde_S << ','
         << r.timings.sample_s << ',' << r.timings.cluster_s << ',' << r.timings.assign_s << ','
         << r.timings.total_s << ',' << r.peak_mem_bytes << ',' << r.fallback_count << ',';
  } else {
    line << ",,,,,,,,,,";
  }
  line << row.f << ',' << csv_field(row.status) << '\n';
  out << line.str();
}

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  write_csv_header(out);
  for (const auto& row : rows) write_csv_row(out, row);
}

MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe out;
  if (xs.empty()) return out;
  const double n = static_cast<double>(xs.size());
  out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return out;
}

std::vector<SummaryRow> summarize(const std::vector<ReportRow>& rows) {
  std::vector<SummaryRow> out;
  std::map<NodeId, std::size_t> slot;
  std::vector<std::array<std::vector<double>, 4>> values;
  for (const auto& row : rows) {
    auto [it, inserted] = slot.try_emplace(row.m, out.size());
    if (inserted) {
      SummaryRow s;
      s.m = row.m;
      s.f = row.f;
      out.push_back(s);
      values.emplace_back();
    }
    SummaryRow& s = out[it->second];
    ++s.runs;
    if (row.status != "ok") {
      ++s.failures;
      continue;
    }
    auto& v = values[it->second];
    v[0].push_back(row.report.delta_S);
    v[1].push_back(row.report.delta_Sc);
    v[2].push_back(row.report.delta);
    v[3].push_back(row.report.timings.total_s);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].delta_S = mean_se(values[i][0]);
    out[i].delta_Sc = mean_se(values[i][1]);
    out[i].delta = mean_se(values[i][2]);
    out[i].t_total = mean_se(values[i][3]);
  }
  return out;
}

void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "m,f,runs,failures,delta_S_mean,delta_S_se,delta_Sc_mean,delta_Sc_se,delta_mean,delta_se,"
         "t_total_mean,t_total_se\n";
  out << std::setprecision(6);
  for (const auto& s : rows) {
    out << s.m << ',' << s.f << ',' << s.runs << ',' << s.failures << ',' << s.delta_S.mean << ','
        << s.delta_S.se << ',' << s.delta_Sc.mean << ',' << s.delta_Sc.se << ',' << s.delta.mean << ','
        << s.delta.se << ',' << s.t_total.mean << ',' << s.t_total.se << '\n';
  }
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidParams("line fit needs two or more points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = (sxx > 0.0 && syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 0.0;
  return fit;
}

namespace {

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t mid = xs.size() / 2;
  return xs.size() % 2 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
}

}  // namespace

BenchResult benchmark_scaling(const BenchConfig& cfg) {
  if (cfg.ns.size() < 2) throw InvalidParams("scaling benchmark needs at least two values of n");
  BenchResult out;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < cfg.ns.size(); ++i) {
    const NodeId n = cfg.ns[i];
    if (cfg.m > n) throw InvalidParams("benchmark m exceeds n=" + std::to_string(n));
    const double alpha = std::min(1.0, cfg.mean_degree / n);
    const SbmSample net = sample_sbm(n, sbm_block_matrix(cfg.K, alpha, cfg.h),
                                     balanced_proportions(cfg.K), derive_seed(cfg.seed, i));
    std::vector<double> ta, tc, tt;
    for (std::size_t rep = 0; rep < std::max<std::size_t>(cfg.repeats, 1); ++rep) {
      PredictiveConfig pc;
      pc.model = Model::Sbm;
      pc.m = cfg.m;
      pc.method = cfg.method;
      pc.threads = cfg.threads;
      pc.seed = derive_seed(derive_seed(cfg.seed, i), 1000 + rep);
      const PredictiveResult res = predictive_assign(net.graph, cfg.K, pc);
      ta.push_back(res.timings.assign_s);
      tc.push_back(res.timings.cluster_s);
      tt.push_back(res.timings.total_s);
    }
    BenchPoint p{n, cfg.m, median(ta), median(tc), median(tt)};
    out.points.push_back(p);
    x.push_back(static_cast<double>(n - cfg.m));
    y.push_back(p.t_assign_s);
  }
  out.fit = fit_line(x, y);
  return out;
}

SpeedComparison compare_with_full(const SparseGraph& g, const Membership& truth, Label K,
                                  const PredictiveConfig& cfg) {
  SpeedComparison out;
  const PredictiveResult res = predictive_assign(g, K, cfg);
  out.predictive_s = res.timings.total_s;
  out.predictive_errors = matched_errors(truth, res.labels, res.subsample);

  const auto t0 = std::chrono::steady_clock::now();
  const Membership full = cluster_full_network(g, K, cfg.method, cfg.spectral, derive_seed(cfg.seed, 2));
  out.full_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.full_errors = matched_errors(truth, full, SubsampleIndex::all(g.num_nodes()));
  return out;
}


namespace {

template <class T>
std::vector<T> read_integers(std::istream& in, const char* what) {
  std::vector<T> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::istringstream ss(body);
    std::int64_t v = -1;
    ss >> v;
    if (ss.fail() || !(ss >> std::ws).eof() || v < 0 ||
        v >= static_cast<std::int64_t>(std::numeric_limits<T>::max())) {
      throw ParseError(line_no, std::string("invalid ") + what + " '" + body + "'");
    }
    out.push_back(static_cast<T>(v));
  }
  return out;
}

}  // namespace

Membership read_labels(std::istream& in) {
  Membership m;
  m.labels = read_integers<Label>(in, "label");
  for (Label l : m.labels) m.K = std::max(m.K, l + 1);
  return m;
}

void write_labels(std::ostream& out, std::span<const Label> labels) {
  for (Label l : labels) out << l << '\n';
}

std::vector<NodeId> read_node_ids(std::istream& in) {
  return read_integers<NodeId>(in, "node id");
}

void write_node_ids(std::ostream& out, std::span<const NodeId> ids) {
  for (NodeId v : ids) out << v << '\n';
}

}  // namespace predassign
