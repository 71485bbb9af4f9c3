/* Copyright 2026 The PimGNN Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "pimgnn/cli.h"

#include <algorithm>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pimgnn/baselines.h"
#include "pimgnn/cost_profile.h"
#include "pimgnn/error.h"
#include "pimgnn/gnn.h"
#include "pimgnn/graph_io.h"
#include "pimgnn/serialize.h"
#include "pimgnn/simulator.h"
#include "pimgnn/tile_plan.h"
#include "pimgnn/tuner.h"

namespace pimgnn::cli {

namespace {

struct GraphOpts {
  std::string path;
  std::size_t synthetic = 0;
  double avg_degree = 16.0;
  double exponent = 2.1;
  std::uint64_t seed = 1;
  std::string kind = "int32";
};

struct TopoOpts {
  std::size_t devices = 32;
  std::size_t cores = 64;
  std::size_t threads = 16;
  std::uint64_t bank = 64ull << 20;
  std::uint64_t scratchpad = 64ull << 10;
  std::string profile;         // ground profile JSON
  std::string tuner_profile;   // profile the tuner predicts with
};

struct ConfigOpts {
  std::string config;   // "auto" or a JSON file
  std::size_t sp = 0, dp = 0, grp = 0;
  std::string format = "csr";
  std::string cluster_balance = "edg";
  std::string core_balance = "edg";
  std::string sync = "lf";
};

struct OutputOpts {
  std::string output;
  std::string report_format = "json";
};

void add_graph(CLI::App* app, GraphOpts& g) {
  app->add_option("--graph", g.path, "Matrix Market adjacency file");
  app->add_option("--synthetic", g.synthetic, "Generate a power-law graph with this many vertices");
  app->add_option("--avg-degree", g.avg_degree, "Average degree of the synthetic graph");
  app->add_option("--exponent", g.exponent, "Power-law exponent of the synthetic graph");
  app->add_option("--seed", g.seed, "Seed for generated graphs and features");
  app->add_option("--kind", g.kind, "Value kind: int32, int16, int8, fp32");
}

void add_topo(CLI::App* app, TopoOpts& t) {
  app->add_option("--devices", t.devices, "PIM devices");
  app->add_option("--cores", t.cores, "PIM cores per device");
  app->add_option("--threads", t.threads, "Threads per core");
  app->add_option("--bank-bytes", t.bank, "Bank capacity per core");
  app->add_option("--scratchpad-bytes", t.scratchpad, "Scratchpad capacity per core");
  app->add_option("--profile", t.profile, "Cost profile JSON used by the simulator");
  app->add_option("--tuner-profile", t.tuner_profile,
                  "Cost profile JSON used by the tuner (default: calibrated from --profile)");
}

void add_config(CLI::App* app, ConfigOpts& c) {
  app->add_option("--config", c.config, "'auto' or a config / tune result JSON file");
  app->add_option("--sp", c.sp, "Sparse partitions");
  app->add_option("--dp", c.dp, "Dense partitions");
  app->add_option("--grp", c.grp, "Clusters per device (1, 2, 4)");
  app->add_option("--format", c.format, "Sparse format: csr, coo");
  app->add_option("--cluster-balance", c.cluster_balance, "Balance across cores: ver, edg");
  app->add_option("--core-balance", c.core_balance, "Balance across threads: ver, edg");
  app->add_option("--sync", c.sync, "Thread synchronization: cg, lf");
}

void add_output(CLI::App* app, OutputOpts& o) {
  app->add_option("--output", o.output, "Write the result here instead of stdout");
  app->add_option("--report-format", o.report_format, "Report format: json, csv")
      ->check(CLI::IsMember({"json", "csv"}));
}

SparseMatrix load_graph(const GraphOpts& g) {
  const ValueKind kind = parse_value_kind(g.kind);
  if (!g.path.empty() && g.synthetic > 0) {
    throw ConfigError("use either --graph or --synthetic, not both");
  }
  if (!g.path.empty()) return load_matrix_market(g.path, kind);
  if (g.synthetic == 0) throw ConfigError("a graph is required: --graph FILE or --synthetic N");
  SyntheticGraphSpec spec;
  spec.n_vertices = g.synthetic;
  spec.avg_degree = g.avg_degree;
  spec.exponent = g.exponent;
  spec.seed = g.seed;
  return generate_power_law(spec).with_kind(kind);
}

PimTopology make_topo(const TopoOpts& t) {
  PimTopology topo;
  topo.n_devices = t.devices;
  topo.cores_per_device = t.cores;
  topo.threads_per_core = t.threads;
  topo.pipeline_saturation_threads = std::min<std::size_t>(16, t.threads);
  topo.bank_capacity = t.bank;
  topo.scratchpad_capacity = t.scratchpad;
  topo.validate();
  return topo;
}

CostProfile ground_profile(const TopoOpts& t) {
  if (t.profile.empty()) return default_upmem_profile();
  return profile_from_json(io::read_text_file(t.profile));
}

CostProfile tuner_profile(const TopoOpts& t, const PimTopology& topo, const CostProfile& ground) {
  if (!t.tuner_profile.empty()) return profile_from_json(io::read_text_file(t.tuner_profile));
  return tuner::calibrate(topo, ground);
}

bool explicit_config(const ConfigOpts& c) { return c.sp || c.dp || c.grp; }

// Explicit geometry or a file; nullopt means tune.
std::optional<PafConfig> resolve_config(const ConfigOpts& c) {
  const bool file = !c.config.empty() && c.config != "auto";
  if (explicit_config(c) && !c.config.empty()) {
    throw ConfigError("give either --config or --sp/--dp/--grp, not both");
  }
  if (file) return io::config_from_json(io::read_text_file(c.config));
  if (!explicit_config(c)) return std::nullopt;
  if (!c.sp || !c.dp || !c.grp) throw ConfigError("--sp, --dp and --grp must all be given");
  PafConfig cfg;
  cfg.sp = c.sp;
  cfg.dp = c.dp;
  cfg.grp = c.grp;
  cfg.format = parse_format(c.format);
  cfg.cluster_balance = parse_balance(c.cluster_balance);
  cfg.core_balance = parse_balance(c.core_balance);
  cfg.sync = parse_sync(c.sync);
  return cfg;
}

void emit(const std::string& text, const OutputOpts& o, std::ostream& out) {
  if (o.output.empty()) {
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
  } else {
    io::write_text_file(o.output, text);
  }
}

std::string render(const ExecutionReport& r, const OutputOpts& o) {
  if (o.report_format == "csv") {
    std::ostringstream ss;
    write_report_csv(ss, r);
    return ss.str();
  }
  return report_to_json(r);
}

DenseMatrix features_for(const std::string& path, std::size_t n, std::size_t k, ValueKind kind,
                         std::uint64_t seed) {
  if (!path.empty()) {
    DenseMatrix f = io::tensor_from_json(io::read_text_file(path));
    if (f.n_rows() != n || f.n_cols() != k || f.kind() != kind) {
      throw DimensionError("features must be " + std::to_string(n) + "x" + std::to_string(k) +
                           " " + std::string(to_string(kind)) + ", file holds " +
                           std::to_string(f.n_rows()) + "x" + std::to_string(f.n_cols()) + " " +
                           std::string(to_string(f.kind())));
    }
    return f;
  }
  return generate_dense(n, k, -8, 8, seed, kind);
}

// --- subcommands -----------------------------------------------------------

struct IngestArgs {
  GraphOpts graph;
  std::string normalize;
  std::string save;
  OutputOpts out;
};

void run_ingest(const IngestArgs& a, std::ostream& out) {
  SparseMatrix m = load_graph(a.graph);
  if (!a.normalize.empty()) m = normalize_adjacency(m, parse_model_kind(a.normalize));
  if (!a.save.empty()) save_matrix_market(a.save, m);
  const DegreeStats s = degree_stats(m);
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["name"] = a.graph.path.empty() ? "synthetic-" + std::to_string(a.graph.synthetic) : a.graph.path;
  j["vertices"] = m.n_rows();
  j["edges"] = m.nnz();
  j["kind"] = std::string(to_string(m.kind()));
  j["min_degree"] = s.min_nnz;
  j["max_degree"] = s.max_nnz;
  j["avg_degree"] = s.avg_nnz;
  j["std_degree"] = s.std_nnz;
  emit(j.dump(2), a.out, out);
}

struct PlanArgs {
  GraphOpts graph;
  TopoOpts topo;
  ConfigOpts cfg;
  std::size_t hidden = 256;
  bool cores = false;
  OutputOpts out;
};

void run_plan(const PlanArgs& a, std::ostream& out) {
  const SparseMatrix m = load_graph(a.graph);
  const PimTopology topo = make_topo(a.topo);
  std::optional<PafConfig> cfg = resolve_config(a.cfg);
  if (!cfg) {
    const CostProfile ground = ground_profile(a.topo);
    cfg = tuner::tune(m, a.hidden, topo, tuner_profile(a.topo, topo, ground),
                      parse_format(a.cfg.format))
              .best;
  }
  const paf::TilePlan plan = paf::build_plan(m, a.hidden, *cfg, topo);
  paf::validate_capacity(plan, topo);
  emit(io::plan_to_json(plan, a.cores), a.out, out);
}

struct TuneArgs {
  GraphOpts graph;
  TopoOpts topo;
  std::size_t hidden = 256;
  std::string format = "csr";
  OutputOpts out;
};

void run_tune(const TuneArgs& a, std::ostream& out) {
  const SparseMatrix m = load_graph(a.graph);
  const PimTopology topo = make_topo(a.topo);
  const CostProfile ground = ground_profile(a.topo);
  const auto result =
      tuner::tune(m, a.hidden, topo, tuner_profile(a.topo, topo, ground), parse_format(a.format));
  emit(io::tune_result_to_json(result, a.hidden), a.out, out);
}

struct AggrArgs {
  GraphOpts graph;
  TopoOpts topo;
  ConfigOpts cfg;
  std::size_t hidden = 256;
  std::string features;
  std::string normalize;
  std::string output_matrix;
  bool verify = false;
  OutputOpts out;
};

void run_aggr(const AggrArgs& a, std::ostream& out) {
  SparseMatrix m = load_graph(a.graph);
  if (!a.normalize.empty()) m = normalize_adjacency(m, parse_model_kind(a.normalize));
  const PimTopology topo = make_topo(a.topo);
  const CostProfile ground = ground_profile(a.topo);
  std::optional<PafConfig> cfg = resolve_config(a.cfg);
  if (!cfg) {
    cfg = tuner::tune(m, a.hidden, topo, tuner_profile(a.topo, topo, ground),
                      parse_format(a.cfg.format))
              .best;
  }
  const DenseMatrix f = features_for(a.features, m.n_rows(), a.hidden, m.kind(), a.graph.seed);
  const paf::TilePlan plan = paf::build_plan(m, a.hidden, *cfg, topo);
  paf::validate_capacity(plan, topo);
  const sim::SimResult r = sim::simulate_aggregation(plan, f, ground);
  if (a.verify && !(r.output == dense_spmm_oracle(m, f))) {
    throw Error("simulated output differs from the reference product");
  }
  if (!a.output_matrix.empty()) io::write_text_file(a.output_matrix, io::tensor_to_json(r.output));
  emit(render(r.report, a.out), a.out, out);
}

struct InferArgs {
  GraphOpts graph;
  TopoOpts topo;
  ConfigOpts cfg;
  std::string model = "gcn";
  std::size_t layers = 3;
  std::size_t hidden = 256;
  std::string weights;
  std::string features;
  std::string output_matrix;
  OutputOpts out;
};

void run_infer(const InferArgs& a, std::ostream& out) {
  const SparseMatrix m = load_graph(a.graph);
  const PimTopology topo = make_topo(a.topo);
  const CostProfile ground = ground_profile(a.topo);
  gnn::GnnModel model;
  if (!a.weights.empty()) {
    model = io::model_from_json(io::read_text_file(a.weights));
  } else {
    model = gnn::random_model(parse_model_kind(a.model), a.hidden, a.hidden, a.layers, m.kind(),
                              a.graph.seed + 1);
  }
  const std::size_t in_dim = model.layers.empty() ? a.hidden : model.layers.front().in_dim();
  const DenseMatrix f = features_for(a.features, m.n_rows(), in_dim, m.kind(), a.graph.seed);
  gnn::InferenceOptions opts;
  opts.cfg = resolve_config(a.cfg);
  opts.format = parse_format(a.cfg.format);
  opts.topo = topo;
  opts.profile = ground;
  opts.tuner_profile = tuner_profile(a.topo, topo, ground);
  const gnn::InferenceResult r = gnn::run_inference(model, m, f, opts);
  if (!a.output_matrix.empty()) io::write_text_file(a.output_matrix, io::tensor_to_json(r.output));
  if (a.out.report_format == "csv") {
    std::ostringstream ss;
    write_report_csv(ss, r.total, true, false);
    for (const ExecutionReport& l : r.layers) write_report_csv(ss, l, false, false);
    emit(ss.str(), a.out, out);
    return;
  }
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["model"] = std::string(to_string(model.kind));
  j["config"] = nlohmann::ordered_json::parse(io::config_to_json(r.cfg));
  j["total"] = nlohmann::ordered_json::parse(report_to_json(r.total, false));
  nlohmann::ordered_json layers = nlohmann::ordered_json::array();
  for (const ExecutionReport& l : r.layers) {
    layers.push_back(nlohmann::ordered_json::parse(report_to_json(l, false)));
  }
  j["layers"] = std::move(layers);
  emit(j.dump(2), a.out, out);
}

struct BenchArgs {
  GraphOpts graph;
  TopoOpts topo;
  std::size_t hidden = 256;
  std::vector<std::string> schemes = {"pygim-csr", "pygim-coo", "grande", "sp1", "sp2"};
  bool verify = false;
  std::string output;
};

std::string csv_escape(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void run_bench(const BenchArgs& a, std::ostream& out) {
  const SparseMatrix m = load_graph(a.graph);
  const PimTopology topo = make_topo(a.topo);
  const CostProfile ground = ground_profile(a.topo);
  const CostProfile tprof = tuner_profile(a.topo, topo, ground);
  std::optional<DenseMatrix> f, want;
  if (a.verify) {
    f = generate_dense(m.n_rows(), a.hidden, -8, 8, a.graph.seed, m.kind());
    want = dense_spmm_oracle(m, *f);
  }

  std::ostringstream ss;
  ss << "scheme,config,status,step,seconds,bytes,padding_bytes,detail\n";
  for (const std::string& scheme : a.schemes) {
    ExecutionReport r;
    std::string status = "ok", detail, config = scheme;
    try {
      if (scheme == "pygim-csr" || scheme == "pygim-coo") {
        const SparseFormat fmt = scheme == "pygim-csr" ? SparseFormat::kCSR : SparseFormat::kCOO;
        const PafConfig cfg = tuner::tune(m, a.hidden, topo, tprof, fmt).best;
        config = cfg.label();
        const paf::TilePlan plan = paf::build_plan(m, a.hidden, cfg, topo);
        paf::validate_capacity(plan, topo);
        if (a.verify) {
          const auto s = sim::simulate_aggregation(plan, *f, ground);
          r = s.report;
          if (!(s.output == *want)) status = "mismatch";
        } else {
          r = sim::account_aggregation(plan, ground);
        }
      } else {
        const sim::BaselineKind kind = sim::parse_baseline(scheme);
        if (a.verify) {
          const auto s = sim::simulate_baseline(kind, m, *f, topo, ground);
          r = s.report;
          if (!(s.output == *want)) status = "mismatch";
        } else {
          r = sim::account_baseline(kind, m, a.hidden, topo, ground);
        }
      }
    } catch (const CapacityError& e) {
      status = "capacity_error";
      detail = e.what();
    } catch (const ScratchpadError& e) {
      status = "scratchpad_error";
      detail = e.what();
    } catch (const ConfigError& e) {
      status = "config_error";
      detail = e.what();
    }
    const std::pair<const char*, double> steps[] = {
        {"host_pim", r.t_host_pim}, {"kernel", r.t_kernel}, {"pim_host", r.t_pim_host},
        {"merge", r.t_merge},       {"other", r.t_other},   {"total", r.t_total}};
    for (const auto& [step, seconds] : steps) {
      ss << scheme << ',' << csv_escape(config) << ',' << status << ',' << step << ',';
      if (status == "ok" || status == "mismatch") {
        std::uint64_t bytes = 0, pad = 0;
        if (std::string_view(step) == "host_pim") {
          bytes = r.bytes_to_pim;
          pad = r.padding_to_pim;
        } else if (std::string_view(step) == "pim_host") {
          bytes = r.bytes_from_pim;
          pad = r.padding_from_pim;
        } else if (std::string_view(step) == "total") {
          bytes = r.bytes_to_pim + r.bytes_from_pim;
          pad = r.padding_bytes;
        }
        ss << fmt_double(seconds) << ',' << bytes << ',' << pad;
      } else {
        ss << ",,";
      }
      ss << ',' << csv_escape(detail) << '\n';
    }
  }
  OutputOpts o;
  o.output = a.output;
  emit(ss.str(), o, out);
}

struct CalibrateArgs {
  TopoOpts topo;
  std::string output;
};

void run_calibrate(const CalibrateArgs& a, std::ostream& out) {
  const PimTopology topo = make_topo(a.topo);
  const CostProfile p = tuner::calibrate(topo, ground_profile(a.topo));
  OutputOpts o;
  o.output = a.output;
  emit(profile_to_json(p), o, out);
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Parallelism-fusion SpMM and GNN inference on a simulated near-bank PIM machine",
               "pimgnn");
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Load a graph and print its degree statistics");
  add_graph(c_ingest, ingest.graph);
  c_ingest->add_option("--normalize", ingest.normalize, "Normalize for a model: gcn, gin, sage");
  c_ingest->add_option("--save", ingest.save, "Write the (normalized) graph as Matrix Market");
  add_output(c_ingest, ingest.out);

  PlanArgs plan;
  auto* c_plan = app.add_subcommand("plan", "Build and print the tiling for a configuration");
  add_graph(c_plan, plan.graph);
  add_topo(c_plan, plan.topo);
  add_config(c_plan, plan.cfg);
  c_plan->add_option("--hidden", plan.hidden, "Hidden size (feature columns)");
  c_plan->add_flag("--cores-detail", plan.cores, "Include per-core assignments");
  add_output(c_plan, plan.out);

  TuneArgs tune;
  auto* c_tune = app.add_subcommand("tune", "Search configurations with the analytical model");
  add_graph(c_tune, tune.graph);
  add_topo(c_tune, tune.topo);
  c_tune->add_option("--hidden", tune.hidden, "Hidden size (feature columns)");
  c_tune->add_option("--format", tune.format, "Sparse format: csr, coo");
  add_output(c_tune, tune.out);

  AggrArgs aggr;
  auto* c_aggr = app.add_subcommand("run-aggr", "Simulate one aggregation and report its cost");
  add_graph(c_aggr, aggr.graph);
  add_topo(c_aggr, aggr.topo);
  add_config(c_aggr, aggr.cfg);
  c_aggr->add_option("--hidden", aggr.hidden, "Hidden size (feature columns)");
  c_aggr->add_option("--features", aggr.features, "Feature tensor JSON (default: random)");
  c_aggr->add_option("--normalize", aggr.normalize, "Normalize the adjacency: gcn, gin, sage");
  c_aggr->add_option("--output-matrix", aggr.output_matrix, "Write the output tensor JSON here");
  c_aggr->add_flag("--verify", aggr.verify, "Check the output against the reference product");
  add_output(c_aggr, aggr.out);

  InferArgs infer;
  auto* c_infer = app.add_subcommand("infer", "Run multi-layer GNN inference");
  add_graph(c_infer, infer.graph);
  add_topo(c_infer, infer.topo);
  add_config(c_infer, infer.cfg);
  c_infer->add_option("--model", infer.model, "Model: gcn, gin, sage");
  c_infer->add_option("--layers", infer.layers, "Layers of a generated model");
  c_infer->add_option("--hidden", infer.hidden, "Hidden size of a generated model");
  c_infer->add_option("--weights", infer.weights, "Model JSON (default: generated)");
  c_infer->add_option("--features", infer.features, "Feature tensor JSON (default: random)");
  c_infer->add_option("--output-matrix", infer.output_matrix, "Write the output tensor JSON here");
  add_output(c_infer, infer.out);

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "Compare PyGim configurations with the baselines");
  add_graph(c_bench, bench.graph);
  add_topo(c_bench, bench.topo);
  c_bench->add_option("--hidden", bench.hidden, "Hidden size (feature columns)");
  c_bench->add_option("--schemes", bench.schemes, "pygim-csr, pygim-coo, grande, sp1, sp2")
      ->delimiter(',')
      ->check(CLI::IsMember({"pygim-csr", "pygim-coo", "grande", "sp1", "sp2"}));
  c_bench->add_flag("--verify", bench.verify, "Execute numerically and compare to the reference");
  c_bench->add_option("--output", bench.output, "Write the CSV here instead of stdout");

  CalibrateArgs cal;
  auto* c_cal = app.add_subcommand("calibrate", "Sample a cost profile at the calibration grid");
  add_topo(c_cal, cal.topo);
  c_cal->add_option("--output", cal.output, "Write the profile JSON here instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: " << msg << '\n';
    return 2;
  }

  try {
    if (c_ingest->parsed()) run_ingest(ingest, out);
    if (c_plan->parsed()) run_plan(plan, out);
    if (c_tune->parsed()) run_tune(tune, out);
    if (c_aggr->parsed()) run_aggr(aggr, out);
    if (c_infer->parsed()) run_infer(infer, out);
    if (c_bench->parsed()) run_bench(bench, out);
    if (c_cal->parsed()) run_calibrate(cal, out);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: " << msg << '\n';
    return 1;
  }
  return 0;
}

}  // namespace pimgnn::cli
