// Copyright 2026 The eigentomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "eigentomo/figures.hpp"
#include "eigentomo/json_io.hpp"
#include "eigentomo/measurement.hpp"
#include "eigentomo/nqs.hpp"
#include "eigentomo/oracle.hpp"
#include "eigentomo/reconstructor.hpp"
#include "eigentomo/trainer.hpp"

namespace eigentomo::cli {

namespace {

namespace fs = std::filesystem;
using io::Json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::optional<int> threads;
};

struct SynthOptions {
  std::string preset;
  int w = 0;
  std::vector<double> spectrum;
  double perturbation = 0.1;
  std::string bases = "full";
  std::int64_t shots = 0;
};

struct TrainOptions {
  std::string cost = "l15";
  double lr = TrainConfig{}.learning_rate;
  double phase_init_scale = TrainConfig{}.phase_init_scale;
  int epochs = 20000;
  int restarts = 1;
  int batch_bases = 0;
  int patience = 200;
  double tol_rel = 1e-6;
  double orth_weight = 1.0;
};

struct ReconstructOptions {
  std::string data;
  std::string truth;
  std::string target;
  int max_rank = 2;
  double floor = 1e-6;
  TrainOptions train;
};

struct VerifyOptions {
  std::vector<int> dims{2, 4, 8, 16};
  int states = 100;
  int trials = 200;
  bool inject_fault = false;
};

struct FigOptions {
  std::string mode;
  std::string truth;
  std::string state;
  int perturbations = 50;
  double min_strength = 1e-3;
  double max_strength = 0.3;
  double floor = 1e-6;
};

struct Context {
  const std::vector<std::string>& args;
  GlobalOptions global;
  int threads = 1;
  fs::path out_dir;
  Json outputs = Json::array();
  std::ostream& out;

  fs::path output(const std::string& name) {
    outputs.push_back(name);
    return out_dir / name;
  }
};

int resolve_threads(const std::optional<int>& flag) {
  if (flag) {
    if (*flag < 1) throw UsageError("--threads must be >= 1");
    return *flag;
  }
  if (const char* env = std::getenv("EIGENTOMO_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 4096) throw UsageError("EIGENTOMO_THREADS must be a positive integer");
    return static_cast<int>(v);
  }
  return 1;
}

std::string csv_number(double x) { return std::isfinite(x) ? io::format_double(x) : "nan"; }

void write_manifest(Context& ctx, const std::string& command, Json flags, Json inputs, double seconds) {
  Json argv = Json::array();
  for (const auto& a : ctx.args) argv.push_back(a);
  Json m;
  m["command"] = command;
  m["argv"] = std::move(argv);
  m["flags"] = std::move(flags);
  m["seed"] = ctx.global.seed;
  m["threads"] = ctx.threads;
  m["out_dir"] = ctx.out_dir.string();
  m["inputs"] = std::move(inputs);
  m["outputs"] = ctx.outputs;
  m["version"] = EIGENTOMO_VERSION;
  m["duration_seconds"] = seconds;
  io::write_json_file(ctx.out_dir / "manifest.json", m);
}

TrainConfig make_train_config(const TrainOptions& o, std::uint64_t seed, int threads) {
  TrainConfig cfg;
  try {
    cfg.cost.kind = parse_cost_kind(o.cost);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  cfg.cost.orth_weight = o.orth_weight;
  cfg.learning_rate = o.lr;
  cfg.phase_init_scale = o.phase_init_scale;
  cfg.max_epochs = o.epochs;
  cfg.restarts = o.restarts;
  if (o.batch_bases > 0) cfg.batch_bases = o.batch_bases;
  cfg.patience = o.patience;
  cfg.tol_rel = o.tol_rel;
  cfg.seed = seed;
  cfg.threads = threads;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

Json train_flags(const TrainOptions& o) {
  Json j;
  j["cost"] = o.cost;
  j["lr"] = o.lr;
  j["phase_init_scale"] = o.phase_init_scale;
  j["epochs"] = o.epochs;
  j["restarts"] = o.restarts;
  j["batch_bases"] = o.batch_bases > 0 ? Json(o.batch_bases) : Json(nullptr);
  j["patience"] = o.patience;
  j["tol_rel"] = o.tol_rel;
  j["orth_weight"] = o.orth_weight;
  return j;
}

// ---------------------------------------------------------------------------

int cmd_synth(Context& ctx, const SynthOptions& o) {
  if (o.preset.empty() == (o.w == 0)) throw UsageError("synth needs exactly one of --preset or --w");
  DensityMatrix rho = DensityMatrix::maximally_mixed(2);
  StateVector target = StateVector::basis_state(2, 0);
  int n = 0;
  if (!o.preset.empty()) {
    if (o.preset != "bell-mixture") throw UsageError("unknown preset '" + o.preset + "'");
    if (!o.spectrum.empty()) throw UsageError("--spectrum cannot be combined with --preset");
    rho = bell_mixture();
    target = bell_states().front();
    n = 2;
  } else {
    if (o.w < 1 || o.w > kExactModeCap) throw UsageError("--w must be in [1, 12]");
    if (o.spectrum.empty()) throw UsageError("--w needs --spectrum");
    try {
      rho = make_w_mixture(o.w, o.spectrum, ctx.global.seed, o.perturbation);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    target = w_state(o.w);
    n = o.w;
  }
  BasisMode mode;
  if (o.bases == "full") {
    mode = BasisMode::kFull;
  } else if (o.bases == "compressed") {
    mode = BasisMode::kCompressed;
  } else {
    throw UsageError("--bases must be full or compressed");
  }
  if (o.shots < 0) throw UsageError("--shots must be >= 0");
  const auto bases = generate_basis_set(n, mode, ctx.global.seed);
  const MeasurementDataset data =
      o.shots > 0 ? sample_dataset(rho, bases, o.shots, ctx.global.seed) : exact_dataset(rho, bases);

  io::write_json_file(ctx.output("state.json"), io::to_json(rho));
  io::write_json_file(ctx.output("target.json"), io::to_json(target));
  write_dataset_file(ctx.output("dataset.jsonl").string(), data);
  ctx.out << "synth: " << n << " qubits, " << bases.size() << " bases, " << data.size() << " records -> "
          << ctx.out_dir.string() << "\n";
  return kExitOk;
}

int cmd_reconstruct(Context& ctx, const ReconstructOptions& o) {
  if (o.max_rank < 1) throw UsageError("--max-rank must be >= 1");
  if (!(o.floor > 0.0)) throw UsageError("--floor must be > 0");
  const TrainConfig cfg = make_train_config(o.train, ctx.global.seed, ctx.threads);
  const MeasurementDataset data = read_dataset_file(o.data);
  std::optional<DensityMatrix> truth;
  if (!o.truth.empty()) truth = io::density_matrix_from_json(io::read_json_file(o.truth));
  std::optional<StateVector> target;
  if (!o.target.empty()) target = io::state_vector_from_json(io::read_json_file(o.target));

  const Reconstruction result = reconstruct(data, o.max_rank, cfg, o.floor, truth ? &*truth : nullptr);
  io::write_json_file(ctx.output("result.json"), to_json(result));
  for (std::size_t k = 0; k < result.logs.size(); ++k) {
    io::write_text_file(ctx.output("training_step" + std::to_string(k + 1) + ".csv"), result.logs[k].to_csv());
  }

  const double nan = std::nan("");
  auto step_value = [&](std::size_t i, auto field) {
    if (i >= result.approx.pairs.size()) return nan;
    return field(result.report.steps[i]);
  };
  double p1 = nan, p2 = nan, kappa2 = nan, p3 = nan, f = nan, rf = nan, f_target = nan, ov_target = nan;
  if (truth) {
    const Spectrum s = eigendecompose(*truth);
    p1 = s.eigenvalues[0];
    if (s.eigenvalues.size() > 1) {
      p2 = s.eigenvalues[1];
      kappa2 = s.kappa(2);
    }
    if (s.eigenvalues.size() > 2) p3 = s.eigenvalues[2];
    f = fidelity(*truth, result.approx.density());
    rf = relative_fidelity(*truth, result.approx);
    if (target) f_target = pure_fidelity(*truth, *target);
  }
  if (target) ov_target = overlap(result.approx.pairs.front().psi, *target);
  auto ov = [&](std::size_t i) {
    return step_value(i, [&](const StepRecord& s) { return s.eigenstate_fidelity.value_or(nan); });
  };
  auto pb = [&](std::size_t i) { return step_value(i, [](const StepRecord& s) { return s.p_hat; }); };

  std::ostringstream csv;
  csv << "N,p1,p2,kappa2,p3,ov1,p1b,ov2,p2b,F,RF,F_rho_W,ov1_W,rank\n";
  csv << data.n_qubits();
  for (double v : {p1, p2, kappa2, p3, ov(0), pb(0), ov(1), pb(1), f, rf, f_target, ov_target}) {
    csv << ',' << csv_number(v);
  }
  csv << ',' << result.approx.pairs.size() << '\n';
  io::write_text_file(ctx.output("report.csv"), csv.str());

  for (const auto& s : result.report.steps) {
    ctx.out << "step " << s.step << ": p_hat=" << io::format_double(s.p_hat) << " accepted=" << (s.accepted ? 1 : 0);
    if (s.eigenstate_fidelity) ctx.out << " overlap=" << io::format_double(*s.eigenstate_fidelity);
    ctx.out << "\n";
  }
  if (truth) ctx.out << "fidelity=" << csv_number(f) << " relative_fidelity=" << csv_number(rf) << "\n";
  return kExitOk;
}

int cmd_verify(Context& ctx, const VerifyOptions& o) {
  if (o.dims.empty()) throw UsageError("--dims must not be empty");
  for (int d : o.dims) {
    if (d < 2 || d > 64) throw UsageError("--dims entries must be in [2, 64]");
  }
  if (o.states < 0 || o.trials < 1) throw UsageError("--states must be >= 0 and --trials >= 1");
  oracle::CorpusConfig cc;
  cc.dims = o.dims;
  cc.n_states = o.states;
  cc.challengers = o.trials;
  cc.seed = ctx.global.seed;
  cc.threads = ctx.threads;
  if (o.inject_fault) {
    cc.hooks.fidelity = [](const DensityMatrix& a, const DensityMatrix& b) { return fidelity(a, b) + 1e-3; };
    cc.hooks.pure_fidelity = [](const DensityMatrix& a, const StateVector& b) { return pure_fidelity(a, b) + 1e-3; };
  }
  const oracle::CorpusSummary summary = oracle::run_corpus(cc);
  io::write_json_file(ctx.output("oracle_report.json"), summary.to_json());
  for (const auto& r : summary.propositions) {
    ctx.out << "proposition " << r.proposition << ": " << (r.passed() ? "PASS" : "FAIL") << " trials=" << r.trials
            << " max_violation=" << io::format_double(r.max_violation) << "\n";
  }
  ctx.out << "weyl: " << (summary.weyl.passed() ? "PASS" : "FAIL") << " inequalities=" << summary.weyl.inequalities
          << " max_violation=" << io::format_double(summary.weyl.max_violation) << "\n";
  ctx.out << "kappa attainment error=" << io::format_double(summary.kappa_attainment_error) << "\n";
  return summary.passed() ? kExitOk : kExitVerification;
}

int cmd_figdata(Context& ctx, const FigOptions& o) {
  DensityMatrix rho = DensityMatrix::maximally_mixed(2);
  if (!o.truth.empty()) {
    rho = io::density_matrix_from_json(io::read_json_file(o.truth));
  } else {
    const double table_spectrum[] = {0.860, 0.063, 0.037};
    rho = make_w_mixture(4, table_spectrum, ctx.global.seed);
  }
  const int n = rho.n_qubits();
  if (n > 8) throw UsageError("figdata supports at most 8 qubits");
  const auto bases = generate_basis_set(n, BasisMode::kFull, ctx.global.seed);

  if (o.mode == "fig3") {
    figures::Fig3Config fc;
    fc.n_perturbations = o.perturbations;
    fc.min_strength = o.min_strength;
    fc.max_strength = o.max_strength;
    fc.seed = ctx.global.seed;
    fc.floor = o.floor;
    figures::Fig3Data fig;
    try {
      fig = figures::fig3_grid(rho, exact_dataset(rho, bases), fc);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    io::write_text_file(ctx.output("fig3.csv"), fig.to_csv());
    io::write_text_file(ctx.output("fig3_summary.csv"), fig.summary_csv());
    for (CostKind k : figures::kFig3Costs) {
      ctx.out << "spearman(" << to_string(k) << ", 1-F) = " << io::format_double(fig.spearman_of(k)) << "\n";
    }
    return kExitOk;
  }
  if (o.mode == "fig4") {
    const StateVector psi = o.state.empty() ? eigendecompose(rho).eigenvectors.front()
                                            : io::state_vector_from_json(io::read_json_file(o.state));
    if (psi.dim() != rho.dim()) throw UsageError("--state dimension does not match the mixed state");
    const figures::Fig4Data fig = figures::fig4_data(rho, psi, bases);
    io::write_text_file(ctx.output("fig4_entropy.csv"), fig.entropy_csv());
    io::write_text_file(ctx.output("fig4_probabilities.csv"), fig.probability_csv());
    ctx.out << "fig4: " << fig.entropies.size() << " bases, " << fig.probabilities.size()
            << " projections, fraction with pure entropy <= mixed "
            << io::format_double(fig.fraction_pure_not_above()) << "\n";
    return kExitOk;
  }
  throw UsageError("figdata mode must be fig3 or fig4");
}

std::vector<std::string> replay_args(const std::string& manifest_path, const std::optional<std::string>& out_dir) {
  const Json m = io::read_json_file(manifest_path);
  std::vector<std::string> args;
  for (const auto& a : m.at("argv")) args.push_back(a.get<std::string>());
  if (!args.empty() && args.front() == "replay") throw UsageError("manifest records a replay command");
  if (out_dir) {
    std::vector<std::string> filtered;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--out-dir") {
        ++i;
        continue;
      }
      if (args[i].rfind("--out-dir=", 0) == 0) continue;
      filtered.push_back(args[i]);
    }
    filtered.push_back("--out-dir");
    filtered.push_back(*out_dir);
    args = std::move(filtered);
  }
  return args;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Eigenstate extraction tomography with neural quantum states", "eigentomo"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", EIGENTOMO_VERSION);

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Base seed for every random stream")->capture_default_str();
  app.add_option("--out-dir", global.out_dir, "Directory for outputs and manifest.json")->capture_default_str();
  app.add_option("--threads", global.threads, "Worker threads (fallback: EIGENTOMO_THREADS, then 1)");

  SynthOptions so;
  auto* synth = app.add_subcommand("synth", "Build a mixed state and its measurement dataset");
  synth->add_option("--preset", so.preset, "Named state: bell-mixture");
  synth->add_option("--w", so.w, "Approximate W mixture on this many qubits");
  synth->add_option("--spectrum", so.spectrum, "Leading eigenvalues, comma separated")->delimiter(',');
  synth->add_option("--perturbation", so.perturbation, "Strength of the random eigenbasis rotation")
      ->capture_default_str();
  synth->add_option("--bases", so.bases, "full or compressed")->capture_default_str();
  synth->add_option("--shots", so.shots, "Shots per basis (0 = exact probabilities)")->capture_default_str();

  ReconstructOptions ro;
  auto* recon = app.add_subcommand("reconstruct", "Iterative low-rank reconstruction from a dataset");
  recon->add_option("--data", ro.data, "Dataset file (JSON lines)")->required();
  recon->add_option("--truth", ro.truth, "Ground-truth density matrix file");
  recon->add_option("--target", ro.target, "Target pure state file");
  recon->add_option("--max-rank", ro.max_rank, "Maximum number of extracted eigenstates")->capture_default_str();
  recon->add_option("--floor", ro.floor, "Predicted-probability floor for the eigenvalue estimate")
      ->capture_default_str();
  recon->add_option("--cost", ro.train.cost, "l1, l15, l2, kl1 or kl2")->capture_default_str();
  recon->add_option("--lr", ro.train.lr, "Base learning rate")->capture_default_str();
  recon->add_option("--epochs", ro.train.epochs, "Maximum epochs per restart")->capture_default_str();
  recon->add_option("--restarts", ro.train.restarts, "Independent restarts")->capture_default_str();
  recon->add_option("--batch-bases", ro.train.batch_bases, "Bases per stochastic step (0 = all)")
      ->capture_default_str();
  recon->add_option("--patience", ro.train.patience, "Epochs without improvement before stopping")
      ->capture_default_str();
  recon->add_option("--tol-rel", ro.train.tol_rel, "Relative improvement threshold")->capture_default_str();
  recon->add_option("--phase-init-scale", ro.train.phase_init_scale, "Init half-width of the phase network")
      ->capture_default_str();
  recon->add_option("--orth-weight", ro.train.orth_weight, "Orthogonality penalty weight")->capture_default_str();

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Run the proposition oracle corpus");
  verify->add_option("--dims", vo.dims, "Hilbert-space dimensions, comma separated")->delimiter(',');
  verify->add_option("--states", vo.states, "Random states in the corpus")->capture_default_str();
  verify->add_option("--trials", vo.trials, "Challengers per check")->capture_default_str();
  verify->add_flag("--inject-fault", vo.inject_fault, "Use a deliberately biased fidelity (negative control)")
      ->group("");

  FigOptions fo;
  auto* fig = app.add_subcommand("figdata", "CSV data for cost-comparison and entropy plots");
  fig->add_option("mode", fo.mode, "fig3 or fig4")->required();
  fig->add_option("--truth", fo.truth, "Mixed state file (default: synthetic 4-qubit W mixture)");
  fig->add_option("--state", fo.state, "Pure state for fig4 (default: dominant eigenstate)");
  fig->add_option("--perturbations", fo.perturbations, "Perturbed states in fig3")->capture_default_str();
  fig->add_option("--min-strength", fo.min_strength, "Smallest rotation strength")->capture_default_str();
  fig->add_option("--max-strength", fo.max_strength, "Largest rotation strength")->capture_default_str();
  fig->add_option("--floor", fo.floor, "Predicted-probability floor for p1b")->capture_default_str();

  std::string manifest_path;
  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("--manifest", manifest_path, "manifest.json written by a previous run")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    CLI::App* target = &app;
    for (auto* sub : app.get_subcommands()) target = sub;
    out << target->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << EIGENTOMO_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    CLI::App* target = &app;
    for (auto* sub : app.get_subcommands()) target = sub;
    err << "error: " << e.what() << "\n\n" << target->help();
    return kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const auto start = std::chrono::steady_clock::now();
  try {
    if (chosen == replay) {
      std::optional<std::string> out_dir;
      if (app.get_option("--out-dir")->count() > 0) out_dir = global.out_dir;
      return run_cli(replay_args(manifest_path, out_dir), out, err);
    }
    Context ctx{args, global, resolve_threads(global.threads), fs::path(global.out_dir), Json::array(), out};
    fs::create_directories(ctx.out_dir);
    Json flags;
    Json inputs = Json::array();
    int code = kExitOk;
    if (chosen == synth) {
      code = cmd_synth(ctx, so);
      flags["preset"] = so.preset;
      flags["w"] = so.w;
      flags["spectrum"] = so.spectrum;
      flags["perturbation"] = so.perturbation;
      flags["bases"] = so.bases;
      flags["shots"] = so.shots;
    } else if (chosen == recon) {
      code = cmd_reconstruct(ctx, ro);
      flags = train_flags(ro.train);
      flags["max_rank"] = ro.max_rank;
      flags["floor"] = ro.floor;
      for (const auto* p : {&ro.data, &ro.truth, &ro.target}) {
        if (!p->empty()) inputs.push_back(*p);
      }
    } else if (chosen == verify) {
      code = cmd_verify(ctx, vo);
      flags["dims"] = vo.dims;
      flags["states"] = vo.states;
      flags["trials"] = vo.trials;
      flags["inject_fault"] = vo.inject_fault;
    } else {
      code = cmd_figdata(ctx, fo);
      flags["mode"] = fo.mode;
      flags["perturbations"] = fo.perturbations;
      flags["min_strength"] = fo.min_strength;
      flags["max_strength"] = fo.max_strength;
      flags["floor"] = fo.floor;
      for (const auto* p : {&fo.truth, &fo.state}) {
        if (!p->empty()) inputs.push_back(*p);
      }
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(ctx, chosen->get_name(), std::move(flags), std::move(inputs), seconds);
    return code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << chosen->help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace eigentomo::cli
