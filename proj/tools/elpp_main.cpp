// elpp: samplers, solvers, volume checks and Monte Carlo experiments for
// entropy-controlled last passage percolation.
//
// Exit status: 0 success, 1 bad flags/config or contract violation, 2 I/O error.
// Errors are reported as one line on stderr: "elpp: error: <message>".

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "elpp/checks.hpp"
#include "elpp/environment.hpp"
#include "elpp/experiments.hpp"
#include "elpp/io.hpp"
#include "elpp/lpp_solver.hpp"
#include "elpp/variational.hpp"
#include "elpp/volume.hpp"

using namespace elpp;

namespace {

constexpr const char* kThreadsEnv = "ELPP_THREADS";

std::size_t default_threads() {
  if (const char* v = std::getenv(kThreadsEnv)) {
    char* end = nullptr;
    const unsigned long n = std::strtoul(v, &end, 10);
    if (end != v && *end == '\0' && n > 0) return n;
  }
  return 1;
}

struct SeedOption {
  std::uint64_t value = 0;
  CLI::Option* opt = nullptr;

  void add(CLI::App* app) {
    opt = app->add_option("--seed", value, "Master seed (generated and printed when omitted)");
  }

  std::uint64_t resolve() {
    if (opt->count() == 0) {
      std::random_device rd;
      value = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
      std::cerr << "elpp: generated seed " << value << "\n";
    }
    return value;
  }
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    write_text(path, text);
  }
}

// Applies a JSON config: every key becomes a long flag unless that flag was
// given explicitly. "command" (string or array) supplies the subcommand path
// when none is on the command line.
std::vector<std::string> apply_config(std::vector<std::string> args, const std::string& path) {
  json cfg;
  try {
    cfg = json::parse(read_text(path));
  } catch (const json::parse_error& ex) {
    throw ContractViolation("config '" + path + "' is not valid JSON: " + ex.what());
  }
  if (!cfg.is_object()) throw ContractViolation("config must be a JSON object");

  auto given = [&](const std::string& flag) {
    for (const auto& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  auto scalar = [](const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_number() || v.is_boolean()) return v.dump();
    throw ContractViolation("config values must be scalars or arrays of scalars");
  };

  if (cfg.contains("command")) {
    static const char* const kCommands[] = {"sample", "lpp", "var", "volume", "exp", "selftest"};
    const bool has_command = std::any_of(args.begin(), args.end(), [](const std::string& a) {
      return std::find(std::begin(kCommands), std::end(kCommands), a) != std::end(kCommands);
    });
    if (!has_command) {
      std::vector<std::string> cmd;
      if (cfg["command"].is_string()) {
        std::istringstream ss(cfg["command"].get<std::string>());
        for (std::string w; ss >> w;) cmd.push_back(w);
      } else {
        cmd = cfg["command"].get<std::vector<std::string>>();
      }
      args.insert(args.begin(), cmd.begin(), cmd.end());
    }
  }
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    if (it.key() == "command") continue;
    const std::string flag = "--" + it.key();
    if (given(flag)) continue;
    const json& v = it.value();
    if (v.is_boolean()) {
      if (v.get<bool>()) args.push_back(flag);
    } else if (v.is_array()) {
      args.push_back(flag);
      for (const auto& e : v) args.push_back(scalar(e));
    } else {
      args.push_back(flag);
      args.push_back(scalar(v));
    }
  }
  return args;
}

void add_output(CLI::App* app, std::string& out, const char* what) {
  app->add_option("--out", out, std::string("Output file for ") + what + " (default stdout)");
}

// ---- sample ----------------------------------------------------------------

struct SampleCmd {
  std::string kind = "uniform-cloud";
  std::size_t m = 100;
  double t = 1.0, x = 1.0, alpha = 1.0, q = 1.0;
  std::int64_t n = 10, h = 5;
  std::size_t top_k = 10;
  std::uint64_t stream = 0;
  SeedOption seed;
  std::string out;

  void setup(CLI::App& app) {
    auto* c = app.add_subcommand("sample", "Generate an environment (JSON)");
    c->add_option("--kind", kind, "uniform-cloud | lattice-cloud | lattice-field | ppp")
        ->check(CLI::IsMember({"uniform-cloud", "lattice-cloud", "lattice-field", "ppp"}));
    c->add_option("--m", m, "Number of points (clouds)");
    c->add_option("--t", t, "Time extent of the continuous box");
    c->add_option("--x", x, "Space half-width of the continuous box");
    c->add_option("--n", n, "Lattice time extent; sites have t in 1..n");
    c->add_option("--h", h, "Lattice half-width; sites have x in -h..h");
    c->add_option("--alpha", alpha, "Tail exponent in (0,2) (lattice-field, ppp)");
    c->add_option("--q", q, "PPP half-width");
    c->add_option("--top-k", top_k, "Retained records (lattice-field) or ell (ppp)");
    c->add_option("--stream", stream, "Stream index");
    seed.add(c);
    add_output(c, out, "the environment");
    c->callback([this] { run(); });
  }

  void run() {
    const SeedSpec s{seed.resolve(), stream};
    Environment env;
    if (kind == "uniform-cloud") {
      env = sample_uniform_cloud(m, Box::continuous(t, x), s);
    } else if (kind == "lattice-cloud") {
      env = sample_lattice_cloud(m, Box::lattice(n, h), s);
    } else if (kind == "lattice-field") {
      env = sample_lattice_field(Box::lattice(n, h), alpha, s, top_k);
    } else {
      env = sample_ppp_ordered(top_k, alpha, q, s);
    }
    emit(out, dump_json(environment_to_json(env)) + "\n");
  }
};

// ---- lpp -------------------------------------------------------------------

struct LppCmd {
  std::string env_path;
  double budget = 1.0;
  std::size_t k = 0;
  std::size_t k_max = 0;
  bool value_only = false;
  std::string out;

  void setup(CLI::App& app) {
    auto* c = app.add_subcommand("lpp", "E-LPP value with witness, or least entropy for k points");
    c->add_option("--env", env_path, "Environment JSON")->required();
    c->add_option("--budget", budget, "Entropy budget B >= 0");
    c->add_option("--k", k, "Report min entropy to collect k points instead");
    c->add_option("--k-max", k_max, "Cap on the count dimension (0 = none)");
    c->add_flag("--value-only", value_only, "Value only, by the bounded solver");
    add_output(c, out, "the result");
    c->callback([this] { run(); });
  }

  void run() {
    const Environment env = read_environment(env_path);
    json j;
    if (k > 0) {
      const double e = min_entropy_for_count(env, k);
      j = json{{"k", k}, {"min_entropy", std::isfinite(e) ? json(e) : json(nullptr)}};
    } else if (value_only) {
      if (!(budget >= 0.0)) throw ContractViolation("entropy budget must be >= 0");
      j = json{{"value", elpp_count(env.locations(), budget)}, {"B", budget}};
    } else {
      j = lpp_to_json(elpp_value(env, budget, k_max), budget);
    }
    emit(out, dump_json(j) + "\n");
  }
};

// ---- var -------------------------------------------------------------------

struct VarCmd {
  std::string env_path;
  double beta = 1.0;
  std::size_t ell = 0;
  bool tail = false;
  std::vector<double> betas;
  std::string out;

  void setup(CLI::App& app) {
    auto* c = app.add_subcommand("var", "Energy-entropy variational problem");
    c->add_option("--env", env_path, "Environment JSON")->required();
    c->add_option("--beta", beta, "Inverse temperature beta >= 0");
    c->add_option("--ell", ell, "Use the ell heaviest entries (0 = all)");
    c->add_flag("--tail", tail, "Use only the entries beyond the ell-th");
    c->add_option("--betas", betas, "Ascending betas: emit a sweep as CSV beta,value,argmax_size");
    add_output(c, out, "the result");
    c->callback([this] { run(); });
  }

  void run() {
    const Environment env = read_environment(env_path);
    const std::size_t use = ell == 0 ? env.size() : ell;
    if (!betas.empty()) {
      emit(out, sweep_csv(beta_sweep(env, betas, use)));
      return;
    }
    const auto res = tail ? solve_tail(env, beta, ell) : solve_variational(env, beta, use);
    emit(out, dump_json(variational_to_json(res, env)) + "\n");
  }
};

// ---- volume ----------------------------------------------------------------

struct VolumeCmd {
  std::size_t k = 1;
  double t = 1.0, B = 1.0;
  std::uint64_t samples = 1000000;
  std::uint64_t stream = 0;
  SeedOption seed;
  std::string out;

  void setup(CLI::App& app) {
    auto* c = app.add_subcommand("volume", "Entropy-body volume: closed form and Monte Carlo (CSV)");
    c->add_option("--k", k, "Number of points, 1..8");
    c->add_option("--t", t, "Time horizon");
    c->add_option("--B", B, "Entropy budget");
    c->add_option("--samples", samples, "Monte Carlo samples (>= 1000)");
    c->add_option("--stream", stream, "Stream index");
    seed.add(c);
    add_output(c, out, "the CSV");
    c->callback([this] { run(); });
  }

  void run() {
    const auto v = volume_mc(k, t, B, samples, SeedSpec{seed.resolve(), stream});
    emit(out, volume_csv_header() + volume_csv_row(v));
  }
};

// ---- exp -------------------------------------------------------------------

struct ExpCmd {
  SeedOption seed;
  std::size_t threads = default_threads();
  std::string out, summary_out, format = "json";

  TailParams tail;
  ScalingParams scaling;
  ConvergenceParams conv;
  TruncationParams trunc;
  BlowupParams blow;
  std::uint64_t ref_offset = 0;
  double trunc_beta = -1.0;
  double control_alpha = 1.0;
  bool no_control = false;

  CLI::App* add_common(CLI::App* parent, const char* name, const char* help) {
    auto* c = parent->add_subcommand(name, help);
    seed.add(c);
    c->add_option("--threads", threads,
                  std::string("Worker threads (default from ") + kThreadsEnv + ", else 1)");
    c->add_option("--out", out, "Write records as JSON Lines to this file");
    c->add_option("--summary", summary_out, "Write the summary CSV to this file");
    c->add_option("--format", format, "stdout format: json (summary) | csv (summary) | jsonl (records)")
        ->check(CLI::IsMember({"json", "csv", "jsonl"}));
    return c;
  }

  void setup(CLI::App& app) {
    auto* e = app.add_subcommand("exp", "Monte Carlo experiments");
    e->require_subcommand(1);

    auto* t = add_common(e, "tail", "E-LPP value law over random clouds");
    t->add_option("--mode", tail.mode, "continuous | lattice")
        ->check(CLI::IsMember({"continuous", "lattice"}));
    t->add_option("--m", tail.m, "Points per cloud");
    t->add_option("--B", tail.B, "Entropy budget");
    t->add_option("--t", tail.t, "Box time extent (continuous)");
    t->add_option("--x", tail.x, "Box half-width (continuous)");
    t->add_option("--n", tail.n, "Lattice time extent");
    t->add_option("--h", tail.h, "Lattice half-width");
    t->add_option("--replicas", tail.replicas, "Replicas (>= 1000)");
    t->callback([this] { finish(run_tail(tail, opts())); });

    auto* s = add_common(e, "scaling", "Scaling relation of the continuum problem");
    s->add_option("--alpha", scaling.alpha, "Tail exponent in (1/2,2)");
    s->add_option("--betas", scaling.betas, "Betas compared against the rescaled beta=1 sample");
    s->add_option("--ell", scaling.ell, "Records kept (>= 100)");
    s->add_option("--q", scaling.q, "Half-width (>= 8)");
    s->add_option("--replicas", scaling.replicas, "Replicas (>= 2000)");
    auto* off = s->add_option("--reference-offset", ref_offset,
                              "Stream offset of the beta=1 reference sample (default: replicas)");
    s->callback([this, off] {
      if (off->count() > 0) scaling.reference_offset = ref_offset;
      finish(run_scaling(scaling, opts()));
    });

    auto* c = add_common(e, "convergence", "Lattice fields against the continuum problem");
    c->add_option("--alpha", conv.alpha, "Tail exponent in (0,2)");
    c->add_option("--nu", conv.nu, "Limit coupling nu");
    c->add_option("--q", conv.q, "Half-width in units of h");
    c->add_option("--ell", conv.ell, "Records kept");
    c->add_option("--ns", conv.ns, "Ascending ladder of n (>= 3 rungs)");
    c->add_option("--gamma", conv.gamma, "h = round(n^gamma), gamma in (1/2,1)");
    c->add_option("--replicas", conv.replicas, "Replicas per rung");
    c->callback([this] { finish(run_convergence(conv, opts())); });

    auto* r = add_common(e, "truncation", "Energy beyond the ell heaviest weights");
    r->add_option("--alpha", trunc.alpha, "Tail exponent in (0,2)");
    r->add_option("--nu", trunc.nu, "Coupling nu (continuum, and default beta)");
    r->add_option("--beta", trunc_beta, "Lattice beta (default beta_nh(nu, n, h))");
    r->add_option("--n", trunc.n, "Lattice time extent");
    r->add_option("--h", trunc.h, "Lattice half-width");
    r->add_option("--q", trunc.q, "Continuum half-width");
    r->add_option("--ells", trunc.ells, "Ascending truncation levels");
    r->add_option("--retain", trunc.retain, "Weights kept per field (0 = 8 * max ell)");
    r->add_option("--replicas", trunc.replicas, "Replicas");
    r->callback([this] {
      if (trunc_beta >= 0.0) trunc.beta = trunc_beta;
      finish(run_truncation(trunc, opts()));
    });

    auto* b = add_common(e, "blowup", "Continuum value along growing q for alpha <= 1/2");
    b->add_option("--alpha", blow.alpha, "Tail exponent in (0,1/2]");
    b->add_option("--nu", blow.nu, "Coupling nu");
    b->add_option("--qs", blow.qs, "Ascending q ladder");
    b->add_option("--ell0", blow.ell0, "Records per unit q: ell = ceil(ell0 q)");
    b->add_option("--replicas", blow.replicas, "Replicas");
    b->add_option("--control-alpha", control_alpha, "Control tail exponent");
    b->add_flag("--no-control", no_control, "Skip the control series");
    b->callback([this] {
      blow.control_alpha = no_control ? std::nullopt : std::optional<double>(control_alpha);
      finish(run_blowup(blow, opts()));
    });
  }

  RunOptions opts() { return RunOptions{seed.resolve(), threads}; }

  void finish(const ExperimentResult& res) {
    if (!out.empty()) write_text(out, records_jsonl(res));
    if (!summary_out.empty()) write_text(summary_out, summary_csv(res));
    if (format == "json") {
      std::cout << dump_json(summary_json(res)) << "\n";
    } else if (format == "csv") {
      std::cout << summary_csv(res);
    } else {
      std::cout << records_jsonl(res);
    }
  }
};

// ---- selftest --------------------------------------------------------------

struct SelftestCmd {
  bool full = false;
  std::vector<int> only;
  std::size_t threads = default_threads();
  int status = 0;

  void setup(CLI::App& app) {
    auto* c = app.add_subcommand(
        "selftest", "Acceptance checks: fast ones (1-4, 10) by default, all with --full");
    c->add_flag("--full", full, "Run every criterion, including the long Monte Carlo ones");
    c->add_option("--only", only, "Run only these criterion ids");
    c->add_option("--threads", threads, "Worker threads");
    c->callback([this] { run(); });
  }

  void run() {
    std::vector<int> ids = only;
    if (ids.empty() && !full) {
      for (const auto& c : all_checks()) {
        if (c.fast) ids.push_back(c.id);
      }
    }
    const bool ok = run_checks(ids, CheckOptions{threads}, [](const CheckResult& r) {
      std::cout << format_check(r) << std::endl;
    });
    std::cout << (ok ? "selftest: all passed" : "selftest: FAILED") << std::endl;
    status = ok ? 0 : 1;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-controlled last passage percolation: solvers and experiments.\n"
               "Lattice boxes use times 1..n and positions -h..h. Set " +
               std::string(kThreadsEnv) + " to change the default thread count."};
  // -h is taken by the lattice half-width flags.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON file of flag values; explicit flags win, unknown keys are errors");

  SampleCmd sample;
  LppCmd lpp;
  VarCmd var;
  VolumeCmd volume;
  ExpCmd exp;
  SelftestCmd selftest;
  sample.setup(app);
  lpp.setup(app);
  var.setup(app);
  volume.setup(app);
  exp.setup(app);
  selftest.setup(app);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string path;
      if (args[i] == "--config" && i + 1 < args.size()) {
        path = args[i + 1];
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                   args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      } else if (args[i].rfind("--config=", 0) == 0) {
        path = args[i].substr(9);
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        continue;
      }
      args = apply_config(std::move(args), path);
      break;
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "elpp: error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "elpp: error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "elpp: error: " << e.what() << "\n";
    return 1;
  }
  return selftest.status;
}
