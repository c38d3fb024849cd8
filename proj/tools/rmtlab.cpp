// rmtlab: command-line front end.
//
//   rmtlab verify [--inject-fault msc-branch]
//   rmtlab experiment NAME --config PATH [--seed U64] [--workers K] [--out DIR]
//   rmtlab sample --config SPEC [--out PATH] [--eigenvalues]
//
// Environment: RMTLAB_SEED, RMTLAB_WORKERS and RMTLAB_OUT supply --seed,
// --workers and --out when the flag is absent. Exit codes: 0 ok, 1 failed
// check or numerical error, 2 usage or configuration error.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rmtlab/dispatch.hpp"
#include "rmtlab/errors.hpp"
#include "rmtlab/io.hpp"
#include "rmtlab/keyvalue.hpp"
#include "rmtlab/spectral.hpp"
#include "rmtlab/verify.hpp"

namespace {

using namespace rmtlab;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

int cmd_verify(const std::string& fault) {
  VerifyOptions opts;
  if (fault == "msc-branch") {
    opts.wrong_msc_branch = true;
  } else if (!fault.empty()) {
    std::cerr << "unknown fault '" << fault << "'\n";
    return kUsage;
  }
  bool ok = true;
  for (const SuiteResult& r : run_verify(opts)) {
    ok = ok && r.passed();
    std::printf("%-22s %s  max_residual=%-12.3e threshold=%-9.1e checks=%zu  %.2fs%s%s\n", r.name.c_str(),
                r.passed() ? "PASS" : "FAIL", r.max_residual, r.threshold, r.checks, r.seconds,
                r.error.empty() ? "" : "  error: ", r.error.c_str());
  }
  return ok ? kOk : kFailed;
}

std::string params_of(const KeyValueFile& kv) {
  std::string out;
  for (const auto& e : kv.entries()) {
    if (!out.empty()) out += "; ";
    out += e.key + "=" + e.value;
  }
  return out;
}

int cmd_experiment(const std::string& name, const std::string& config_path, std::optional<std::uint64_t> seed_flag,
                   std::optional<std::size_t> workers_flag, std::optional<std::string> out_flag,
                   const std::string& command_line) {
  if (!is_experiment(name)) {
    std::cerr << "unknown experiment '" << name << "'; expected one of:";
    for (std::string_view n : experiment_names()) std::cerr << ' ' << n;
    std::cerr << '\n';
    return kUsage;
  }
  const KeyValueFile kv = KeyValueFile::load(config_path);

  std::uint64_t seed;
  if (seed_flag) {
    seed = *seed_flag;
  } else if (auto e = env("RMTLAB_SEED")) {
    seed = parse_u64(*e);
  } else {
    seed = kv.get_u64("seed");
  }
  std::size_t workers;
  if (workers_flag) {
    workers = *workers_flag;
  } else if (auto e = env("RMTLAB_WORKERS")) {
    workers = static_cast<std::size_t>(parse_u64(*e));
  } else {
    workers = kv.get_size_or("workers", 1);
  }
  if (workers == 0) throw ConfigError("workers must be positive");
  const std::filesystem::path out_dir = out_flag ? *out_flag : env("RMTLAB_OUT").value_or(".");

  RunManifest manifest;
  manifest.command = command_line;
  manifest.config_hash = fnv1a64(kv.text());
  manifest.master_seed = seed;
  manifest.started = utc_timestamp();
  const auto t0 = std::chrono::steady_clock::now();
  const StatSummary s = run_named_experiment(name, kv, seed, workers);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::filesystem::path values = out_dir / (name + "_values.csv");
  const std::filesystem::path summary = out_dir / (name + "_summary.txt");
  const std::filesystem::path manifest_path = out_dir / (name + "_manifest.txt");
  write_values_csv(values, s);
  write_summary(summary, s, params_of(kv), wall);
  manifest.finished = utc_timestamp();
  manifest.outputs = {values, summary, manifest_path};
  write_manifest(manifest_path, manifest);

  std::printf("%s: ks=%s ci=%s n_samples=%zu -> %s\n", s.experiment.c_str(), format_double(s.ks_to_reference).c_str(),
              format_double(s.ci_halfwidth).c_str(), s.n_samples, summary.string().c_str());
  return kOk;
}

int cmd_sample(const std::string& spec_path, const std::string& out_path, bool eigenvalues) {
  const KeyValueFile kv = KeyValueFile::load(spec_path);
  const EnsembleSpec spec = read_ensemble_spec(kv, "", true);
  for (const std::string& w : spec_warnings(spec)) std::cerr << "warning: " << w << '\n';
  const SymmetricMatrix m = sample_matrix(spec);
  const std::string text = eigenvalues ? spectrum_csv(eigen_decompose(m, true)) : matrix_csv(m);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_text(out_path, text);
  }
  return kOk;
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) s += ' ';
    s += argv[i];
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-matrix universality laboratory"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "Run every deterministic identity suite");
  std::string fault;
  verify->add_option("--inject-fault", fault, "Deliberately break a component (msc-branch)")->group("");

  auto* experiment = app.add_subcommand("experiment", "Run a named Monte Carlo experiment");
  std::string name, config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::string> out_dir;
  experiment->add_option("name", name, "Experiment name")->required();
  experiment->add_option("--config", config, "Config file (key = value lines)")->required();
  experiment->add_option("--seed", seed, "Master seed (overrides RMTLAB_SEED and the config)");
  experiment->add_option("--workers", workers, "Worker threads (overrides RMTLAB_WORKERS and the config)");
  experiment->add_option("--out", out_dir, "Output directory (overrides RMTLAB_OUT; default .)");

  auto* sample = app.add_subcommand("sample", "Sample one matrix from an ensemble spec file");
  std::string spec_path, sample_out;
  bool eigen_flag = false;
  sample->add_option("--config", spec_path, "Ensemble spec file (kind, n, seed, q, f, t)")->required();
  sample->add_option("--out", sample_out, "Output CSV path (default stdout)");
  sample->add_flag("--eigenvalues", eigen_flag, "Write index,eigenvalue,overlap instead of the matrix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*verify) return cmd_verify(fault);
    if (*experiment) return cmd_experiment(name, config, seed, workers, out_dir, join_args(argc, argv));
    if (*sample) return cmd_sample(spec_path, sample_out, eigen_flag);
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kFailed;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kUsage;
}
