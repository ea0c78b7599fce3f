#include "fsl/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fsl/charfn.hpp"
#include "fsl/forward.hpp"
#include "fsl/inverse.hpp"
#include "fsl/io.hpp"
#include "fsl/model.hpp"
#include "fsl/oracle.hpp"
#include "fsl/quadrature.hpp"
#include "fsl/stability.hpp"

namespace fsl::cli {

namespace {

int run_forward(const std::string& config_path, const std::string& potential_path,
                const std::string& out_path, int threads) {
  const BvpConfig config = io::load_config(config_path);
  const Potential q = io::read_potential_csv(potential_path, config);
  SolveOptions options;
  options.threads = threads;
  SolveDiagnostics diagnostics;
  const Spectrum spectrum = eigenvalues(q, config, config.N, options, &diagnostics);
  io::write_spectrum_csv(out_path, spectrum, config, &diagnostics);
  std::cout << "forward: wrote " << spectrum.order() << " eigenvalues to " << out_path
            << "\n";
  return 0;
}

int run_inverse(const std::string& config_path, const std::string& input_path,
                const std::string& out_path) {
  const BvpConfig config = io::load_config(config_path);
  const SpectralInput input = io::read_spectral_input_csv(input_path, config);
  const Potential q = recover_potential(input, config, config.M);
  io::write_potential_csv(out_path, q);
  std::cout << "inverse: wrote recovered potential to " << out_path << "\n";
  return 0;
}

int run_roundtrip(const std::string& config_path, const std::string& potential_path,
                  const std::string& out_path, int threads) {
  const BvpConfig config = io::load_config(config_path);
  const Potential q = io::read_potential_csv(potential_path, config);
  SolveOptions options;
  options.threads = threads;
  const SpectralInput data = forward_data(q, config, options);
  const Potential recovered = recover_potential(data, config, config.M);
  const double base = l2_norm(q);
  const double err = l2_distance(recovered, q);
  const double rel = base > 0.0 ? err / base : err;
  if (!out_path.empty()) io::write_potential_csv(out_path, recovered);
  std::cout << "roundtrip: relative L2 error " << io::format_double(rel) << "\n";
  return 0;
}

int run_stability(const std::string& config_path, double r, int trials,
                  std::uint64_t seed, double magnitude, const std::string& csv_path,
                  const std::string& json_path, int threads) {
  const BvpConfig config = io::load_config(config_path);
  const StabilityReport report =
      estimate_stability_constant(config, r, trials, seed, magnitude, threads);
  io::write_stability_csv(csv_path, report);
  io::write_stability_summary_json(json_path, report);
  std::cout << "stability: " << report.rows.size() << " accepted trials, "
            << report.rejected << " rejected, empirical C = "
            << io::format_double(report.c_empirical) << "\n";
  return 0;
}

int run_charfn(const std::string& config_path, const std::string& potential_path,
               const std::string& spectrum_path, double re0, double re1, int count,
               double im, const std::string& out_path) {
  const BvpConfig config = io::load_config(config_path);
  if (potential_path.empty() == spectrum_path.empty())
    throw validation_error("charfn: provide exactly one of --potential or --spectrum");
  std::ostringstream out;
  out << "lambda_re,lambda_im,delta_re,delta_im\n";
  auto emit = [&](cdouble lambda, cdouble delta) {
    out << io::format_double(lambda.real()) << ',' << io::format_double(lambda.imag())
        << ',' << io::format_double(delta.real()) << ',' << io::format_double(delta.imag())
        << '\n';
  };
  const double step = count > 1 ? (re1 - re0) / (count - 1) : 0.0;
  if (!potential_path.empty()) {
    const Potential q = io::read_potential_csv(potential_path, config);
    const PotentialCharFn cf(config, q);
    for (int i = 0; i < count; ++i) {
      const cdouble lambda{re0 + i * step, im};
      emit(lambda, cf(lambda));
    }
  } else {
    const Spectrum spectrum = io::read_spectrum_csv(spectrum_path);
    const SpectrumCharFn cf(config, spectrum);
    for (int i = 0; i < count; ++i) {
      const cdouble lambda{re0 + i * step, im};
      emit(lambda, cf(lambda));
    }
  }
  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw validation_error("cannot write file: " + out_path);
  file << out.str();
  std::cout << "charfn: wrote " << count << " samples to " << out_path << "\n";
  return 0;
}

int run_oracle(const std::string& config_path, const std::string& potential_path,
               const std::string& out_path, int M, int count) {
  const BvpConfig config = io::load_config(config_path);
  Potential q = io::read_potential_csv(potential_path, config);
  if (M == 0) M = config.M;
  if (M != config.M) {
    // Resample the piecewise-linear potential onto the oracle grid.
    Potential resampled;
    resampled.samples.resize(M + 1);
    const double h = pi / M;
    const double hq = pi / config.M;
    for (int i = 0; i <= M; ++i) {
      const double x = i * h;
      const int j = std::min(static_cast<int>(x / hq), config.M - 1);
      const double t = (x - j * hq) / hq;
      resampled.samples[i] = q.samples[j] * (1.0 - t) + q.samples[j + 1] * t;
    }
    q = std::move(resampled);
  }
  const auto matrix = oracle::fd_matrix(q, config, M);
  const int n_targets = std::min(config.N, count);
  std::vector<cdouble> targets(n_targets);
  for (int n = 1; n <= n_targets; ++n) targets[n - 1] = config.node(n) * config.node(n);
  const auto values = oracle::fd_eigenvalues_near(matrix, targets);
  const auto cls = classify_indices(config, n_targets);
  std::ostringstream out;
  out << "n,re_rho,im_rho,re_lambda,im_lambda,residual,in_omega\n";
  for (int n = 1; n <= n_targets; ++n) {
    const cdouble lambda = values[n - 1];
    const cdouble rho = principal_rho(lambda);
    out << n << ',' << io::format_double(rho.real()) << ','
        << io::format_double(rho.imag()) << ',' << io::format_double(lambda.real())
        << ',' << io::format_double(lambda.imag()) << ",0,"
        << (cls.is_degenerate(n) ? 1 : 0) << '\n';
  }
  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw validation_error("cannot write file: " + out_path);
  file << out.str();
  std::cout << "oracle: wrote " << n_targets << " eigenvalues to " << out_path << "\n";
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Spectral toolkit for Sturm-Liouville operators with frozen argument"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "worker thread cap")->capture_default_str();

  std::string config_path, potential_path, spectrum_path, input_path, out_path;
  std::string csv_path = "stability.csv", json_path = "stability.json";
  double r = 25.0, magnitude = 0.01;
  int trials = 100, count = 100, oracle_m = 0, oracle_count = 10;
  std::uint64_t seed = 0;
  double re0 = 0.0, re1 = 10.0, im = 0.0;

  auto* forward = app.add_subcommand("forward", "potential -> spectrum");
  forward->add_option("--config", config_path)->required();
  forward->add_option("--potential", potential_path)->required();
  forward->add_option("--out", out_path)->required();

  auto* inverse = app.add_subcommand("inverse", "spectral data -> potential");
  inverse->add_option("--config", config_path)->required();
  inverse->add_option("--input", input_path)->required();
  inverse->add_option("--out", out_path)->required();

  auto* roundtrip = app.add_subcommand("roundtrip", "forward then inverse, report L2 error");
  roundtrip->add_option("--config", config_path)->required();
  roundtrip->add_option("--potential", potential_path)->required();
  roundtrip->add_option("--out", out_path);

  auto* stability = app.add_subcommand("stability", "randomized stability experiment");
  stability->add_option("--config", config_path)->required();
  stability->add_option("--r", r)->capture_default_str();
  stability->add_option("--trials", trials)->capture_default_str();
  stability->add_option("--seed", seed)->capture_default_str();
  stability->add_option("--magnitude", magnitude)->capture_default_str();
  stability->add_option("--out-csv", csv_path)->capture_default_str();
  stability->add_option("--out-json", json_path)->capture_default_str();

  auto* charfn = app.add_subcommand("charfn", "characteristic function on a lambda grid");
  charfn->add_option("--config", config_path)->required();
  charfn->add_option("--potential", potential_path);
  charfn->add_option("--spectrum", spectrum_path);
  charfn->add_option("--re0", re0)->capture_default_str();
  charfn->add_option("--re1", re1)->capture_default_str();
  charfn->add_option("--count", count)->capture_default_str();
  charfn->add_option("--im", im)->capture_default_str();
  charfn->add_option("--out", out_path)->required();

  auto* oracle = app.add_subcommand("oracle", "finite-difference reference eigenvalues");
  oracle->add_option("--config", config_path)->required();
  oracle->add_option("--potential", potential_path)->required();
  oracle->add_option("--out", out_path)->required();
  oracle->add_option("--M", oracle_m, "oracle grid size (default: config M)");
  oracle->add_option("--count", oracle_count)->capture_default_str();

  try {
    app.parse(argc, argv);
    if (forward->parsed()) return run_forward(config_path, potential_path, out_path, threads);
    if (inverse->parsed()) return run_inverse(config_path, input_path, out_path);
    if (roundtrip->parsed())
      return run_roundtrip(config_path, potential_path, out_path, threads);
    if (stability->parsed())
      return run_stability(config_path, r, trials, seed, magnitude, csv_path, json_path,
                           threads);
    if (charfn->parsed())
      return run_charfn(config_path, potential_path, spectrum_path, re0, re1, count, im,
                        out_path);
    if (oracle->parsed())
      return run_oracle(config_path, potential_path, out_path, oracle_m, oracle_count);
    return 1;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace fsl::cli
