#include "fsl/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fsl/model.hpp"

namespace fsl::io {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw validation_error("cannot write file: " + path.string());
  out << content;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

double parse_number(const std::string& field, const char* what, int line_no) {
  try {
    size_t used = 0;
    const double v = std::stod(field, &used);
    while (used < field.size() && std::isspace(static_cast<unsigned char>(field[used]))) ++used;
    if (used != field.size()) throw std::invalid_argument("trailing garbage");
    return v;
  } catch (const std::exception&) {
    std::ostringstream msg;
    msg << "malformed " << what << " at line " << line_no << ": '" << field << "'";
    throw validation_error(msg.str());
  }
}

// Header line = any line whose first field is not a number.
bool looks_like_header(const std::string& line) {
  const auto fields = split_csv_line(line);
  if (fields.empty()) return true;
  char* end = nullptr;
  std::strtod(fields[0].c_str(), &end);
  return end == fields[0].c_str();
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               size_t min_fields) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && looks_like_header(line)) continue;
    auto fields = split_csv_line(line);
    if (fields.size() < min_fields) {
      std::ostringstream msg;
      msg << path.string() << ": line " << line_no << " has " << fields.size()
          << " fields, expected " << min_fields;
      throw validation_error(msg.str());
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

std::string format_double(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

BvpConfig load_config(const std::filesystem::path& path) {
  ordered_json j;
  try {
    j = ordered_json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw validation_error("config " + path.string() + ": " + e.what());
  }
  auto require = [&](const char* key) {
    if (!j.contains(key))
      throw validation_error("config " + path.string() + ": missing field '" + key + "'");
    return j.at(key);
  };
  std::optional<RationalPi> rational;
  double a_real = 0.0;
  const auto a = require("a");
  if (a.is_object() && a.contains("pi_rational")) {
    const auto pr = a.at("pi_rational");
    if (!pr.is_array() || pr.size() != 2)
      throw validation_error("config: 'a.pi_rational' must be a pair [p, q]");
    rational = RationalPi{pr.at(0).get<long>(), pr.at(1).get<long>()};
  } else if (a.is_object() && a.contains("real")) {
    a_real = a.at("real").get<double>();
  } else {
    throw validation_error("config: 'a' must be {\"pi_rational\": [p, q]} or {\"real\": x}");
  }
  const int alpha = require("alpha").get<int>();
  const int beta = require("beta").get<int>();
  const int N = j.value("N", 200);
  const int M = j.value("M", 2000);
  return make_config(rational, a_real, alpha, beta, N, M);
}

Potential read_potential_csv(const std::filesystem::path& path, const BvpConfig& config) {
  const auto rows = read_csv(path, 3);
  if (rows.size() != static_cast<size_t>(config.M) + 1) {
    std::ostringstream msg;
    msg << path.string() << ": expected " << config.M + 1 << " samples for M = "
        << config.M << ", found " << rows.size();
    throw validation_error(msg.str());
  }
  Potential q;
  q.samples.resize(rows.size());
  const double h = pi / config.M;
  for (size_t i = 0; i < rows.size(); ++i) {
    const double x = parse_number(rows[i][0], "x", static_cast<int>(i));
    if (std::abs(x - static_cast<double>(i) * h) > 1e-9) {
      std::ostringstream msg;
      msg << path.string() << ": sample " << i << " is off the uniform grid (x = " << x
          << ")";
      throw validation_error(msg.str());
    }
    q.samples[i] = {parse_number(rows[i][1], "re", static_cast<int>(i)),
                    parse_number(rows[i][2], "im", static_cast<int>(i))};
  }
  return q;
}

void write_potential_csv(const std::filesystem::path& path, const Potential& q) {
  std::ostringstream out;
  out << "x,re,im\n";
  const int M = q.grid_size();
  const double h = pi / M;
  for (int i = 0; i <= M; ++i) {
    out << format_double(i * h) << ',' << format_double(q.samples[i].real()) << ','
        << format_double(q.samples[i].imag()) << '\n';
  }
  write_file(path, out.str());
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum,
                        const BvpConfig& config, const SolveDiagnostics* diagnostics) {
  const auto cls = classify_indices(config, spectrum.order());
  std::ostringstream out;
  out << "n,re_rho,im_rho,re_lambda,im_lambda,residual,in_omega\n";
  for (int n = 1; n <= spectrum.order(); ++n) {
    const cdouble rho = spectrum.rho_n(n);
    const cdouble lambda = rho * rho;
    const double residual =
        diagnostics ? diagnostics->residual[n - 1] : 0.0;
    out << n << ',' << format_double(rho.real()) << ',' << format_double(rho.imag())
        << ',' << format_double(lambda.real()) << ',' << format_double(lambda.imag())
        << ',' << format_double(residual) << ',' << (cls.is_degenerate(n) ? 1 : 0)
        << '\n';
  }
  write_file(path, out.str());
}

Spectrum read_spectrum_csv(const std::filesystem::path& path) {
  const auto rows = read_csv(path, 3);
  Spectrum spectrum;
  spectrum.rho.resize(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    const int n = static_cast<int>(parse_number(rows[i][0], "n", static_cast<int>(i)));
    if (n < 1 || n > static_cast<int>(rows.size()))
      throw validation_error(path.string() + ": spectrum indices must run 1..N");
    spectrum.rho[n - 1] = {parse_number(rows[i][1], "re_rho", static_cast<int>(i)),
                           parse_number(rows[i][2], "im_rho", static_cast<int>(i))};
  }
  return spectrum;
}

SpectralInput read_spectral_input_csv(const std::filesystem::path& path,
                                      const BvpConfig& config) {
  const auto rows = read_csv(path, 4);
  SpectralInput input;
  int max_n = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    const int line = static_cast<int>(i) + 1;
    const int n = static_cast<int>(parse_number(rows[i][0], "n", line));
    if (n < 1) throw validation_error(path.string() + ": index n must be >= 1");
    const std::string& kind = rows[i][1];
    const cdouble value{parse_number(rows[i][2], "re", line),
                        parse_number(rows[i][3], "im", line)};
    if (input.rho.count(n) || input.xi.count(n)) {
      std::ostringstream msg;
      msg << path.string() << ": duplicate entry for n = " << n << " at line " << line;
      throw validation_error(msg.str());
    }
    if (kind == "rho") {
      input.rho[n] = principal_sqrt_branch(value);
    } else if (kind == "lambda") {
      input.rho[n] = principal_rho(value);
    } else if (kind == "xi") {
      input.xi[n] = value;
    } else {
      std::ostringstream msg;
      msg << path.string() << ": unknown kind '" << kind << "' at line " << line
          << " (expected rho, lambda or xi)";
      throw validation_error(msg.str());
    }
    max_n = std::max(max_n, n);
  }
  input.N = max_n;
  validate_input(input, config);
  return input;
}

void write_spectral_input_csv(const std::filesystem::path& path,
                              const SpectralInput& input) {
  std::ostringstream out;
  out << "n,kind,re,im\n";
  for (int n = 1; n <= input.N; ++n) {
    if (auto it = input.rho.find(n); it != input.rho.end()) {
      out << n << ",rho," << format_double(it->second.real()) << ','
          << format_double(it->second.imag()) << '\n';
    } else if (auto jt = input.xi.find(n); jt != input.xi.end()) {
      out << n << ",xi," << format_double(jt->second.real()) << ','
          << format_double(jt->second.imag()) << '\n';
    }
  }
  write_file(path, out.str());
}

void write_stability_csv(const std::filesystem::path& path, const StabilityReport& report) {
  std::ostringstream out;
  out << "seed,Xi,xi_dist,q_dist,ratio\n";
  for (const TrialRow& row : report.rows) {
    out << row.seed << ',' << format_double(row.spectral_dist) << ','
        << format_double(row.xi_dist) << ',' << format_double(row.q_dist) << ','
        << format_double(row.ratio) << '\n';
  }
  write_file(path, out.str());
}

void write_stability_summary_json(const std::filesystem::path& path,
                                  const StabilityReport& report) {
  ordered_json j;
  j["r"] = report.r;
  j["magnitude"] = report.magnitude;
  j["trials"] = report.trials;
  j["rejected"] = report.rejected;
  j["C_r_empirical"] = report.c_empirical;
  j["C_lambda_empirical"] = report.c_lambda_empirical;
  j["per_index_phi"] = report.per_index_phi;
  write_file(path, j.dump(2) + "\n");
}

}  // namespace fsl::io
