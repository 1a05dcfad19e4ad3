// resosc: resurgent analysis of the quartic oscillator in the Bargmann
// representation. Subcommands wire the library together behind a disk cache
// of exact coefficients; all output is deterministic byte-for-byte.

#include <CLI11.hpp>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "resosc/borel.hpp"
#include "resosc/coherent.hpp"
#include "resosc/errors.hpp"
#include "resosc/series.hpp"
#include "resosc/spectral.hpp"

namespace fs = std::filesystem;
using namespace resosc;

namespace {

constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitEnvironment = 3;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Strict complex literal: RE, IMi, or RE(+|-)IMi, e.g. "1+0.5i", "-2i".
std::optional<Complex> parse_complex(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const bool has_i = text.back() == 'i';
  std::string body = has_i ? text.substr(0, text.size() - 1) : text;
  if (body.empty()) body = "1";

  auto parse_float = [](const std::string& s, double& out) {
    std::size_t used = 0;
    try {
      out = std::stod(s, &used);
    } catch (...) {
      return false;
    }
    return used == s.size() && !s.empty();
  };

  if (!has_i) {
    double re = 0.0;
    if (!parse_float(body, re)) return std::nullopt;
    return Complex(re, 0.0);
  }

  // split at the sign that separates the real and imaginary parts
  for (std::size_t pos = body.size(); pos-- > 1;) {
    if ((body[pos] == '+' || body[pos] == '-') &&
        body[pos - 1] != 'e' && body[pos - 1] != 'E') {
      double re = 0.0, im = 0.0;
      std::string imag = body.substr(pos);
      if (imag == "+") imag = "1";
      if (imag == "-") imag = "-1";
      if (parse_float(body.substr(0, pos), re) && parse_float(imag, im))
        return Complex(re, im);
      return std::nullopt;
    }
  }
  double im = 0.0;
  if (!parse_float(body, im)) return std::nullopt;
  return Complex(0.0, im);
}

// RESOSC_CACHE_DIR takes precedence over --cache.
std::optional<fs::path> resolve_cache_dir(const std::string& flag) {
  if (const char* env = std::getenv("RESOSC_CACHE_DIR"); env && *env)
    return fs::path(env);
  if (!flag.empty()) return fs::path(flag);
  return std::nullopt;
}

fs::path cache_file(const fs::path& dir, int level) {
  return dir / ("series-" + std::string(kConventionTag) + "-n" +
                std::to_string(level) + ".txt");
}

// Serves the energy series from the cache when a file with sufficient order
// exists; recomputes (and rewrites the cache) otherwise. Corrupt cache files
// terminate with exit code 3.
EnergySeries load_series(int level, int order,
                         const std::optional<fs::path>& dir) {
  if (dir) {
    const fs::path path = cache_file(*dir, level);
    if (fs::exists(path)) {
      std::ifstream in(path);
      std::stringstream buffer;
      buffer << in.rdbuf();
      try {
        RsResult cached = parse_cache(buffer.str());
        if (cached.energy.level == level && cached.energy.order() >= order) {
          cached.energy.coeffs.resize(static_cast<std::size_t>(order) + 1);
          return cached.energy;
        }
      } catch (const ParseError& e) {
        std::cerr << "cache error: " << path.string() << ":" << e.line << ": "
                  << e.what() << "\n";
        std::exit(kExitEnvironment);
      }
    }
  }

  RsResult fresh = rs_recursion(level, order);
  if (dir) {
    std::error_code ec;
    fs::create_directories(*dir, ec);
    std::ofstream out(cache_file(*dir, level), std::ios::trunc);
    if (out) out << serialize_cache(fresh, false);
  }
  return fresh.energy;
}

std::string latex_row(const EnergySeries& s) {
  std::string row = std::to_string(s.level);
  for (const auto& c : s.coeffs) {
    row += " & $";
    if (c.sign() < 0) row += "-";
    mpz_class num = c.num();
    if (num < 0) num = -num;
    row += "\\dfrac{" + num.get_str() + "}{" + c.den().get_str() + "}$";
  }
  row += " \\\\";
  return row;
}

std::string render_series(const EnergySeries& s, const std::string& format) {
  if (format == "text") return serialize_series(s);
  if (format == "csv") {
    std::string out = "level,k,coefficient\n";
    for (int k = 0; k <= s.order(); ++k)
      out += std::to_string(s.level) + "," + std::to_string(k) + "," +
             s.coeffs[static_cast<std::size_t>(k)].str() + "\n";
    return out;
  }
  if (format == "json") {
    std::string out = "{\"level\": " + std::to_string(s.level) +
                      ", \"order\": " + std::to_string(s.order()) +
                      ", \"convention\": \"" + kConventionTag +
                      "\", \"coefficients\": [";
    for (int k = 0; k <= s.order(); ++k) {
      if (k) out += ", ";
      out += "\"" + s.coeffs[static_cast<std::size_t>(k)].str() + "\"";
    }
    return out + "]}\n";
  }
  return latex_row(s) + "\n";
}

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) {
    std::cerr << "cannot open output file " << out_path << "\n";
    std::exit(kExitEnvironment);
  }
  out << payload;
}

int run_series(int level, int order, const std::string& format,
               const std::string& cache_flag) {
  const EnergySeries s = load_series(level, order, resolve_cache_dir(cache_flag));
  std::cout << render_series(s, format);
  return 0;
}

int run_verify_table(const std::string& fault) {
  std::vector<EnergySeries> series;
  for (int n = 0; n <= 6; ++n) series.push_back(rs_recursion(n, 6).energy);

  if (!fault.empty()) {
    int fn = -1, fk = -1;
    if (std::sscanf(fault.c_str(), "%d,%d", &fn, &fk) != 2 || fn < 0 ||
        fn > 6 || fk < 0 || fk > 6)
      throw std::invalid_argument("--inject-fault expects n,k with 0 <= n,k <= 6");
    series[static_cast<std::size_t>(fn)].coeffs[static_cast<std::size_t>(fk)] +=
        Rational(1);
  }

  const VerificationReport report = verify_table(series);
  for (const auto& cell : report.cells)
    std::cout << "n=" << cell.level << " k=" << cell.order << " "
              << (cell.match ? "PASS" : "FAIL") << "\n";
  std::cout << report.matched << "/49 " << (report.pass ? "PASS" : "FAIL")
            << "\n";
  return report.pass ? 0 : kExitVerificationFailure;
}

int run_borel(int level, int order, std::vector<int> pade_orders, double g,
              const std::string& report_path, const std::string& cache_flag) {
  if (!(g > 0.0)) throw std::invalid_argument("--g must be positive");
  int L = 12, M = 12;
  if (!pade_orders.empty()) {
    if (pade_orders.size() != 2)
      throw std::invalid_argument("--pade expects two integers L M");
    L = pade_orders[0];
    M = pade_orders[1];
  }
  if (order < L + M)
    throw std::invalid_argument("--order must be at least L + M");

  const EnergySeries s = load_series(level, order, resolve_cache_dir(cache_flag));
  const BorelSeries b = borel_transform(s);
  const Resummation r = resummation_with_order_variation(b, L, M, g);
  const std::string json =
      report_json(level, "borel-pade-laplace", L + M + 1, r.result.value,
                  r.result.error_estimate, r.stability) +
      "\n";
  emit(json, report_path);
  return 0;
}

int run_spectrum(double g, int levels, int dim, bool study,
                 std::vector<int> dims) {
  if (study) {
    if (dims.empty()) dims = {64, 128, 256};
    std::cout << to_csv(convergence_study(g, levels, dims));
    return 0;
  }
  std::cout << to_csv(eigenvalues(build_matrix(g, dim), levels));
  return 0;
}

int run_asymptotics(int level, int order, std::vector<int> window,
                    const std::string& cache_flag) {
  if (order < 12)
    throw std::invalid_argument("--order must be at least 12 for asymptotics");
  int k_min = 20, k_max = order;
  if (!window.empty()) {
    if (window.size() != 2)
      throw std::invalid_argument("--window expects two integers kmin kmax");
    k_min = window[0];
    k_max = window[1];
  }
  if (k_min >= k_max || k_max > order)
    throw std::invalid_argument("--window out of range");

  const EnergySeries s = load_series(level, order, resolve_cache_dir(cache_flag));
  const BorelSeries b = borel_transform(s);

  const LargeOrderFit fit = fit_large_order(s, k_min, k_max);
  double rms = 0.0;
  for (double r : fit.residuals) rms += r * r;
  rms = std::sqrt(rms / static_cast<double>(fit.residuals.size()));
  std::cout << report_json(level, "large-order-fit", k_max - k_min + 1,
                           fit.growth_rate, rms, fit.degenerate ? 1.0 : 0.0)
            << "\n";

  const auto sp = singularity_estimate(b, SingularityMethod::PadePole);
  std::cout << report_json(level, "pade-pole", sp.order_used,
                           sp.location.real(), sp.stability * std::abs(sp.location),
                           sp.stability)
            << "\n";
  const auto sr = singularity_estimate(b, SingularityMethod::RatioTest);
  std::cout << report_json(level, "ratio-test", sr.order_used,
                           sr.location.real(), sr.stability * std::abs(sr.location),
                           sr.stability)
            << "\n";

  std::cout << "# subleading exponent b = " << format_double(fit.subleading_exponent)
            << ", amplitude K = " << format_double(fit.amplitude)
            << ", stokes constant C = "
            << format_double(stokes_constant(fit, level)) << "\n";
  std::cout << "# gevrey check: growth rate A * |xi_c| = "
            << format_double(fit.growth_rate * std::abs(sr.location)) << "\n";
  std::cout << "# reference value -4/3 assumes the quartic coupling g/4 "
               "(xi scaled by 4); measured location "
            << format_double(sr.location.real())
            << " corresponds to -1/3 in this convention\n";
  return 0;
}

HoloPoly parse_state(const std::string& spec) {
  if (spec.rfind("coherent:", 0) == 0) {
    const auto alpha = parse_complex(spec.substr(9));
    if (!alpha) throw std::invalid_argument("bad coherent state literal");
    return HoloPoly::coherent_state(*alpha);
  }
  if (spec.rfind("fock:", 0) == 0) {
    const int n = std::stoi(spec.substr(5));
    return HoloPoly::basis_state(n);
  }
  throw std::invalid_argument("state must be coherent:<alpha> or fock:<n>");
}

int run_husimi(const std::string& state_spec, int grid, double extent,
               const std::string& out_path) {
  if (grid < 2 || extent <= 0.0)
    throw std::invalid_argument("--grid must be >= 2 and --extent positive");
  const HoloPoly state = parse_state(state_spec);

  std::string out = "re_z,im_z,q\n";
  const double h = 2.0 * extent / grid;
  for (int a = 0; a < grid; ++a) {
    for (int b = 0; b < grid; ++b) {
      const Complex z(-extent + (a + 0.5) * h, -extent + (b + 0.5) * h);
      out += format_double(z.real()) + "," + format_double(z.imag()) + "," +
             format_double(husimi(state, z)) + "\n";
    }
  }
  emit(out, out_path);
  return 0;
}

int run_transseries(int level, int lmax, double g, const std::string& sigma_text,
                    double s_inst_flag, double theta, int order,
                    const std::string& cache_flag) {
  if (!(g > 0.0)) throw std::invalid_argument("--g must be positive");
  const auto sigma = parse_complex(sigma_text);
  if (!sigma) throw std::invalid_argument("bad --sigma literal");

  const EnergySeries s = load_series(level, order, resolve_cache_dir(cache_flag));
  const BorelSeries b = borel_transform(s);

  InstantonParams ip;
  ip.g = g;
  ip.theta = theta;
  if (s_inst_flag > 0.0) {
    ip.s_inst = s_inst_flag;
  } else {
    const auto sr = singularity_estimate(b, SingularityMethod::RatioTest);
    ip.s_inst = std::abs(sr.location);
  }

  const Complex ratio = rayleigh_ratio(level, g, ip, lmax);
  std::cout << "ratio " << format_double(ratio.real()) << " "
            << format_double(ratio.imag()) << "\n";

  TransSeriesParams tp;
  tp.sigma = *sigma;
  tp.lmax = lmax;
  tp.level = level;
  const Complex assembled = transseries_energy(
      tp, ip, g, [&](double coupling) -> Complex {
        return resummation_with_order_variation(b, 12, 12, coupling)
            .result.value;
      });
  std::cout << "assembly " << format_double(assembled.real()) << " "
            << format_double(assembled.imag()) << "\n";
  std::cout << "# s_inst = " << format_double(ip.s_inst)
            << ", theta = " << format_double(ip.theta) << "\n";
  return 0;
}

int run_sbtransform(int n, const std::string& z_text) {
  const auto z = parse_complex(z_text);
  if (!z) throw std::invalid_argument("bad --z literal");
  const Complex value = sb_transform(n, *z);
  std::cout << format_double(value.real()) << " " << format_double(value.imag())
            << "\n";
  return 0;
}

int run_toeplitz(const std::string& symbol_text, int size,
                 const std::string& measure_text) {
  if (size < 1) throw std::invalid_argument("--size must be positive");
  ToeplitzSpec spec;
  std::string symbol_name = symbol_text;
  if (symbol_text == "z") {
    spec.symbol = ToeplitzSymbol::Z;
  } else if (symbol_text == "conj-z") {
    spec.symbol = ToeplitzSymbol::ConjZ;
  } else if (symbol_text == "abs-z-squared") {
    spec.symbol = ToeplitzSymbol::AbsZSquared;
  } else if (symbol_text.rfind("coherent:", 0) == 0) {
    spec.symbol = ToeplitzSymbol::Coherent;
    const auto alpha = parse_complex(symbol_text.substr(9));
    if (!alpha) throw std::invalid_argument("bad coherent symbol literal");
    spec.alpha = *alpha;
  } else {
    throw std::invalid_argument(
        "symbol must be z, conj-z, abs-z-squared, or coherent:<alpha>");
  }

  if (measure_text == "paper") {
    spec.measure = Measure::Unnormalized;
  } else if (measure_text == "normalized") {
    spec.measure = Measure::Normalized;
  } else {
    throw std::invalid_argument("measure must be paper or normalized");
  }

  for (int m = 0; m < size; ++m) {
    for (int n = 0; n < size; ++n) {
      const Complex t = toeplitz_element(spec, m, n);
      std::cout << "{\"m\": " << m << ", \"n\": " << n
                << ", \"re\": " << format_double(t.real())
                << ", \"im\": " << format_double(t.imag())
                << ", \"measure\": \"" << measure_text << "\", \"symbol\": \""
                << symbol_name << "\"}\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"resurgent analysis of the quartic oscillator in the "
               "Bargmann representation"};
  app.require_subcommand(1);

  int level = 0, order = 6, dim = 128, levels = 5, grid = 200, hermite_n = 0,
      lmax = 0;
  double g = 0.1, extent = 6.0, theta = 0.0, s_inst = 0.0;
  std::string format = "text", cache_dir_flag, report_path, fault, state_spec,
              out_path, sigma_text = "0", z_text = "0", symbol_text = "abs-z-squared",
              measure_text = "paper";
  std::vector<int> pade_orders, window, dims;
  bool study = false;

  auto* series = app.add_subcommand("series", "exact perturbative coefficients");
  series->add_option("--level", level)->required()->check(CLI::NonNegativeNumber);
  series->add_option("--order", order)->required()->check(CLI::NonNegativeNumber);
  series->add_option("--format", format)
      ->check(CLI::IsMember({"text", "csv", "json", "latex"}));
  series->add_option("--cache", cache_dir_flag);

  auto* verify = app.add_subcommand("verify-table",
                                    "check levels 0..6 against the reference");
  verify->add_option("--inject-fault", fault)->group("");

  auto* borel = app.add_subcommand("borel", "Borel-Pade-Laplace resummation");
  borel->add_option("--level", level)->required()->check(CLI::NonNegativeNumber);
  borel->add_option("--order", order)->check(CLI::NonNegativeNumber);
  borel->add_option("--pade", pade_orders)->expected(2);
  borel->add_option("--g", g)->required();
  borel->add_option("--report", report_path);
  borel->add_option("--cache", cache_dir_flag);

  auto* spectrum = app.add_subcommand("spectrum", "truncated-matrix eigenvalues");
  spectrum->add_option("--g", g)->required();
  spectrum->add_option("--levels", levels)->check(CLI::PositiveNumber);
  spectrum->add_option("--dim", dim)->check(CLI::PositiveNumber);
  spectrum->add_flag("--study", study);
  spectrum->add_option("--dims", dims)->delimiter(',');

  auto* asym = app.add_subcommand("asymptotics",
                                  "large-order fit and Borel singularity");
  asym->add_option("--level", level)->required()->check(CLI::NonNegativeNumber);
  asym->add_option("--order", order)->required()->check(CLI::NonNegativeNumber);
  asym->add_option("--window", window)->expected(2);
  asym->add_option("--cache", cache_dir_flag);

  auto* husimi_cmd = app.add_subcommand("husimi", "phase-space density grid");
  husimi_cmd->add_option("--state", state_spec)->required();
  husimi_cmd->add_option("--grid", grid)->check(CLI::PositiveNumber);
  husimi_cmd->add_option("--extent", extent);
  husimi_cmd->add_option("--out", out_path);

  auto* trans = app.add_subcommand("transseries",
                                   "instanton-sector expectation values");
  trans->add_option("--level", level)->required()->check(CLI::NonNegativeNumber);
  trans->add_option("--lmax", lmax)->check(CLI::NonNegativeNumber);
  trans->add_option("--g", g)->required();
  trans->add_option("--sigma", sigma_text);
  trans->add_option("--s-inst", s_inst);
  trans->add_option("--theta", theta);
  trans->add_option("--order", order)->check(CLI::NonNegativeNumber);
  trans->add_option("--cache", cache_dir_flag);

  auto* sb = app.add_subcommand("sbtransform",
                                "transform of a Hermite function");
  sb->add_option("--n", hermite_n)->required()->check(CLI::NonNegativeNumber);
  sb->add_option("--z", z_text)->required();

  auto* toeplitz = app.add_subcommand("toeplitz", "symbol matrix elements");
  toeplitz->add_option("--symbol", symbol_text);
  toeplitz->add_option("--size", levels)->required()->check(CLI::PositiveNumber);
  toeplitz->add_option("--measure", measure_text);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (series->parsed()) return run_series(level, order, format, cache_dir_flag);
    if (verify->parsed()) return run_verify_table(fault);
    if (borel->parsed()) {
      if (!borel->count("--order")) order = 40;
      return run_borel(level, order, pade_orders, g, report_path,
                       cache_dir_flag);
    }
    if (spectrum->parsed()) return run_spectrum(g, levels, dim, study, dims);
    if (asym->parsed()) return run_asymptotics(level, order, window, cache_dir_flag);
    if (husimi_cmd->parsed()) return run_husimi(state_spec, grid, extent, out_path);
    if (trans->parsed()) {
      if (!trans->count("--order")) order = 40;
      return run_transseries(level, lmax, g, sigma_text, s_inst, theta, order,
                             cache_dir_flag);
    }
    if (sb->parsed()) return run_sbtransform(hermite_n, z_text);
    if (toeplitz->parsed()) return run_toeplitz(symbol_text, levels, measure_text);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InsufficientOrder& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerificationFailure;
  }
  return kExitUsage;
}
