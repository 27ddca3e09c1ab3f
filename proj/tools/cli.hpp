#pragma once

// Command-line driver: example construction, minimality audits, branch scans,
// decay exponents, disk minimizers and the acceptance suite.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "acceptance/criteria.hpp"
#include "qvlab/qvlab.hpp"

namespace qvlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExampleOptions {
  std::string name;
  int level = 1;
  std::size_t samples = 4097;
};

inline const std::vector<std::string>& example_names() {
  static const std::vector<std::string> names{
      "diamond",        "losange",        "double-line",        "pluri-diamond-demo", "pluri-losange-demo",
      "cantor-diamond", "cantor-losange", "fat-cantor-diamond", "fat-cantor-losange", "sin"};
  return names;
}

inline PiecewiseAffineQ build_example(const ExampleOptions& o) {
  using namespace construct;
  const bool cantor = o.name.find("cantor") != std::string::npos;
  if (cantor && o.level < 1) throw UsageError("--level must be >= 1");
  if (o.name == "diamond") return make_diamond(0.0, 1.0, 0.0);
  if (o.name == "losange") return make_losange(0.0, 1.0);
  if (o.name == "double-line") return make_double_line(0.0, 1.0, 0.0);
  if (o.name == "pluri-diamond-demo") return pluri_diamond_demo();
  if (o.name == "pluri-losange-demo") return pluri_losange_demo();
  if (o.name == "cantor-diamond") return cantor_level({o.level, Flavor::diamond, {}});
  if (o.name == "cantor-losange") return cantor_level({o.level, Flavor::losange, {}});
  if (o.name == "fat-cantor-diamond") return cantor_level({o.level, Flavor::diamond, CantorSchedule::fat()});
  if (o.name == "fat-cantor-losange") return cantor_level({o.level, Flavor::losange, CantorSchedule::fat()});
  if (o.name == "sin") {
    if (o.samples < 2) throw UsageError("--samples must be >= 2");
    return sin_sampled(o.samples);
  }
  throw UsageError("unknown example '" + o.name + "'");
}

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(io::parse_double(item));
  if (out.empty()) throw UsageError("empty list '" + s + "'");
  return out;
}

/// Writes to `path`, or to `fallback` when path is empty or "-".
template <class Writer>
void emit(const std::string& path, std::ostream& fallback, Writer&& write) {
  if (path.empty() || path == "-") {
    write(fallback);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path + "' for writing");
  write(f);
}

inline disk::TraceFunction parse_trace(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty()) throw UsageError("empty --trace");
  const std::string& kind = parts[0];
  if (kind == "cos" && parts.size() == 1) return disk::cos_trace();
  if (kind == "sqrt-z" && parts.size() == 1) return disk::sqrt_z_trace();
  if (kind == "mixed" && parts.size() == 1) return disk::mixed_mode_trace();
  if (kind == "const" && parts.size() >= 2 && parts.size() <= 3) {
    const std::size_t q = parts.size() == 3 ? std::stoul(parts[2]) : 1;
    return disk::constant_trace(q, io::parse_double(parts[1]));
  }
  if (kind == "random" && (parts.size() == 2 || parts.size() == 4)) {
    std::mt19937_64 rng(std::stoull(parts[1]));
    const std::size_t q = parts.size() == 4 ? std::stoul(parts[2]) : 2;
    const std::size_t m = parts.size() == 4 ? std::stoul(parts[3]) : 8;
    if (q == 0) throw UsageError("random trace needs Q >= 1");
    return disk::random_band_limited_trace(rng, q, m);
  }
  throw UsageError("unknown trace spec '" + spec + "' (cos, sqrt-z, mixed, const:c[:Q], random:seed[:Q:M])");
}

/// Expands a JSON object {"key": value} into "--key value" arguments.
inline std::vector<std::string> config_arguments(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read config '" + path + "'");
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  std::vector<std::string> args;
  for (const auto& [key, value] : j.items()) {
    args.push_back("--" + key);
    if (value.is_string()) {
      args.push_back(value.get<std::string>());
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) joined += (joined.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
      args.push_back(joined);
    } else {
      args.push_back(value.dump());
    }
  }
  return args;
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  // Splice --config contents into the argument list right after the subcommand.
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] != "--config") continue;
    if (i + 1 >= args.size()) {
      err << "--config requires a path\n";
      return kExitUsage;
    }
    try {
      const auto extra = config_arguments(args[i + 1]);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      args.insert(args.begin() + static_cast<std::ptrdiff_t>(i), extra.begin(), extra.end());
    } catch (const UsageError& e) {
      err << e.what() << '\n';
      return kExitUsage;
    }
    break;
  }

  CLI::App app{"qvlab: numerical laboratory for Q-valued functions", "qvlab"};
  app.require_subcommand(1);
  std::string format = "csv";
  std::string out_path;
  ExampleOptions ex;
  std::string mode = "quasi";
  double alpha = 0.5;
  int depth = 12;
  std::size_t grid = 59050;
  std::string scales_arg;
  double tol = -1.0;
  double center = 0.5, r0 = 0.25;
  int scale_count = 11;
  std::string trace_spec = "cos";
  std::size_t disk_samples = 4096, disk_modes = 512;
  double radius = 1.0;

  auto add_common = [&](CLI::App* sc) {
    sc->add_option("--out", out_path, "output path ('-' for stdout)");
    sc->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_example = [&](CLI::App* sc) {
    sc->add_option("name", ex.name, "example name")->required()->check(CLI::IsMember(example_names()));
    sc->add_option("--level", ex.level, "Cantor level (>= 1)");
    sc->add_option("--samples", ex.samples, "samples for the sine example");
  };

  auto* example = app.add_subcommand("example", "emit sampled branches of a construction");
  add_example(example);
  add_common(example);

  auto* audit = app.add_subcommand("audit", "run a minimality audit");
  add_example(audit);
  add_common(audit);
  audit->add_option("--mode", mode, "quasi, omega or almost")->check(CLI::IsMember({"quasi", "omega", "almost"}));
  audit->add_option("--alpha", alpha, "alpha for almost mode")->check(CLI::Range(0.0, 1.0));
  audit->add_option("--depth", depth, "dyadic/triadic family depth")->check(CLI::Range(0, 14));

  auto* branch_cmd = app.add_subcommand("branch", "scan the branch set and estimate its box dimension");
  add_example(branch_cmd);
  add_common(branch_cmd);
  branch_cmd->add_option("--grid", grid, "grid points (>= 3)");
  branch_cmd->add_option("--scales", scales_arg, "comma-separated box sizes");
  branch_cmd->add_option("--tol", tol, "support tolerance (default 1e-9 x value range)");

  auto* decay = app.add_subcommand("decay", "energy decay exponent at a point");
  add_example(decay);
  add_common(decay);
  decay->add_option("--center", center, "centre z");
  decay->add_option("--r0", r0, "outer radius");
  decay->add_option("--scales", scale_count, "number of dyadic scales")->check(CLI::Range(2, 60));

  auto* disk_cmd = app.add_subcommand("disk", "sorted harmonic extension on a disk");
  add_common(disk_cmd);
  disk_cmd->add_option("--trace", trace_spec, "cos, sqrt-z, mixed, const:c[:Q], random:seed[:Q:M]");
  disk_cmd->add_option("--samples", disk_samples, "angular samples N");
  disk_cmd->add_option("--modes", disk_modes, "Fourier modes M");
  disk_cmd->add_option("--radius", radius, "disk radius");

  auto* verify = app.add_subcommand("verify-all", "run the acceptance suite");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*verify) return acceptance::run_all(out) ? kExitOk : kExitVerificationFailed;

    if (*example) {
      const auto u = build_example(ex);
      emit(out_path, out, [&](std::ostream& os) {
        if (format == "csv") {
          io::write_function_csv(os, u);
          return;
        }
        nlohmann::json j;
        j["name"] = ex.name;
        j["q"] = u.q();
        j["x"] = io::num_array({u.breakpoints().begin(), u.breakpoints().end()});
        auto br = nlohmann::json::array();
        for (std::size_t i = 0; i < u.q(); ++i) {
          std::vector<double> col;
          for (std::size_t k = 0; k < u.breakpoints().size(); ++k) col.push_back(u.value(k, i));
          br.push_back(io::num_array(col));
        }
        j["branches"] = std::move(br);
        os << j.dump(1) << '\n';
      });
      return kExitOk;
    }

    if (*audit) {
      const auto u = build_example(ex);
      const auto family = interval_family(u, depth);
      MinimalityReport rep;
      if (mode == "quasi") rep = quasi_k_ratio(u, family);
      else if (mode == "omega") rep = omega_audit(u, family);
      else {
        if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
        rep = almost_deficiency(u, alpha, family);
      }
      emit(out_path, out, [&](std::ostream& os) {
        if (format == "csv") io::write_report_csv(os, rep);
        else os << io::report_json(rep).dump(1) << '\n';
      });
      if (!out_path.empty() && out_path != "-")
        out << "supremum " << io::format_double(rep.supremum) << " over " << rep.records.size() << " records\n";
      // Known bounds: pluri-diamonds are 4-quasiminimizers, pluri-losanges (2, 1/2)-almost minimizers.
      const bool diamond_family = ex.name == "diamond" || ex.name == "double-line" ||
                                  ex.name == "pluri-diamond-demo" || ex.name.ends_with("cantor-diamond");
      const bool losange_family = ex.name == "losange" || ex.name == "pluri-losange-demo" ||
                                  ex.name.ends_with("cantor-losange");
      if (mode == "quasi" && diamond_family && rep.supremum > 4.0 + 1e-9) {
        err << "verification failed: quasi ratio " << rep.supremum << " exceeds 4\n";
        return kExitVerificationFailed;
      }
      if (mode == "almost" && losange_family && alpha == 0.5 && rep.supremum > 2.0) {
        err << "verification failed: almost-minimality constant " << rep.supremum << " exceeds 2\n";
        return kExitVerificationFailed;
      }
      return kExitOk;
    }

    if (*branch_cmd) {
      const auto u = build_example(ex);
      if (grid < 3) throw UsageError("--grid must be >= 3");
      const auto s = tol < 0.0 ? scan(u, grid) : scan(u, grid, tol);
      std::vector<double> scales;
      if (scales_arg.empty()) {
        for (int k = 3; k <= 9; ++k) scales.push_back(std::pow(3.0, -k));
      } else {
        scales = parse_list(scales_arg);
      }
      nlohmann::json dim;
      try {
        dim = io::dimension_json(box_dimension(s, scales));
      } catch (const UndefinedDimensionError& e) {
        dim = {{"error", e.what()}};
      }
      emit(out_path, out, [&](std::ostream& os) {
        if (format == "csv") {
          io::write_scan_csv(os, s);
          return;
        }
        nlohmann::json j;
        j["tol"] = io::num(s.tol);
        j["x"] = io::num_array(s.grid);
        j["sigma"] = s.sigma;
        std::vector<int> flags(s.flagged.begin(), s.flagged.end());
        j["flagged"] = flags;
        j["dimension"] = dim;
        os << j.dump(1) << '\n';
      });
      if (format == "csv" || (!out_path.empty() && out_path != "-")) out << dim.dump() << '\n';
      return kExitOk;
    }

    if (*decay) {
      const auto u = build_example(ex);
      const auto fit = energy_decay_exponent(u, center, r0, geometric_scales(2.0, scale_count));
      emit(out_path, out, [&](std::ostream& os) {
        if (format == "csv") {
          os << "scale,energy\n";
          for (std::size_t k = 0; k < fit.scales.size(); ++k)
            os << io::format_double(fit.scales[k]) << ',' << io::format_double(fit.energies[k]) << '\n';
          return;
        }
        os << io::decay_json(fit).dump(1) << '\n';
      });
      if (!out_path.empty() && out_path != "-") out << "slope " << io::format_double(fit.exponent()) << '\n';
      return kExitOk;
    }

    if (*disk_cmd) {
      const auto m = disk::minimize_disk(disk::sorted_trace(parse_trace(trace_spec), disk_samples, disk_modes, radius));
      const auto sq = disk::check_squeeze_2d(m);
      emit(out_path, out, [&](std::ostream& os) { os << io::disk_json(m, sq).dump(1) << '\n'; });
      if (!out_path.empty() && out_path != "-") out << "squeeze margin " << io::format_double(sq.margin) << '\n';
      return sq.holds ? kExitOk : kExitVerificationFailed;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace qvlab::cli
