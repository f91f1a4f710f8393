#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <cachenet/acceptance.hpp>
#include <cachenet/alignment.hpp>
#include <cachenet/delivery.hpp>
#include <cachenet/error.hpp>
#include <cachenet/io.hpp>
#include <cachenet/ndt.hpp>
#include <cachenet/placement.hpp>
#include <cachenet/rational.hpp>
#include <cachenet/topology.hpp>

namespace cachenet::cli {

enum Exit : int { ok = 0, verification_failure = 1, usage = 2, out_of_region = 3, size_cap = 4 };

/// Everything needed to replay a run: the subcommand, its flags as given, and
/// where the output went.
struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> flags;
  std::uint64_t seed = 1;
  std::string out;
  std::string format;

  io::Json to_json() const {
    io::Json doc;
    doc["subcommand"] = subcommand;
    io::Json f = io::Json::object();
    for (const auto& [k, v] : flags) f[k] = v;
    doc["flags"] = f;
    doc["seed"] = seed;
    doc["out"] = out;
    doc["format"] = format;
    return doc;
  }
};

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::out_of_region:
    case ErrorCode::infeasible: return out_of_region;
    case ErrorCode::size_cap_exceeded: return size_cap;
    case ErrorCode::coverage:
    case ErrorCode::internal: return verification_failure;
    default: return usage;
  }
}

namespace detail {

struct Common {
  std::string out;
  std::string format;
  std::uint64_t seed = 1;
  std::string manifest;
};

inline void add_common(CLI::App* cmd, Common& c, const std::string& default_format) {
  c.format = default_format;
  cmd->add_option("--out", c.out, "Write output to PATH instead of stdout");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_option("--manifest", c.manifest, "Also write the run manifest (JSON) to PATH");
}

inline std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::invalid_argument, "bad integer '" + item + "' in list '" + text + "'");
    }
  }
  return out;
}

inline placement::SplittingRatios parse_ratio_list(const std::string& text) {
  placement::SplittingRatios out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.a.push_back(parse_rational(item));
  return out;
}

inline void emit(const std::string& text, const Common& c, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.out, std::ios::binary);
  if (!file) throw Error(ErrorCode::invalid_argument, "cannot open output file " + c.out);
  file << text;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::invalid_argument, "cannot open output file " + path);
  file << text;
}

/// Flags the user actually passed, by long name, for the manifest.
inline std::map<std::string, std::string> given_flags(const CLI::App* cmd) {
  std::map<std::string, std::string> out;
  for (const CLI::Option* opt : cmd->get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help") continue;
    auto results = opt->results();
    std::string value;
    for (std::size_t k = 0; k < results.size(); ++k) value += (k ? "," : "") + results[k];
    out[opt->get_name()] = opt->get_expected_min() == 0 ? "true" : value;
  }
  return out;
}

}  // namespace detail

/// Runs the command line `args` (without the program name). Output documents
/// go to `out` (or --out), warnings and errors to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cache-aided partially connected interference network toolkit", "cachenet"};
  app.require_subcommand(1, 1);

  // ndt
  detail::Common ndt_c;
  int ndt_L = 0;
  std::string ndt_mu_r, ndt_mu_t = "1";
  auto* ndt_cmd = app.add_subcommand("ndt", "Achievable NDT, lower bound and splitting ratios at one cache size");
  ndt_cmd->add_option("--L", ndt_L, "Receiver connectivity")->required()->check(CLI::PositiveNumber);
  ndt_cmd->add_option("--muR", ndt_mu_r, "Normalized receiver cache size, num/den")->required();
  ndt_cmd->add_option("--muT", ndt_mu_t, "Normalized transmitter cache size, num/den");
  detail::add_common(ndt_cmd, ndt_c, "json");

  // sweep
  detail::Common sweep_c;
  int sweep_L = 0, sweep_points = 101;
  std::string sweep_mu_t = "1";
  auto* sweep_cmd = app.add_subcommand("sweep", "NDT over an even grid of receiver cache sizes");
  sweep_cmd->add_option("--L", sweep_L, "Receiver connectivity")->required()->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--points", sweep_points, "Grid points on [0, 1]")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--muT", sweep_mu_t, "Normalized transmitter cache size, num/den");
  detail::add_common(sweep_cmd, sweep_c, "csv");

  // deliver
  detail::Common del_c;
  int del_K = 0, del_L = 0, del_N = 0;
  std::string del_mu_r, del_mu_t = "1", del_demand, del_ratios, del_placement;
  bool del_dump = false;
  auto* del_cmd = app.add_subcommand("deliver", "Place, deliver and decode one demand bit-exactly");
  del_cmd->add_option("--K", del_K, "Number of receivers")->required()->check(CLI::PositiveNumber);
  del_cmd->add_option("--L", del_L, "Receiver connectivity")->required()->check(CLI::PositiveNumber);
  del_cmd->add_option("--muR", del_mu_r, "Normalized receiver cache size, num/den")->required();
  del_cmd->add_option("--muT", del_mu_t, "Normalized transmitter cache size, num/den");
  del_cmd->add_option("--N", del_N, "Library size (default K)")->check(CLI::PositiveNumber);
  del_cmd->add_option("--demand", del_demand, "Comma-separated file index per receiver (default 0,1,..,K-1)");
  del_cmd->add_option("--ratios", del_ratios, "Override the optimized splitting ratios: a0,...,aL");
  del_cmd->add_option("--placement-out", del_placement, "Write the placement plan (JSON) to PATH");
  del_cmd->add_flag("--dump-messages", del_dump, "Include the symbolic coded-message table");
  detail::add_common(del_cmd, del_c, "json");

  // align
  detail::Common al_c;
  int al_K = 0, al_L = 0, al_r = 0, al_n = 1, al_seeds = 1;
  std::string al_mode = "float";
  alignment::AlignmentOptions al_opts;
  auto* al_cmd = app.add_subcommand("align", "Build the aligned receive matrices and check decodability");
  al_cmd->add_option("--K", al_K, "Number of receivers")->required()->check(CLI::PositiveNumber);
  al_cmd->add_option("--L", al_L, "Receiver connectivity")->required()->check(CLI::PositiveNumber);
  al_cmd->add_option("--r", al_r, "Group level (multicast group size minus one)")->required()->check(CLI::NonNegativeNumber);
  al_cmd->add_option("--n", al_n, "Construction depth")->check(CLI::PositiveNumber);
  al_cmd->add_option("--mode", al_mode, "Scalar field")->check(CLI::IsMember({"float", "prime"}));
  al_cmd->add_option("--seeds", al_seeds, "Number of channel draws")->check(CLI::PositiveNumber);
  al_cmd->add_option("--rank-threshold", al_opts.rank_threshold, "Relative singular-value threshold (float mode)")
      ->check(CLI::PositiveNumber);
  al_cmd->add_option("--residual-threshold", al_opts.residual_threshold, "Relative containment residual threshold (float mode)")
      ->check(CLI::PositiveNumber);
  detail::add_common(al_cmd, al_c, "json");

  // verify
  detail::Common ver_c;
  bool ver_quick = false, ver_fault = false;
  auto* ver_cmd = app.add_subcommand("verify", "Run the acceptance battery and print a pass/fail table");
  ver_cmd->add_flag("--quick", ver_quick, "Skip the depth-2 alignment runs");
  ver_cmd->add_flag("--inject-fault", ver_fault)->group("");
  detail::add_common(ver_cmd, ver_c, "json");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (app.get_subcommands().empty()) err << app.help();
    return usage;
  }

  CLI::App* cmd = app.get_subcommands().front();
  const detail::Common& common = cmd == ndt_cmd     ? ndt_c
                                 : cmd == sweep_cmd ? sweep_c
                                 : cmd == del_cmd   ? del_c
                                 : cmd == al_cmd    ? al_c
                                                    : ver_c;
  if (!common.manifest.empty()) {
    RunManifest m{cmd->get_name(), detail::given_flags(cmd), common.seed, common.out, common.format};
    try {
      detail::write_file(common.manifest, io::dump(m.to_json()));
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return usage;
    }
  }

  try {
    if (cmd == ndt_cmd) {
      auto sol = ndt::optimize(ndt_L, parse_rational(ndt_mu_r), parse_rational(ndt_mu_t));
      for (const auto& w : sol.warnings) err << "warning: " << w << "\n";
      detail::emit(ndt_c.format == "csv" ? io::sweep_csv({sol}, ndt_L) : io::dump(io::ndt_solution_json(sol)), ndt_c, out);
      return ok;
    }

    if (cmd == sweep_cmd) {
      auto rows = ndt::sweep(sweep_L, sweep_points, parse_rational(sweep_mu_t));
      for (const auto& sol : rows)
        for (const auto& w : sol.warnings) err << "warning: " << w << "\n";
      detail::emit(sweep_c.format == "csv" ? io::sweep_csv(rows, sweep_L) : io::dump(io::sweep_json(rows)), sweep_c, out);
      return ok;
    }

    if (cmd == del_cmd) {
      if (del_c.format != "json") throw Error(ErrorCode::invalid_argument, "deliver only emits json");
      auto cfg = topology::make_linear(del_K, del_L);
      placement::CacheSpec spec{del_N ? del_N : del_K, parse_rational(del_mu_t), parse_rational(del_mu_r)};
      if (spec.mu_r < 0) throw Error(ErrorCode::out_of_region, "mu_R " + to_string(spec.mu_r) + " is negative");
      if (spec.mu_t < Rational(1, del_L))
        throw Error(ErrorCode::out_of_region, "mu_T " + to_string(spec.mu_t) + " below 1/L");
      if (spec.mu_r > 1) {
        err << "warning: mu_R " << to_string(spec.mu_r) << " clamped to 1\n";
        spec.mu_r = 1;
      }
      if (spec.mu_t > 1) {
        err << "warning: mu_T " << to_string(spec.mu_t) << " clamped to 1\n";
        spec.mu_t = 1;
      }
      auto demand = del_demand.empty() ? delivery::Demand::identity(del_K) : delivery::Demand{detail::parse_int_list(del_demand)};
      auto ratios = del_ratios.empty() ? ndt::optimize(del_L, spec.mu_r, spec.mu_t).ratios : detail::parse_ratio_list(del_ratios);
      auto report = delivery::simulate(cfg, spec, ratios, demand, del_c.seed);
      if (!del_placement.empty()) detail::write_file(del_placement, io::dump(io::placement_plan_json(cfg, spec, ratios)));
      detail::emit(io::dump(io::delivery_report_json(report, del_dump)), del_c, out);
      for (const auto& rx : report.receivers)
        if (!rx.ok) err << "receiver " << rx.i << " failed: " << rx.detail << "\n";
      return report.all_ok() ? ok : verification_failure;
    }

    if (cmd == al_cmd) {
      if (al_c.format != "json") throw Error(ErrorCode::invalid_argument, "align only emits json");
      auto mode = al_mode == "prime" ? alignment::FieldMode::prime_field : alignment::FieldMode::complex_float;
      auto report = alignment::run_alignment(al_K, al_L, al_r, al_n, mode, al_seeds, al_c.seed, al_opts);
      detail::emit(io::dump(io::align_report_json(report)), al_c, out);
      return report.all_pass() ? ok : verification_failure;
    }

    acceptance::Scheme scheme;
    if (ver_fault) scheme = acceptance::perturb("cost", 3, 1, 1);
    acceptance::BatteryOptions options;
    options.quick = ver_quick;
    auto results = acceptance::run_battery(scheme, options);
    std::string table;
    std::string failed;
    for (const auto& r : results) {
      table += acceptance::format_line(r) + "\n";
      if (!r.pass) failed += (failed.empty() ? "" : ", ") + (r.id ? std::to_string(r.id) : std::string("supplement"));
    }
    table += failed.empty() ? "all criteria passed\n" : "failed: " + failed + "\n";
    detail::emit(table, ver_c, out);
    return failed.empty() ? ok : verification_failure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace cachenet::cli
