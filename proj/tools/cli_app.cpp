#include "cli_app.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>

#include <CLI11.hpp>

#include "sphereclamp/oracles.hpp"
#include "sphereclamp/scenario_io.hpp"
#include "sphereclamp/scenarios.hpp"
#include "sphereclamp/sim.hpp"
#include "sphereclamp/trace_io.hpp"

namespace sphereclamp::cli {
namespace {

struct RunOptions {
  std::string scenario;
  std::string output = "trace.csv";
  std::string format = "csv";
  std::vector<std::string> overrides;
  bool parallel = false;
};

struct VerifyOptions {
  std::string suite = "all";
  int instances = 1000;
  int triples = 10000;
  int slerp_cases = 10000;
  std::uint64_t seed = 20250101;
};

struct ExportOptions {
  std::string scenario;
  std::string output;
};

sim::Scenario resolve_scenario(const std::string& name_or_path) {
  if (auto builtin = scenarios::builtin(name_or_path)) return *builtin;
  if (std::filesystem::exists(name_or_path)) return io::load_scenario_file(name_or_path);
  throw sim::ValidationError({"--scenario: unknown scenario '" + name_or_path +
                              "' (not a builtin name or an existing file)"});
}

int do_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  io::TraceFormat format = io::TraceFormat::kCsv;
  if (opt.format == "jsonl" || opt.format == "json-lines") {
    format = io::TraceFormat::kJsonLines;
  } else if (opt.format != "csv") {
    err << "error: --format must be csv or jsonl\n";
    return kExitInvalid;
  }

  sim::Scenario scenario;
  try {
    scenario = resolve_scenario(opt.scenario);
    for (const auto& o : opt.overrides) io::apply_override(scenario, o);
    if (opt.parallel) scenario.clamp.scan = ScanPolicy::kParallel;
    sim::validate(scenario);
  } catch (const sim::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  std::ofstream file(opt.output, std::ios::binary);
  if (!file) {
    err << "error: cannot write output file '" << opt.output << "'\n";
    return kExitInvalid;
  }

  const auto t0 = std::chrono::steady_clock::now();
  const sim::Trace trace = sim::run_scenario(scenario);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  io::write_trace(trace, format, file);
  file.close();
  if (!file) {
    err << "error: failed writing '" << opt.output << "'\n";
    return kExitInvalid;
  }

  out << "scenario: " << scenario.name << "\n";
  out << "trace: " << opt.output << "\n";
  io::print_summary(io::summarize(trace), wall, out);
  if (trace.safety_violations > 0) {
    err << "error: command left the allowed-deviation ball " << trace.safety_violations
        << " times\n";
    return kExitUnsafe;
  }
  return kExitOk;
}

int do_list(std::ostream& out) {
  for (const auto& name : scenarios::builtin_names()) {
    const auto s = scenarios::builtin(name);
    out << std::left << std::setw(16) << name << s->description << "\n";
  }
  return kExitOk;
}

int do_export(const ExportOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const sim::Scenario s = resolve_scenario(opt.scenario);
    io::save_scenario_file(s, opt.output);
  } catch (const sim::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  out << "wrote " << opt.output << "\n";
  return kExitOk;
}

int do_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  const auto wants = [&opt](const char* s) { return opt.suite == "all" || opt.suite == s; };
  if (!wants("clamp-oracle") && !wants("metric-axioms") && !wants("slerp")) {
    err << "error: unknown suite '" << opt.suite
        << "' (all, clamp-oracle, metric-axioms, slerp)\n";
    return kExitInvalid;
  }
  bool ok = true;

  if (wants("clamp-oracle")) {
    const auto r = oracles::run_clamp_oracle_suite(opt.instances, opt.seed);
    ok = ok && r.passed();
    out << "clamp-oracle: " << (r.passed() ? "PASS" : "FAIL") << " (" << r.agreed << "/"
        << r.instances << ", max |dt|*(I-1) = " << std::setprecision(3) << r.max_ratio
        << " <= 1, no-solution instances " << r.no_solution_instances << ", "
        << std::setprecision(3) << r.seconds << " s)\n";
    for (const auto& f : r.failures) out << "  " << f << "\n";
  }
  if (wants("metric-axioms")) {
    const auto r = oracles::run_metric_axiom_suite(opt.triples, opt.seed + 1);
    int violations = 0;
    int triangle = 0;
    for (const auto& m : r.metrics) {
      violations += m.violations();
      triangle += m.triangle;
    }
    ok = ok && r.passed();
    out << "metric-axioms: " << (r.passed() ? "PASS" : "FAIL") << " (" << r.metrics.size()
        << " metrics x " << opt.triples << " triples, violations " << violations
        << ", triangle-inequality violations = " << triangle << ")\n";
    for (const auto& m : r.metrics) {
      out << "  " << std::left << std::setw(20) << m.metric << " violations " << m.violations()
          << ", max triangle excess " << std::setprecision(3) << m.max_triangle_excess << "\n";
    }
  }
  if (wants("slerp")) {
    const auto r = oracles::run_slerp_suite(opt.slerp_cases, opt.seed + 2);
    ok = ok && r.passed();
    out << "slerp: " << (r.passed() ? "PASS" : "FAIL") << " (" << r.cases
        << " cases, max geodesic deviation " << std::setprecision(3) << r.max_geodesic_deviation
        << " <= 1e-9, endpoint " << r.max_endpoint_error << ", sign " << r.max_sign_deviation
        << ", velocity " << r.max_velocity_deviation << ")\n";
  }
  return ok ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hypersphere trajectory clamping: scenario runner and oracle checks", "sphereclamp"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "run a scenario and write its trace");
  run_cmd->add_option("--scenario", run.scenario, "builtin name or scenario JSON file")->required();
  run_cmd->add_option("--output,-o", run.output, "trace file");
  run_cmd->add_option("--format", run.format, "csv or jsonl");
  run_cmd->add_option("--set", run.overrides, "override key=value (dt, p_e, r_e, step_distance, horizon)");
  run_cmd->add_flag("--parallel", run.parallel, "use the OpenMP clamp kernel");

  auto* list_cmd = app.add_subcommand("list-scenarios", "list builtin scenarios");

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "run the brute-force oracle suites");
  verify_cmd->add_option("--suite", verify.suite, "all, clamp-oracle, metric-axioms or slerp");
  verify_cmd->add_option("--instances", verify.instances, "clamp-oracle instances");
  verify_cmd->add_option("--triples", verify.triples, "metric-axiom triples per metric");
  verify_cmd->add_option("--seed", verify.seed, "random seed");

  ExportOptions exp;
  auto* export_cmd = app.add_subcommand("export", "write a scenario as a JSON config file");
  export_cmd->add_option("--scenario", exp.scenario, "builtin name or scenario file")->required();
  export_cmd->add_option("--output,-o", exp.output, "JSON file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (run_cmd->parsed()) return do_run(run, out, err);
    if (list_cmd->parsed()) return do_list(out);
    if (verify_cmd->parsed()) return do_verify(verify, out, err);
    if (export_cmd->parsed()) return do_export(exp, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitInvalid;
}

}  // namespace sphereclamp::cli
