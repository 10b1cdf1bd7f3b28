// Command-line front end: simulate/check litmus tests, enumerate outcomes,
// generate tests from parameter files, and compare memory models.
//
// Exit codes: 0 = expectation confirmed / work completed, 2 = expectation
// violated, 1 = usage, parse or configuration error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "mcm/engine.hpp"
#include "mcm/generator.hpp"
#include "mcm/litmus_io.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitViolated = 2;

mcm::ReportFormat format_from(const std::string& name) {
  return name == "structured" ? mcm::ReportFormat::Structured : mcm::ReportFormat::Human;
}

struct CommonFlags {
  std::string mcm = "SC";
  int threads = 1;
  std::string format = "human";
};

mcm::SearchOptions search_options(const CommonFlags& flags) {
  mcm::SearchOptions options;
  options.threads = flags.threads;
  return options;
}

int run_check(const std::string& file, const CommonFlags& flags, bool show_witness) {
  mcm::LitmusTest test = mcm::parse_litmus_file(file);
  mcm::MemoryModel mcm_tag = mcm::memory_model_from(flags.mcm);

  mcm::CheckReport report;
  report.test = test;
  report.mcm = mcm_tag;
  report.witness = mcm::check_allowed(test.config, test.program, mcm_tag, test.condition,
                                      search_options(flags));
  report.show_witness = show_witness;
  std::cout << mcm::emit_report(report, format_from(flags.format));
  return mcm::expectation_confirmed(test.expectation, report.witness.has_value()) ? kExitOk
                                                                                  : kExitViolated;
}

int run_outcomes(const std::string& file, const CommonFlags& flags, bool count_only,
                 bool respect_condition) {
  mcm::LitmusTest test = mcm::parse_litmus_file(file);
  mcm::MemoryModel mcm_tag = mcm::memory_model_from(flags.mcm);

  mcm::OutcomesReport report;
  report.test = test;
  report.mcm = mcm_tag;
  report.outcomes =
      mcm::reachable_final_states(test.config, test.program, mcm_tag, search_options(flags));
  if (respect_condition) {
    std::erase_if(report.outcomes.outcomes,
                  [&](const mcm::Outcome& o) { return !mcm::matches(o.state, test.condition); });
  }
  report.count_only = count_only;
  report.respect_condition = respect_condition;
  std::cout << mcm::emit_report(report, format_from(flags.format));
  return kExitOk;
}

int run_generate(const std::string& param_path, const std::string& out_dir,
                 const CommonFlags& flags, const std::string& mcm_override,
                 bool values_exclude_initial) {
  mcm::ParamFile param = mcm::parse_param_file(param_path);
  if (!mcm_override.empty()) param.mcm = mcm::memory_model_from(mcm_override);

  mcm::GeneratorOptions options;
  options.values_exclude_initial = values_exclude_initial;
  options.search = search_options(flags);

  mcm::GenerationReport result = mcm::generate(param.generation_config(), options);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create output directory '" << out_dir << "': " << ec.message()
              << "\n";
    return kExitError;
  }

  mcm::GenerationSummary summary;
  summary.param_name = param.name.empty() ? fs::path(param_path).stem().string() : param.name;
  summary.mcm = param.mcm;
  summary.values_exclude_initial = values_exclude_initial;
  summary.candidates = result.candidates;

  for (const mcm::AcceptedTest& accepted : result.accepted) {
    mcm::LitmusTest test;
    test.name = accepted.name;
    test.config = param.config;
    test.program = accepted.program;
    test.condition = param.final_spec;
    test.expectation = mcm::Expectation::Allowed;
    test.symbols = mcm::SymbolTable::defaults(param.config.variables);

    fs::path path = fs::path(out_dir) / (accepted.name + ".litmus");
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << path.string() << "'\n";
      return kExitError;
    }
    out << mcm::emit_litmus(test);
    summary.test_names.push_back(accepted.name);
  }

  {
    fs::path path = fs::path(out_dir) / "summary.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << path.string() << "'\n";
      return kExitError;
    }
    out << mcm::emit_report(summary, mcm::ReportFormat::Structured);
  }

  std::cout << mcm::emit_report(summary, format_from(flags.format));
  return kExitOk;
}

int run_compare(const std::string& param_path, const CommonFlags& flags,
                const std::string& strict_name, const std::string& relaxed_name,
                bool values_exclude_initial) {
  mcm::ParamFile param = mcm::parse_param_file(param_path);
  mcm::MemoryModel strict = mcm::memory_model_from(strict_name);
  mcm::MemoryModel relaxed = mcm::memory_model_from(relaxed_name);

  mcm::GeneratorOptions options;
  options.values_exclude_initial = values_exclude_initial;
  options.search = search_options(flags);

  // Generate under the relaxed model, then partition by strict validity.
  mcm::GenerationConfig gc = param.generation_config();
  gc.mcm = relaxed;
  mcm::GenerationReport generated = mcm::generate(gc, options);

  std::vector<mcm::Program> programs;
  std::vector<std::string> names;
  programs.reserve(generated.accepted.size());
  for (mcm::AcceptedTest& accepted : generated.accepted) {
    programs.push_back(std::move(accepted.program));
    names.push_back(std::move(accepted.name));
  }
  mcm::ComparisonReport comparison =
      mcm::compare_models(param.config, programs, names, strict, relaxed, param.final_spec, options);

  mcm::ComparisonSummary summary;
  summary.param_name = param.name.empty() ? fs::path(param_path).stem().string() : param.name;
  summary.strict = strict;
  summary.relaxed = relaxed;
  summary.values_exclude_initial = values_exclude_initial;
  summary.candidates = generated.candidates;
  for (const auto& entry : comparison.both) summary.both.push_back(entry.name);
  for (const auto& entry : comparison.relaxed_only) summary.relaxed_only.push_back(entry.name);
  for (const auto& entry : comparison.neither) summary.neither.push_back(entry.name);

  std::cout << mcm::emit_report(summary, format_from(flags.format));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operational litmus-test engine for SC and TSO"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string file;
  std::string param_path;
  std::string out_dir = "out";
  std::string mcm_override;
  std::string strict_name = "SC";
  std::string relaxed_name = "TSO";
  bool show_witness = false;
  bool count_only = false;
  bool respect_condition = false;
  bool values_exclude_initial = false;

  auto add_common = [&](CLI::App* cmd, bool with_mcm) {
    if (with_mcm)
      cmd->add_option("--mcm", flags.mcm, "Memory model")->check(CLI::IsMember({"SC", "TSO"}));
    cmd->add_option("--threads", flags.threads, "Worker threads (never changes any output)")
        ->check(CLI::Range(1, 256));
    cmd->add_option("--format", flags.format, "Report format")
        ->check(CLI::IsMember({"human", "structured"}));
  };

  CLI::App* check = app.add_subcommand("check", "Check a litmus test's final-state condition");
  check->add_option("file", file, "Litmus test file")->required();
  check->add_flag("--witness", show_witness, "Print one matching execution");
  add_common(check, true);

  CLI::App* outcomes =
      app.add_subcommand("outcomes", "Enumerate all distinct final states of a litmus test");
  outcomes->add_option("file", file, "Litmus test file")->required();
  outcomes->add_flag("--count-only", count_only, "Print counts without the state listing");
  outcomes->add_flag("--respect-condition", respect_condition,
                     "Keep only outcomes matching the test's condition");
  add_common(outcomes, true);

  CLI::App* generate =
      app.add_subcommand("generate", "Generate all litmus tests matching a parameter file");
  generate->add_option("param", param_path, "Parameter file (JSON)")->required();
  generate->add_option("--out", out_dir, "Output directory for the generated tests");
  generate->add_option("--mcm", mcm_override, "Override the parameter file's memory model")
      ->check(CLI::IsMember({"SC", "TSO"}));
  generate->add_flag("--values-exclude-initial", values_exclude_initial,
                     "Exclude stores of the initial variable value from the operation space");
  add_common(generate, false);

  CLI::App* compare = app.add_subcommand(
      "compare", "Generate under the relaxed model and partition by strict validity");
  compare->add_option("param", param_path, "Parameter file (JSON)")->required();
  compare->add_option("--strict", strict_name, "Stricter model")
      ->check(CLI::IsMember({"SC", "TSO"}));
  compare->add_option("--relaxed", relaxed_name, "Relaxed model")
      ->check(CLI::IsMember({"SC", "TSO"}));
  compare->add_flag("--values-exclude-initial", values_exclude_initial,
                    "Exclude stores of the initial variable value from the operation space");
  add_common(compare, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (app.got_subcommand(check)) return run_check(file, flags, show_witness);
    if (app.got_subcommand(outcomes)) return run_outcomes(file, flags, count_only, respect_condition);
    if (app.got_subcommand(generate))
      return run_generate(param_path, out_dir, flags, mcm_override, values_exclude_initial);
    if (app.got_subcommand(compare))
      return run_compare(param_path, flags, strict_name, relaxed_name, values_exclude_initial);
  } catch (const mcm::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const mcm::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
