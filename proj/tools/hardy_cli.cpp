#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "hardy/run.hpp"

namespace {

std::ostream* open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return &std::cout;
  file.open(path, std::ios::binary);
  return file ? static_cast<std::ostream*>(&file) : nullptr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checker for Hardy-type inequalities on stratified groups"};
  app.require_subcommand(1);

  std::string config, out_path, json_path;
  auto* verify = app.add_subcommand("verify", "Evaluate every run of a config and report one row per case");
  verify->add_option("config", config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  verify->add_option("--out", out_path, "CSV output path (default stdout)");
  verify->add_option("--json", json_path, "Also write a detailed JSON report");

  hardy::SweepOptions sweep_opt;
  std::string sweep_config;
  double sweep_p = 0.0;
  std::string sweep_statement;
  auto* sweep = app.add_subcommand("sweep", "Tabulate the constant (or rhs total) over a beta grid");
  sweep->add_option("config", sweep_config, "Optional run configuration")->check(CLI::ExistingFile);
  sweep->add_option("--statement", sweep_statement, "Statement id");
  sweep->add_option("--beta-range", sweep_opt.beta_range, "lo:hi:step")->capture_default_str();
  auto* p_opt = sweep->add_option("--p", sweep_p, "Exponent for Lp statements");
  sweep->add_flag("--refine", sweep_opt.refine, "Golden-section refinement of the argmax");
  sweep->add_option("--out", out_path, "CSV output path (default stdout)");

  std::string family;
  auto* probe = app.add_subcommand("probe", "Rayleigh quotients of a trial family");
  probe->add_option("config", config, "Probe configuration")->required()->check(CLI::ExistingFile);
  probe->add_option("--family", family, "Replace the config's functions with this file")->check(CLI::ExistingFile);
  probe->add_option("--out", out_path, "CSV output path (default stdout)");

  auto* list = app.add_subcommand("list-statements", "Print the supported statements and their hypotheses");

  std::string emit_dir;
  auto* emit = app.add_subcommand("emit-example-configs", "Write the bundled example configs");
  emit->add_option("dir", emit_dir, "Target directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? hardy::kExitOk : hardy::kExitConfig;
  }

  try {
    std::ofstream file;
    if (*list) {
      hardy::cmd_list_statements(std::cout);
      return hardy::kExitOk;
    }
    if (*emit) return hardy::cmd_emit_example_configs(emit_dir, std::cout, std::cerr);

    std::ostream* out = open_out(out_path, file);
    if (!out) {
      hardy::write_error(std::cerr, "io", "cannot open '" + out_path + "'");
      return hardy::kExitInternal;
    }
    if (*verify) {
      std::ofstream json_file;
      std::ostream* json_out = nullptr;
      if (!json_path.empty()) {
        json_file.open(json_path, std::ios::binary);
        if (!json_file) {
          hardy::write_error(std::cerr, "io", "cannot open '" + json_path + "'");
          return hardy::kExitInternal;
        }
        json_out = &json_file;
      }
      return hardy::cmd_verify(config, *out, json_out, std::cerr);
    }
    if (*sweep) {
      if (!sweep_config.empty()) sweep_opt.config = sweep_config;
      if (!sweep_statement.empty()) sweep_opt.statement = sweep_statement;
      if (p_opt->count() > 0) sweep_opt.p = sweep_p;
      return hardy::cmd_sweep(sweep_opt, *out, std::cerr);
    }
    if (*probe) {
      std::optional<std::filesystem::path> fam;
      if (!family.empty()) fam = family;
      return hardy::cmd_probe(config, fam, *out, std::cerr);
    }
  } catch (const std::exception& e) {
    hardy::write_error(std::cerr, "internal", e.what());
    return hardy::kExitInternal;
  }
  return hardy::kExitInternal;
}
