// Command-line front end: argument parsing only; all work happens in the
// library's cli:: report builders so tests can drive the same code paths.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "flowknot/cli.hpp"
#include "flowknot/serial.hpp"

namespace {

int emit(const flowknot::cli::CmdResult& r) {
  if (r.exitCode == 0)
    std::cout << r.output;
  else
    std::cerr << r.output;
  return r.exitCode;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace flowknot;

  CLI::App app{"flow-expansion knot toolkit"};
  app.require_subcommand(1);

  cli::RunConfig cfg;
  app.add_flag("--json", cfg.json, "emit JSON instead of text");
  app.add_option("--tietze-budget", cfg.tietzeBudget, "simplification move budget")
      ->check(CLI::PositiveNumber);

  std::string fixtureName;
  CLI::App* fixture = app.add_subcommand("fixture", "run a bundled example stage end to end");
  fixture->add_option("name", fixtureName, "fixture name")->required();

  std::string expansionFile;
  int depth = 3;
  CLI::App* exp = app.add_subcommand("expansion", "analyze an expansion JSON file");
  exp->add_option("file", expansionFile, "expansion JSON path")->required();
  exp->add_option("--depth", depth, "bonding steps to unroll (default 3)");

  std::vector<int> cfEntries, cfCompare;
  CLI::App* sturmian = app.add_subcommand("sturmian", "compose the parameterized substitutions");
  sturmian->add_option("entries", cfEntries, "parameter entries (final repeats)")->required();
  sturmian->add_option("--compare", cfCompare, "second parameter list for tail equivalence");

  std::string sigmaWord;
  int alphabet = 2;
  CLI::App* sigma = app.add_subcommand("sigma-w", "padded re-embedding of a seed word");
  sigma->add_option("w", sigmaWord, "seed word (digit string)")->required();
  sigma->add_option("--alphabet", alphabet, "alphabet size (default 2)");

  std::string subFile;
  std::vector<int> certCf;
  int certCount = 0, certBudget = 64;
  CLI::App* cert = app.add_subcommand("certificate", "distinct-knot certificate rows");
  cert->add_option("--sub", subFile, "substitution JSON path");
  cert->add_option("--cf", certCf, "parameter entries instead of a substitution file");
  cert->add_option("-m,--count", certCount, "distinct genus bounds requested")->required();
  cert->add_option("--budget", certBudget, "seed length budget (default 64)");

  std::string presFile, targetStr;
  CLI::App* homs = app.add_subcommand("homs", "count homomorphisms into a small group");
  homs->add_option("file", presFile, "presentation JSON path")->required();
  homs->add_option("--target", targetStr, "s2 | s3 | s4 | z/m")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  cli::CmdResult result{0, ""};
  if (*fixture) {
    result = cli::run_command([&] { return cli::cmd_fixture(fixtureName, cfg); });
  } else if (*exp) {
    result = cli::run_command([&] {
      return cli::cmd_expansion(serial::parse_expansion(cli::read_json_file(expansionFile)), depth, cfg);
    });
  } else if (*sturmian) {
    std::optional<std::vector<int>> compare;
    if (!cfCompare.empty()) compare = cfCompare;
    result = cli::run_command([&] { return cli::cmd_sturmian(cfEntries, compare, cfg); });
  } else if (*sigma) {
    result = cli::run_command([&] { return cli::cmd_sigma_w(sigmaWord, alphabet, cfg); });
  } else if (*cert) {
    result = cli::run_command([&] {
      std::optional<symbolic::Substitution> sub;
      if (!subFile.empty()) sub = serial::parse_substitution(cli::read_json_file(subFile));
      std::optional<std::vector<int>> cf;
      if (!certCf.empty()) cf = certCf;
      return cli::cmd_certificate(sub, cf, certCount, certBudget, cfg);
    });
  } else if (*homs) {
    result = cli::run_command([&] {
      return cli::cmd_homs(serial::parse_presentation(cli::read_json_file(presFile)), targetStr, cfg);
    });
  }
  return emit(result);
}
