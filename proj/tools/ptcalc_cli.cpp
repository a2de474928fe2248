// ptcalc: exact wall-crossing and pair-invariant calculator.
//
//   ptcalc run       <scenario>   all queries in file order
//   ptcalc coeffs    <scenario>   rewriting-coefficient queries only
//   ptcalc wallcross <scenario>   sheaf-side wall-crossing queries only
//   ptcalc ptgen     <scenario>   pair-series pipeline queries only
//   ptcalc expand    <scenario>   generating-function expansion queries only
//   ptcalc verify    <scenario>   recursion-identity checks only
//
// Exit codes: 0 ok; 1 bad input or inconsistent configuration; 2 a
// certification step failed (primitivity, difference-equation fit, oracle).

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "ptcalc/report.hpp"
#include "ptcalc/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"exact wall-crossing and pair-invariant calculator"};
  app.set_version_flag("--version", std::string("ptcalc ") + ptcalc::kVersion);
  app.require_subcommand(1);

  std::string file;
  long long n_max = -1;
  int truncation = -1;
  bool no_memo = false;
  bool oracle = false;

  app.add_option("--n-max", n_max, "override the expansion order for expand queries");
  app.add_option("--truncation", truncation,
                 "override the coefficient-ring truncation (0..16)");
  app.add_flag("--no-memo", no_memo, "disable memoization of the pair recursion");
  app.add_flag("--oracle", oracle,
               "wallcross: re-run with a doubled window and require agreement");

  using Kind = ptcalc::ScenarioQuery::Kind;
  std::vector<std::pair<std::string, std::optional<Kind>>> modes = {
      {"run", std::nullopt},
      {"coeffs", Kind::Coeffs},
      {"wallcross", Kind::Wallcross},
      {"ptgen", Kind::Ptgen},
      {"expand", Kind::Expand},
      {"verify", Kind::Verify},
  };
  for (auto& [name, kind] : modes) {
    auto* sub = app.add_subcommand(
        name, kind ? std::string("run the ") + name + " queries" : "run every query");
    sub->add_option("file", file, "scenario file")->required();
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  std::optional<Kind> only;
  for (auto& [name, kind] : modes)
    if (app.get_subcommand(name)->parsed()) only = kind;

  try {
    std::optional<int> trunc;
    if (truncation >= 0) trunc = truncation;
    ptcalc::ScenarioData s = ptcalc::scenario_load(file, trunc);

    ptcalc::RunOptions opt;
    if (n_max >= 0) opt.n_max = n_max;
    opt.memo = !no_memo;
    opt.oracle = oracle;
    opt.only = only;
    ptcalc::run_report(s, opt, std::cout, &std::cerr);
  } catch (const ptcalc::CertifyError& e) {
    std::cerr << "certify error: " << e.what() << "\n";
    return 2;
  } catch (const ptcalc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const ptcalc::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
