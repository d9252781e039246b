// Command-line front end: verify / sweep / list.
//
// Exit status: 0 all runs within tolerance, 1 some run failed or errored,
// 2 bad usage or malformed config.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "mhardy/errors.hpp"
#include "mhardy/suite.hpp"

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mhardy::ConfigError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw mhardy::ConfigError("write failed for '" + path.string() + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of magnetic and weighted Hardy-type inequalities"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mhardy::kToolVersion);

  std::string adm_flag;
  bool timings = false;
  app.add_option("--admissibility", adm_flag,
                 "Second admissibility condition for the AB-type results")
      ->check(CLI::IsMember({"thm2", "corollary"}));

  std::string config, out, out_dir;
  auto* verify = app.add_subcommand("verify", "Run every entry of a suite config");
  verify->add_option("--config", config, "Suite config (JSON)")->required();
  verify->add_option("--out", out, "Report file (JSON)")->required();
  verify->add_flag("--timings", timings, "Record wall-clock seconds per run");

  auto* sweep = app.add_subcommand("sweep", "Sharpness sweeps; one CSV per run");
  sweep->add_option("--config", config, "Sweep config (JSON)")->required();
  sweep->add_option("--out-dir", out_dir, "Output directory")->required();
  sweep->add_flag("--timings", timings, "Record wall-clock seconds per run");

  app.add_subcommand("list", "List theorem and identity ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  mhardy::SuiteOptions opt;
  opt.admissibility = mhardy::admissibility_from_string(adm_flag);
  opt.timings = timings;

  try {
    if (app.got_subcommand("list")) {
      std::cout << mhardy::list_theorems();
      return 0;
    }
    const mhardy::SuiteConfig cfg = mhardy::load_suite_config(config);
    if (app.got_subcommand("verify")) {
      const auto res = mhardy::run_suite(cfg, opt);
      write_file(out, res.report.dump(2) + "\n");
      const auto& s = res.report["summary"];
      std::fprintf(stderr, "%d runs: %d passed, %d failed, %d errors\n",
                   s["runs"].get<int>(), s["passed"].get<int>(),
                   s["failed"].get<int>(), s["errors"].get<int>());
      return res.ok ? 0 : 1;
    }
    const auto res = mhardy::sweep_sharpness(cfg, opt);
    fs::create_directories(out_dir);
    for (const auto& t : res.tables) write_file(fs::path(out_dir) / t.file_name, t.csv);
    write_file(fs::path(out_dir) / "sweep.json", res.combined.dump(2) + "\n");
    return res.ok ? 0 : 1;
  } catch (const mhardy::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
