// lcapr: phase retrieval experiments on finite products of Z/n and Z.
//
//   lcapr retrieve --config configs/z4xz9.ini --out-dir out
//   lcapr verify   --config configs/verify_completeness.ini --what completeness
//   lcapr lln      --config configs/lln.ini
//   lcapr demo

#include <lcapr/experiment.hpp>

#include <CLI11.hpp>

#include <iostream>

using namespace lcapr;

namespace {

void write_record(const RunRecord& rec, const std::filesystem::path& out_dir) {
  write_text(out_dir / "report.json", rec.report.dump(2) + "\n");
  for (const auto& [name, text] : rec.files) write_text(out_dir / name, text);
}

// Machine-readable failure: JSON on stderr and, when possible, error.json.
int report_failure(const std::exception& e, const std::string& out_dir, int code) {
  const json rec{{"status", "error"}, {"error", error_json(e)}};
  std::cerr << rec.dump() << std::endl;
  if (!out_dir.empty()) {
    try {
      write_text(std::filesystem::path(out_dir) / "error.json", rec.dump(2) + "\n");
    } catch (const std::exception&) {
    }
  }
  return code;
}

void print_summary(const RunRecord& rec) {
  const auto& r = rec.report;
  if (r.contains("aggregates")) {
    const auto& ag = r["aggregates"];
    for (const auto& a : ag.is_array() ? ag : json::array({ag})) std::cout << a.dump() << "\n";
  }
  if (r.contains("certificate")) std::cout << r["certificate"].dump() << "\n";
  if (r.contains("cases")) {
    std::size_t ok = 0;
    for (const auto& c : r["cases"]) ok += c["pass"].get<bool>();
    std::cout << "lln cases passing: " << ok << "/" << r["cases"].size() << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase retrieval from STFT magnitudes on locally compact abelian groups (finite models)"};
  app.require_subcommand(1);

  std::string config_path, seeds_flag, out_dir = "out", what;
  unsigned workers = 1;
  bool dump = false, timings = false, signals = false;

  auto common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config_path, "experiment configuration file");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--seeds", seeds_flag, "override seeds: A:B (half-open) or a,b,c");
    sub->add_option("--workers", workers, "worker threads")->check(CLI::Range(1u, 256u));
    sub->add_option("--out-dir", out_dir, "directory for report.json and CSV tables");
    sub->add_flag("--timings", timings, "include stage timings (reports are then not byte-reproducible)");
  };

  auto* retrieve = app.add_subcommand("retrieve", "run the retrieval pipeline for every seed and noise level");
  common(retrieve, true);
  retrieve->add_flag("--dump-matrices", dump, "write per-stage matrices as CSV under matrices/");
  retrieve->add_flag("--signals", signals, "include recovered signals in report.json");

  auto* verify = app.add_subcommand("verify", "emit uniqueness or completeness certificates");
  common(verify, true);
  verify->add_option("--what", what, "uniqueness or completeness (overrides [verify] what)")
      ->check(CLI::IsMember({"uniqueness", "completeness"}));

  auto* lln = app.add_subcommand("lln", "law-of-large-numbers trajectories for the Steinhaus coefficients");
  common(lln, true);

  auto* demo = app.add_subcommand("demo", "bundled Z/4 x Z/9 retrieval, 10 seeds");
  common(demo, false);
  demo->add_flag("--dump-matrices", dump, "write per-stage matrices as CSV under matrices/");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return report_failure(Error(std::string("command line: ") + e.what()), "", 2);
  }

  try {
    ExperimentConfig cfg = config_path.empty() ? parse_config(demo_config_text(), "<demo>") : load_config(config_path);
    RunOptions opt;
    if (!seeds_flag.empty()) opt.seeds = parse_seed_flag(seeds_flag);
    opt.workers = workers;
    opt.dump_matrices = dump;
    opt.timings = timings;
    opt.signals = signals;

    RunRecord rec;
    if (retrieve->parsed() || demo->parsed()) {
      rec = cmd_retrieve(cfg, opt);
    } else if (verify->parsed()) {
      if (!what.empty()) cfg.verify_what = what;
      rec = cmd_verify(cfg, opt);
    } else {
      rec = cmd_lln(cfg, opt);
    }
    write_record(rec, out_dir);
    print_summary(rec);
    std::cout << "wrote " << (std::filesystem::path(out_dir) / "report.json").string() << "\n";
    return 0;
  } catch (const ParseError& e) {
    return report_failure(e, out_dir, 2);
  } catch (const std::exception& e) {
    return report_failure(e, out_dir, 1);
  }
}
