// eprsteer: EPR-steering witnesses from discrete coincidence histograms.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "eprsteer/error.hpp"
#include "eprsteer/io.hpp"
#include "eprsteer/runner.hpp"

namespace {

using namespace eprsteer;

struct CommonOptions {
  std::string config_path;
  std::optional<std::string> base;
  std::optional<std::size_t> boot;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> directions;
  std::optional<std::string> mode;
  std::vector<std::string> position;
  std::vector<std::string> momentum;
  bool synthetic = false;
  std::optional<std::size_t> resolution;
  std::optional<double> total;
  std::optional<std::uint64_t> pseudocount;
  std::optional<unsigned> threads;
  std::string output;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--config", o.config_path, "Run configuration JSON")->check(CLI::ExistingFile);
  app->add_option("--base", o.base, "Logarithm base for entropies")
      ->check(CLI::IsMember({"2", "e", "10"}));
  app->add_option("--boot", o.boot, "Bootstrap replicates (0 disables)");
  app->add_option("--seed", o.seed, "Master seed");
  app->add_option("--direction", o.directions, "Witness direction(s)")
      ->check(CLI::IsMember({"ba", "ab", "sym"}));
  app->add_option("--mode", o.mode, "Synthetic data layout for 2-D states")
      ->check(CLI::IsMember({"independent-axes", "full-joint"}));
  app->add_option("--position", o.position, "Position count CSV(s); sidecar <name>.grid.json");
  app->add_option("--momentum", o.momentum, "Momentum count CSV(s); sidecar <name>.grid.json");
  app->add_flag("--synthetic", o.synthetic, "Use the default synthetic double-Gaussian state");
  app->add_option("--resolution", o.resolution, "Synthetic windows per axis for both parties");
  app->add_option("--total", o.total, "Synthetic expected counts per tensor");
  app->add_option("--pseudocount", o.pseudocount, "Add this many counts to every cell");
  app->add_option("--threads", o.threads, "Worker threads for the bootstrap (0 = all cores)");
  app->add_option("-o,--output", o.output, "Output file (default: stdout)");
}

RunConfig build_config(const CommonOptions& o) {
  RunConfig c;
  if (!o.config_path.empty()) {
    c = load_config(o.config_path);
  }
  if (o.base) {
    c.base = *o.base == "2" ? LogBase::bits() : *o.base == "e" ? LogBase::nats() : LogBase::dits();
  }
  if (o.boot) c.n_boot = *o.boot;
  if (o.seed) c.seed = *o.seed;
  if (!o.directions.empty()) {
    c.witnesses.clear();
    for (const auto& d : o.directions) c.witnesses.push_back(parse_direction(d));
    c.map_direction = c.witnesses.front();
  }
  if (!o.position.empty() || !o.momentum.empty()) {
    InputFiles in;
    for (const auto& p : o.position) in.position.emplace_back(p);
    for (const auto& p : o.momentum) in.momentum.emplace_back(p);
    c.input = std::move(in);
    c.synthetic.reset();
  }
  if (o.synthetic && !c.synthetic) c.synthetic = SyntheticConfig{};
  if (c.synthetic) {
    auto& s = c.synthetic->setup;
    if (o.resolution) {
      s.resolution_a = s.resolution_b = *o.resolution;
      c.fit_targets_to_synthetic();
    }
    if (o.total) c.synthetic->total_per_tensor = *o.total;
    if (o.mode) {
      s.mode = *o.mode == "full-joint" ? AnalysisMode::FullJoint : AnalysisMode::IndependentAxes;
    }
  } else if (o.mode && c.input) {
    const bool joint = c.input->position.size() == 1;
    if ((*o.mode == "full-joint") != joint) {
      throw Error(ErrorCode::InvalidConfig,
                  "--mode " + *o.mode + " does not match the number of input files");
    }
  }
  if (o.pseudocount) c.pseudocount = *o.pseudocount;
  if (o.threads) c.threads = *o.threads;
  c.validate();
  return c;
}

void emit(const std::string& output, const std::string& text) {
  if (output.empty()) {
    std::cout << text;
  } else {
    write_text(output, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Witness EPR steering from discrete position/momentum histograms"};
  app.require_subcommand(1);

  CommonOptions witness_opts, map_opts, curve_opts, synth_opts;
  auto* witness = app.add_subcommand("witness", "Evaluate steering witnesses (JSON report)");
  add_common(witness, witness_opts);

  auto* map = app.add_subcommand("map", "Asymmetric downsampling map (CSV)");
  add_common(map, map_opts);
  std::vector<std::size_t> targets_a, targets_b;
  std::string map_format;
  map->add_option("--targets-a", targets_a, "Party-A resolutions")->delimiter(',');
  map->add_option("--targets-b", targets_b, "Party-B resolutions")->delimiter(',');
  map->add_option("--format", map_format, "matrix or long")->check(CLI::IsMember({"matrix", "long"}));

  auto* curve = app.add_subcommand("curve", "Resolution curve for the conditional witness (CSV)");
  add_common(curve, curve_opts);
  std::vector<std::size_t> curve_targets;
  curve->add_option("--targets", curve_targets, "Resolutions (both parties)")->delimiter(',');

  auto* synth = app.add_subcommand("synth", "Write synthetic count files and a run.json");
  add_common(synth, synth_opts);
  std::string out_dir = "synthetic";
  synth->add_option("--out-dir", out_dir, "Directory for the generated files");

  auto* selftest = app.add_subcommand("selftest", "Run the built-in invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::Usage);
  }

  try {
    if (*witness) {
      const auto c = build_config(witness_opts);
      emit(witness_opts.output, run_witness(c).dump(2) + "\n");
    } else if (*map) {
      auto c = build_config(map_opts);
      if (!targets_a.empty()) c.targets_a = targets_a;
      if (!targets_b.empty()) c.targets_b = targets_b;
      if (!map_format.empty()) c.map_format = map_format == "matrix" ? MapFormat::Matrix : MapFormat::Long;
      emit(map_opts.output, run_map(c));
    } else if (*curve) {
      auto c = build_config(curve_opts);
      if (!curve_targets.empty()) c.curve_targets = curve_targets;
      emit(curve_opts.output, run_curve(c));
    } else if (*synth) {
      auto o = synth_opts;
      o.synthetic = true;
      const auto c = build_config(o);
      for (const auto& p : run_synth(c, out_dir)) std::cout << p.generic_string() << "\n";
    } else if (*selftest) {
      bool ok = true;
      for (const auto& t : run_selftest()) {
        std::cout << (t.passed ? "[PASS] " : "[FAIL] ") << t.name << " (" << t.detail << ")\n";
        ok = ok && t.passed;
      }
      return ok ? 0 : static_cast<int>(ExitCode::Numerical);
    }
  } catch (const Error& e) {
    std::cerr << "eprsteer: " << e.what() << "\n";
    return static_cast<int>(exit_code_for(e.code()));
  } catch (const std::exception& e) {
    std::cerr << "eprsteer: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Data);
  }
  return 0;
}
