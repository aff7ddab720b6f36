#include "eprsteer/runner.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

#include "eprsteer/error.hpp"
#include "eprsteer/io.hpp"
#include "eprsteer/version.hpp"

namespace eprsteer {

using nlohmann::json;

namespace {

json base_to_json(LogBase base) {
  if (base.value() == 2.0) return "2";
  if (base.value() == std::numbers::e) return "e";
  if (base.value() == 10.0) return "10";
  return base.value();
}

LogBase base_from_json(const json& j) {
  if (j.is_number()) return LogBase(j.get<double>());
  const auto s = j.get<std::string>();
  if (s == "2" || s == "bits") return LogBase::bits();
  if (s == "e" || s == "nats") return LogBase::nats();
  if (s == "10" || s == "dits") return LogBase::dits();
  throw Error(ErrorCode::InvalidConfig, "unknown log base '" + s + "' (use 2, e or 10)");
}

json quantity(double value, const std::string& unit) { return {{"value", value}, {"unit", unit}}; }

std::string mode_name(AnalysisMode m) { return std::string(to_string(m)); }

AnalysisMode parse_mode(const std::string& s) {
  if (s == "independent-axes") return AnalysisMode::IndependentAxes;
  if (s == "full-joint") return AnalysisMode::FullJoint;
  throw Error(ErrorCode::InvalidConfig, "unknown mode '" + s + "'");
}

std::string short_direction(Direction d) {
  switch (d) {
    case Direction::BGivenA: return "ba";
    case Direction::AGivenB: return "ab";
    case Direction::Symmetric: return "sym";
  }
  return "ba";
}

std::vector<std::size_t> sizes_from_json(const json& j) {
  std::vector<std::size_t> out;
  for (const auto& v : j) {
    const auto x = v.get<std::int64_t>();
    if (x <= 0) throw Error(ErrorCode::InvalidConfig, "resolutions must be positive");
    out.push_back(static_cast<std::size_t>(x));
  }
  return out;
}

void check_synthetic(const SyntheticConfig& sc) {
  const auto& s = sc.setup;
  s.params.validate();
  const auto n = s.params.axes.size();
  if (s.extent_position.size() != n || s.extent_momentum.size() != n) {
    throw Error(ErrorCode::InvalidConfig, "need one position and momentum extent per axis");
  }
  for (const auto* extents : {&s.extent_position, &s.extent_momentum}) {
    for (double e : *extents) {
      if (!(e > 0.0) || !std::isfinite(e)) {
        throw Error(ErrorCode::InvalidConfig, "viewing extents must be positive and finite");
      }
    }
  }
  if (s.resolution_a == 0 || s.resolution_b == 0) {
    throw Error(ErrorCode::InvalidConfig, "synthetic resolutions must be positive");
  }
  if (!(s.max_tail >= 0.0 && s.max_tail < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "max_tail must lie in [0, 1)");
  }
  if (!(sc.total_per_tensor > 0.0) || !std::isfinite(sc.total_per_tensor)) {
    throw Error(ErrorCode::InvalidConfig, "synthetic total must be positive");
  }
}

constexpr std::uint64_t kSynthStream = 1;
constexpr std::uint64_t kWitnessStream = 2;
constexpr std::uint64_t kMapStream = 3;

}  // namespace

void RunConfig::validate() const {
  if (input.has_value() == synthetic.has_value()) {
    throw Error(ErrorCode::InvalidConfig,
                "exactly one of input files or synthetic parameters must be given");
  }
  if (input) {
    if (input->position.empty() || input->position.size() != input->momentum.size()) {
      throw Error(ErrorCode::InvalidConfig,
                  "need the same nonzero number of position and momentum files");
    }
  }
  if (synthetic) check_synthetic(*synthetic);
  if (n_boot != 0 && n_boot < kMinBootstrapReplicates) {
    throw Error(ErrorCode::InvalidConfig, "--boot must be 0 or at least " +
                                              std::to_string(kMinBootstrapReplicates));
  }
  if (witnesses.empty()) throw Error(ErrorCode::InvalidConfig, "no witness selected");
  for (const auto* targets : {&targets_a, &targets_b, &curve_targets}) {
    if (targets->empty()) throw Error(ErrorCode::InvalidConfig, "empty resolution list");
    for (auto r : *targets) {
      if (r == 0) throw Error(ErrorCode::InvalidConfig, "resolutions must be positive");
    }
  }
}

void RunConfig::fit_targets_to_synthetic() {
  if (!synthetic) return;
  const auto fit = [](std::vector<std::size_t>& targets, std::size_t n) {
    std::erase_if(targets, [n](std::size_t r) { return r == 0 || n % r != 0; });
    if (targets.empty()) targets.push_back(n);
  };
  const auto ra = synthetic->setup.resolution_a, rb = synthetic->setup.resolution_b;
  fit(targets_a, ra);
  fit(targets_b, rb);
  fit(curve_targets, std::gcd(ra, rb));
}

json RunConfig::to_json() const {
  json j;
  j["log_base"] = base_to_json(base);
  j["n_boot"] = n_boot;
  j["seed"] = seed;
  auto ws = json::array();
  for (auto d : witnesses) ws.push_back(short_direction(d));
  j["witnesses"] = ws;
  if (input) {
    auto paths = [](const std::vector<std::filesystem::path>& v) {
      auto a = json::array();
      for (const auto& p : v) a.push_back(p.generic_string());
      return a;
    };
    j["input"] = {{"position", paths(input->position)}, {"momentum", paths(input->momentum)}};
  }
  if (synthetic) {
    const auto& s = synthetic->setup;
    auto axes = json::array();
    for (std::size_t i = 0; i < s.params.axes.size(); ++i) {
      axes.push_back({{"sigma_plus", s.params.axes[i].sigma_plus},
                      {"sigma_minus", s.params.axes[i].sigma_minus},
                      {"extent_position", s.extent_position.at(i)},
                      {"extent_momentum", s.extent_momentum.at(i)}});
    }
    j["synthetic"] = {{"axes", axes},
                      {"resolution_A", s.resolution_a},
                      {"resolution_B", s.resolution_b},
                      {"mode", mode_name(s.mode)},
                      {"max_tail", s.max_tail},
                      {"total_per_tensor", synthetic->total_per_tensor}};
  }
  j["pseudocount"] = pseudocount;
  j["map"] = {{"targets_A", targets_a},
              {"targets_B", targets_b},
              {"direction", short_direction(map_direction)},
              {"format", map_format == MapFormat::Matrix ? "matrix" : "long"}};
  j["curve"] = {{"targets", curve_targets}};
  return j;
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  try {
    if (j.contains("log_base")) c.base = base_from_json(j.at("log_base"));
    if (j.contains("n_boot")) c.n_boot = j.at("n_boot").get<std::size_t>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("witnesses")) {
      c.witnesses.clear();
      for (const auto& w : j.at("witnesses")) c.witnesses.push_back(parse_direction(w.get<std::string>()));
    }
    if (j.contains("input")) {
      InputFiles in;
      for (const auto& p : j.at("input").at("position")) in.position.emplace_back(p.get<std::string>());
      for (const auto& p : j.at("input").at("momentum")) in.momentum.emplace_back(p.get<std::string>());
      c.input = std::move(in);
    }
    if (j.contains("synthetic")) {
      const auto& sj = j.at("synthetic");
      SyntheticConfig sc;
      auto& s = sc.setup;
      if (sj.contains("axes")) {
        s.params.axes.clear();
        s.extent_position.clear();
        s.extent_momentum.clear();
        for (const auto& ax : sj.at("axes")) {
          s.params.axes.push_back({ax.at("sigma_plus").get<double>(), ax.at("sigma_minus").get<double>()});
          s.extent_position.push_back(ax.value("extent_position", kReferenceExtentPosition));
          s.extent_momentum.push_back(ax.value("extent_momentum", kReferenceExtentMomentum));
        }
      }
      s.resolution_a = sj.value("resolution_A", s.resolution_a);
      s.resolution_b = sj.value("resolution_B", s.resolution_b);
      if (sj.contains("mode")) s.mode = parse_mode(sj.at("mode").get<std::string>());
      s.max_tail = sj.value("max_tail", s.max_tail);
      sc.total_per_tensor = sj.value("total_per_tensor", sc.total_per_tensor);
      check_synthetic(sc);
      c.synthetic = std::move(sc);
    }
    c.pseudocount = j.value("pseudocount", c.pseudocount);
    if (j.contains("map")) {
      const auto& m = j.at("map");
      if (m.contains("targets_A")) c.targets_a = sizes_from_json(m.at("targets_A"));
      if (m.contains("targets_B")) c.targets_b = sizes_from_json(m.at("targets_B"));
      if (m.contains("direction")) c.map_direction = parse_direction(m.at("direction").get<std::string>());
      if (m.contains("format")) {
        const auto f = m.at("format").get<std::string>();
        if (f != "matrix" && f != "long") throw Error(ErrorCode::InvalidConfig, "unknown map format " + f);
        c.map_format = f == "matrix" ? MapFormat::Matrix : MapFormat::Long;
      }
    }
    if (j.contains("curve") && j.at("curve").contains("targets")) {
      c.curve_targets = sizes_from_json(j.at("curve").at("targets"));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("config: ") + e.what());
  }
  return c;
}

std::string RunConfig::hash() const {
  const auto text = to_json().dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CountSet load_counts(const RunConfig& config) {
  config.validate();
  CountSet counts;
  if (config.input) {
    for (const auto& p : config.input->position) counts.position.push_back(ingest(p));
    for (const auto& p : config.input->momentum) counts.momentum.push_back(ingest(p));
  } else {
    const auto state = synthesize(config.synthetic->setup);
    counts = synthesize_counts(state.distributions, config.synthetic->total_per_tensor,
                               derive_seed(config.seed, kSynthStream));
  }
  if (config.pseudocount > 0) {
    for (auto* blocks : {&counts.position, &counts.momentum}) {
      for (auto& b : *blocks) {
        std::vector<std::uint64_t> v(b.counts.counts().begin(), b.counts.counts().end());
        for (auto& x : v) x += config.pseudocount;
        b.counts = CountTensor(b.counts.shape(), std::move(v));
      }
    }
  }
  check_compatible(counts);
  return counts;
}

namespace {

json metadata(const RunConfig& config, const CountSet& counts) {
  const auto unit = config.base.unit();
  json m;
  m["version"] = kVersion;
  m["config_hash"] = config.hash();
  m["log_base"] = {{"value", config.base.value()},
                   {"unit", unit},
                   {"note", "entropy base is a reporting choice; violation decisions do not depend on it"}};
  m["pi_e"] = std::numbers::pi * std::numbers::e;
  m["mode"] = mode_name(counts.position.size() > 1 ? AnalysisMode::IndependentAxes
                                                   : AnalysisMode::FullJoint);
  std::size_t n = 0;
  for (const auto& b : counts.position) n += b.grid.dimensions();
  m["dimensions"] = n;
  auto blocks = [](const std::vector<CountBlock>& list) {
    auto arr = json::array();
    for (const auto& b : list) arr.push_back({{"grid", grid_to_json(b.grid)}, {"total_counts", b.counts.total()}});
    return arr;
  };
  m["data"] = {{"source", config.input ? "files" : "synthetic"},
               {"position", blocks(counts.position)},
               {"momentum", blocks(counts.momentum)}};
  return m;
}

}  // namespace

json run_witness(const RunConfig& config) {
  const auto counts = load_counts(config);
  const auto dists = normalize(counts);
  const auto unit = config.base.unit();
  json report = metadata(config, counts);
  report["schema"] = "eprsteer.witness-report/1";
  if (config.synthetic) {
    const auto state = synthesize(config.synthetic->setup);
    report["data"]["tail_mass"] = {{"position", state.tail_mass_position},
                                   {"momentum", state.tail_mass_momentum}};
  }
  auto results = json::array();
  for (auto direction : config.witnesses) {
    const auto w = evaluate_witness(dists, direction, config.base);
    json r;
    r["direction"] = to_string(direction);
    r["lhs"] = quantity(w.lhs.value, unit);
    r["bound"] = quantity(w.bound, unit);
    r["margin"] = quantity(w.margin, unit);
    auto comps = json::array();
    for (double b : w.component_bounds) comps.push_back(quantity(b, unit));
    r[direction == Direction::Symmetric ? "party_bounds" : "per_dimension_bounds"] = comps;
    r["steering_witnessed"] = w.witnessed();
    if (config.n_boot > 0) {
      BootstrapOptions bo;
      bo.n_boot = config.n_boot;
      bo.seed = derive_seed(config.seed, kWitnessStream, static_cast<std::uint64_t>(direction));
      bo.threads = config.threads;
      const auto b = bootstrap_witness(counts, direction, bo, config.base);
      r["bootstrap"] = {{"n_boot", b.n_boot},
                        {"seed", b.seed},
                        {"margin_mean", quantity(b.margin_mean, unit)},
                        {"margin_std", quantity(b.margin_std, unit)},
                        {"significance", b.significance ? json(quantity(*b.significance, "sigma"))
                                                        : json(nullptr)},
                        {"rejected_replicates", b.rejected_replicates}};
    }
    results.push_back(std::move(r));
  }
  report["witnesses"] = std::move(results);
  return report;
}

std::string run_map(const RunConfig& config) {
  const auto counts = load_counts(config);
  MapOptions mo;
  mo.direction = config.map_direction;
  mo.n_boot = config.n_boot;
  mo.seed = derive_seed(config.seed, kMapStream);
  mo.threads = config.threads;
  const auto sweep = asymmetry_map(counts, config.targets_a, config.targets_b, mo, config.base);
  const auto unit = config.base.unit();
  const bool boot = config.n_boot > 0;

  std::string out = "# eprsteer " + std::string(kVersion) + " asymmetry map; config " +
                    config.hash() + "; direction " + std::string(to_string(config.map_direction)) +
                    "; log base " + unit + "\n";
  if (config.map_format == MapFormat::Matrix) {
    out += std::string("# rows r_A, columns r_B; values ") +
           (boot ? "significance_sigma (nan: degenerate bootstrap)" : "margin_" + unit) +
           "; positive = steering witnessed\n";
    out += "# bound_" + unit;
    for (std::size_t ib = 0; ib < sweep.targets_b.size(); ++ib) {
      out += "," + format_number(sweep.at(0, ib).result.bound);
    }
    out += "\nr_A";
    for (auto rb : sweep.targets_b) out += "," + std::to_string(rb);
    out += '\n';
    for (std::size_t ia = 0; ia < sweep.targets_a.size(); ++ia) {
      out += std::to_string(sweep.targets_a[ia]);
      for (std::size_t ib = 0; ib < sweep.targets_b.size(); ++ib) {
        const auto& cell = sweep.at(ia, ib);
        const double v = boot ? cell.result.significance_sigma.value_or(std::nan(""))
                              : cell.result.margin;
        out += "," + format_number(v);
      }
      out += '\n';
    }
  } else {
    out += "r_A,r_B,lhs_" + unit + ",bound_" + unit + ",margin_" + unit + ",margin_mean_" + unit +
           ",margin_std_" + unit + ",significance_sigma\n";
    for (const auto& cell : sweep.cells) {
      out += std::to_string(cell.resolution_a) + "," + std::to_string(cell.resolution_b) + "," +
             format_number(cell.result.lhs.value) + "," + format_number(cell.result.bound) + "," +
             format_number(cell.result.margin);
      if (cell.bootstrap) {
        out += "," + format_number(cell.bootstrap->margin_mean) + "," +
               format_number(cell.bootstrap->margin_std) + "," +
               format_number(cell.bootstrap->significance.value_or(std::nan("")));
      } else {
        out += ",nan,nan,nan";
      }
      out += '\n';
    }
  }
  return out;
}

std::string run_curve(const RunConfig& config) {
  const auto counts = load_counts(config);
  const auto points = resolution_curve(counts, config.curve_targets, config.base);
  const auto unit = config.base.unit();
  std::string out = "# eprsteer " + std::string(kVersion) + " resolution curve; config " +
                    config.hash() + "; direction B_given_A; log base " + unit +
                    "; inv_dx_dk is per dimension\n";
  out += "r,inv_dx_dk,lhs_" + unit + ",bound_" + unit + ",margin_" + unit + "\n";
  for (const auto& p : points) {
    out += std::to_string(p.resolution) + "," + format_number(p.inverse_window_product) + "," +
           format_number(p.lhs) + "," + format_number(p.bound) + "," + format_number(p.margin) +
           "\n";
  }
  return out;
}

RunConfig load_config(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
  auto config = RunConfig::from_json(j);
  if (config.input) {
    for (auto* list : {&config.input->position, &config.input->momentum}) {
      for (auto& p : *list) {
        if (p.is_relative()) p = path.parent_path() / p;
      }
    }
  }
  return config;
}

std::vector<std::filesystem::path> run_synth(const RunConfig& config,
                                             const std::filesystem::path& directory) {
  if (!config.synthetic) {
    throw Error(ErrorCode::InvalidConfig, "synth needs synthetic parameters");
  }
  const auto counts = load_counts(config);
  std::vector<std::filesystem::path> written;
  RunConfig files = config;
  files.fit_targets_to_synthetic();
  files.synthetic.reset();
  files.input = InputFiles{};
  for (std::size_t i = 0; i < counts.position.size(); ++i) {
    const auto p = directory / ("position_" + std::to_string(i) + ".csv");
    write_block(counts.position[i], p);
    written.push_back(p);
    written.push_back(sidecar_path(p));
    files.input->position.push_back(p.filename());
  }
  for (std::size_t i = 0; i < counts.momentum.size(); ++i) {
    const auto p = directory / ("momentum_" + std::to_string(i) + ".csv");
    write_block(counts.momentum[i], p);
    written.push_back(p);
    written.push_back(sidecar_path(p));
    files.input->momentum.push_back(p.filename());
  }
  // Input paths are relative to run.json; pseudocounts are already baked
  // into the written counts.
  files.pseudocount = 0;
  const auto run_json = directory / "run.json";
  write_text(run_json, files.to_json().dump(2) + "\n");
  written.push_back(run_json);
  return written;
}

}  // namespace eprsteer
