#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "eprsteer/entropy.hpp"
#include "eprsteer/error.hpp"
#include "eprsteer/runner.hpp"
#include "eprsteer/version.hpp"
#include "eprsteer/witness.hpp"

namespace py = pybind11;
using namespace eprsteer;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

JointDistribution to_distribution(const Array& probs) {
  if (probs.ndim() != 2) throw Error(ErrorCode::ShapeMismatch, "expected a 2-D probability array");
  const auto rows = static_cast<std::size_t>(probs.shape(0));
  const auto cols = static_cast<std::size_t>(probs.shape(1));
  GridSpec grid(Observable::Position, {AxisGrid(rows, 1.0)}, {AxisGrid(cols, 1.0)});
  return JointDistribution(grid, std::vector<double>(probs.data(), probs.data() + probs.size()));
}

LogBase to_base(double base) { return LogBase(base); }

Party to_party(const std::string& p) {
  if (p == "A") return Party::A;
  if (p == "B") return Party::B;
  throw Error(ErrorCode::InvalidConfig, "party must be 'A' or 'B'");
}

RunConfig to_config(const std::string& config_json) {
  auto c = RunConfig::from_json(nlohmann::json::parse(config_json));
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "EPR-steering witnesses from discrete position/momentum histograms";
  m.attr("__version__") = std::string(kVersion);

  static py::exception<Error> error(m, "EprSteerError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def("pi_e", &pi_e);
  m.def(
      "entropy",
      [](const Array& p, double base) {
        return entropy(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())),
                       to_base(base))
            .value;
      },
      py::arg("p"), py::arg("base") = 2.0);
  m.def(
      "joint_entropy",
      [](const Array& p, double base) {
        return joint_entropy(to_distribution(p), to_base(base)).value;
      },
      py::arg("probs"), py::arg("base") = 2.0);
  m.def(
      "conditional_entropy",
      [](const Array& p, const std::string& given, double base) {
        return conditional_entropy(to_distribution(p), to_party(given), to_base(base)).value;
      },
      py::arg("probs"), py::arg("given") = "A", py::arg("base") = 2.0,
      "H(B|A) for given='A', H(A|B) for given='B'. Rows index party A.");
  m.def(
      "mutual_information",
      [](const Array& p, double base) {
        return mutual_information(to_distribution(p), to_base(base)).value;
      },
      py::arg("probs"), py::arg("base") = 2.0);
  m.def(
      "per_dim_bound",
      [](double dx, double dk, double base) { return per_dim_bound(dx, dk, to_base(base)); },
      py::arg("dx"), py::arg("dk"), py::arg("base") = 2.0);
  m.def("min_resolution", &min_resolution, py::arg("extent_position"),
        py::arg("extent_momentum"));

  m.def(
      "run_witness",
      [](const std::string& config_json) { return run_witness(to_config(config_json)).dump(); },
      py::arg("config_json"), py::call_guard<py::gil_scoped_release>());
  m.def(
      "run_map", [](const std::string& config_json) { return run_map(to_config(config_json)); },
      py::arg("config_json"), py::call_guard<py::gil_scoped_release>());
  m.def(
      "run_curve",
      [](const std::string& config_json) { return run_curve(to_config(config_json)); },
      py::arg("config_json"), py::call_guard<py::gil_scoped_release>());
  m.def(
      "run_synth",
      [](const std::string& config_json, const std::filesystem::path& directory) {
        return run_synth(to_config(config_json), directory);
      },
      py::arg("config_json"), py::arg("directory"));
  m.def("load_config",
        [](const std::filesystem::path& path) { return load_config(path).to_json().dump(); });
  m.def("default_config", [] {
    RunConfig c;
    c.synthetic = SyntheticConfig{};
    return c.to_json().dump();
  });
  m.def("run_selftest", [] {
    std::vector<std::tuple<std::string, bool, std::string>> out;
    for (const auto& t : run_selftest()) out.emplace_back(t.name, t.passed, t.detail);
    return out;
  });
}
