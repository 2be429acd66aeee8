// Copyright 2026 The Omnirelay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "omnirelay/binning.h"
#include "omnirelay/cli.h"
#include "omnirelay/error.h"
#include "omnirelay/mac_region.h"
#include "omnirelay/protocol_sim.h"
#include "omnirelay/rate_analysis.h"
#include "omnirelay/topology.h"

namespace py = pybind11;

namespace omnirelay {
namespace {

MacInstance make_mac(std::vector<double> rates, std::vector<double> powers,
                     double noise, double interference) {
  MacInstance inst{std::move(rates), std::move(powers), noise, interference};
  inst.validate();
  return inst;
}

py::dict report_dict(const RateReport& r) {
  py::list constraints;
  for (const ConstraintPair& c : r.constraints) {
    py::dict d;
    d["id"] = c.id();
    d["node"] = c.node + 1;
    d["joint_margin"] = c.joint_margin;
    d["noise_margin"] = c.noise_margin;
    d["holds"] = c.holds();
    constraints.append(d);
  }
  std::vector<int> ordering;
  for (NodeId v : r.ordering) ordering.push_back(v + 1);
  py::dict d;
  d["rate"] = r.rate;
  d["rate_bound"] = r.rate_bound;
  d["bound_holds"] = r.bound_holds;
  d["verdict"] = r.verdict;
  d["binding_constraint"] = r.binding_constraint;
  d["binding_margin"] = r.binding_margin;
  d["ordering"] = ordering;
  d["constraints"] = constraints;
  return d;
}

}  // namespace
}  // namespace omnirelay

PYBIND11_MODULE(_omnirelay, m) {
  using namespace omnirelay;
  m.doc() = "Omnidirectional relay rate analysis and protocol simulation";

  // Kept alive for the interpreter's lifetime; instances carry a `code`.
  static const py::handle error_type =
      (new py::exception<Error>(m, "OmnirelayError"))->release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string code(error_code_name(e.code()));
      py::object exc = error_type(code + ": " + e.what());
      exc.attr("code") = code;
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<Topology>(m, "Topology")
      .def_property_readonly("node_count", &Topology::node_count)
      .def_property_readonly("power", &Topology::power)
      .def_property_readonly("noise", &Topology::noise)
      .def_property_readonly("gain", [](const Topology& t) { return t.gain().label(); })
      .def("distance", [](const Topology& t, int i, int j) { return t.distance(i, j); })
      .def("hash", &Topology::hash)
      .def("is_regular_line", [](const Topology& t) { return is_regular_line(t); })
      .def("distance_ordering", [](const Topology& t) { return distance_ordering(t); });

  m.def("regular_line",
        [](int n, double spacing, const std::string& gain, double power, double noise) {
          return regular_line(n, spacing, GainFunction::parse(gain), power, noise);
        },
        py::arg("n"), py::arg("spacing") = 1.0, py::arg("gain") = "pl:2",
        py::arg("power") = 10.0, py::arg("noise") = 1.0);
  m.def("general_line",
        [](std::vector<double> x, const std::string& gain, double power, double noise) {
          return general_line(std::move(x), GainFunction::parse(gain), power, noise);
        },
        py::arg("positions"), py::arg("gain") = "pl:2", py::arg("power") = 10.0,
        py::arg("noise") = 1.0);
  m.def("ring",
        [](int n, double spacing, const std::string& gain, double power, double noise) {
          return ring(n, spacing, GainFunction::parse(gain), power, noise);
        },
        py::arg("n"), py::arg("spacing") = 1.0, py::arg("gain") = "pl:2",
        py::arg("power") = 10.0, py::arg("noise") = 1.0);
  m.def("parse_topology",
        [](const std::string& text) { return parse_topology(text, TopologySource{}); },
        py::arg("text"));

  m.def("mac_feasible",
        [](std::vector<double> rates, std::vector<double> powers, double noise,
           double interference) {
          return mac_feasible(make_mac(std::move(rates), std::move(powers), noise, interference));
        },
        py::arg("rates"), py::arg("powers"), py::arg("noise") = 1.0,
        py::arg("interference") = 0.0);
  m.def("decodable_subset",
        [](std::vector<double> rates, std::vector<double> powers, double noise,
           double interference) {
          return decodable_subset(
              make_mac(std::move(rates), std::move(powers), noise, interference));
        },
        py::arg("rates"), py::arg("powers"), py::arg("noise") = 1.0,
        py::arg("interference") = 0.0);
  m.def("peel_decodable_subset",
        [](std::vector<double> rates, std::vector<double> powers, double noise,
           double interference) {
          return peel_decodable_subset(
              make_mac(std::move(rates), std::move(powers), noise, interference));
        },
        py::arg("rates"), py::arg("powers"), py::arg("noise") = 1.0,
        py::arg("interference") = 0.0);

  py::class_<BinAssignment>(m, "BinAssignment")
      .def_property_readonly("sizes", &BinAssignment::sizes)
      .def_property_readonly("bin_count", &BinAssignment::bin_count)
      .def("bin", [](const BinAssignment& b, std::vector<int> w) { return b.bin(w); })
      .def("decode", [](const BinAssignment& b, int bin_index, std::map<int, int> known,
                        int target) { return decode_from_side_info(b, bin_index, known, target); },
           py::arg("bin_index"), py::arg("known"), py::arg("target"))
      .def("verify", [](const BinAssignment& b) { return verify_binning_property(b); });
  m.def("build_binning", &build_binning, py::arg("sizes"));

  m.def("allcast_rate_bound", &allcast_rate_bound, py::arg("topology"));
  m.def("check_line_conditions",
        [](const Topology& t, double rate) { return report_dict(check_line_conditions(t, rate)); },
        py::arg("topology"), py::arg("rate"));
  m.def("max_achievable_rate",
        [](const Topology& t, double tolerance) {
          BisectionOptions options;
          options.tolerance = tolerance;
          return max_achievable_rate(t, options).rate;
        },
        py::arg("topology"), py::arg("tolerance") = 1e-6);
  m.def("verify_regular_line",
        [](const Topology& t, int samples, uint64_t seed) {
          return verify_regular_line(t, samples, seed).ok;
        },
        py::arg("topology"), py::arg("samples") = 100, py::arg("seed") = 1);

  m.def("simulate",
        [](const Topology& t, double rate, int blocks) {
          if (!t.one_hop()) throw Error(ErrorCode::kPrecondition, "topology has no one-hop sets");
          const SimulationTrace trace =
              run_distance_regulated(t, *t.one_hop(), rate, blocks > 0 ? blocks : 2 * t.node_count());
          py::dict d;
          d["blocks"] = trace.blocks;
          d["failures"] = trace.failure_count();
          d["sum_rate_failures"] = trace.sum_rate_failure_count();
          d["completion_block"] = trace.completion_block;
          d["warnings"] = trace.warnings;
          return d;
        },
        py::arg("topology"), py::arg("rate"), py::arg("blocks") = 0);

  m.def("run_cli",
        [](std::vector<std::string> args) {
          args.insert(args.begin(), "omnirelay");
          std::vector<const char*> argv;
          for (const std::string& a : args) argv.push_back(a.c_str());
          std::ostringstream out, err;
          const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
          return std::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
