// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sls/cli.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;

namespace {

py::dict counters_dict(const sls::Counters& c) {
  py::dict d;
  d["isolated_sims"] = c.isolated_sims;
  d["contextual_sims"] = c.contextual_sims;
  d["deposit_sims"] = c.deposit_sims;
  d["maintenance_sims"] = c.maintenance_sims;
  d["deferred_count"] = c.deferred_count;
  d["failure_sims"] = c.failure_sims;
  return d;
}

py::int_ word_to_int(const sls::Word& w) {
  return py::int_(py::reinterpret_steal<py::object>(PyLong_FromString(("0x" + w.hex()).c_str(), nullptr, 0)));
}

sls::Word int_to_word(const py::int_& v) {
  if (PyObject_RichCompareBool(v.ptr(), py::int_(0).ptr(), Py_LT) == 1) throw py::value_error("negative word");
  const std::string hex = py::str(py::module_::import("builtins").attr("format")(v, "064x"));
  if (hex.size() > 64) throw py::value_error("word wider than 256 bits");
  return sls::Word::from_bytes(sls::from_hex(hex));
}

}  // namespace

PYBIND11_MODULE(_slsim, m) {
  m.doc() = "Rollup sequencer simulator with transaction quarantine";

  static py::exception<sls::ScenarioError> scenario_error(m, "ScenarioError", PyExc_ValueError);
  static py::exception<sls::DerivationError> derivation_error(m, "DerivationError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const sls::ScenarioError& e) {
      py::set_error(scenario_error, e.what());
    } catch (const sls::DerivationError& e) {
      py::set_error(derivation_error, e.what());
    } catch (const sls::L1Error& e) {
      py::set_error(PyExc_ValueError, e.what());
    } catch (const sls::DecodeError& e) {
      py::set_error(PyExc_ValueError, e.what());
    }
  });

  m.def(
      "run_scenario",
      [](const std::string& text, std::optional<unsigned> workers) {
        sls::Scenario scenario = sls::parse_scenario(text);
        sls::RunReport r;
        {
          py::gil_scoped_release release;
          r = sls::run(scenario, {workers, nullptr});
        }
        py::dict out;
        out["report"] = sls::write_report(r);
        out["l1_history"] = sls::write_l1_history(r.l1);
        out["final_state_root"] = r.final_state_root.hex();
        out["blocks"] = r.blocks.size();
        size_t txs = 0;
        for (const auto& b : r.blocks) txs += b.transactions.size();
        out["transactions"] = txs;
        out["quarantined"] = r.quarantine.size();
        out["counters"] = counters_dict(r.counters);
        return out;
      },
      py::arg("text"), py::arg("workers") = py::none(), "Runs a scenario given as text.");

  m.def(
      "derive",
      [](const std::string& l1_text) {
        sls::DerivedChain d = sls::derive(sls::read_l1_history(l1_text));
        py::dict out;
        out["final_state_root"] = d.final_root.hex();
        out["blocks"] = d.blocks.size();
        return out;
      },
      py::arg("l1_history"), "Rebuilds the L2 chain from an exported L1 history.");

  m.def(
      "quarantine_entries",
      [](const std::string& report) {
        py::list out;
        for (const auto& e : sls::read_report_quarantine(report)) {
          py::dict d;
          d["serial"] = e.serial;
          d["hash"] = e.hash;
          d["label"] = e.label;
          d["state"] = e.state;
          d["audit"] = e.audit;
          out.append(d);
        }
        return out;
      },
      py::arg("report"), "Quarantine entries of a run report.");

  m.def(
      "encode_bitmap",
      [](const std::vector<bool>& flags) {
        py::list out;
        for (const auto& w : sls::encode_bitmap(flags)) out.append(word_to_int(w));
        return out;
      },
      py::arg("flags"), "Packs flags into 256-bit words, flag i at bit i % 256 of word i / 256.");

  m.def(
      "decode_bitmap",
      [](const std::vector<py::int_>& words, size_t count) {
        std::vector<sls::Word> ws;
        for (const auto& w : words) ws.push_back(int_to_word(w));
        return sls::decode_bitmap(ws, count);
      },
      py::arg("words"), py::arg("count"));

  m.def(
      "address_from_name", [](const std::string& name) { return sls::address_from_name(name).hex(); },
      py::arg("name"));
}
