#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "justnets/error.hpp"
#include "justnets/fail.hpp"
#include "justnets/feas.hpp"
#include "justnets/lang.hpp"
#include "justnets/net_io.hpp"
#include "justnets/regress.hpp"
#include "justnets/testing.hpp"
#include "justnets/timed.hpp"

namespace py = pybind11;
using namespace justnets;

namespace {

exec::Criterion criterion(const std::string& s) {
  if (s == "justness" || s == "just") return exec::Criterion::justness;
  if (s == "progress") return exec::Criterion::progress;
  throw py::value_error("criterion must be 'justness' or 'progress'");
}

exec::Mode exec_mode(const std::string& s) {
  if (s == "individual") return exec::Mode::individual;
  if (s == "collective") return exec::Mode::collective;
  throw py::value_error("mode must be 'individual' or 'collective'");
}

LabelSet labels(const ActionSet& as) {
  LabelSet out;
  for (const auto& a : as) out.insert(Label::visible(a));
  return out;
}

timed::Time parse_time(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return timed::Time(std::stoll(s));
  return timed::Time(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Petri nets with read arcs: failures, testing, scheduling and timing";

  // Translators run newest first, so the subclass goes last.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<Net>(m, "Net")
      .def_static("from_pnet", [](const std::string& text) { return parse_pnet(text); })
      .def_static("from_ccsps", [](const std::string& text) { return lang::compile_source(text); })
      .def("to_pnet", [](const Net& n) { return write_pnet(n); })
      .def("to_dot", [](const Net& n) { return to_dot(n); })
      .def_property_readonly("name", &Net::name)
      .def_property_readonly("num_places", &Net::num_places)
      .def_property_readonly("num_transitions", &Net::num_transitions)
      .def_property_readonly("alphabet", &Net::alphabet)
      .def("__repr__", [](const Net& n) {
        return "<Net " + n.name() + ": " + std::to_string(n.num_places()) + " places, " +
               std::to_string(n.num_transitions()) + " transitions>";
      });

  m.def("compose", [](const Net& a, const Net& b, const ActionSet& sync) { return parallel(a, b, sync); },
        py::arg("a"), py::arg("b"), py::arg("sync") = ActionSet{});
  m.def("hide", [](const Net& n, const ActionSet& hidden) { return abstract(n, hidden); });

  m.def(
      "failures",
      [](const Net& n, const std::string& c) {
        std::vector<std::pair<std::string, std::vector<std::string>>> out;
        for (const auto& w : fail::failures(n, criterion(c)).witnesses) {
          std::vector<std::string> en;
          for (const auto& l : w.enabled) en.push_back(l.str());
          out.emplace_back(exec::format_trace(w.trace), en);
        }
        return out;
      },
      py::arg("net"), py::arg("criterion") = "justness", "Witnesses as (trace, path-enabled labels) pairs.");

  m.def(
      "leq",
      [](const Net& n, const Net& n2, const std::string& c, std::optional<ActionSet> blocked) {
        std::optional<LabelSet> b;
        if (blocked) b = labels(*blocked);
        return fail::to_json(fail::leq(n, n2, criterion(c), b));
      },
      py::arg("n"), py::arg("n2"), py::arg("criterion") = "justness", py::arg("blocked") = std::nullopt,
      "JSON report of the bounded failure comparison.");

  m.def(
      "test",
      [](const Net& t, const Net& n, const std::string& mode) {
        testing::Verdict v;
        if (mode == "may") {
          v = testing::may(t, n);
        } else if (mode == "should") {
          v = testing::should(t, n);
        } else if (mode == "must-pr") {
          v = testing::must(t, n, exec::Criterion::progress);
        } else if (mode == "must-j") {
          v = testing::must(t, n, exec::Criterion::justness);
        } else {
          throw py::value_error("mode must be may, should, must-pr or must-j");
        }
        return testing::to_string(v.outcome);
      },
      py::arg("test"), py::arg("net"), py::arg("mode") = "must-j");

  m.def("universal_test", [](const std::vector<std::string>& sigma, const ActionSet& x) {
    exec::Trace t;
    for (const auto& a : sigma) t.stem.push_back(Label::visible(a));
    return testing::universal_test(t, x);
  });

  m.def(
      "sched",
      [](const Net& n, const ActionSet& blocked, std::size_t fuel, const std::string& mode) {
        const auto b = labels(blocked);
        const auto m = exec_mode(mode);
        const auto ext = feas::extend_to_just(n, exec::FinPath{n.initial_marking(), {}}, b, fuel, m);
        py::dict d;
        d["kind"] = std::string(ext.kind());
        d["path"] = exec::format_path(n, ext.path());
        d["just"] = exec::is_b_just(n, ext.path(), b, m);
        return d;
      },
      py::arg("net"), py::arg("blocked") = ActionSet{}, py::arg("fuel") = 1000, py::arg("mode") = "individual");

  m.def(
      "must_timed",
      [](const Net& t, const Net& n, const std::string& d) {
        const Net c = testing::apply(t, n);
        return timed::to_json(c, timed::must_timed_composed(c, parse_time(d)));
      },
      py::arg("test"), py::arg("net"), py::arg("duration"), "JSON verdict; duration as \"p/q\" or an integer.");

  m.def("check_corpus", [] {
    std::vector<std::tuple<std::string, bool, std::string>> out;
    for (const auto& c : regress::run_corpus_checks()) out.emplace_back(c.name, c.passed, c.detail);
    return out;
  });
}
