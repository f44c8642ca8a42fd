#include "justnets/cli.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "justnets/error.hpp"
#include "justnets/fail.hpp"
#include "justnets/feas.hpp"
#include "justnets/lang.hpp"
#include "justnets/net_io.hpp"
#include "justnets/regress.hpp"
#include "justnets/testing.hpp"
#include "justnets/timed.hpp"

namespace justnets::cli {

namespace {

using nlohmann::ordered_json;

struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::size_t max_nodes = 10000;
  std::size_t max_trace = 6;
  std::size_t max_cycle = 8;
  std::string mode = "individual";
  std::string blocked;
  std::string format = "text";

  fail::Bounds bounds() const { return {max_trace, max_trace, max_cycle, max_nodes}; }
  exec::Mode exec_mode() const { return mode == "collective" ? exec::Mode::collective : exec::Mode::individual; }
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ActionSet action_set(const std::string& s) {
  ActionSet out;
  for (auto& a : split(s)) {
    if (a == "tau" || a == "w") throw UsageError("'" + a + "' cannot be listed as an action here");
    out.insert(a);
  }
  return out;
}

LabelSet label_set(const std::string& s) {
  LabelSet out;
  for (const auto& a : action_set(s)) out.insert(Label::visible(a));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// .ccsps sources are compiled; anything else is read as .pnet.
Net load(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return ends_with(path, ".ccsps") ? lang::compile_source(text) : parse_pnet(text);
  } catch (const ParseError& e) {
    throw FileError(path + ": " + e.what());
  }
}

void emit(std::ostream& out, const Net& n, const std::string& format) {
  out << (format == "dot" ? to_dot(n) : write_pnet(n));
}

int outcome_code(testing::Outcome o) {
  switch (o) {
    case testing::Outcome::pass: return 0;
    case testing::Outcome::fail: return 1;
    case testing::Outcome::inconclusive: return kInconclusive;
  }
  return kInconclusive;
}

int leq_code(fail::LeqVerdict v) {
  switch (v) {
    case fail::LeqVerdict::holds_within_bounds: return 0;
    case fail::LeqVerdict::fails: return 1;
    case fail::LeqVerdict::inconclusive: return kInconclusive;
  }
  return kInconclusive;
}

timed::Time parse_time(const std::string& s) {
  try {
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
      return timed::Time(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    }
    const auto dot = s.find('.');
    if (dot == std::string::npos) return timed::Time(std::stoll(s));
    const std::string frac = s.substr(dot + 1);
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const std::int64_t whole = dot == 0 ? 0 : std::stoll(s.substr(0, dot));
    return timed::Time(whole * den + (frac.empty() ? 0 : std::stoll(frac)), den);
  } catch (const std::exception&) {
    throw UsageError("invalid duration '" + s + "'");
  }
}

ordered_json json_witnesses(const fail::WitnessSet& ws) {
  ordered_json a = ordered_json::array();
  for (const auto& w : ws.witnesses) {
    ordered_json labels = ordered_json::array();
    for (const auto& l : w.enabled) labels.push_back(l.str());
    a.push_back({{"trace", exec::format_trace(w.trace)}, {"enabled", labels}});
  }
  return a;
}

void add_bounds(CLI::App* cmd, Config& cfg) {
  cmd->add_option("--max-nodes", cfg.max_nodes, "marking graph node limit")->check(CLI::PositiveNumber);
  cmd->add_option("--max-trace", cfg.max_trace, "trace / prefix length limit")->check(CLI::PositiveNumber);
  cmd->add_option("--max-cycle", cfg.max_cycle, "cycle length limit")->check(CLI::PositiveNumber);
}

void add_mode(CLI::App* cmd, Config& cfg) {
  cmd->add_option("--mode", cfg.mode, "token identity for justness")
      ->check(CLI::IsMember({"individual", "collective"}));
}

exec::Criterion criterion(const std::string& s) {
  return s == "progress" ? exec::Criterion::progress : exec::Criterion::justness;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Petri nets with read arcs: compilation, failures, testing, scheduling and timing", "justnets"};
  app.require_subcommand(1);
  Config cfg;
  std::vector<std::string> files;
  std::string emit_format = "pnet", crit = "justness", test_mode = "must-j", duration, sync, hide, context,
              prefix;
  bool json = false, eventually = false, all_refusals = false, sync_all = false;
  std::size_t fuel = 1000, lang_fuel = lang::kDefaultFuel;

  auto* compile = app.add_subcommand("compile", "compile a .ccsps source to a net");
  compile->add_option("source", files, "source file")->required()->expected(1);
  compile->add_option("--emit", emit_format, "output format")->check(CLI::IsMember({"pnet", "dot"}));
  compile->add_option("--fuel", lang_fuel, "place limit for the derivation")->check(CLI::PositiveNumber);

  auto* show = app.add_subcommand("show", "print a net with its reachability summary");
  show->add_option("net", files, "net file")->required()->expected(1);
  show->add_option("--emit", emit_format, "print the net as pnet or dot instead")
      ->check(CLI::IsMember({"pnet", "dot"}));
  show->add_option("--max-nodes", cfg.max_nodes, "marking graph node limit")->check(CLI::PositiveNumber);
  bool show_emit = false;
  show->callback([&] { show_emit = show->count("--emit") > 0; });

  auto* compose = app.add_subcommand("compose", "parallel composition of two nets");
  compose->add_option("nets", files, "net files")->required()->expected(2);
  compose->add_option("--sync", sync, "synchronised actions, comma separated");
  compose->add_flag("--sync-all", sync_all, "synchronise on every visible action of either net");
  compose->add_option("--hide", hide, "actions hidden after composing");
  compose->add_option("--emit", emit_format, "output format")->check(CLI::IsMember({"pnet", "dot"}));

  auto* failures = app.add_subcommand("failures", "failure witnesses of a net");
  failures->add_option("net", files, "net file")->required()->expected(1);
  failures->add_option("--criterion", crit, "completeness criterion")
      ->check(CLI::IsMember({"justness", "just", "progress"}));
  failures->add_flag("--json", json, "JSON output");
  add_bounds(failures, cfg);
  add_mode(failures, cfg);

  auto* leq = app.add_subcommand("leq", "compare failure witness sets in both directions");
  leq->add_option("nets", files, "net files")->required()->expected(2);
  leq->add_option("--criterion", crit, "completeness criterion")
      ->check(CLI::IsMember({"justness", "just", "progress"}));
  leq->add_option("--blocked", cfg.blocked, "blocking set B, comma separated");
  leq->add_flag("--all-refusals", all_refusals, "compare witnesses without restricting to B");
  leq->add_option("--context", context, "also compare both nets composed with this net over all actions");
  leq->add_flag("--json", json, "JSON output");
  add_bounds(leq, cfg);
  add_mode(leq, cfg);

  auto* test = app.add_subcommand("test", "apply a test to a net");
  test->add_option("files", files, "test and net files")->required()->expected(2);
  test->add_option("--mode", test_mode, "testing notion")
      ->check(CLI::IsMember({"may", "should", "must-pr", "must-j"}));
  test->add_option("--tokens", cfg.mode, "token identity for justness")
      ->check(CLI::IsMember({"individual", "collective"}));
  test->add_option("--max-nodes", cfg.max_nodes, "marking graph node limit")->check(CLI::PositiveNumber);

  auto* sched = app.add_subcommand("sched", "extend a prefix to a just path");
  sched->add_option("net", files, "net file")->required()->expected(1);
  sched->add_option("--blocked", cfg.blocked, "blocked actions, comma separated");
  sched->add_option("--fuel", fuel, "maximum number of transitions fired")->check(CLI::PositiveNumber);
  sched->add_option("--prefix", prefix, "transition names of the prefix, comma separated");
  add_mode(sched, cfg);

  auto* timed_cmd = app.add_subcommand("timed", "timed must testing");
  timed_cmd->add_option("files", files, "test and net files")->required()->expected(2);
  auto* dur_opt = timed_cmd->add_option("--duration", duration, "deadline D, e.g. 2 or 3/2");
  auto* ev_opt = timed_cmd->add_flag("--eventually", eventually, "decide must-eventually instead");
  dur_opt->excludes(ev_opt);
  timed_cmd->add_option("--max-nodes", cfg.max_nodes, "state limit")->check(CLI::PositiveNumber);

  auto* check = app.add_subcommand("check-paper", "run the corpus regression checks");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (compile->parsed()) {
      emit(out, lang::compile_source(read_file(files[0]), lang_fuel), emit_format);
      return 0;
    }
    if (show->parsed()) {
      const Net n = load(files[0]);
      if (show_emit) {
        emit(out, n, emit_format);
        return 0;
      }
      const auto g = exec::reach(n, cfg.max_nodes);
      std::size_t dead = 0;
      for (const auto& m : g.nodes) dead += enabled_transitions(n, m).empty();
      const auto safety = exec::check_safe(n, cfg.max_nodes);
      out << "net " << n.name() << "\n"
          << "places " << n.num_places() << "\n"
          << "transitions " << n.num_transitions() << "\n"
          << "read arcs " << std::count_if(n.transitions().begin(), n.transitions().end(),
                                          [](const Transition& t) { return !t.read.empty(); })
          << " transitions\n"
          << "markings " << g.nodes.size() << (g.truncated ? " (truncated)" : "") << "\n"
          << "dead markings " << dead << "\n"
          << "safe " << (safety == exec::Safety::safe ? "yes" : safety == exec::Safety::unsafe ? "no" : "unknown")
          << "\n";
      return 0;
    }
    if (compose->parsed()) {
      const Net a = load(files[0]), b = load(files[1]);
      ActionSet s = action_set(sync);
      if (sync_all) {
        for (const auto& x : a.alphabet()) s.insert(x);
        for (const auto& x : b.alphabet()) s.insert(x);
      }
      Net c = parallel(a, b, s);
      if (!hide.empty()) c = abstract(c, action_set(hide));
      emit(out, c, emit_format);
      return 0;
    }
    if (failures->parsed()) {
      const Net n = load(files[0]);
      const auto ws = fail::failures(n, criterion(crit), cfg.bounds(), cfg.exec_mode());
      if (json) {
        ordered_json j{{"criterion", criterion(crit) == exec::Criterion::progress ? "progress" : "justness"},
                       {"witnesses", json_witnesses(ws)},
                       {"truncated", ws.truncated}};
        out << j.dump(2) << "\n";
      } else {
        for (const auto& w : ws.witnesses) out << fail::format_witness(w) << "\n";
        if (ws.truncated) out << "truncated at " << cfg.max_nodes << " markings\n";
      }
      return ws.truncated ? kInconclusive : 0;
    }
    if (leq->parsed()) {
      const Net n = load(files[0]), n2 = load(files[1]);
      const std::optional<LabelSet> b = all_refusals ? std::nullopt : std::optional(label_set(cfg.blocked));
      const auto c = criterion(crit);
      const auto fwd = fail::leq(n, n2, c, b, cfg.bounds(), cfg.exec_mode());
      const auto bwd = fail::leq(n2, n, c, b, cfg.bounds(), cfg.exec_mode());
      std::optional<fail::LeqResult> ctx;
      if (!context.empty()) {
        const Net t = load(context);
        ActionSet act = t.alphabet();
        for (const auto& x : n.alphabet()) act.insert(x);
        for (const auto& x : n2.alphabet()) act.insert(x);
        ctx = fail::leq(parallel(t, n, act), parallel(t, n2, act), c, b, cfg.bounds(), cfg.exec_mode());
      }
      if (json) {
        ordered_json j{{"forward", ordered_json::parse(fail::to_json(fwd))},
                       {"backward", ordered_json::parse(fail::to_json(bwd))}};
        if (ctx) j["context"] = ordered_json::parse(fail::to_json(*ctx));
        out << j.dump(2) << "\n";
      } else {
        auto line = [&](const char* what, const fail::LeqResult& r) {
          out << what << " " << fail::to_string(r.verdict);
          if (r.trace) out << " counterexample (" << exec::format_trace(*r.trace) << ", " << fail::format_labels(r.refusal) << ")";
          out << "\n";
        };
        line("left <= right:", fwd);
        line("right <= left:", bwd);
        if (ctx) line("context: left <= right:", *ctx);
      }
      return leq_code(fwd.verdict);
    }
    if (test->parsed()) {
      const Net t = load(files[0]), n = load(files[1]);
      testing::Verdict v;
      if (test_mode == "may") {
        v = testing::may(t, n, cfg.max_nodes);
      } else if (test_mode == "should") {
        v = testing::should(t, n, cfg.max_nodes);
      } else {
        v = testing::must(t, n, test_mode == "must-pr" ? exec::Criterion::progress : exec::Criterion::justness,
                          cfg.exec_mode(), cfg.max_nodes);
      }
      out << "verdict " << testing::to_string(v.outcome) << "\n";
      out << "markings " << v.nodes << (v.truncated ? " (truncated)" : "") << "\n";
      if (v.witness) out << exec::format_path(testing::apply(t, n), *v.witness);
      return outcome_code(v.outcome);
    }
    if (sched->parsed()) {
      const Net n = load(files[0]);
      std::vector<TransitionId> ts;
      for (const auto& name : split(prefix)) {
        auto t = n.find_transition(name);
        if (!t) throw UsageError("unknown transition '" + name + "'");
        ts.push_back(*t);
      }
      const LabelSet b = label_set(cfg.blocked);
      const auto ext = feas::extend_to_just(n, exec::make_path(n, n.initial_marking(), ts), b, fuel, cfg.exec_mode());
      out << "result " << ext.kind() << "\n";
      out << exec::format_path(n, ext.path());
      if (std::holds_alternative<feas::Ongoing>(ext.result)) {
        out << "fuel exhausted after " << fuel << " transitions\n";
        return kInconclusive;
      }
      const bool just = exec::is_b_just(n, ext.path(), b, cfg.exec_mode());
      out << "b-just " << (just ? "yes" : "no") << "\n";
      return just ? 0 : 1;
    }
    if (timed_cmd->parsed()) {
      const Net t = load(files[0]), n = load(files[1]);
      if (eventually) {
        const auto v = timed::must_eventually(n, t, cfg.max_nodes);
        ordered_json j{{"verdict", testing::to_string(v.outcome)},
                       {"bound", v.bound ? ordered_json(timed::format_time(*v.bound)) : ordered_json(nullptr)},
                       {"just_paths", testing::to_string(v.just_paths)},
                       {"must_j", testing::to_string(v.must_j)}};
        out << j.dump(2) << "\n";
        return outcome_code(v.outcome);
      }
      if (duration.empty()) throw UsageError("timed needs --duration D or --eventually");
      const auto d = parse_time(duration);
      if (d < timed::Time(0)) throw UsageError("the duration must not be negative");
      const Net c = testing::apply(t, n);
      const auto v = timed::must_timed_composed(c, d, cfg.max_nodes);
      out << timed::to_json(c, v) << "\n";
      return outcome_code(v.outcome);
    }
    if (check->parsed()) {
      const auto checks = regress::run_corpus_checks();
      out << regress::format_table(checks);
      return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; }) ? 0 : 1;
    }
  } catch (const FileError& e) {
    err << "error: " << e.what() << "\n";
    return kFileError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kFileError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsage;
}

}  // namespace justnets::cli
