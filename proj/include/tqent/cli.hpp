#pragma once

// Command-line front end. `run` parses argv, dispatches one verb, and returns
// the process exit code:
//   0 success, 1 usage or file-format error, 2 numeric-domain or convergence
//   error, 3 verification-suite failure.
// Output is human-readable text by default, CSV with --csv, JSON with --json;
// --out redirects it to a file.

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "tqent/scan.hpp"
#include "tqent/state_io.hpp"
#include "tqent/verify.hpp"

namespace tqent::cli {

enum class OutputFormat { text, csv, json };

struct Options {
  std::string state, in, q, cut, focus = "0", pair, alpha, k, subject, theta, phi, x, out, emit, suite;
  std::string w_form = "coffman";
  std::uint64_t seed = 0;
  std::size_t restarts = 32;
  bool csv = false, json = false, ckw = false, force_q = false;

  OutputFormat format() const { return json ? OutputFormat::json : csv ? OutputFormat::csv : OutputFormat::text; }

  RoofConfig roof() const {
    RoofConfig cfg;
    cfg.seed = seed;
    cfg.restarts = restarts;
    return cfg;
  }
};

using Record = nlohmann::ordered_json;

namespace detail {

// Re-throws any library error with the offending flag prepended, keeping its type.
template <class F>
auto for_flag(const std::string& flag, const std::string& value, F&& f) -> decltype(f()) {
  const std::string prefix = flag + " '" + value + "': ";
  try {
    return f();
  } catch (const DomainError& e) {
    throw DomainError(prefix + e.what());
  } catch (const FormatError& e) {
    throw FormatError(prefix + e.what());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(prefix + e.what());
  }
}

inline QParam parse_q(const Options& o) {
  if (o.q.empty()) throw InvalidArgument("--q is required");
  return for_flag("--q", o.q, [&] { return QParam(parse_scalar(o.q)); });
}

inline std::size_t parse_index(const std::string& flag, const std::string& text) {
  return for_flag(flag, text, [&] {
    const double v = parse_scalar(text);
    if (v < 0 || v != std::floor(v)) throw InvalidArgument("expected a nonnegative integer");
    return static_cast<std::size_t>(v);
  });
}

inline Subsystems parse_indices(const std::string& flag, const std::string& text) {
  Subsystems out;
  for (const auto& part : tqent::detail::split(text, ',')) out.push_back(parse_index(flag, part));
  if (out.empty()) throw InvalidArgument(flag + ": expected a comma-separated list of subsystem indices");
  return out;
}

inline std::vector<double> parse_grid(const std::string& flag, const std::string& text) {
  if (text.empty()) return {};
  return for_flag(flag, text, [&] { return parse_range(text); });
}

inline WForm parse_w_form(const std::string& text) {
  if (text == "coffman") return WForm::coffman;
  if (text == "printed") return WForm::printed;
  throw InvalidArgument("--w-form '" + text + "': expected coffman or printed");
}

inline AnyState resolve_state(const Options& o) {
  if (o.state.empty() == o.in.empty()) throw InvalidArgument("exactly one of --state or --in is required");
  if (!o.in.empty()) return load_state(o.in);
  const WForm form = parse_w_form(o.w_form);
  return for_flag("--state", o.state, [&] { return AnyState(named_state(o.state, form)); });
}

inline std::string state_label(const Options& o) { return o.in.empty() ? o.state : o.in; }

inline void check_subsystems(const Dims& dims, const Subsystems& idx, const std::string& flag) {
  for (auto i : idx)
    if (i >= dims.size())
      throw InvalidArgument(flag + ": subsystem " + std::to_string(i) + " out of range for a " + std::to_string(dims.size()) + "-party state");
}

inline DensityMatrix pair_marginal(const AnyState& s, const Subsystems& pair) {
  if (pair.size() != 2 || pair[0] == pair[1]) throw InvalidArgument("--pair: expected two distinct subsystem indices i,j");
  if (const auto* psi = std::get_if<PureState>(&s)) {
    check_subsystems(psi->dims(), pair, "--pair");
    return reduced_state_ordered(*psi, pair);
  }
  const auto& rho = std::get<DensityMatrix>(s);
  check_subsystems(rho.dims(), pair, "--pair");
  return partial_trace_ordered(rho, pair);
}

inline std::string render_scalar(const nlohmann::ordered_json& v, const char* array_sep) {
  if (v.is_null()) return "n/a";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return format_number(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? array_sep : "") + render_scalar(v[i], array_sep);
  return s;
}

inline std::string render(const Record& r, OutputFormat fmt) {
  std::ostringstream os;
  switch (fmt) {
    case OutputFormat::json:
      os << r.dump(2) << '\n';
      break;
    case OutputFormat::csv: {
      std::string head, row;
      bool first = true;
      for (const auto& [key, value] : r.items()) {
        head += (first ? "" : ",") + key;
        row += (first ? "" : ",") + render_scalar(value, ";");
        first = false;
      }
      os << head << '\n' << row << '\n';
      break;
    }
    case OutputFormat::text:
      for (const auto& [key, value] : r.items()) os << key << ": " << render_scalar(value, ", ") << '\n';
      break;
  }
  return os.str();
}

inline Record::value_type cell_json(const std::string& cell) {
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec == std::errc{} && res.ptr == cell.data() + cell.size()) return v;
  if (cell == "nan" || cell == "inf" || cell == "-inf") return nullptr;
  return cell;
}

inline std::string render(const Table& t, OutputFormat fmt) {
  std::ostringstream os;
  if (fmt == OutputFormat::json) {
    Record rows = Record::array();
    for (const auto& row : t.rows) {
      Record obj = Record::object();
      for (std::size_t i = 0; i < row.size(); ++i) obj[t.header[i]] = cell_json(row[i]);
      rows.push_back(std::move(obj));
    }
    os << rows.dump(2) << '\n';
  } else {
    t.write_csv(os);
  }
  return os.str();
}

inline Record report_record(const std::string& kind, const std::string& label, const MonogamyReport& r, std::size_t focus) {
  Record rec;
  rec["check"] = kind;
  rec["state"] = label;
  if (r.q) rec["q"] = r.q->value();
  rec["focus"] = focus;
  rec["lhs"] = r.lhs;
  rec["terms"] = r.terms;
  Record partners = Record::array();
  for (const auto& p : r.partners) {
    std::string s;
    for (auto i : p) s += (s.empty() ? "" : "+") + std::to_string(i);
    partners.push_back(s);
  }
  rec["partners"] = partners;
  rec["residual"] = r.residual;
  rec["tolerance"] = r.tolerance;
  rec["estimated"] = r.estimated;
  rec["verdict"] = r.satisfied ? "SATISFIED" : "VIOLATED";
  return rec;
}

// ---------------------------------------------------------------------------
// Verbs

inline std::string cmd_entropy(const Options& o) {
  const QParam q = parse_q(o);
  const AnyState s = resolve_state(o);
  Record rec;
  rec["state"] = state_label(o);
  rec["q"] = q.value();
  DensityMatrix rho = std::holds_alternative<PureState>(s) ? DensityMatrix::from_pure(std::get<PureState>(s)) : std::get<DensityMatrix>(s);
  if (!o.cut.empty()) {
    const Subsystems cut = parse_indices("--cut", o.cut);
    check_subsystems(rho.dims(), cut, "--cut");
    rho = partial_trace(rho, cut);
    rec["cut"] = o.cut;
  }
  rec["entropy"] = tsallis_entropy(rho, q);
  return render(rec, o.format());
}

inline std::string cmd_concurrence(const Options& o) {
  const AnyState s = resolve_state(o);
  Record rec;
  rec["state"] = state_label(o);
  if (!o.pair.empty()) {
    const DensityMatrix rho = pair_marginal(s, parse_indices("--pair", o.pair));
    rec["pair"] = o.pair;
    rec["concurrence"] = concurrence_two_qubit(rho).c;
    rec["method"] = "wootters";
  } else if (const auto* psi = std::get_if<PureState>(&s)) {
    const Subsystems cut = parse_indices("--cut", o.cut.empty() ? "0" : o.cut);
    check_subsystems(psi->dims(), cut, "--cut");
    rec["cut"] = o.cut.empty() ? "0" : o.cut;
    rec["concurrence"] = concurrence_pure(*psi, cut).c;
    rec["method"] = "pure";
  } else {
    const auto& rho = std::get<DensityMatrix>(s);
    if (!o.cut.empty()) throw InvalidArgument("--cut: mixed states are treated as the bipartition of their first subsystem; omit --cut");
    if (rho.is_qubits() && rho.num_subsystems() == 2) {
      rec["concurrence"] = concurrence_two_qubit(rho).c;
      rec["method"] = "wootters";
    } else {
      const RoofResult r = roof_concurrence(rho, o.roof());
      rec["concurrence"] = r.value;
      rec["method"] = "roof";
      rec["upper_bound"] = true;
      rec["restarts"] = o.restarts;
    }
  }
  return render(rec, o.format());
}

inline std::string cmd_tee(const Options& o) {
  const QParam q = parse_q(o);
  const AnyState s = resolve_state(o);
  Record rec;
  rec["state"] = state_label(o);
  rec["q"] = q.value();
  auto two_qubit = [&](const DensityMatrix& rho) {
    const TeeValue t = for_flag("--q", o.q, [&] {
      if (!o.force_q && !q.analytic_two_qubit())
        throw DomainError("outside the analytic window [(5-sqrt13)/2, (5+sqrt13)/2]; pass --force-q for the lower bound f_q(C^2)");
      return tee_two_qubit(rho, q, o.force_q);
    });
    rec["tee"] = t.value;
    rec["method"] = "wootters";
    rec["bound"] = t.lower_bound ? "lower" : "exact";
  };
  if (!o.pair.empty()) {
    rec["pair"] = o.pair;
    two_qubit(pair_marginal(s, parse_indices("--pair", o.pair)));
  } else if (const auto* psi = std::get_if<PureState>(&s)) {
    const Subsystems cut = parse_indices("--cut", o.cut.empty() ? "0" : o.cut);
    check_subsystems(psi->dims(), cut, "--cut");
    rec["cut"] = o.cut.empty() ? "0" : o.cut;
    rec["tee"] = tee_pure(*psi, cut, q);
    rec["method"] = "pure";
    rec["bound"] = "exact";
  } else {
    const auto& rho = std::get<DensityMatrix>(s);
    if (rho.is_qubits() && rho.num_subsystems() == 2 && o.cut.empty()) {
      two_qubit(rho);
    } else if (o.force_q && rho.num_subsystems() == 2 && rho.dims()[0] == 2 && o.cut.empty()) {
      const RoofResult c = roof_concurrence(rho, o.roof());
      const TeeValue t = tee_2xd(rho, q, c.value);
      rec["tee"] = t.value;
      rec["method"] = "f_q(roof C^2)";
      rec["bound"] = "lower";
    } else {
      const Subsystems cut = parse_indices("--cut", o.cut.empty() ? "0" : o.cut);
      check_subsystems(rho.dims(), cut, "--cut");
      rec["cut"] = o.cut.empty() ? "0" : o.cut;
      rec["tee"] = roof_tee(rho, cut, q, o.roof()).value;
      rec["method"] = "roof";
      rec["bound"] = "upper";
      rec["restarts"] = o.restarts;
    }
  }
  return render(rec, o.format());
}

inline std::string cmd_monogamy(const Options& o) {
  const AnyState s = resolve_state(o);
  const auto* psi = std::get_if<PureState>(&s);
  if (!psi) throw InvalidArgument("monogamy checks need a pure state; use `indicator` for mixed states");
  const std::size_t focus = parse_index("--focus", o.focus);
  check_subsystems(psi->dims(), {focus}, "--focus");
  const std::string label = state_label(o);
  if (o.ckw) {
    if (!o.q.empty() || !o.alpha.empty() || !o.k.empty()) throw InvalidArgument("--ckw: cannot be combined with --q, --alpha or --k");
    return render(report_record("ckw", label, ckw_check(*psi, focus), focus), o.format());
  }
  const QParam q = parse_q(o);
  if (!o.k.empty()) {
    if (!o.alpha.empty()) throw InvalidArgument("--k: cannot be combined with --alpha");
    const std::size_t k = parse_index("--k", o.k);
    const auto r = for_flag("--k", o.k, [&] { return hierarchical_check(*psi, focus, k, q, o.roof()); });
    Record rec = report_record("hierarchical", label, r, focus);
    rec["k"] = k;
    return render(rec, o.format());
  }
  const double alpha = o.alpha.empty() ? 2.0 : for_flag("--alpha", o.alpha, [&] { return parse_scalar(o.alpha); });
  Record rec;
  if (psi->is_qubits()) {
    const auto r = for_flag("--q", o.q, [&] { return alpha_residual(*psi, focus, q, alpha); });
    rec = report_record("tee-power", label, r, focus);
  } else {
    if (alpha != 2.0) throw InvalidArgument("--alpha: powers other than 2 need a multiqubit state");
    rec = report_record("tee-power", label, tee_sq_residual_general(*psi, focus, q, o.roof()), focus);
  }
  rec["alpha"] = alpha;
  return render(rec, o.format());
}

inline std::string cmd_indicator(const Options& o) {
  const QParam q = parse_q(o);
  const AnyState s = resolve_state(o);
  const std::size_t focus = parse_index("--focus", o.focus);
  Record rec;
  rec["state"] = state_label(o);
  rec["q"] = q.value();
  rec["focus"] = focus;
  const IndicatorValue v = for_flag("--q", o.q, [&] {
    if (const auto* psi = std::get_if<PureState>(&s)) {
      check_subsystems(psi->dims(), {focus}, "--focus");
      return indicator(*psi, q, focus);
    }
    const auto& rho = std::get<DensityMatrix>(s);
    check_subsystems(rho.dims(), {focus}, "--focus");
    return indicator(rho, q, o.roof(), focus);
  });
  rec["indicator"] = v.value;
  rec["upper_bound"] = v.upper_bound;
  if (v.upper_bound) rec["restarts"] = v.restarts;
  return render(rec, o.format());
}

inline std::string cmd_scan(const Options& o) {
  if (o.subject.empty()) throw InvalidArgument("--subject is required");
  ScanRequest req;
  req.subject = o.subject;
  req.q = parse_grid("--q", o.q);
  req.theta = parse_grid("--theta", o.theta);
  req.phi = parse_grid("--phi", o.phi);
  req.x = parse_grid("--x", o.x);
  req.w_form = parse_w_form(o.w_form);
  req.roof = o.roof();
  const Table t = for_flag("--subject", o.subject, [&] { return run_scan(req); });
  return render(t, o.format());
}

inline std::string cmd_state(const Options& o) {
  if (o.csv || o.json) throw InvalidArgument("--csv/--json: state files are always JSON");
  if (o.emit.empty() == o.in.empty()) throw InvalidArgument("exactly one of --emit or --in is required");
  if (!o.in.empty()) return dump_state(load_state(o.in));
  const WForm form = parse_w_form(o.w_form);
  return for_flag("--emit", o.emit, [&] { return dump_state(named_state(o.emit, form)); });
}

struct VerifyOutcome {
  std::string text;
  bool passed = true;
};

inline VerifyOutcome cmd_verify(const Options& o) {
  if (o.csv) throw InvalidArgument("--csv: verify prints text or --json");
  std::vector<std::string> suites;
  if (o.suite == "all") {
    suites = suite_names();
  } else {
    suites.push_back(o.suite);
  }
  VerifyOutcome outcome;
  Record all = Record::array();
  std::ostringstream os;
  for (const auto& name : suites) {
    const SuiteResult r = for_flag("suite", name, [&] { return run_suite(name, o.seed, o.restarts); });
    std::size_t passed = 0, counted = 0;
    Record checks = Record::array();
    for (const auto& c : r.checks) {
      const char* tag = c.informational ? "INFO" : c.passed ? "PASS" : "FAIL";
      os << tag << "  " << r.suite << "/" << c.name << "  " << c.detail << '\n';
      if (!c.informational) {
        ++counted;
        passed += c.passed ? 1 : 0;
      }
      Record cj;
      cj["name"] = c.name;
      cj["status"] = tag;
      cj["detail"] = c.detail;
      checks.push_back(std::move(cj));
    }
    os << r.suite << ": " << passed << "/" << counted << " checks passed\n";
    Record sj;
    sj["suite"] = r.suite;
    sj["passed"] = r.passed();
    sj["checks"] = std::move(checks);
    all.push_back(std::move(sj));
    outcome.passed = outcome.passed && r.passed();
  }
  outcome.text = o.json ? all.dump(2) + "\n" : os.str();
  return outcome;
}

inline void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw FormatError("--out '" + o.out + "': cannot open for writing");
  f << text;
  if (!f) throw FormatError("--out '" + o.out + "': write failed");
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tsallis-q entanglement, monogamy residuals and convex-roof checks", "tqent"};
  app.require_subcommand(1, 1);
  Options o;

  auto add_state = [&](CLI::App* sub) {
    auto* st = sub->add_option("--state", o.state, "named state, e.g. w:3, ghz:4, example3:pi/4, haar:4:7");
    auto* in = sub->add_option("--in", o.in, "state JSON file");
    st->excludes(in);
    sub->add_option("--w-form", o.w_form, "generalized-W convention: coffman (default) or printed");
  };
  auto add_format = [&](CLI::App* sub) {
    auto* c = sub->add_flag("--csv", o.csv, "CSV output");
    auto* j = sub->add_flag("--json", o.json, "JSON output");
    c->excludes(j);
    sub->add_option("--out", o.out, "write output to this file instead of stdout");
  };
  auto add_roof = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "seed for the convex-roof restarts (default 0)");
    sub->add_option("--restarts", o.restarts, "convex-roof restarts (default 32)")->check(CLI::PositiveNumber);
  };

  auto* entropy = app.add_subcommand("entropy", "Tsallis-q entropy of a state or of a reduced state");
  add_state(entropy);
  add_format(entropy);
  entropy->add_option("--q", o.q, "entropic index q > 0");
  entropy->add_option("--cut", o.cut, "kept subsystems, e.g. 0 or 0,2 (default: whole state)");

  auto* concurrence = app.add_subcommand("concurrence", "concurrence across a cut or of a qubit pair");
  add_state(concurrence);
  add_format(concurrence);
  add_roof(concurrence);
  concurrence->add_option("--cut", o.cut, "subsystems on one side of the cut (default 0)");
  concurrence->add_option("--pair", o.pair, "two-qubit marginal i,j (Wootters)");

  auto* tee = app.add_subcommand("tee", "Tsallis-q entanglement");
  add_state(tee);
  add_format(tee);
  add_roof(tee);
  tee->add_option("--q", o.q, "entropic index q");
  tee->add_option("--cut", o.cut, "subsystems on one side of the cut (default 0)");
  tee->add_option("--pair", o.pair, "two-qubit marginal i,j");
  tee->add_flag("--force-q", o.force_q, "allow q outside the analytic window; reports the lower bound f_q(C^2)");

  auto* monogamy = app.add_subcommand("monogamy", "monogamy residual of a pure state");
  add_state(monogamy);
  add_format(monogamy);
  add_roof(monogamy);
  monogamy->add_option("--q", o.q, "entropic index q");
  monogamy->add_option("--focus,--cut", o.focus, "focus subsystem (default 0)");
  monogamy->add_option("--alpha", o.alpha, "power alpha >= 2 (default 2)");
  monogamy->add_option("--k", o.k, "hierarchical check grouping the remaining parties after k-2 pair terms");
  monogamy->add_flag("--ckw", o.ckw, "squared-concurrence (CKW) check instead of TEE");

  auto* ind = app.add_subcommand("indicator", "multipartite entanglement indicator");
  add_state(ind);
  add_format(ind);
  add_roof(ind);
  ind->add_option("--q", o.q, "entropic index q");
  ind->add_option("--focus", o.focus, "focus subsystem (default 0)");

  auto* scan = app.add_subcommand("scan", "parameter scans behind the figures (CSV)");
  add_format(scan);
  add_roof(scan);
  scan->add_option("--subject", o.subject, "w-indicator:N[,N...], example3[:theta], example4, example5, generalized-w, lq, gq, d2fc, d2fc-zero");
  scan->add_option("--q", o.q, "q range: value, list a,b,c, or lo:hi:step");
  scan->add_option("--theta", o.theta, "theta range (pi accepted)");
  scan->add_option("--phi", o.phi, "phi range (pi accepted)");
  scan->add_option("--x", o.x, "x (or C) range for the derivative subjects");
  scan->add_option("--w-form", o.w_form, "generalized-W convention: coffman (default) or printed");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", o.suite, "appendix-a, appendix-b, appendix-c, appendix-d, theorem3-sweep, examples or all")->required();
  verify->add_flag("--json", o.json, "JSON output");
  verify->add_flag("--csv", o.csv, "(not supported)");
  verify->add_option("--out", o.out, "write output to this file instead of stdout");
  add_roof(verify);

  auto* state = app.add_subcommand("state", "emit or normalize a state file");
  state->add_option("--emit", o.emit, "named state to write");
  state->add_option("--in", o.in, "state file to re-read and re-serialize");
  state->add_option("--out", o.out, "write the JSON here instead of stdout");
  state->add_option("--w-form", o.w_form, "generalized-W convention: coffman (default) or printed");
  state->add_flag("--csv", o.csv, "(not supported)");
  state->add_flag("--json", o.json, "(default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    std::string text;
    bool passed = true;
    if (entropy->parsed()) text = detail::cmd_entropy(o);
    else if (concurrence->parsed()) text = detail::cmd_concurrence(o);
    else if (tee->parsed()) text = detail::cmd_tee(o);
    else if (monogamy->parsed()) text = detail::cmd_monogamy(o);
    else if (ind->parsed()) text = detail::cmd_indicator(o);
    else if (scan->parsed()) text = detail::cmd_scan(o);
    else if (state->parsed()) text = detail::cmd_state(o);
    else {
      auto v = detail::cmd_verify(o);
      text = std::move(v.text);
      passed = v.passed;
    }
    detail::emit(o, text, out);
    return passed ? 0 : 3;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace tqent::cli
