#pragma once

// Parameter-range parsing, named catalog states, and q/angle scans producing
// the data behind the paper's figures as deterministic CSV tables.

#include <charconv>
#include <cctype>
#include <ostream>
#include <string>
#include <string_view>

#include "tqent/analysis.hpp"
#include "tqent/format.hpp"
#include "tqent/monogamy.hpp"

namespace tqent {

// ---------------------------------------------------------------------------
// Scalars and ranges

namespace detail {

inline std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

inline double parse_plain(std::string_view s, std::string_view whole) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw InvalidArgument("cannot parse number '" + std::string(whole) + "'");
  }
  return v;
}

// Round to 12 significant digits so grid values equal their printed form.
inline double snap(double v) {
  const std::string s = format_number(v, 12);
  double out = v;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

}  // namespace detail

// A real number, optionally a multiple of pi: "0.25", "-1e-3", "pi", "π/2",
// "3pi/2", "2*π", "-pi/4".
inline double parse_scalar(std::string_view text) {
  std::string s = detail::trim(text);
  const std::string whole = s;
  if (s.empty()) throw InvalidArgument("empty number");
  for (const std::string_view pi : {std::string_view("π"), std::string_view("pi"), std::string_view("PI")}) {
    const auto pos = s.find(pi);
    if (pos == std::string::npos) continue;
    std::string coef = s.substr(0, pos);
    std::string rest = s.substr(pos + pi.size());
    if (!coef.empty() && coef.back() == '*') coef.pop_back();
    double c = 1.0;
    if (coef == "-") c = -1.0;
    else if (coef == "+" || coef.empty()) c = 1.0;
    else c = detail::parse_plain(coef, whole);
    double den = 1.0;
    if (!rest.empty()) {
      if (rest.front() != '/') throw InvalidArgument("cannot parse number '" + whole + "'");
      den = detail::parse_plain(std::string_view(rest).substr(1), whole);
      if (den == 0.0) throw InvalidArgument("division by zero in '" + whole + "'");
    }
    return c * std::numbers::pi / den;
  }
  if (s.front() == '+') s.erase(0, 1);
  return detail::parse_plain(s, whole);
}

// "v", "a,b,c", or "lo:hi:step". The step form yields lo + k*step for every
// k with lo + k*step <= hi (up to 1e-9 steps of rounding slack, so hi is
// included when it lies on the grid and never overshot otherwise). An
// integer step N >= 2 larger than hi - lo instead splits [lo, hi] into N
// equal intervals (N + 1 points), e.g. "0:pi:64".
inline std::vector<double> parse_range(std::string_view text) {
  const std::string s = detail::trim(text);
  if (s.empty()) throw InvalidArgument("empty range");
  if (s.find(':') == std::string::npos) {
    std::vector<double> out;
    for (const auto& part : detail::split(s, ',')) out.push_back(parse_scalar(part));
    return out;
  }
  const auto parts = detail::split(s, ':');
  if (parts.size() != 3) throw InvalidArgument("range '" + s + "' must be lo:hi:step");
  const double lo = parse_scalar(parts[0]);
  const double hi = parse_scalar(parts[1]);
  const double step_in = parse_scalar(parts[2]);
  if (!(hi >= lo)) throw InvalidArgument("range '" + s + "' has hi < lo");
  if (!(step_in > 0.0)) throw InvalidArgument("range '" + s + "' needs a positive step");
  double step = step_in;
  if (step_in >= 2.0 && step_in == std::floor(step_in) && step_in > hi - lo) step = (hi - lo) / step_in;
  if (hi == lo) return {lo};
  const double span = (hi - lo) / step;
  if (span > 1e6) throw InvalidArgument("range '" + s + "' has more than 10^6 points");
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = detail::snap(lo + static_cast<double>(k) * step);
  return out;
}

// ---------------------------------------------------------------------------
// Named states: "w:3", "ghz:4", "bell", "generalized-w:pi/4,pi/3",
// "example3:0.785" (alias ququart), "example4" (antisymmetric),
// "example5" (qutrit-two-qubit), "haar:N:seed", "product:N".

inline PureState named_state(std::string_view spec, WForm w_form = WForm::coffman) {
  const std::string s = detail::trim(spec);
  const auto colon = s.find(':');
  const std::string name = s.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : s.substr(colon + 1);
  auto params = [&]() { return args.empty() ? std::vector<std::string>{} : detail::split(args, args.find(':') != std::string::npos ? ':' : ','); };
  auto count_arg = [&](const char* who) -> std::size_t {
    const auto p = params();
    if (p.size() != 1) throw InvalidArgument(std::string("state '") + s + "': " + who + " needs one integer parameter");
    const double v = parse_scalar(p[0]);
    if (v != std::floor(v) || v < 1) throw InvalidArgument("state '" + s + "': parameter must be a positive integer");
    return static_cast<std::size_t>(v);
  };
  auto require_no_args = [&]() {
    if (!args.empty()) throw InvalidArgument("state '" + s + "' takes no parameters");
  };
  if (name == "w") return w_state(count_arg("w"));
  if (name == "ghz") return ghz(count_arg("ghz"));
  if (name == "bell") {
    require_no_args();
    return bell_state();
  }
  if (name == "product") {
    const std::size_t n = count_arg("product");
    if (n < 2) throw InvalidArgument("state '" + s + "': need at least 2 qubits");
    return basis_state(Dims(n, 2), std::vector<std::size_t>(n, 0));
  }
  if (name == "generalized-w" || name == "gw") {
    const auto p = params();
    if (p.size() != 2) throw InvalidArgument("state '" + s + "': generalized-w needs theta,phi");
    return generalized_w(parse_scalar(p[0]), parse_scalar(p[1]), w_form);
  }
  if (name == "example3" || name == "ququart") {
    const auto p = params();
    if (p.size() != 1) throw InvalidArgument("state '" + s + "': example3 needs theta");
    return ququart_state(parse_scalar(p[0]));
  }
  if (name == "example4" || name == "antisymmetric") {
    require_no_args();
    return antisymmetric_qutrit_state();
  }
  if (name == "example5" || name == "qutrit-two-qubit") {
    require_no_args();
    return qutrit_two_qubit_state();
  }
  if (name == "haar") {
    const auto p = params();
    if (p.empty() || p.size() > 2) throw InvalidArgument("state '" + s + "': haar needs N[:seed]");
    const double n = parse_scalar(p[0]);
    if (n != std::floor(n) || n < 2 || n > 6) throw InvalidArgument("state '" + s + "': haar qubit count must be 2..6");
    const auto seed = p.size() == 2 ? static_cast<std::uint64_t>(parse_scalar(p[1])) : std::uint64_t{0};
    Rng rng(mix_seed(seed, 0));
    return haar_random_state(Dims(static_cast<std::size_t>(n), 2), rng);
  }
  throw InvalidArgument("unknown state '" + s + "'");
}

// ---------------------------------------------------------------------------
// Tables

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<double> values, std::vector<std::string> prefix = {}) {
    for (double v : values) prefix.push_back(format_number(v));
    rows.push_back(std::move(prefix));
  }

  void write_csv(std::ostream& out) const {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
      out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
  }
};

struct ScanRequest {
  std::string subject;
  std::vector<double> q, theta, phi, x;
  WForm w_form = WForm::coffman;
  RoofConfig roof;  // used for q = 1 points of the example residuals
};

namespace detail {

inline std::vector<double> or_default(const std::vector<double>& v, std::vector<double> fallback) {
  return v.empty() ? std::move(fallback) : v;
}

inline std::vector<double> window_grid() { return linspace(QParam::critical_low(), QParam::critical_high(), 101); }

// Example residual at q: closed form, or the numerical pipeline at q = 1 where
// the closed form is singular.
inline double example_residual(const std::string& which, double theta, double q, const RoofConfig& roof) {
  const QParam qp(q);
  if (!qp.is_von_neumann()) {
    if (which == "example3") return ququart_residual(theta, qp);
    if (which == "example4") return antisymmetric_residual(qp);
    return qutrit_two_qubit_residual(qp);
  }
  const PureState psi = which == "example3"   ? ququart_state(theta)
                        : which == "example4" ? antisymmetric_qutrit_state()
                                              : qutrit_two_qubit_state();
  return tee_sq_residual_general(psi, 0, qp, roof).residual;
}

inline std::string canonical_example(const std::string& name) {
  if (name == "example3" || name == "ququart") return "example3";
  if (name == "example4" || name == "antisymmetric") return "example4";
  if (name == "example5" || name == "qutrit-two-qubit") return "example5";
  return {};
}

// Curve q(C) where d^2 f_q(C^2)/dC^2 = 0 in the lower (q < 1) and upper
// (q > 4) regions.
// NaN when the bracket holds no sign change (the upper branch leaves [4, 20]
// for small C).
inline double d2_zero(double c, double lo, double hi) {
  auto f = [c](double q) { return d2_fq_wrt_C(q, c); };
  if (f(lo) * f(hi) > 0.0) return std::numeric_limits<double>::quiet_NaN();
  return find_root_q(f, lo, hi);
}

}  // namespace detail

inline Table run_scan(const ScanRequest& req) {
  const std::string subject = detail::trim(req.subject);
  const auto colon = subject.find(':');
  const std::string name = subject.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : subject.substr(colon + 1);
  Table t;

  if (name == "w-indicator") {
    if (args.empty()) throw InvalidArgument("subject w-indicator needs N, e.g. w-indicator:3 or w-indicator:3,6,9,11");
    t.header = {"n", "q", "tau"};
    for (const auto& part : detail::split(args, ',')) {
      const double n = parse_scalar(part);
      if (n != std::floor(n) || n < 3) throw InvalidArgument("w-indicator: N must be an integer >= 3");
      for (double q : detail::or_default(req.q, detail::window_grid()))
        t.add({n, q, w_indicator_closed_form(static_cast<std::size_t>(n), q)});
    }
    return t;
  }

  const std::vector<std::string> examples = detail::split(subject, ',');
  if (!detail::canonical_example(detail::split(examples.front(), ':').front()).empty()) {
    struct Item {
      std::string which;
      std::vector<double> thetas;
    };
    std::vector<Item> items;
    bool any_theta = false;
    for (const auto& ex : examples) {
      const auto parts = detail::split(ex, ':');
      const std::string which = detail::canonical_example(parts.front());
      if (which.empty() || parts.size() > 2) throw InvalidArgument("unknown scan subject '" + ex + "'");
      Item item{which, {0.0}};
      if (which == "example3") {
        any_theta = true;
        item.thetas = parts.size() == 2 ? std::vector<double>{parse_scalar(parts[1])}
                                        : detail::or_default(req.theta, {std::numbers::pi / 4});
      } else if (parts.size() == 2) {
        throw InvalidArgument("subject '" + ex + "' takes no parameter");
      }
      items.push_back(std::move(item));
    }
    const bool several = items.size() > 1;
    if (several) t.header.push_back("subject");
    if (any_theta) t.header.push_back("theta");
    t.header.insert(t.header.end(), {"q", "residual"});
    for (const auto& item : items)
      for (double theta : item.thetas)
        for (double q : detail::or_default(req.q, detail::window_grid())) {
          std::vector<std::string> prefix;
          if (several) prefix.push_back(item.which);
          if (any_theta) prefix.push_back(format_number(theta));
          t.add({q, detail::example_residual(item.which, theta, q, req.roof)}, prefix);
        }
    return t;
  }

  if (name == "generalized-w") {
    if (!args.empty()) throw InvalidArgument("subject generalized-w takes no parameter");
    t.header = {"q", "theta", "phi", "tau"};
    const auto thetas = detail::or_default(req.theta, parse_range("0:pi:64"));
    const auto phis = detail::or_default(req.phi, parse_range("0:2pi:64"));
    for (double q : detail::or_default(req.q, {2.0})) {
      const QParam qp(q);
      for (double theta : thetas)
        for (double phi : phis) t.add({q, theta, phi, indicator(generalized_w(theta, phi, req.w_form), qp).value});
    }
    return t;
  }

  if (name == "lq" || name == "gq" || name == "d2fc") {
    if (!args.empty()) throw InvalidArgument("subject " + name + " takes no parameter");
    const DerivativeKind kind = name == "lq" ? DerivativeKind::l_q : name == "gq" ? DerivativeKind::g_q : DerivativeKind::d2_f_wrt_C;
    const auto xs = detail::or_default(req.x, kind == DerivativeKind::d2_f_wrt_C ? linspace(0.01, 0.99, 99) : linspace(0.0, 0.999, 101));
    t.header = {kind == DerivativeKind::d2_f_wrt_C ? "c" : "x", "q", name};
    for (double q : detail::or_default(req.q, detail::window_grid())) {
      const QParam qp(q);
      for (double x : xs) t.add({x, q, evaluate(kind, x, qp)});
    }
    return t;
  }

  if (name == "d2fc-zero") {
    if (!args.empty()) throw InvalidArgument("subject d2fc-zero takes no parameter");
    t.header = {"c", "q_low", "q_high"};
    for (double c : detail::or_default(req.x, linspace(0.05, 0.99, 95))) {
      if (!(c > 0.0 && c < 1.0)) throw InvalidArgument("d2fc-zero: C values must lie in (0, 1)");
      t.add({c, detail::d2_zero(c, 0.3, 0.999), detail::d2_zero(c, 4.0, 20.0)});
    }
    return t;
  }

  throw InvalidArgument("unknown scan subject '" + subject + "'");
}

}  // namespace tqent
