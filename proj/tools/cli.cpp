#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hbl/certificate.hpp"
#include "hbl/datum_io.hpp"
#include "hbl/engine.hpp"
#include "hbl/finner.hpp"
#include "hbl/oracle.hpp"
#include "hbl/polytope.hpp"

namespace hbl::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string datum;
  std::string action;
  std::string cert;
  std::string mode;
  std::string out;
  std::string format = "human";
  std::size_t budget_lattice = 4096;
  std::vector<std::uint32_t> budget_primes{2, 3, 5};
  std::size_t scan_max_dim = 6;
  std::uint64_t seed = 20240601;
  std::size_t iters = 2000;
  std::size_t restarts = 8;
  std::size_t threads = 1;
  bool trace = false;
  bool timing = false;

  bool machine() const { return format == "machine"; }
  SearchBudget budget() const {
    SearchBudget b;
    b.max_lattice_size = budget_lattice;
    b.primes = budget_primes;
    b.max_ambient_for_exhaustive_scan = scan_max_dim;
    b.rng_seed = seed;
    b.threads = threads;
    return b;
  }
};

json budget_json(const SearchBudget& b) {
  return {{"max_lattice_size", b.max_lattice_size},
          {"primes", b.primes},
          {"max_ambient_for_exhaustive_scan", b.max_ambient_for_exhaustive_scan},
          {"rng_seed", b.rng_seed},
          {"random_subspace_samples", b.random_subspace_samples},
          {"max_closure_rounds", b.max_closure_rounds}};
}

BLDatum override_mode(BLDatum d, const std::string& name) {
  const Mode m = parse_mode(name);
  d.mode = m;
  if (m == Mode::Global || m == Mode::Local || m == Mode::Discrete) {
    d.map0.reset();
    d.atomic.reset();
  } else if (m == Mode::Gut) {
    d.atomic.reset();
  }
  return validate(d);
}

struct Loaded {
  DatumFile file;
  BLDatum datum;
};

Loaded load(const Options& o) {
  Loaded l{load_datum(o.datum), {}};
  l.datum = l.file.continuum();
  if (!o.mode.empty()) l.datum = override_mode(l.datum, o.mode);
  return l;
}

json echo(const Loaded& l) { return l.file.finner ? finner_to_json(*l.file.finner) : datum_to_json(l.datum); }

json report_header(const std::string& command, const Options& o, const Loaded& l) {
  return {{"tool", "hbl"}, {"version", kVersion}, {"command", command}, {"seed", o.seed},
          {"budget", budget_json(o.budget())}, {"datum", echo(l)}};
}

std::string basis_text(const Subspace& s) {
  if (s.is_zero()) return "{0}";
  std::ostringstream os;
  os << "span{";
  for (std::size_t r = 0; r < s.dim(); ++r) {
    if (r) os << ", ";
    os << '(';
    for (std::size_t c = 0; c < s.ambient_dim(); ++c) os << (c ? "," : "") << to_string(s.basis()(r, c));
    os << ')';
  }
  os << '}';
  return os.str();
}

std::string vector_text(const ExponentVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
  return s + ")";
}

class Output {
 public:
  Output(const Options& o, std::ostream& out) : o_(o), out_(out) {}
  void write(const json& report, const std::string& human) {
    if (o_.out.empty()) {
      put(out_, report, human);
      return;
    }
    std::ofstream f(o_.out);
    if (!f) throw InputError("cannot write " + o_.out);
    put(f, report, human);
  }

 private:
  void put(std::ostream& os, const json& report, const std::string& human) {
    if (o_.machine())
      os << report.dump(2) << '\n';
    else
      os << human;
  }
  const Options& o_;
  std::ostream& out_;
};

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::string verdict_text(const Verdict& v) {
  std::ostringstream os;
  os << "verdict: " << verdict_name(v.kind) << '\n';
  for (const auto& c : v.conditions) {
    os << "  " << c.name << ": min " << to_string(c.result.explored_min) << " over " << c.result.explored
       << " subspaces in dimension " << c.search_dim << (c.result.exhaustive ? " (exhaustive)" : " (not exhaustive)");
    if (!c.result.primes_scanned.empty()) {
      os << ", primes";
      for (auto p : c.result.primes_scanned) os << ' ' << p;
    }
    os << '\n';
  }
  if (v.witness) {
    const auto& w = *v.witness;
    os << "witness: " << violation_name(w.violation) << " V = " << basis_text(w.V) << '\n'
       << "  r = " << to_string(w.r_exponent) << ", R = " << to_string(w.R_exponent) << '\n';
  }
  if (v.certificate)
    os << "certificate: " << node_count(*v.certificate) << " nodes, root " << kind_name(v.certificate->kind)
       << ", depth " << reduction_depth(*v.certificate) << '\n';
  if (!v.note.empty()) os << "note: " << v.note << '\n';
  return os.str();
}

int exit_for(VerdictKind k) {
  switch (k) {
    case VerdictKind::Feasible: return kFeasible;
    case VerdictKind::Infeasible: return kInfeasible;
    case VerdictKind::Undecided: return kUndecided;
  }
  return kUndecided;
}

int cmd_check(const Options& o, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  Loaded l = load(o);
  Verdict v = decide(l.datum, o.budget());
  json report = report_header("check", o, l);
  report["result"] = verdict_to_json(v);
  if (v.witness) report["result"]["witness_ref"] = "result.witness";
  const double ms = elapsed_ms(t0);
  if (o.timing) report["timing_ms"] = ms;
  std::ostringstream human;
  human << verdict_text(v);
  if (o.timing) human << "time: " << std::fixed << std::setprecision(1) << ms << " ms\n";
  Output(o, out).write(report, human.str());
  return exit_for(v.kind);
}

int cmd_certificate(const Options& o, std::ostream& out, std::ostream& err) {
  Loaded l = load(o);
  if (!is_global_type(l.datum)) throw InputError("certificates are defined for global-mode data only");
  if (o.action == "emit") {
    Verdict v = decide(l.datum, o.budget());
    if (v.kind == VerdictKind::Infeasible) {
      err << "refusing to emit: the datum is infeasible; witness V = " << basis_text(v.witness->V) << " ("
          << violation_name(v.witness->violation) << "), see `hbl check`\n";
      return kInfeasible;
    }
    if (!v.certificate) {
      err << "no certificate: " << v.note << '\n';
      return kUndecided;
    }
    std::ofstream f(o.cert);
    if (!f) throw InputError("cannot write " + o.cert);
    f << certificate_to_json(*v.certificate).dump(1) << '\n';
    json report = report_header("certificate emit", o, l);
    report["result"] = {{"written", o.cert}, {"nodes", node_count(*v.certificate)}};
    Output(o, out).write(report, "certificate written to " + o.cert + " (" +
                                     std::to_string(node_count(*v.certificate)) + " nodes)\n");
    return kFeasible;
  }
  CertCheck res;
  try {
    std::ifstream f(o.cert);
    if (!f) throw ParseError("cannot read " + o.cert);
    json j = json::parse(f);
    res = verify_certificate(l.datum, certificate_from_json(j));
  } catch (const json::exception& e) {
    res = {false, std::string("Malformed: ") + e.what(), "file"};
  } catch (const ParseError& e) {
    res = {false, std::string("Malformed: ") + e.what(), "file"};
  }
  json report = report_header("certificate verify", o, l);
  report["result"] = {{"accepted", res.accepted}};
  if (!res) report["result"]["reason"] = res.reason, report["result"]["path"] = res.path;
  Output(o, out).write(report, res ? "certificate accepted\n" : "certificate rejected at " + res.path + ": " + res.reason + "\n");
  return res ? kFeasible : kInfeasible;
}

int cmd_polytope(const Options& o, std::ostream& out) {
  Loaded l = load(o);
  const BLDatum& d = l.datum;
  AtlasCache cache;
  auto atlas = cache.get(kernel_view(d, Subspace::full(d.n)), o.budget());
  std::vector<DimProfile> profiles;
  for (const auto& c : atlas->candidates) profiles.push_back(c.profile);
  BLPolytope poly = constraints_from_profiles(profiles, d.m(), homogeneity_row(d));
  std::size_t faithful = 0;
  for (const auto& s : atlas->scans) faithful += s.faithful;
  const bool complete = atlas->k <= 1 || faithful >= 2;
  poly.complete = complete;
  VertexSet vs = enumerate_vertices(poly);

  json rows = json::array();
  std::ostringstream human;
  human << "rows (coefficients . t >= rhs):\n";
  for (const auto& r : poly.rows) {
    rows.push_back({{"coeffs", exponents_to_json(r.coeffs)}, {"rhs", to_string(r.rhs)}});
    human << "  " << vector_text(r.coeffs) << " >= " << to_string(r.rhs) << '\n';
  }
  if (poly.equality) human << "  " << vector_text(poly.equality->coeffs) << " = " << to_string(poly.equality->rhs) << '\n';
  json verts = json::array();
  human << "vertices (" << vs.vertices.size() << "):\n";
  for (const auto& v : vs.vertices) {
    verts.push_back(exponents_to_json(v));
    human << "  " << vector_text(v) << '\n';
  }
  human << "profile set complete: " << (complete ? "yes" : "no") << '\n';
  json report = report_header("polytope", o, l);
  report["result"] = {{"rows", rows}, {"vertices", verts}, {"complete", complete}};
  if (poly.equality)
    report["result"]["equality"] = {{"coeffs", exponents_to_json(poly.equality->coeffs)},
                                    {"rhs", to_string(poly.equality->rhs)}};
  Output(o, out).write(report, human.str());
  return kFeasible;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  Loaded l = load(o);
  const BLDatum& d = l.datum;
  AscentOptions ao;
  ao.iterations = o.iters;
  ao.seed = o.seed;
  ao.restarts = o.restarts;
  AscentReport rep = ascent(d, ao);

  json traces = json::array();
  std::ostringstream human;
  human << std::setprecision(10);
  human << "ascent: " << trace_status_name(rep.status) << ", best log_ratio " << rep.best_log_ratio << '\n';
  for (std::size_t r = 0; r < rep.traces.size(); ++r) {
    const auto& t = rep.traces[r];
    json tj = {{"restart", r}, {"status", trace_status_name(t.status)}, {"steps", t.log_ratio.size() - 1},
               {"final_log_ratio", t.log_ratio.back()}};
    if (t.final_exact) tj["final_log_ratio_exact"] = *t.final_exact;
    if (o.trace) tj["log_ratio"] = t.log_ratio;
    traces.push_back(tj);
    human << "  restart " << r << ": " << trace_status_name(t.status) << " after " << t.log_ratio.size() - 1
          << " steps, log_ratio " << t.log_ratio.back();
    if (t.final_exact) human << " (exact " << *t.final_exact << ")";
    human << '\n';
  }
  if (o.trace) {
    human << "# restart step log_ratio\n";
    for (std::size_t r = 0; r < rep.traces.size(); ++r)
      for (std::size_t k = 0; k < rep.traces[r].log_ratio.size(); ++k)
        human << r << ' ' << k << ' ' << rep.traces[r].log_ratio[k] << '\n';
  }
  json report = report_header("oracle", o, l);
  report["result"] = {{"status", trace_status_name(rep.status)}, {"best_log_ratio", rep.best_log_ratio}, {"traces", traces}};

  Verdict v = decide(d, o.budget());
  if (v.witness) {
    const auto& w = *v.witness;
    json slopes = json::array();
    human << "witness " << violation_name(w.violation) << " V = " << basis_text(w.V) << ", predicted slope "
          << to_string(predicted_slope(w)) << "\n# s log_ratio\n";
    for (double s : {4.0, 5.0, 6.0}) {
      double lr = gaussian_ratio(d, blowup_family(d, w, s)).log_ratio;
      slopes.push_back({{"s", s}, {"log_ratio", lr}});
      human << s << ' ' << lr << '\n';
    }
    SlopeMeasurement fl = blowup_slope_float(d, w, 4, 6);
    json sj = {{"predicted", to_string(predicted_slope(w))}, {"float", fl.measured}, {"table", slopes}};
    human << "slope (float, s=4..6): " << fl.measured << '\n';
    try {
      SlopeMeasurement ex = blowup_slope_exact(d, w);
      sj["exact"] = ex.measured;
      human << "slope (exact, lambda=2^20..2^24): " << ex.measured << '\n';
    } catch (const std::exception& e) {
      human << "slope (exact): unavailable (" << e.what() << ")\n";
    }
    report["result"]["slope"] = sj;
  }
  Output(o, out).write(report, human.str());
  return kFeasible;
}

int cmd_finner(const Options& o, std::ostream& out) {
  Loaded l = load(o);
  if (!l.file.finner) throw InputError("finner: the datum file has no product-structure block");
  FinnerReport rep = check(*l.file.finner);
  std::ostringstream human;
  human << std::left << std::setw(10) << "index" << std::setw(10) << "class" << std::setw(10) << "sigma"
        << "status\n";
  for (const auto& ir : rep.indices)
    human << std::setw(10) << ir.id << std::setw(10) << class_name(ir.cls) << std::setw(10) << to_string(ir.sigma)
          << (ir.ok ? "pass" : "FAIL") << '\n';
  human << "verdict: " << (rep.sufficient ? "sufficient" : "violated") << '\n';
  json report = report_header("finner", o, l);
  report["result"] = finner_report_to_json(rep);
  Output(o, out).write(report, human.str());
  return rep.sufficient ? kFeasible : kInfeasible;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--mode", o.mode, "Override the datum mode")
      ->check(CLI::IsMember({"global", "local", "gut", "discrete", "amalgam"}));
  sub->add_option("--budget-lattice", o.budget_lattice, "Lattice closure size cap");
  sub->add_option("--budget-primes", o.budget_primes, "Primes for finite-field scans")->delimiter(',');
  sub->add_option("--scan-max-dim", o.scan_max_dim, "Largest search dimension scanned exhaustively");
  sub->add_option("--seed", o.seed, "Random seed");
  sub->add_option("--out", o.out, "Write the report here instead of standard output");
  sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"human", "machine"}));
  sub->add_option("--threads", o.threads, "Worker cap")->check(CLI::PositiveNumber);
  sub->add_flag("--timing", o.timing, "Include wall-clock timing in the report");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decide finiteness of Hoelder-Brascamp-Lieb inequalities", "hbl"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Options o;

  auto* check_cmd = app.add_subcommand("check", "Decide a datum");
  check_cmd->add_option("datum", o.datum, "Datum file")->required();
  add_common(check_cmd, o);

  auto* cert_cmd = app.add_subcommand("certificate", "Emit or verify a feasibility certificate");
  cert_cmd->add_option("action", o.action, "emit | verify")->required()->check(CLI::IsMember({"emit", "verify"}));
  cert_cmd->add_option("datum", o.datum, "Datum file")->required();
  cert_cmd->add_option("cert", o.cert, "Certificate file")->required();
  add_common(cert_cmd, o);

  auto* poly_cmd = app.add_subcommand("polytope", "Exponent polytope of the datum's maps");
  poly_cmd->add_option("datum", o.datum, "Datum file")->required();
  add_common(poly_cmd, o);

  auto* oracle_cmd = app.add_subcommand("oracle", "Gaussian ratio ascent and blow-up slopes");
  oracle_cmd->add_option("datum", o.datum, "Datum file")->required();
  oracle_cmd->add_option("--iters", o.iters, "Ascent iterations per restart");
  oracle_cmd->add_option("--restarts", o.restarts, "Random restarts");
  oracle_cmd->add_flag("--trace", o.trace, "Print the full log_ratio series");
  add_common(oracle_cmd, o);

  auto* finner_cmd = app.add_subcommand("finner", "Per-index check for product-structure data");
  finner_cmd->add_option("datum", o.datum, "Datum file")->required();
  add_common(finner_cmd, o);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream ignored;
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*check_cmd) return cmd_check(o, out);
    if (*cert_cmd) return cmd_certificate(o, out, err);
    if (*poly_cmd) return cmd_polytope(o, out);
    if (*oracle_cmd) return cmd_oracle(o, out);
    if (*finner_cmd) return cmd_finner(o, out);
  } catch (const ParseError& e) {
    err << "hbl: " << e.what() << '\n';
    return kInputError;
  } catch (const ValidationError& e) {
    err << "hbl: invalid datum: " << e.what() << '\n';
    return kInputError;
  } catch (const InputError& e) {
    err << "hbl: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "hbl: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "hbl: internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kInputError;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, out, err);
}

}  // namespace hbl::cli
