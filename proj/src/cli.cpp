#include "saddlekit/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "saddlekit/continuous_game.hpp"
#include "saddlekit/gamefile.hpp"
#include "saddlekit/json_writer.hpp"
#include "saddlekit/log.hpp"
#include "saddlekit/matrix_game.hpp"
#include "saddlekit/paramlab.hpp"
#include "saddlekit/turnbased.hpp"

namespace saddlekit {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitWarnings = 2;
constexpr int kExitUsage = 64;

struct OutputSink {
  std::optional<std::string> path;
  std::ostream* console = nullptr;

  // machine output goes to --out when given, else to the console verbatim
  void write_machine(const std::string& payload) const {
    if (path) {
      std::ofstream f(*path, std::ios::binary);
      if (!f) throw Error("cannot write output file: " + *path);
      f << payload << "\n";
    } else {
      *console << payload << "\n";
    }
  }

  void write_summary(const std::string& line) const {
    if (path) *console << line << "\n";
  }
};

MixedStrategy parse_strategy_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "finite") {
    std::vector<std::pair<double, double>> atoms;
    for (const auto& atom : j.at("atoms"))
      atoms.emplace_back(atom.at(0).get<double>(), atom.at(1).get<double>());
    MixedStrategy s = MixedStrategy::finite(std::move(atoms));
    s.validate();
    return s;
  }
  if (kind == "geometric") {
    const auto& ratio = j.at("ratio");
    double r;
    if (ratio.is_string()) {
      std::string text_ratio = ratio.get<std::string>();
      auto slash = text_ratio.find('/');
      if (slash == std::string::npos) {
        r = std::stod(text_ratio);
      } else {
        double num = std::stod(text_ratio.substr(0, slash));
        double den = std::stod(text_ratio.substr(slash + 1));
        if (den == 0) throw Error("geometric ratio denominator is zero");
        r = num / den;
      }
    } else {
      r = ratio.get<double>();
    }
    MixedStrategy s = MixedStrategy::geometric(r);
    s.validate();
    return s;
  }
  throw Error("unknown strategy kind: " + kind);
}

void write_strategy(JsonWriter& w, const MixedStrategy& s) {
  w.begin_object();
  if (s.kind == MixedStrategy::Kind::GeometricTail) {
    w.key("kind").value("geometric");
    w.key("ratio").value(s.ratio);
  } else {
    w.key("kind").value("finite");
    w.key("atoms").begin_array();
    for (const auto& [p, wt] : s.atoms) {
      w.begin_array().value(p).value(wt).end_array();
    }
    w.end_array();
  }
  w.end_object();
}

MatrixGame read_matrix(const std::string& source, std::istream& fallback_stdin) {
  std::string text;
  if (source == "-") {
    std::stringstream buf;
    buf << fallback_stdin.rdbuf();
    text = buf.str();
  } else {
    std::ifstream f(source);
    if (!f) throw Error("cannot open matrix file: " + source);
    std::stringstream buf;
    buf << f.rdbuf();
    text = buf.str();
  }
  std::vector<std::vector<double>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    for (char& c : line)
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    std::istringstream fields(line);
    std::vector<double> row;
    double v;
    while (fields >> v) row.push_back(v);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error("matrix input is empty");
  return MatrixGame::from_rows(rows);
}

int cmd_matrix(const std::string& source, unsigned long long seed,
               const OutputSink& sink) {
  MatrixGame g = read_matrix(source, std::cin);
  MatrixSolution sol = solve_lp(g, 1e-9);

  JsonWriter w;
  w.begin_object();
  w.key("seed").value(seed);
  w.key("command").value("matrix");
  w.key("rows").value(g.rows());
  w.key("cols").value(g.cols());
  w.key("value").value(sol.value);
  w.key("row_strategy").begin_array();
  for (long i = 0; i < sol.row_strategy.size(); ++i) w.value(sol.row_strategy(i));
  w.end_array();
  w.key("col_strategy").begin_array();
  for (long j = 0; j < sol.col_strategy.size(); ++j) w.value(sol.col_strategy(j));
  w.end_array();
  w.key("gap").value(sol.gap);
  w.end_object();
  sink.write_machine(w.str());

  std::ostringstream summary;
  summary << "value " << sol.value << ", gap " << sol.gap;
  sink.write_summary(summary.str());
  return kExitOk;
}

void write_certificate(JsonWriter& w, const SaddleCertificate& cert,
                       unsigned long long seed, const std::string& game_path) {
  w.begin_object();
  w.key("seed").value(seed);
  w.key("command").value("solve");
  w.key("game").value(game_path);
  w.key("value").value(cert.value);
  w.key("eps").value(cert.eps);
  w.key("sharp_minus_value").value(cert.sharp_minus_value);
  w.key("value_minus_flat").value(cert.value_minus_flat);
  w.key("converged").value(cert.converged);
  w.key("lambda").value(cert.lambda);
  w.key("a_box").begin_array().value(cert.a_box.lo).value(cert.a_box.hi).end_array();
  w.key("b_box").begin_array().value(cert.b_box.lo).value(cert.b_box.hi).end_array();
  w.key("refinements").value(cert.refinements);
  w.key("grid_rows").value(cert.grid_rows);
  w.key("grid_cols").value(cert.grid_cols);
  w.key("piA");
  write_strategy(w, cert.pi_a);
  w.key("piB");
  write_strategy(w, cert.pi_b);
  w.end_object();
}

std::string certificate_csv(const SaddleCertificate& cert) {
  std::ostringstream out;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out << "field,value\n";
  out << "value," << num(cert.value) << "\n";
  out << "eps," << num(cert.eps) << "\n";
  out << "sharp_minus_value," << num(cert.sharp_minus_value) << "\n";
  out << "value_minus_flat," << num(cert.value_minus_flat) << "\n";
  out << "converged," << (cert.converged ? "true" : "false") << "\n";
  out << "lambda," << num(cert.lambda) << "\n";
  out << "side,point,weight";
  for (const auto& [p, wt] : cert.pi_a.atoms)
    out << "\nA," << num(p) << "," << num(wt);
  for (const auto& [p, wt] : cert.pi_b.atoms)
    out << "\nB," << num(p) << "," << num(wt);
  return out.str();
}

int cmd_solve(const std::string& game_path, double tol, int max_refine,
              std::optional<double> lambda0, const std::string& format,
              unsigned long long seed, const OutputSink& sink) {
  GameFile gf = load_game_file(game_path);
  if (gf.shape != GameFile::Shape::GameOnly)
    throw Error("solve expects a plain [game] file (no family/sequential section)");

  RefinementBudget budget;
  budget.max_refine = max_refine;
  budget.lambda0 = lambda0;
  SaddleCertificate cert =
      solve_zero_sum(gf.payoff, gf.a_domain, gf.b_domain, tol, budget);

  if (format == "csv") {
    sink.write_machine(certificate_csv(cert));
  } else {
    JsonWriter w;
    write_certificate(w, cert, seed, game_path);
    sink.write_machine(w.str());
  }

  std::ostringstream summary;
  summary << "value " << cert.value << ", eps " << cert.eps
          << (cert.converged ? "" : " (budget exhausted)");
  sink.write_summary(summary.str());
  return cert.converged ? kExitOk : kExitWarnings;
}

int cmd_turnbased(const std::string& game_path, std::optional<double> x_single,
                  const std::optional<std::string>& x_grid_text,
                  const std::string& format, unsigned long long seed,
                  const OutputSink& sink) {
  GameFile gf = load_game_file(game_path);
  if (gf.shape != GameFile::Shape::Sequential)
    throw Error("turnbased expects a game file with a [sequential] section");
  SequentialGame g = gf.to_sequential();

  std::vector<double> xs;
  if (x_single) xs.push_back(*x_single);
  if (x_grid_text) {
    GridSpec grid = parse_grid_spec(*x_grid_text);
    for (double x : grid.points()) xs.push_back(x);
  }
  if (xs.empty() && gf.x_grid) xs = gf.x_grid->points();
  if (xs.empty()) throw UsageError("turnbased needs --x or --x-grid");

  std::ostringstream machine;
  if (format == "csv") {
    machine << "x,v_sharp,argmin_a,argmax_b";
    char buf[64];
    auto num = [&](double v) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      return std::string(buf);
    };
    for (double x : xs) {
      MinimaxRecord rec = minimax(g, x);
      machine << "\n" << num(x) << ",";
      machine << (rec.v_sharp.is_finite() ? num(rec.v_sharp.finite_value())
                                          : rec.v_sharp.describe());
      machine << ",";
      for (std::size_t i = 0; i < rec.argmin_a.size(); ++i)
        machine << (i ? ";" : "") << num(rec.argmin_a[i]);
      machine << ",";
      for (std::size_t i = 0; i < rec.argmax_b.size(); ++i)
        machine << (i ? ";" : "") << num(rec.argmax_b[i]);
    }
  } else {
    bool first = true;
    for (double x : xs) {
      MinimaxRecord rec = minimax(g, x);
      JsonWriter w;
      w.begin_object();
      w.key("seed").value(seed);
      w.key("x").value(rec.x);
      w.key("v_sharp").value(rec.v_sharp);
      w.key("argmin_a").begin_array();
      for (double a : rec.argmin_a) w.value(a);
      w.end_array();
      w.key("argmax_b").begin_array();
      for (double b : rec.argmax_b) w.value(b);
      w.end_array();
      w.key("worst_loss_samples").begin_array();
      for (const auto& [a, wl] : rec.worst_loss_samples)
        w.begin_array().value(a).value(wl).end_array();
      w.end_array();
      w.end_object();
      if (!first) machine << "\n";
      machine << w.str();
      first = false;
    }
  }
  sink.write_machine(machine.str());
  std::ostringstream summary;
  summary << xs.size() << " state(s) evaluated";
  sink.write_summary(summary.str());
  return kExitOk;
}

const char* assumption_text(AssumptionStatus s) {
  switch (s) {
    case AssumptionStatus::DeclaredAndUnrefuted: return "DeclaredAndUnrefuted";
    case AssumptionStatus::Refuted: return "Refuted";
    case AssumptionStatus::NotDeclared: return "NotDeclared";
    case AssumptionStatus::StructurallySatisfied: return "StructurallySatisfied";
  }
  return "?";
}

void write_assumptions(JsonWriter& w, const AssumptionReport& rep) {
  w.begin_object();
  auto one = [&](const char* name, const AssumptionFinding& f) {
    w.key(name).begin_object();
    w.key("status").value(assumption_text(f.status));
    if (!f.witness.empty()) w.key("witness").value(f.witness);
    w.end_object();
  };
  one("A1", rep.a1);
  one("A2", rep.a2);
  one("A3", rep.a3);
  one("A4", rep.a4);
  one("A_lsc_of_phi_B", rep.a_lsc_of_phi_b);
  w.end_object();
}

int cmd_sweep(const std::string& game_path, const std::string& profile_name,
              const std::optional<std::string>& x_grid_text, double tol, int jobs,
              const std::optional<std::string>& csv_path, unsigned long long seed,
              const OutputSink& sink) {
  GameFile gf = load_game_file(game_path);
  if (gf.shape != GameFile::Shape::Family)
    throw Error("sweep expects a game file with a [family] section");
  GameFamily fam = gf.to_family();
  if (x_grid_text) fam.x_grid = parse_grid_spec(*x_grid_text).points();
  if (fam.x_grid.empty())
    throw UsageError("sweep needs an x grid (file [family] x_grid or --x-grid)");

  SweepProfile profile;
  if (profile_name == "lsc")
    profile = SweepProfile::Lsc;
  else if (profile_name == "continuity")
    profile = SweepProfile::Continuity;
  else
    throw UsageError("--profile must be lsc or continuity");

  SweepOptions options;
  options.tol = tol;
  options.jobs = jobs;
  SweepReport report = sweep(fam, profile, options);

  JsonWriter w;
  w.begin_object();
  w.key("seed").value(seed);
  w.key("command").value("sweep");
  w.key("game").value(game_path);
  w.key("profile").value(profile_name);
  w.key("assumptions");
  write_assumptions(w, report.assumptions);
  w.key("lsc_pass").value(report.lsc_pass);
  w.key("continuity_pass").value(report.continuity_pass);
  auto violations = [&](const char* name, const std::vector<SweepViolation>& list) {
    w.key(name).begin_array();
    for (const auto& v : list) {
      w.begin_object();
      w.key("x").value(v.x);
      w.key("magnitude").value(v.magnitude);
      w.key("detail").value(v.detail);
      w.end_object();
    }
    w.end_array();
  };
  violations("lsc_violations", report.lsc_violations);
  violations("usc_violations", report.usc_violations);
  violations("multifunction_usc_violations", report.multifunction_usc_violations);
  w.key("records").begin_array();
  for (const auto& rec : report.records) {
    w.begin_object();
    w.key("x").value(rec.x);
    if (rec.error.empty()) {
      w.key("v").value(rec.v);
      w.key("eps").value(rec.eps);
      w.key("converged").value(rec.converged);
      w.key("a_support").begin_array().value(rec.a_support_lo).value(rec.a_support_hi).end_array();
      w.key("a_atoms").begin_array();
      for (const auto& [p, wt] : rec.a_atoms)
        w.begin_array().value(p).value(wt).end_array();
      w.end_array();
      w.key("b_atoms").begin_array();
      for (const auto& [p, wt] : rec.b_atoms)
        w.begin_array().value(p).value(wt).end_array();
      w.end_array();
    } else {
      w.key("error").value(rec.error);
    }
    w.end_object();
  }
  w.end_array();
  w.end_object();
  sink.write_machine(w.str());

  if (csv_path) {
    std::ofstream csv(*csv_path, std::ios::binary);
    if (!csv) throw Error("cannot write csv file: " + *csv_path);
    char buf[64];
    auto num = [&](double v) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      return std::string(buf);
    };
    csv << "# seed=" << seed << "\n";
    csv << "x,v,eps,gapA,gapB,flags\n";
    for (const auto& rec : report.records) {
      std::string flags;
      if (!rec.error.empty()) flags = "error";
      for (const auto& v : report.lsc_violations)
        if (v.x == rec.x) flags += flags.empty() ? "lsc_viol" : ";lsc_viol";
      for (const auto& v : report.usc_violations)
        if (v.x == rec.x) flags += flags.empty() ? "usc_viol" : ";usc_viol";
      if (flags.empty()) flags = "ok";
      csv << num(rec.x) << "," << num(rec.v) << "," << num(rec.eps) << ","
          << num(rec.gap_sharp) << "," << num(rec.gap_flat) << "," << flags << "\n";
    }
  }

  std::ostringstream summary;
  summary << "lsc " << (report.lsc_pass ? "PASS" : "FAIL") << ", continuity "
          << (report.continuity_pass ? "PASS" : "FAIL");
  sink.write_summary(summary.str());

  bool profile_pass =
      profile == SweepProfile::Lsc ? report.lsc_pass : report.continuity_pass;
  bool had_errors = false;
  for (const auto& rec : report.records)
    if (!rec.error.empty()) had_errors = true;
  if (!profile_pass) return kExitError;
  return had_errors ? kExitWarnings : kExitOk;
}

int cmd_safety(const std::string& game_path, const std::string& strategy_text,
               const std::string& side_name, int probes, unsigned long long seed,
               const OutputSink& sink) {
  GameFile gf = load_game_file(game_path);
  if (gf.shape != GameFile::Shape::GameOnly)
    throw Error("safety expects a plain [game] file");
  PlayerTag side;
  if (side_name == "A")
    side = PlayerTag::A;
  else if (side_name == "B")
    side = PlayerTag::B;
  else
    throw UsageError("--side must be A or B");

  MixedStrategy pi = parse_strategy_json(strategy_text);
  const DomainDecl& own = side == PlayerTag::A ? gf.a_domain : gf.b_domain;
  const DomainDecl& opp = side == PlayerTag::A ? gf.b_domain : gf.a_domain;
  pi.validate(&own);

  SafetyReport rep = classify_safety(gf.payoff, pi, side, opp, probes);

  JsonWriter w;
  w.begin_object();
  w.key("seed").value(seed);
  w.key("command").value("safety");
  w.key("game").value(game_path);
  w.key("side").value(side_name);
  const char* verdict = rep.verdict == SafetyReport::Verdict::Safe ? "Safe"
                        : rep.verdict == SafetyReport::Verdict::UnsafeWitness
                            ? "UnsafeWitness"
                            : "Inconclusive";
  w.key("classification").value(verdict);
  w.key("reason").value(rep.reason);
  w.key("probes_used").value(rep.probes_used);
  if (rep.witness) {
    w.key("witness");
    write_strategy(w, *rep.witness);
    w.key("witness_cplus").value(rep.witness_plus);
    w.key("witness_cminus").value(rep.witness_minus);
  }
  w.end_object();
  sink.write_machine(w.str());

  std::ostringstream summary;
  summary << verdict << " (" << rep.reason << ")";
  sink.write_summary(summary.str());
  return rep.verdict == SafetyReport::Verdict::Inconclusive ? kExitWarnings
                                                            : kExitOk;
}

int cmd_probe(const std::string& game_path, const std::string& side_name,
              unsigned long long seed, const OutputSink& sink) {
  GameFile gf = load_game_file(game_path);
  if (gf.shape != GameFile::Shape::GameOnly)
    throw Error("probe expects a plain [game] file");

  Expr payoff = gf.payoff;
  DomainDecl axis = gf.a_domain, opponent = gf.b_domain;
  if (side_name == "B") {
    payoff = make_unary(UnaryFn::Neg, swap_ab(gf.payoff));
    axis = gf.b_domain;
    opponent = gf.a_domain;
  } else if (side_name != "A") {
    throw UsageError("--side must be A or B");
  }

  CoercivityCertificate cert = probe_coercivity(
      payoff, axis, opponent, {opponent.reference_point(), 0.0, 1.0, -1.0});

  JsonWriter w;
  w.begin_object();
  w.key("seed").value(seed);
  w.key("command").value("probe");
  w.key("game").value(game_path);
  w.key("side").value(side_name);
  w.key("anchor_b0").value(cert.anchor_b0);
  w.key("all_confirmed").value(cert.all_confirmed());
  w.key("ends").begin_array();
  bool any_refuted = false, any_inconclusive = false;
  for (const auto& end : cert.ends) {
    w.begin_object();
    w.key("direction").value(end.direction > 0 ? "+inf" : "-inf");
    const char* status =
        end.status == CoercivityCertificate::EndStatus::GrowthConfirmed
            ? "GrowthConfirmed"
            : end.status == CoercivityCertificate::EndStatus::GrowthRefuted
                  ? "GrowthRefuted"
                  : "Inconclusive";
    if (end.status == CoercivityCertificate::EndStatus::GrowthRefuted)
      any_refuted = true;
    if (end.status == CoercivityCertificate::EndStatus::Inconclusive)
      any_inconclusive = true;
    w.key("status").value(status);
    if (end.status == CoercivityCertificate::EndStatus::GrowthRefuted)
      w.key("counter_point").value(end.counter_point);
    w.key("samples").begin_array();
    std::size_t shown = 0;
    for (const auto& [t, v] : end.samples) {
      if (shown++ >= 12) break;
      w.begin_array().value(t).value(v).end_array();
    }
    w.end_array();
    w.end_object();
  }
  w.end_array();
  w.end_object();
  sink.write_machine(w.str());

  std::ostringstream summary;
  summary << (cert.all_confirmed() ? "growth confirmed" : "growth not confirmed")
          << " at anchor " << cert.anchor_b0;
  sink.write_summary(summary.str());

  if (any_refuted) return kExitError;
  if (any_inconclusive) return kExitWarnings;
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"saddlekit: values, saddle points and continuity diagnostics "
               "for one-shot zero-sum games"};
  app.require_subcommand(1);

  unsigned long long seed = 0;
  app.add_option("--seed", seed, "provenance seed, recorded in machine output");
  int jobs = 1;
  app.add_option("--jobs", jobs, "worker cap for parallel sections");

  std::string out_path;

  // matrix
  auto* matrix = app.add_subcommand("matrix", "solve a finite matrix game");
  std::string matrix_source;
  matrix->add_option("input", matrix_source, "matrix file or - for stdin")
      ->required();
  matrix->add_option("--out", out_path, "machine output file");

  // solve
  auto* solve = app.add_subcommand("solve", "solve a continuous zero-sum game");
  std::string solve_game;
  double solve_tol = 1e-4;
  int max_refine = 12;
  double lambda0_val = 0.0;
  bool lambda0_set = false;
  std::string solve_format = "json";
  solve->add_option("game", solve_game, "game file")->required();
  solve->add_option("--tol", solve_tol, "duality-gap tolerance");
  solve->add_option("--max-refine", max_refine, "refinement budget");
  auto* lambda_opt = solve->add_option("--lambda0", lambda0_val, "level seed");
  solve->add_option("--format", solve_format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  solve->add_option("--out", out_path, "machine output file");

  // turnbased
  auto* turn = app.add_subcommand("turnbased", "minimax of a sequential game");
  std::string turn_game;
  double x_single = 0.0;
  bool x_single_set = false;
  std::string turn_grid;
  bool turn_grid_set = false;
  std::string turn_format = "jsonl";
  turn->add_option("game", turn_game, "game file")->required();
  auto* x_opt = turn->add_option("--x", x_single, "single state");
  auto* grid_opt = turn->add_option("--x-grid", turn_grid, "lo:hi:n state grid");
  turn->add_option("--format", turn_format, "jsonl|csv")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  turn->add_option("--out", out_path, "machine output file");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "parametric family diagnostics");
  std::string sweep_game, sweep_profile, sweep_grid, sweep_csv;
  bool sweep_grid_set = false, sweep_csv_set = false;
  double sweep_tol = 1e-4;
  sweep_cmd->add_option("game", sweep_game, "game file")->required();
  sweep_cmd->add_option("--profile", sweep_profile, "lsc|continuity")->required();
  auto* sweep_grid_opt = sweep_cmd->add_option("--x-grid", sweep_grid, "lo:hi:n");
  sweep_cmd->add_option("--tol", sweep_tol, "per-x duality tolerance");
  auto* sweep_csv_opt = sweep_cmd->add_option("--csv", sweep_csv, "values csv file");
  sweep_cmd->add_option("--out", out_path, "machine output file");

  // safety
  auto* safety = app.add_subcommand("safety", "classify a strategy as safe/unsafe");
  std::string safety_game, safety_strategy, safety_side = "B";
  int probes = 64;
  safety->add_option("game", safety_game, "game file")->required();
  safety->add_option("--strategy", safety_strategy, "strategy JSON")->required();
  safety->add_option("--side", safety_side, "A|B");
  safety->add_option("--probes", probes, "probe budget");
  safety->add_option("--out", out_path, "machine output file");

  // probe
  auto* probe = app.add_subcommand("probe", "coercivity probe report");
  std::string probe_game, probe_side = "A";
  probe->add_option("game", probe_game, "game file")->required();
  probe->add_option("--side", probe_side, "A|B");
  probe->add_option("--out", out_path, "machine output file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help and friends
      out << app.help();
      return kExitOk;
    }
    err << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  lambda0_set = lambda_opt->count() > 0;
  x_single_set = x_opt->count() > 0;
  turn_grid_set = grid_opt->count() > 0;
  sweep_grid_set = sweep_grid_opt->count() > 0;
  sweep_csv_set = sweep_csv_opt->count() > 0;

  OutputSink sink;
  if (!out_path.empty()) sink.path = out_path;
  sink.console = &out;

  try {
    if (matrix->parsed()) return cmd_matrix(matrix_source, seed, sink);
    if (solve->parsed())
      return cmd_solve(solve_game, solve_tol, max_refine,
                       lambda0_set ? std::optional<double>(lambda0_val)
                                   : std::nullopt,
                       solve_format, seed, sink);
    if (turn->parsed())
      return cmd_turnbased(turn_game,
                           x_single_set ? std::optional<double>(x_single)
                                        : std::nullopt,
                           turn_grid_set ? std::optional<std::string>(turn_grid)
                                         : std::nullopt,
                           turn_format, seed, sink);
    if (sweep_cmd->parsed())
      return cmd_sweep(sweep_game, sweep_profile,
                       sweep_grid_set ? std::optional<std::string>(sweep_grid)
                                      : std::nullopt,
                       sweep_tol, jobs,
                       sweep_csv_set ? std::optional<std::string>(sweep_csv)
                                     : std::nullopt,
                       seed, sink);
    if (safety->parsed())
      return cmd_safety(safety_game, safety_strategy, safety_side, probes, seed,
                        sink);
    if (probe->parsed()) return cmd_probe(probe_game, probe_side, seed, sink);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  err << "no subcommand selected\n";
  return kExitUsage;
}

}  // namespace saddlekit
