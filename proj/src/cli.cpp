#include "lhasimoto/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lhasimoto/brackets.hpp"
#include "lhasimoto/dynamics.hpp"
#include "lhasimoto/experiments.hpp"
#include "lhasimoto/hasimoto.hpp"
#include "lhasimoto/sampling.hpp"
#include "lhasimoto/serialize.hpp"

namespace lh::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class LogLevel { quiet, info, debug };

struct Globals {
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::string log_level = "info";
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  Globals g;
  std::uint64_t seed = 0;

  [[nodiscard]] LogLevel level() const {
    if (g.log_level == "quiet") return LogLevel::quiet;
    if (g.log_level == "debug") return LogLevel::debug;
    return LogLevel::info;
  }
  void info(const std::string& msg) const {
    if (level() != LogLevel::quiet) err << msg << "\n";
  }
};

// "LO..HI" or a single K meaning -K..K.
Window parse_window(const std::string& s) {
  try {
    const auto dots = s.find("..");
    if (dots == std::string::npos) return Window::symmetric(std::stol(s));
    return Window(std::stol(s.substr(0, dots)), std::stol(s.substr(dots + 2)));
  } catch (const std::logic_error&) {
    throw UsageError("bad window '" + s + "', expected LO..HI or K");
  }
}

// Writes to the named file, or to `fallback` for "" and "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw UsageError("cannot write " + path);
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

std::vector<io::Record> read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  auto recs = io::read_records(in);
  if (recs.empty()) throw UsageError(path + " holds no records");
  return recs;
}

Rotation proper_completion(const Vec3& s) {
  Mat3 m = sampling::completion_frame(s);
  if (m.determinant() < 0.0) m.col(0) = -m.col(0);
  return Rotation::orthonormalized(m);
}

Rotation rotation_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (!(in >> m(i, j))) throw UsageError(path + ": expected 9 numbers (row-major)");
    }
  }
  return Rotation(m);
}

dynamics::IntegratorConfig make_config(double rtol, double atol, double max_step) {
  dynamics::IntegratorConfig cfg{rtol, atol, max_step};
  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------- sample

struct SampleOpts {
  std::string measure = "wn";
  double beta = 1.0;
  std::string window = "-16..16";
  std::size_t count = 1;
  std::string out;
};

int cmd_sample(Context& ctx, const SampleOpts& o) {
  const Beta beta(o.beta);
  const Window w = parse_window(o.window);
  if (o.measure != "wn" && o.measure != "gibbs") throw UsageError("--measure must be wn or gibbs");
  if (o.count < 1) throw UsageError("--count must be >= 1");
  Sink sink(o.out, ctx.out);
  for (std::size_t i = 0; i < o.count; ++i) {
    RngStream rng(ctx.seed, RngStream::family_id(experiments::family::sample_cli, i));
    if (o.measure == "wn") {
      *sink << io::to_record(0.0, sampling::sample_white_noise(beta, w, rng)) << "\n";
    } else {
      *sink << io::to_record(0.0, sampling::sample_gibbs_chain(beta, w, rng)) << "\n";
    }
  }
  return exit_code::ok;
}

// ---------------------------------------------------------------- transform

struct TransformOpts {
  std::string direction = "a2s";
  std::string gauge = "identity";
  std::string gauge_file;
  std::string in;
  std::string out;
};

int cmd_transform(Context& ctx, const TransformOpts& o) {
  if (o.direction != "s2a" && o.direction != "a2s") throw UsageError("--direction must be s2a or a2s");
  if (o.gauge != "identity" && o.gauge != "haar" && o.gauge != "file") {
    throw UsageError("--gauge must be identity, haar or file");
  }
  if (o.gauge == "file" && o.gauge_file.empty()) throw UsageError("--gauge file needs --gauge-file");
  std::optional<Rotation> fixed;
  if (o.gauge == "file") fixed = rotation_from_file(o.gauge_file);
  const auto recs = read_input(o.in);
  Sink sink(o.out, ctx.out);
  RngStream rng(ctx.seed, RngStream::family_id(experiments::family::sample_cli, 1u << 20));
  for (const auto& rec : recs) {
    if (o.direction == "a2s") {
      const auto* a = std::get_if<ALField>(&rec.state);
      if (!a) throw UsageError("a2s expects amplitude records");
      const Rotation g = fixed ? *fixed
                               : (o.gauge == "haar" ? sampling::sample_haar_rotation(rng)
                                                    : Rotation::identity());
      *sink << io::to_record(rec.t, hasimoto::spins_from_alphas(*a, g).spins) << "\n";
    } else {
      const auto* s = std::get_if<SpinField>(&rec.state);
      if (!s) throw UsageError("s2a expects spin records");
      // The gauge acts as a rotation about S_lo applied to its canonical completion frame.
      Rotation p0 = proper_completion(s->at(s->window().lo));
      if (o.gauge == "haar") {
        const double phi = 2.0 * M_PI * rng.uniform();
        Mat3 rz;
        rz << std::cos(phi), -std::sin(phi), 0, std::sin(phi), std::cos(phi), 0, 0, 0, 1;
        p0 = Rotation::orthonormalized(p0.matrix() * rz);
      } else if (fixed) {
        if ((*fixed * Vec3::UnitZ() - s->at(s->window().lo)).norm() > 1e-8) {
          throw UsageError("gauge file: third column must equal the first spin");
        }
        p0 = *fixed;
      }
      *sink << io::to_record(rec.t, hasimoto::alphas_from_spins_frame(*s, p0).alpha) << "\n";
    }
  }
  return exit_code::ok;
}

// ---------------------------------------------------------------- evolve

struct EvolveOpts {
  std::string model = "al";
  std::string boundary = "free";
  double t_final = 1.0;
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 0.1;
  std::size_t samples = 10;
  std::string in;
  std::string out;
  std::string conserved;
};

int cmd_evolve(Context& ctx, const EvolveOpts& o) {
  const auto model = dynamics::parse_model(o.model);
  const auto boundary = dynamics::parse_boundary(o.boundary);
  const auto cfg = make_config(o.rtol, o.atol, o.max_step);
  if (!std::isfinite(o.t_final)) throw UsageError("--tfinal must be finite");
  std::vector<double> times;
  for (std::size_t j = 1; j < o.samples; ++j) {
    times.push_back(o.t_final * static_cast<double>(j) / static_cast<double>(o.samples));
  }
  const auto recs = read_input(o.in);
  const auto& first = recs.front();
  Sink sink(o.out, ctx.out);
  dynamics::IntegrationLog log;
  std::vector<dynamics::EnergyRow> energies;
  dynamics::ConservedReport report;
  if (model == dynamics::Model::al) {
    const auto* a = std::get_if<ALField>(&first.state);
    if (!a) throw UsageError("--model al expects amplitude records");
    const auto traj = dynamics::integrate(*a, boundary, o.t_final, cfg, times, &log);
    io::write_trajectory(*sink, traj);
    energies = dynamics::energy_series(traj, boundary);
    report = dynamics::conserved_report(traj, boundary);
  } else {
    const auto* s = std::get_if<SpinField>(&first.state);
    if (!s) throw UsageError("--model " + o.model + " expects spin records");
    const auto traj = dynamics::integrate(*s, model, boundary, o.t_final, cfg, times, &log);
    io::write_trajectory(*sink, traj);
    energies = dynamics::energy_series(traj, model, boundary);
    report = dynamics::conserved_report(traj, model, boundary);
  }
  if (!o.conserved.empty()) {
    std::vector<io::ScalarRow> rows;
    for (const auto& e : energies) rows.push_back({e.t, e.name, e.value});
    Sink csv(o.conserved, ctx.out);
    io::write_scalar_csv(*csv, rows);
  }
  std::ostringstream msg;
  msg << "steps accepted=" << log.accepted << " rejected=" << log.rejected;
  for (std::size_t i = 0; i < report.names.size(); ++i) {
    msg << " drift(" << report.names[i] << ")=" << std::setprecision(3) << report.drift[i];
  }
  ctx.info(msg.str());
  return exit_code::ok;
}

// ---------------------------------------------------------------- verify

struct VerifyOpts {
  std::string suite = "jacobi";
  long window = 3;
  std::size_t samples = 100;
  double beta = 1.0;
  double tolerance = 1e-6;
  std::string json;
};

int cmd_verify(Context& ctx, const VerifyOpts& o) {
  nlohmann::ordered_json j;
  j["suite"] = o.suite;
  j["tables"] = brackets::table_hash();
  bool ok = false;
  auto triples = [&](const char* name, const brackets::TripleReport& r) {
    ctx.out << (r.pass() ? "PASS " : "FAIL ") << name << " triples=" << r.triples
            << " nonzero=" << r.nonzero << "\n";
    for (const auto& f : r.failures) ctx.out << "  " << f << "\n";
    j[name] = {{"triples", r.triples}, {"nonzero", r.nonzero}, {"pass", r.pass()}};
    return r.pass();
  };
  if (o.window < 1) throw UsageError("--window must be >= 1");
  if (o.suite == "jacobi") {
    const bool a = triples("jacobi_alpha", brackets::jacobi_all_triples(brackets::TableKind::alpha, o.window));
    const bool b = triples("jacobi_standard", brackets::jacobi_all_triples(brackets::TableKind::standard, o.window));
    ok = a && b;
  } else if (o.suite == "compat") {
    ok = triples("compatibility", brackets::compatibility_all_triples(o.window));
  } else if (o.suite == "hamilton") {
    const auto r = brackets::hamilton_check(Window::symmetric(std::max(2L, o.window)));
    ok = r.pass();
    ctx.out << (ok ? "PASS " : "FAIL ") << "hamilton cases=" << r.cases_checked
            << " case_failures=" << r.case_failures << " sites=" << r.sites_checked
            << " sum_failures=" << r.sum_failures << "\n";
    for (const auto& f : r.failures) ctx.out << "  " << f << "\n";
    j["hamilton"] = {{"cases", r.cases_checked},
                     {"case_failures", r.case_failures},
                     {"sum_failures", r.sum_failures},
                     {"pass", ok}};
  } else if (o.suite == "tables") {
    if (o.samples < 1) throw UsageError("--samples must be >= 1");
    RngStream rng(ctx.seed, RngStream::family_id(experiments::family::tables, 0));
    const auto r = brackets::verify_bracket_tables(o.samples, rng, Beta(o.beta).value(), o.tolerance);
    ok = r.pass();
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
      ctx.out << (row.pass ? "PASS " : "FAIL ") << row.table << " " << row.row
              << " max_discrepancy=" << std::setprecision(3) << row.max_discrepancy << "\n";
      j["rows"].push_back({{"table", row.table},
                           {"row", row.row},
                           {"max_discrepancy", row.max_discrepancy},
                           {"pass", row.pass}});
    }
    j["samples"] = r.samples;
    j["resampled"] = r.resampled;
  } else {
    throw UsageError("--suite must be jacobi, compat, hamilton or tables");
  }
  j["pass"] = ok;
  if (!o.json.empty()) {
    Sink sink(o.json, ctx.out);
    *sink << j.dump(2) << "\n";
  }
  return ok ? exit_code::ok : exit_code::failed;
}

// ---------------------------------------------------------------- invariance

struct InvarianceOpts {
  std::string measure = "wn";
  double beta = 1.0;
  long k = 64;
  std::size_t n = 10000;
  double t_final = 1.0;
  std::vector<double> times{0.0, 0.25, 0.5, 1.0};
  double rtol = 1e-6;
  double atol = 1e-9;
  double max_step = 0.1;
  std::string out;
};

int cmd_invariance(Context& ctx, const InvarianceOpts& o) {
  experiments::EnsembleSpec spec;
  spec.beta = Beta(o.beta);
  if (o.k < 2) throw UsageError("-K must be >= 2");
  spec.window = Window::symmetric(o.k);
  spec.n_ensembles = o.n;
  spec.t_final = o.t_final;
  spec.sample_times = o.times;
  spec.seed = ctx.seed;
  spec.integrator = make_config(o.rtol, o.atol, o.max_step);
  spec.workers = ctx.g.workers;
  spec.validate();
  experiments::EnsembleReport r;
  if (o.measure == "wn") {
    r = experiments::wn_invariance_experiment(spec);
  } else if (o.measure == "gibbs") {
    r = experiments::gibbs_invariance_experiment(spec);
  } else {
    throw UsageError("--measure must be wn or gibbs");
  }
  ctx.out << r.to_text();
  if (!o.out.empty()) {
    Sink sink(o.out, ctx.out);
    *sink << r.to_json() << "\n";
  }
  return r.pass() ? exit_code::ok : exit_code::failed;
}

// ---------------------------------------------------------------- converge

struct ConvergeOpts {
  double beta = 1.0;
  std::vector<long> ks{8, 16, 32, 64};
  double t_final = 1.0;
  std::size_t seeds = 1;
  double c = 4.0;
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 0.1;
  std::string out;
};

int cmd_converge(Context& ctx, const ConvergeOpts& o) {
  const Beta beta(o.beta);
  const auto cfg = make_config(o.rtol, o.atol, o.max_step);
  const auto s = experiments::convergence_study(beta, o.ks, o.t_final, ctx.seed, o.seeds, cfg,
                                                o.c, ctx.g.workers);
  nlohmann::ordered_json j;
  j["ks"] = o.ks;
  j["runs"] = nlohmann::ordered_json::array();
  for (const auto& r : s.runs) {
    j["runs"].push_back({{"sup_gaps", r.sup_gaps}, {"ratios", r.ratios},
                         {"strictly_decreasing", r.strictly_decreasing()}});
    ctx.out << "sup_gaps";
    for (double g : r.sup_gaps) ctx.out << " " << std::setprecision(4) << g;
    ctx.out << "\n";
  }
  j["verdicts"] = {
      {{"criterion", "sup_gap_strictly_decreasing"},
       {"value", s.all_decreasing ? 1.0 : 0.0},
       {"target", 1.0},
       {"tolerance", 0.0},
       {"pass", s.all_decreasing}},
      {{"criterion", "median_per_doubling_ratio"},
       {"value", s.median_ratio},
       {"target", 0.5},
       {"tolerance", 0.0},
       {"pass", s.median_ratio < 0.5}}};
  j["pass"] = s.pass();
  ctx.out << (s.all_decreasing ? "PASS" : "FAIL") << " strictly decreasing\n"
          << (s.median_ratio < 0.5 ? "PASS" : "FAIL") << " median ratio " << s.median_ratio
          << " < 0.5\n";
  if (!o.out.empty()) {
    Sink sink(o.out, ctx.out);
    *sink << j.dump(2) << "\n";
  }
  return s.pass() ? exit_code::ok : exit_code::failed;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumOpts {
  double beta = 1.0;
  int l_max = 4;
  std::string out;
};

int cmd_spectrum(Context& ctx, const SpectrumOpts& o) {
  if (o.l_max < 0) throw UsageError("--lmax must be >= 0");
  const auto s = sampling::kernel_spectrum(Beta(o.beta), o.l_max);
  nlohmann::ordered_json j;
  j["beta"] = s.beta;
  j["quadrature_points"] = s.quadrature_points;
  j["eigenvalues"] = s.eigenvalues;
  Sink sink(o.out, ctx.out);
  *sink << j.dump(2) << "\n";
  return exit_code::ok;
}

}  // namespace

std::string version() { return "lattice-hasimoto 1.0.0 (tables " + brackets::table_hash() + ")"; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lattice Hasimoto transform: samplers, transforms, flows and checks",
               "lattice-hasimoto"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML config file; command-line flags take precedence");
  app.set_version_flag("--version", version());

  Globals g;
  app.add_option("--seed", g.seed, "Random seed (printed when omitted)");
  app.add_option("--workers", g.workers, "Worker threads for ensembles")->check(CLI::Range(1u, 1024u));
  app.add_option("--log-level", g.log_level, "quiet, info or debug")
      ->check(CLI::IsMember({"quiet", "info", "debug"}));

  SampleOpts so;
  auto* sample = app.add_subcommand("sample", "Draw white-noise amplitudes or Gibbs spin chains");
  sample->add_option("--measure", so.measure, "wn or gibbs")->check(CLI::IsMember({"wn", "gibbs"}));
  sample->add_option("--beta", so.beta, "Inverse temperature (> 0)");
  sample->add_option("--window", so.window, "Sites LO..HI, or K for -K..K");
  sample->add_option("--count", so.count, "Number of independent fields");
  sample->add_option("--out", so.out, "Output JSON-lines file (stdout if omitted)");

  TransformOpts to;
  auto* transform = app.add_subcommand("transform", "Spins to amplitudes (s2a) or back (a2s)");
  transform->add_option("--direction", to.direction, "s2a or a2s")->check(CLI::IsMember({"s2a", "a2s"}));
  transform->add_option("--gauge", to.gauge, "identity, haar or file")
      ->check(CLI::IsMember({"identity", "haar", "file"}));
  transform->add_option("--gauge-file", to.gauge_file, "Rotation as 9 row-major numbers");
  transform->add_option("--in", to.in, "Input JSON-lines file")->required();
  transform->add_option("--out", to.out, "Output JSON-lines file (stdout if omitted)");

  EvolveOpts eo;
  auto* evolve = app.add_subcommand("evolve", "Integrate the AL, LHM or Heisenberg flow");
  evolve->add_option("--model", eo.model, "al, lhm or heis")->check(CLI::IsMember({"al", "lhm", "heis"}));
  evolve->add_option("--boundary", eo.boundary, "free or periodic")
      ->check(CLI::IsMember({"free", "periodic"}));
  evolve->add_option("--tfinal", eo.t_final, "Final time (may be negative)");
  evolve->add_option("--rtol", eo.rtol, "Relative tolerance");
  evolve->add_option("--atol", eo.atol, "Absolute tolerance");
  evolve->add_option("--max-step", eo.max_step, "Largest step");
  evolve->add_option("--samples", eo.samples, "Equally spaced output intervals");
  evolve->add_option("--in", eo.in, "Initial state (first record is used)")->required();
  evolve->add_option("--out", eo.out, "Output trajectory (stdout if omitted)");
  evolve->add_option("--conserved", eo.conserved, "CSV of conserved quantities per sample");

  VerifyOpts vo;
  auto* verify = app.add_subcommand("verify", "Exact and numerical bracket checks");
  verify->add_option("--suite", vo.suite, "jacobi, compat, hamilton or tables")
      ->check(CLI::IsMember({"jacobi", "compat", "hamilton", "tables"}));
  verify->add_option("--window", vo.window, "Site radius for the algebraic suites");
  verify->add_option("--samples", vo.samples, "Gibbs configurations for the tables suite");
  verify->add_option("--beta", vo.beta, "Inverse temperature for the tables suite");
  verify->add_option("--tolerance", vo.tolerance, "Largest accepted discrepancy (tables)");
  verify->add_option("--json", vo.json, "Write a JSON report here");

  InvarianceOpts io_;
  auto* invariance = app.add_subcommand("invariance", "Ensemble test of measure invariance");
  invariance->add_option("--measure", io_.measure, "wn or gibbs")->check(CLI::IsMember({"wn", "gibbs"}));
  invariance->add_option("--beta", io_.beta, "Inverse temperature (> 0)");
  invariance->add_option("-K", io_.k, "Window -K..K");
  invariance->add_option("-N", io_.n, "Ensemble size");
  invariance->add_option("--tfinal", io_.t_final, "Final time");
  invariance->add_option("--times", io_.times, "Comma-separated sample times")->delimiter(',');
  invariance->add_option("--rtol", io_.rtol, "Relative tolerance");
  invariance->add_option("--atol", io_.atol, "Absolute tolerance");
  invariance->add_option("--max-step", io_.max_step, "Largest step");
  invariance->add_option("--out", io_.out, "JSON report");

  ConvergeOpts co;
  auto* converge = app.add_subcommand("converge", "Nested truncation convergence");
  converge->add_option("--beta", co.beta, "Inverse temperature (> 0)");
  converge->add_option("--Ks", co.ks, "Comma-separated increasing half widths")->delimiter(',');
  converge->add_option("--tfinal", co.t_final, "Final time");
  converge->add_option("--seeds", co.seeds, "Independent draws");
  converge->add_option("--c", co.c, "Weight exponent");
  converge->add_option("--rtol", co.rtol, "Relative tolerance");
  converge->add_option("--atol", co.atol, "Absolute tolerance");
  converge->add_option("--max-step", co.max_step, "Largest step");
  converge->add_option("--out", co.out, "JSON report");

  SpectrumOpts po;
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of the Gibbs transition kernel");
  spectrum->add_option("--beta", po.beta, "Inverse temperature (> 0)");
  spectrum->add_option("--lmax", po.l_max, "Highest Legendre degree");
  spectrum->add_option("--out", po.out, "Output JSON (stdout if omitted)");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::ok : exit_code::usage;
  }

  Context ctx{out, err, g};
  if (g.seed) {
    ctx.seed = *g.seed;
  } else {
    ctx.seed = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();
    err << "seed: " << ctx.seed << "\n";
  }

  try {
    if (*sample) return cmd_sample(ctx, so);
    if (*transform) return cmd_transform(ctx, to);
    if (*evolve) return cmd_evolve(ctx, eo);
    if (*verify) return cmd_verify(ctx, vo);
    if (*invariance) return cmd_invariance(ctx, io_);
    if (*converge) return cmd_converge(ctx, co);
    if (*spectrum) return cmd_spectrum(ctx, po);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::usage;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::usage;
  } catch (const WindowError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::usage;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::usage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return exit_code::numerical;
  }
  return exit_code::usage;
}

int run(int argc, char** argv) {
  return run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

}  // namespace lh::cli
