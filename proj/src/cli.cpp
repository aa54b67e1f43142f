#include "fracinv/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <vector>

#include "fracinv/config.hpp"
#include "fracinv/csv.hpp"
#include "fracinv/direct_solver.hpp"
#include "fracinv/error.hpp"
#include "fracinv/harness.hpp"
#include "fracinv/inverse_solver.hpp"
#include "fracinv/mittag_leffler.hpp"

namespace fracinv {
namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct Context {
  const RunConfig& config;
  std::ostream& out;
  std::ostream& err;
  json manifest;
  std::vector<std::string> outputs;

  std::filesystem::path output(const std::string& name) {
    outputs.push_back(name);
    return config.out_dir / name;
  }
};

json overrides_json(const RunConfig& c) {
  json o = json::object();
  if (c.M) o["M"] = *c.M;
  if (c.K) o["K"] = *c.K;
  if (c.N) o["N"] = *c.N;
  if (c.tol) o["tol"] = *c.tol;
  if (c.eps) o["eps"] = *c.eps;
  if (c.seed) o["seed"] = *c.seed;
  if (c.warn_only) o["warn_only"] = true;
  return o;
}

ProblemSpec resolve_spec(Context& ctx, Mode mode) {
  const RunConfig& c = ctx.config;
  if (c.config.empty()) throw ConfigError("missing problem configuration file");
  ProblemSpec spec = load_config(c.config);
  if (c.M) spec.grid.M = *c.M;
  if (c.K) spec.grid.K = *c.K;
  if (c.N) spec.grid.N = *c.N;
  if (c.tol) spec.inverse.picard_tol = *c.tol;
  if (c.eps) spec.noise.eps = *c.eps;
  if (c.seed) spec.noise.seed = *c.seed;
  if (c.warn_only) spec.hypotheses = HypothesisPolicy::kWarn;
  ctx.manifest["spec"] = spec_to_json(spec);
  validate_structure(spec, mode);
  return spec;
}

std::vector<std::string> node_header(const std::string& first, const ConstVectorRef& nodes) {
  std::vector<std::string> header{first};
  for (Index i = 0; i < nodes.size(); ++i) header.push_back(format_double(nodes(i)));
  return header;
}

void run_eig(Context& ctx) {
  const ProblemSpec spec = resolve_spec(ctx, Mode::kAny);
  std::vector<HypothesisCheck> checks;
  for (HypothesisCheck& c : check_hypotheses(spec)) {
    if (c.name.rfind("coefficients", 0) == 0) checks.push_back(std::move(c));
  }
  enforce_hypotheses(checks, spec.hypotheses, &ctx.err);
  const Discretization disc = discretize(spec);
  const Index count = spec.grid.N.value_or(std::min(kMaxAutoModes, spec.grid.M));
  const SpectralBasis basis = solve_eigs(assemble_operator(disc.p_half, disc.q, disc.space), count);
  ctx.manifest["resolved"] = {{"modes", count}, {"orthonormality_defect", basis.orthonormality_defect}};

  CsvWriter eig(ctx.output("eigenvalues.csv"), {"n", "lambda"});
  for (Index n = 0; n < basis.size(); ++n) eig.row({std::to_string(n + 1), format_double(basis.eigenvalues(n))});
  if (ctx.config.eig_modes) {
    std::vector<std::string> header{"x"};
    for (Index n = 0; n < basis.size(); ++n) header.push_back("X_" + std::to_string(n + 1));
    CsvWriter modes(ctx.output("eigenfunctions.csv"), header);
    Vector row(basis.size() + 1);
    for (Index i = 0; i < disc.space.size(); ++i) {
      row(0) = disc.space.node(i);
      row.tail(basis.size()) = basis.modes.row(i).transpose();
      modes.row(row);
    }
  }
  ctx.out << "eig: " << basis.size() << " eigenpairs, orthonormality defect " << basis.orthonormality_defect << '\n';
}

void run_ml(Context& ctx) {
  const RunConfig& c = ctx.config;
  if (!c.ml_alpha) throw ConfigError("ml needs --alpha");
  Vector z;
  if (c.z) {
    if (c.z_min || c.z_max) throw ConfigError("ml: give either --z or --z-min/--z-max, not both");
    z = Vector::Constant(1, *c.z);
  } else {
    if (!c.z_min || !c.z_max) throw ConfigError("ml needs --z or both --z-min and --z-max");
    if (c.points < 2) throw ConfigError("ml: --points must be at least 2");
    z = Vector::LinSpaced(c.points, *c.z_min, *c.z_max);
  }
  ctx.manifest["ml"] = {{"alpha", *c.ml_alpha},
                        {"beta", c.ml_beta},
                        {"z", c.z ? json(*c.z) : json(nullptr)},
                        {"z_min", c.z_min ? json(*c.z_min) : json(nullptr)},
                        {"z_max", c.z_max ? json(*c.z_max) : json(nullptr)},
                        {"points", z.size()}};
  CsvWriter csv(ctx.output("ml.csv"), {"z", "value"});
  for (Index i = 0; i < z.size(); ++i) {
    const double value = mittag_leffler(*c.ml_alpha, c.ml_beta, z(i));
    csv.row({format_double(z(i)), format_double(value)});
    if (z.size() == 1) ctx.out << format_double(value) << '\n';
  }
}

void run_direct(Context& ctx) {
  const ProblemSpec spec = resolve_spec(ctx, Mode::kDirect);
  const DirectSolution sol = solve_direct(spec);
  ctx.manifest["resolved"] = {{"modes", sol.basis.size()}};
  const SpaceGrid<> space(spec.l, spec.grid.M);
  Vector x(space.size());
  for (Index i = 0; i < x.size(); ++i) x(i) = space.node(i);

  const Matrix field = sol.field();
  CsvWriter u(ctx.output("u_field.csv"), node_header("t", x));
  Vector row(field.cols() + 1);
  for (Index k = 0; k < field.rows(); ++k) {
    row(0) = sol.time.node(k);
    row.tail(field.cols()) = field.row(k).transpose();
    u.row(row);
  }
  const Vector g = observe(sol.amplitudes, sol.coeffs.h);
  write_columns(ctx.output("g_observed.csv"), "t", sol.time.nodes(), "g", g);
  ctx.out << "direct: " << sol.basis.size() << " modes, " << field.rows() << " time nodes\n";
}

void run_synth(Context& ctx) {
  const ProblemSpec spec = resolve_spec(ctx, Mode::kDirect);
  const SynthDataset d = synthesize(spec, spec.noise.eps, spec.noise.seed);
  const Vector t = d.time.nodes();
  write_columns(ctx.output("g_exact.csv"), "t", t, "g", d.g_exact);
  write_columns(ctx.output("g_noisy.csv"), "t", t, "g", d.g_noisy);
  write_columns(ctx.output("f_true.csv"), "t", t, "f", d.f_true);
  ctx.out << "synth: " << t.size() << " samples, eps " << d.eps << ", seed " << d.seed << '\n';
}

void run_invert(Context& ctx) {
  const ProblemSpec spec = resolve_spec(ctx, Mode::kInverse);
  const InverseResult r = invert(spec);
  for (const std::string& w : r.warnings) ctx.err << "warning: " << w << '\n';
  ctx.manifest["resolved"] = {{"modes", r.modes}};
  write_columns(ctx.output("f_recovered.csv"), "t", r.time.nodes(), "f", r.f);

  CsvWriter diag(ctx.output("diagnostics.csv"), {"quantity", "value"});
  const auto put = [&](const std::string& name, double v) { diag.row({name, format_double(v)}); };
  put("residual_first_kind", r.residual_first);
  put("residual_second_kind", r.residual_second);
  put("compatibility_g0", r.compatibility.g0);
  put("compatibility_defect", r.compatibility.defect());
  put("compatibility_tolerance", r.compatibility.tolerance);
  put("modes", static_cast<double>(r.modes));
  put("H", r.H);
  put("W", r.W);
  put("tail_H", r.tail_H);
  put("tail_W", r.tail_W);
  put("marching_picard_gap", r.marching_picard_gap);
  put("picard_iterations", r.picard.iterations());
  put("picard_converged", r.picard.converged ? 1.0 : 0.0);
  put("picard_non_contraction", r.picard.non_contraction ? 1.0 : 0.0);
  put("picard_last_ratio", r.picard.last_ratio());
  for (std::size_t i = 0; i < r.picard.differences.size(); ++i) {
    put("picard_difference_" + std::to_string(i + 1), r.picard.differences[i]);
  }
  ctx.out << "invert: " << r.modes << " modes, first-kind residual " << r.residual_first << ", Picard "
          << (r.picard.converged ? "converged" : "not converged") << " in " << r.picard.iterations()
          << " iterations\n";
}

void run_verify(Context& ctx) {
  const ProblemSpec spec = resolve_spec(ctx, Mode::kAny);
  const std::vector<InvariantRow> rows = verify_invariants(spec);
  CsvWriter csv(ctx.output("invariants_report.csv"), {"check", "measured", "bound", "pass"});
  std::size_t passed = 0;
  for (const InvariantRow& r : rows) {
    csv.row({r.check, format_double(r.measured), format_double(r.bound), r.pass ? "true" : "false"});
    passed += r.pass;
    if (!r.pass) ctx.out << "FAIL " << r.check << ": " << r.measured << " (bound " << r.bound << ")\n";
  }
  ctx.out << "verify: " << passed << " of " << rows.size() << " checks pass\n";
}

void write_manifest(const Context& ctx) {
  std::ofstream file(ctx.config.out_dir / "manifest.json", std::ios::binary | std::ios::trunc);
  file << ctx.manifest.dump(2) << '\n';
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Context ctx{config, out, err, json::object(), {}};
  ctx.manifest["program"] = "fracinv";
  ctx.manifest["version"] = kVersion;
  ctx.manifest["subcommand"] = config.subcommand;
  ctx.manifest["config"] = config.config.empty() ? json(nullptr) : json(config.config.string());
  ctx.manifest["overrides"] = overrides_json(config);

  int status = 0;
  bool have_dir = false;
  try {
    std::filesystem::create_directories(config.out_dir);
    have_dir = true;
    if (config.subcommand == "eig") {
      run_eig(ctx);
    } else if (config.subcommand == "ml") {
      run_ml(ctx);
    } else if (config.subcommand == "direct") {
      run_direct(ctx);
    } else if (config.subcommand == "synth") {
      run_synth(ctx);
    } else if (config.subcommand == "invert") {
      run_invert(ctx);
    } else if (config.subcommand == "verify") {
      run_verify(ctx);
    } else {
      throw ConfigError("unknown subcommand '" + config.subcommand + "'");
    }
  } catch (const Error& e) {
    status = static_cast<int>(e.category());
    err << "error[" << category_name(e.category()) << "]: " << e.what() << '\n';
    ctx.manifest["error"] = {{"category", category_name(e.category())}, {"message", e.what()}};
  } catch (const std::filesystem::filesystem_error& e) {
    status = static_cast<int>(ErrorCategory::kConfig);
    err << "error[config]: " << e.what() << '\n';
    ctx.manifest["error"] = {{"category", "config"}, {"message", e.what()}};
  } catch (const std::exception& e) {
    status = static_cast<int>(ErrorCategory::kNumerical);
    err << "error[numerical]: " << e.what() << '\n';
    ctx.manifest["error"] = {{"category", "numerical"}, {"message", e.what()}};
  }
  ctx.manifest["status"] = status == 0 ? "ok" : "error";
  ctx.manifest["exit_code"] = status;
  ctx.manifest["outputs"] = ctx.outputs;
  if (have_dir) write_manifest(ctx);
  return status;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-fractional diffusion: direct solves and inverse source recovery", "fracinv"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  RunConfig config;

  const auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* cfg = sub->add_option("config", config.config, "problem configuration (JSON)");
    if (needs_config) cfg->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", config.out_dir, "output directory")->capture_default_str();
    sub->add_option("--M", config.M, "interior space nodes");
    sub->add_option("--K", config.K, "time steps");
    sub->add_option("--N", config.N, "number of modes");
    sub->add_option("--tol", config.tol, "Picard tolerance");
    sub->add_option("--eps", config.eps, "multiplicative noise level");
    sub->add_option("--seed", config.seed, "noise seed");
    sub->add_flag("--warn-only", config.warn_only, "report hypothesis violations as warnings");
  };

  CLI::App* eig = app.add_subcommand("eig", "Sturm-Liouville eigenpairs");
  add_common(eig, true);
  eig->add_flag("--modes", config.eig_modes, "also write eigenfunctions.csv");

  CLI::App* ml = app.add_subcommand("ml", "Mittag-Leffler function E_{alpha,beta}(z)");
  ml->add_option("-o,--out", config.out_dir, "output directory")->capture_default_str();
  ml->add_option("--alpha", config.ml_alpha, "order in (0,1]")->required();
  ml->add_option("--beta", config.ml_beta, "second parameter")->capture_default_str();
  auto* z = ml->add_option("--z", config.z, "single argument z <= 0");
  auto* z_min = ml->add_option("--z-min", config.z_min, "sweep start");
  auto* z_max = ml->add_option("--z-max", config.z_max, "sweep end");
  ml->add_option("--points", config.points, "sweep points")->capture_default_str();
  z->excludes(z_min)->excludes(z_max);

  add_common(app.add_subcommand("direct", "forward solve: u_field.csv, g_observed.csv"), true);
  add_common(app.add_subcommand("synth", "synthetic data: g_exact.csv, g_noisy.csv, f_true.csv"), true);
  add_common(app.add_subcommand("invert", "recover f from g: f_recovered.csv, diagnostics.csv"), true);
  add_common(app.add_subcommand("verify", "invariant checklist: invariants_report.csv"), true);

  if (argc > 1 && argv[1][0] != '-') {
    const std::string name = argv[1];
    const auto subs = app.get_subcommands([](const CLI::App*) { return true; });
    if (std::none_of(subs.begin(), subs.end(), [&](const CLI::App* s) { return s->get_name() == name; })) {
      err << "error[config]: unknown subcommand '" << name << "'\n" << app.help();
      return static_cast<int>(ErrorCategory::kConfig);
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error[config]: " << e.what() << '\n' << app.help();
    return static_cast<int>(ErrorCategory::kConfig);
  }
  config.subcommand = app.get_subcommands().front()->get_name();
  return run(config, out, err);
}

}  // namespace fracinv
