#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "krange/io.hpp"
#include "krange/krange.hpp"

namespace krange::cli {

namespace {

using io::Json;

/// Usage errors (bad parameters, unparsable flags) map to exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  Tolerances tol;
};

Json header(const char* command, const Tolerances& tol) {
  Json h;
  h["tool"] = "krange";
  h["version"] = kVersion;
  h["command"] = command;
  Json t;
  for (const auto& [name, value] : tol.entries()) t[name] = value;
  h["tolerances"] = t;
  return h;
}

void emit(Context& ctx, const std::string& path, const std::string& text) {
  if (path.empty()) {
    ctx.out << text;
  } else {
    io::write_file(path, text);
  }
}

void emit_json(Context& ctx, const std::string& path, const Json& j) { emit(ctx, path, j.dump(2) + "\n"); }

Json krein_vector_json(const KreinVector& z) {
  Json blocks = Json::array();
  for (Index j = 0; j < z.blocks(); ++j) blocks.push_back(io::complex_array(z.block(j)));
  Json out;
  out["signature"] = z.signature().signs();
  out["blocks"] = blocks;
  return out;
}

Json witness_json(const Matrix& a, const Vector& u, const Tolerances& tol) {
  const ShmulyanResult s = shmulyan_gamma(a, u, 0, 0, tol);
  Json w;
  w["verdict"] = s.verdict == RangeVerdict::InRange ? "in_range" : "not_in_range";
  if (s.witness) {
    w["y"] = io::complex_array(s.witness->y);
    w["inner_y_u"] = Json::array({s.witness->inner.real(), s.witness->inner.imag()});
    w["adjoint_norm"] = s.witness->adjoint_norm;
    Json path = Json::array();
    for (const auto& [t, ratio] : s.witness->ratio_path) path.push_back(Json::array({t, ratio}));
    w["ratio_path"] = path;
  }
  return w;
}

Json error_json(const char* command, const Tolerances& tol, const Error& e) {
  Json j = header(command, tol);
  j["error"] = to_string(e.kind());
  j["message"] = e.what();
  return j;
}

SignedOperatorTuple load_tuple(const std::string& path, const Tolerances& tol) {
  const io::TupleFile file = io::parse_tuple(io::read_file(path));
  try {
    return file.to_tuple(tol);
  } catch (const Error& e) {
    // A file whose matrices cannot even form a tuple is corrupt, not a math failure.
    throw io::IoError(std::string("tuple file: ") + e.what());
  }
}

Json solve_json(const SolveReport& r) {
  Json j;
  j["eps"] = r.eps;
  j["residual"] = r.residual;
  j["krein_norm_sq"] = r.krein_norm_sq;
  j["target_norm_sq"] = r.target_norm_sq;
  j["x_eps_norm_sq"] = r.x_eps_norm_sq;
  j["identity_deviation"] = r.identity_deviation;
  if (r.exact) j["equality_ok"] = r.equality_ok;
  j["z"] = krein_vector_json(r.z);
  return j;
}

std::vector<double> parse_grid(const std::string& spec) {
  const std::string prefix = "geometric:";
  if (spec.rfind(prefix, 0) != 0) throw UsageError("--eps-grid must look like geometric:start,ratio,count");
  std::vector<double> parts;
  std::stringstream ss(spec.substr(prefix.size()));
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || p != item.data() + item.size()) throw UsageError("bad number in --eps-grid: " + item);
    parts.push_back(v);
  }
  if (parts.size() != 3 || parts[2] != std::floor(parts[2]))
    throw UsageError("--eps-grid must look like geometric:start,ratio,count");
  try {
    return geometric_schedule(parts[0], parts[1], static_cast<int>(parts[2]));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

Coefficients parse_coefficients(const std::string& spec) {
  Coefficients out;
  std::stringstream ss(spec);
  std::string item;
  auto number = [&](std::string_view s) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v))
      throw UsageError("bad coefficient '" + std::string(s) + "' (expected re or re:im)");
    return v;
  };
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      out.emplace_back(number(item), 0.0);
    } else {
      out.emplace_back(number(std::string_view(item).substr(0, colon)), number(std::string_view(item).substr(colon + 1)));
    }
  }
  if (out.empty()) throw UsageError("empty coefficient list");
  return out;
}

Json coefficients_json(const Coefficients& c) {
  Json a = Json::array();
  for (const auto& z : c) a.push_back(Json::array({z.real(), z.imag()}));
  return a;
}

// ---------------------------------------------------------------- commands

struct CheckArgs {
  std::string tuple_file, out;
  int samples = 200;
  std::uint64_t seed = 0;
};

int cmd_check(Context& ctx, const CheckArgs& a) {
  const SignedOperatorTuple tuple = load_tuple(a.tuple_file, ctx.tol);
  Json j = header("check", ctx.tol);
  j["dim"] = tuple.dim();
  j["signature"] = tuple.signature().signs();
  j["seed"] = a.seed;
  j["samples"] = a.samples;
  const auto& v = tuple.validation();
  j["level"] = to_string(v.level);
  j["min_eig_defect"] = v.min_eig_defect;
  j["max_eig_defect"] = v.max_eig_defect;
  Json witnesses = Json::array();
  for (Index c = 0; c < v.witnesses.cols(); ++c) witnesses.push_back(io::complex_array(v.witnesses.col(c)));
  j["witnesses"] = witnesses;

  if (v.level == Validity::Invalid) {
    j["passed"] = false;
    emit_json(ctx, a.out, j);
    ctx.err << "krange check: D is not positive semidefinite (min eigenvalue " << v.min_eig_defect << ")\n";
    return kMathFailure;
  }

  Json checks;
  const double iso = isometry_check(tuple, a.samples, a.seed);
  checks["isometry"] = {{"max_deviation", iso}, {"ok", iso <= ctx.tol.isometry}};
  const double adj = adjoint_check(tuple, a.samples, a.seed + 1);
  checks["adjoint"] = {{"max_deviation", adj}, {"ok", adj <= 1e-10}};
  const Matrix id = Matrix::Identity(tuple.dim(), tuple.dim());
  const double gram_dev = (bT_apply_columns(tuple, bT_sharp_columns(tuple, id)) - tuple.defect()).norm();
  checks["row_map_identity"] = {{"deviation", gram_dev}, {"ok", gram_dev <= 1e-10 * std::max(1.0, tuple.defect().norm())}};
  const TTildeReport tt = ttilde_properties(tuple);
  checks["adjoint_extension"] = {{"range_dim", tt.range_dim},
                                 {"vacuous", tt.vacuous},
                                 {"injective", tt.injective},
                                 {"injectivity_sigma_min", tt.injectivity_sigma_min},
                                 {"image_is_range", tt.image_is_range},
                                 {"image_residual", tt.image_residual},
                                 {"extension_by_construction", tt.extension_by_construction},
                                 {"ok", tt.passed()}};
  bool passed = true;
  for (const auto& [name, c] : checks.items()) passed = passed && c["ok"].get<bool>();
  j["checks"] = checks;
  j["passed"] = passed;
  emit_json(ctx, a.out, j);
  return passed ? kOk : kMathFailure;
}

struct SolveArgs {
  std::string tuple_file, u_file, out;
  std::optional<double> eps;
  bool exact = false;
};

int cmd_solve(Context& ctx, const SolveArgs& a) {
  if (a.exact == a.eps.has_value()) throw UsageError("solve: give exactly one of --eps or --exact");
  const SignedOperatorTuple tuple = load_tuple(a.tuple_file, ctx.tol);
  const Vector u = io::parse_vector(io::read_file(a.u_file));
  if (u.size() != tuple.dim()) throw io::IoError("vector dimension does not match the tuple");
  try {
    const SolveReport r = a.exact ? solve_exact(tuple, u) : solve_eps(tuple, u, *a.eps);
    Json j = header("solve", ctx.tol);
    j["mode"] = a.exact ? "exact" : "eps";
    const Json body = solve_json(r);
    for (const auto& [k, val] : body.items()) j[k] = val;
    emit_json(ctx, a.out, j);
    return (!a.exact || r.equality_ok) ? kOk : kMathFailure;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) throw UsageError(e.what());
    Json j = error_json("solve", ctx.tol, e);
    if (e.kind() == ErrorKind::NotInRange) j["witness"] = witness_json(tuple.defect_sqrt(), u, ctx.tol);
    emit_json(ctx, a.out, j);
    ctx.err << "krange solve: " << e.what() << "\n";
    return kMathFailure;
  }
}

struct SweepArgs {
  std::string tuple_file, u_file, grid, csv;
};

int cmd_sweep(Context& ctx, const SweepArgs& a) {
  const std::vector<double> schedule = parse_grid(a.grid);
  const SignedOperatorTuple tuple = load_tuple(a.tuple_file, ctx.tol);
  const Vector u = io::parse_vector(io::read_file(a.u_file));
  if (u.size() != tuple.dim()) throw io::IoError("vector dimension does not match the tuple");
  SweepReport s;
  try {
    s = convergence_sweep(tuple, u, schedule);
  } catch (const Error& e) {
    ctx.err << "krange sweep: " << e.what() << "\n";
    if (e.kind() == ErrorKind::NotInRange) ctx.err << witness_json(tuple.defect_sqrt(), u, ctx.tol).dump() << "\n";
    return kMathFailure;
  }
  std::string csv = "eps,residual,krein_norm_sq,target_norm_sq,monotone_ok\n";
  const double slack = ctx.tol.monotone_slack;
  for (std::size_t k = 0; k < s.reports.size(); ++k) {
    const auto& r = s.reports[k];
    bool mono = true;
    if (k > 0) {
      const auto& p = s.reports[k - 1];
      mono = r.krein_norm_sq >= p.krein_norm_sq - slack && r.residual <= p.residual + slack;
    }
    csv += io::format_number(r.eps) + "," + io::format_number(r.residual) + "," + io::format_number(r.krein_norm_sq) +
           "," + io::format_number(r.target_norm_sq) + "," + (mono ? "true" : "false") + "\n";
  }
  emit(ctx, a.csv, csv);
  if (!s.ok()) {
    ctx.err << "krange sweep: " << (s.monotone_ok ? "" : "monotonicity violated; ")
            << (s.final_equality_ok ? "" : "final norm does not reach |u|^2_M(T)") << "\n";
    return kMathFailure;
  }
  return kOk;
}

struct GenerateArgs {
  std::string kind, out;
  long long n = 2;
  std::uint64_t seed = 0;
  int positives = 2, negatives = 1;
  long long dim = 4;
  double margin = 0.5;
  std::string phi1 = "0,0.70710678118654757", phi2 = "0,0,0.70710678118654757";
  std::string psi1 = "0.70710678118654757", psi2 = "0.70710678118654757";
};

int cmd_generate(Context& ctx, const GenerateArgs& a) {
  Json meta;
  meta["generator"] = a.kind;
  meta["version"] = kVersion;
  std::optional<SignedOperatorTuple> tuple;
  try {
    if (a.kind == "bidisk") {
      if (a.n < 1) throw UsageError("bidisk: --n must be >= 1");
      meta["n"] = a.n;
      tuple.emplace(bidisk_triplet(a.n));
    } else if (a.kind == "random") {
      if (a.dim < 1 || a.positives < 1 || a.negatives < 0 || !(a.margin > 0 && a.margin < 1))
        throw UsageError("random: need --dim >= 1, --positives >= 1, --negatives >= 0, 0 < --margin < 1");
      meta["positives"] = a.positives;
      meta["negatives"] = a.negatives;
      meta["dim"] = a.dim;
      meta["margin"] = a.margin;
      meta["seed"] = a.seed;
      tuple.emplace(random_tuple(a.positives, a.negatives, a.dim, a.seed, a.margin));
    } else if (a.kind == "corona") {
      if (a.n < 1) throw UsageError("corona: --n must be >= 1");
      const auto phi1 = parse_coefficients(a.phi1), phi2 = parse_coefficients(a.phi2);
      const auto psi1 = parse_coefficients(a.psi1), psi2 = parse_coefficients(a.psi2);
      meta["n"] = a.n;
      meta["phi1"] = coefficients_json(phi1);
      meta["phi2"] = coefficients_json(phi2);
      meta["psi1"] = coefficients_json(psi1);
      meta["psi2"] = coefficients_json(psi2);
      for (const auto& w : {symbol_sup_sq(phi1, phi2), symbol_sup_sq(psi1, psi2)})
        if (w > 1.0 + 1e-9) ctx.err << "krange generate: warning: symbol sup on the circle is " << w << " > 1\n";
      CoronaTriplet c = corona_triplet(phi1, phi2, psi1, psi2, a.n);
      tuple.emplace(std::move(c.tuple));
    } else {
      throw UsageError("generate: kind must be bidisk, corona or random");
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) throw UsageError(e.what());
    ctx.err << "krange generate: " << e.what() << "\n";
    return kMathFailure;
  }
  emit(ctx, a.out, io::serialize_tuple(*tuple, meta));
  return kOk;
}

struct VerifyArgs {
  std::string tuple_file, out;
  double eps = 0.0;
  int samples = 20;
  std::uint64_t seed = 0;
};

int cmd_verify(Context& ctx, const VerifyArgs& a) {
  if (!(a.eps > 0.0)) throw UsageError("verify: --eps must be > 0");
  if (a.samples < 1) throw UsageError("verify: --samples must be >= 1");
  const SignedOperatorTuple tuple = load_tuple(a.tuple_file, ctx.tol);
  Json j = header("verify", ctx.tol);
  j["eps"] = a.eps;
  j["samples"] = a.samples;
  j["seed"] = a.seed;
  try {
    const LemmaReport lemma = check_lemma_bound(tuple, a.eps);
    j["vacuous"] = lemma.vacuous;
    if (lemma.vacuous) {
      j["passed"] = true;
      emit_json(ctx, a.out, j);
      return kOk;
    }
    j["subspace_dim"] = lemma.subspace_dim;
    j["delta_star"] = lemma.delta_star;
    j["lemma_bound"] = lemma.bound;
    j["lemma_ok"] = lemma.passed;
    j["restricted_operator_norm"] = restricted_operator_norm(tuple, a.eps);
    const NormEqualityReport ne = verify_norm_equality(tuple, a.eps, a.samples, a.seed);
    j["norm_equality"] = {{"max_deviation", ne.max_deviation},
                          {"max_krein_excess", ne.max_krein_excess},
                          {"max_restricted_excess", ne.max_restricted_excess},
                          {"embedding_ok", ne.embedding_ok},
                          {"reverse_ok", ne.reverse_ok},
                          {"ok", ne.passed}};
    const bool passed = lemma.passed && ne.passed;
    j["passed"] = passed;
    emit_json(ctx, a.out, j);
    return passed ? kOk : kMathFailure;
  } catch (const Error& e) {
    emit_json(ctx, a.out, error_json("verify", ctx.tol, e));
    ctx.err << "krange verify: " << e.what() << "\n";
    return kMathFailure;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const char* env_tol) {
  CLI::App app{"Indefinite range inclusion toolkit: signed operator tuples, pull-back norms, minimal Krein-norm solutions", "krange"};
  app.require_subcommand(1);
  app.fallthrough();
  std::vector<std::string> tol_flags;
  app.add_option("--tol", tol_flags, "Tolerance override name=value[,name=value]; wins over KRANGE_TOL");

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Validate a tuple and run the identity checks");
  c->add_option("tuple", check.tuple_file, "Tuple JSON file")->required();
  c->add_option("--samples", check.samples, "Random vectors per identity check");
  c->add_option("--seed", check.seed, "Seed for the random vectors");
  c->add_option("--out", check.out, "Write the report here instead of stdout");

  SolveArgs solve;
  double solve_eps_value = 0.0;
  auto* s = app.add_subcommand("solve", "Minimal Krein-norm solution of bT z = u");
  s->add_option("tuple", solve.tuple_file, "Tuple JSON file")->required();
  s->add_option("u", solve.u_file, "Target vector JSON file")->required();
  auto* eps_opt = s->add_option("--eps", solve_eps_value, "Spectral truncation level");
  s->add_flag("--exact", solve.exact, "Exact solve (eps below the smallest positive eigenvalue of T)");
  s->add_option("--out", solve.out, "Write the report here instead of stdout");

  SweepArgs sweep;
  auto* w = app.add_subcommand("sweep", "Convergence sweep over a decreasing eps grid");
  w->add_option("tuple", sweep.tuple_file, "Tuple JSON file")->required();
  w->add_option("u", sweep.u_file, "Target vector JSON file")->required();
  w->add_option("--eps-grid", sweep.grid, "geometric:start,ratio,count")->required();
  w->add_option("--csv", sweep.csv, "Write CSV here instead of stdout");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a generated tuple file");
  g->add_option("kind", gen.kind, "bidisk | corona | random")->required();
  g->add_option("--n", gen.n, "Truncation size (bidisk, corona)");
  g->add_option("--seed", gen.seed, "Seed (random)");
  g->add_option("--positives", gen.positives, "Number of +1 operators (random)");
  g->add_option("--negatives", gen.negatives, "Number of -1 operators (random)");
  g->add_option("--dim", gen.dim, "Dimension (random)");
  g->add_option("--margin", gen.margin, "Norm margin in (0, 1) (random)");
  g->add_option("--phi1", gen.phi1, "Coefficients re[:im],... (corona)");
  g->add_option("--phi2", gen.phi2, "Coefficients (corona)");
  g->add_option("--psi1", gen.psi1, "Coefficients (corona)");
  g->add_option("--psi2", gen.psi2, "Coefficients (corona)");
  g->add_option("--out", gen.out, "Write the tuple file here instead of stdout");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Uniform positivity bound and pull-back norm equality at level eps");
  v->add_option("tuple", verify.tuple_file, "Tuple JSON file")->required();
  v->add_option("--eps", verify.eps, "Level eps > 0")->required();
  v->add_option("--samples", verify.samples, "Random targets");
  v->add_option("--seed", verify.seed, "Seed for the targets");
  v->add_option("--out", verify.out, "Write the report here instead of stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kIoFailure;
  }

  Context ctx{out, err, {}};
  try {
    if (env_tol != nullptr) ctx.tol.apply_overrides(env_tol);
    for (const auto& t : tol_flags) ctx.tol.apply_overrides(t);
  } catch (const Error& e) {
    err << "krange: " << e.what() << "\n";
    return kIoFailure;
  }

  try {
    if (*c) return cmd_check(ctx, check);
    if (*s) {
      if (eps_opt->count() > 0) solve.eps = solve_eps_value;
      return cmd_solve(ctx, solve);
    }
    if (*w) return cmd_sweep(ctx, sweep);
    if (*g) return cmd_generate(ctx, gen);
    if (*v) return cmd_verify(ctx, verify);
  } catch (const UsageError& e) {
    err << "krange: " << e.what() << "\n";
    return kIoFailure;
  } catch (const io::IoError& e) {
    err << "krange: " << e.what() << "\n";
    return kIoFailure;
  } catch (const Error& e) {
    err << "krange: " << e.what() << "\n";
    return kMathFailure;
  }
  return kIoFailure;
}

}  // namespace krange::cli
