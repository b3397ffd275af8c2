#include "cli.hpp"

#include <algorithm>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "salmon/acceptance.hpp"
#include "salmon/driver.hpp"
#include "salmon/errors.hpp"
#include "salmon/lm6.hpp"
#include "salmon/lm_derive.hpp"
#include "salmon/salmon444.hpp"
#include "salmon/sampling.hpp"
#include "salmon/strassen.hpp"
#include "salmon/sym9.hpp"
#include "salmon/tensor_io.hpp"

namespace salmon {

namespace {

// Raised for argument combinations CLI11 cannot express; exit code 2.
struct UsageError : Error {
  using Error::Error;
};

struct Io {
  std::ostream& out;
  std::ostream& err;
};

Field resolve_field(const std::string& mode, std::uint64_t prime) {
  if (mode == "exact") return Field::rational();
  if (mode == "modp") return Field::prime(prime);
  if (mode == "float") return Field::float64();
  throw UsageError("unknown mode " + mode);
}

LMFamily load_family(const std::string& lm_file) {
  return load_lm_file(lm_file.empty() ? default_lm_path() : std::filesystem::path(lm_file));
}

// Writes `text` to `path`, or to stdout when no path was given.
void emit(const Io& io, const std::string& path, const std::string& text) {
  if (path.empty())
    io.out << text;
  else
    write_text_file(path, text);
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// ---- gen ----------------------------------------------------------------

struct GenArgs {
  std::optional<int> rank;
  bool dense = false;
  std::string special;
  bool essentially_234 = false;
  bool matmul = false;
  std::vector<int> dims;
  std::uint64_t seed = 0;
  int bound = kDefaultCoeffBound;
  std::string mode = "exact";
  std::uint64_t prime = modp::kMersenne31;
  std::string out;
};

int run_gen(const GenArgs& a, const Io& io) {
  const int kinds = a.rank.has_value() + a.dense + !a.special.empty() + a.essentially_234 + a.matmul;
  if (kinds != 1) throw UsageError("gen needs exactly one of --rank, --dense, --special, --essentially-234, --matmul");
  const Field field = resolve_field(a.mode, a.prime);
  const Field Q = Field::rational();
  const bool fixed_shape = !a.special.empty() || a.essentially_234 || a.matmul;
  Tensor3::Dims dims{3, 3, 4};
  if (a.matmul) dims = {4, 4, 4};
  if (!a.dims.empty()) {
    if (a.dims.size() != 3) throw UsageError("--dims takes three sizes, e.g. 3,3,4");
    const Tensor3::Dims given{a.dims[0], a.dims[1], a.dims[2]};
    if (fixed_shape && given != dims) throw UsageError("this sampler has a fixed shape");
    dims = given;
  }
  Tensor3 t({1, 1, 1}, Q);
  if (a.rank) {
    if (*a.rank < 0) throw UsageError("--rank must be nonnegative");
    t = sample_rank_r(dims, *a.rank, Q, a.seed, a.bound);
  } else if (a.dense) {
    t = sample_dense(dims, Q, a.seed, a.bound);
  } else if (!a.special.empty()) {
    t = sample_special_form(a.special == "x33-zero", a.special == "f-zero", Q, a.seed, a.bound);
  } else if (a.essentially_234) {
    t = sample_essentially_234(Q, a.seed, a.bound);
  } else {
    t = matmul_tensor();
  }
  emit(io, a.out, tensor_to_json(t.convert(field)));
  return 0;
}

// ---- check --------------------------------------------------------------

struct CheckArgs {
  std::string input;
  std::string variety;
  std::string route;
  std::string mode = "exact";
  std::string lm_file;
  std::uint64_t prime = modp::kMersenne31;
  std::optional<std::uint64_t> confirm_prime;
  int trials = 32;
  std::uint64_t seed = 0;
  std::string out;
  bool timing = false;
};

// Route A, route B or both on a 3x3x4 tensor in an exact field.
std::pair<Verdict, nlohmann::json> check_334(const Tensor3& t, const std::string& route, const CheckArgs& a) {
  if (route == "a") {
    const MembershipReport r = membership_route_a(t);
    return {r.verdict, r.to_json(a.timing)};
  }
  const LMFamily fam = load_family(a.lm_file);
  const MembershipReport b = membership_route_b(t, fam);
  if (route == "b") return {b.verdict, b.to_json(a.timing)};
  const MembershipReport ra = membership_route_a(t);
  nlohmann::json j{{"verdict", to_string(b.verdict)},
                   {"routes", {ra.to_json(a.timing), b.to_json(a.timing)}},
                   {"agree", ra.verdict == b.verdict}};
  if (ra.verdict != b.verdict) throw Error("routes A and B disagree: " + j.dump());
  return {b.verdict, j};
}

std::pair<Verdict, nlohmann::json> check_444(const Tensor3& t, const Field& field, std::uint64_t seed,
                                             const CheckArgs& a) {
  LiftConfig cfg;
  cfg.trials = a.trials;
  cfg.field = field;
  cfg.seed = seed;
  const MembershipReport r = membership444(t, load_family(a.lm_file), cfg);
  return {r.verdict, r.to_json(a.timing)};
}

int run_check(const CheckArgs& a, const Io& io) {
  Tensor3 t = read_tensor_file(a.input);
  std::string variety = a.variety;
  if (variety.empty()) variety = t.dims() == Tensor3::Dims{3, 3, 4} ? "334" : "444";
  std::string route = a.route.empty() ? (variety == "334" ? "b" : "full") : a.route;
  if (variety == "444" && route != "full") throw UsageError("--variety 444 only supports --route full");
  if (a.mode == "float" && (variety != "334" || route != "b"))
    throw UsageError("float mode is available for --variety 334 --route b only");
  if (a.trials < 1) throw UsageError("--trials must be positive");

  if (variety == "444") {
    const auto [m, n, l] = t.dims();
    if (m > 4 || n > 4 || l > 4) throw DomainError("tensor does not fit in 4x4x4");
    t = t.embed({4, 4, 4});
  } else if (t.dims() != Tensor3::Dims{3, 3, 4}) {
    throw DomainError("--variety 334 needs a 3x3x4 tensor");
  }

  nlohmann::json report{{"input", a.input}, {"variety", variety}, {"route", route}, {"mode", a.mode}};
  Verdict verdict;
  if (a.mode == "float") {
    const Tensor3 tf = t.convert(Field::float64());
    const LMFamily fam = load_family(a.lm_file);
    const FloatCheckResult r = float_check(tf, &fam);
    verdict = r.verdict;
    report["result"] = r.to_json();
  } else {
    // In modp mode the tensor is reduced; a rational tensor can be reduced into any prime.
    const Field field = resolve_field(a.mode, a.prime);
    const Tensor3 tx = a.mode == "exact" && t.field().is_exact() ? t : t.convert(field);
    if (!tx.field().is_exact()) throw ModeMismatch("exact mode needs a rational or GF(p) tensor");
    const Field eval_field = variety == "444" && a.mode == "exact" ? tx.field() : field;
    auto run = [&](const Tensor3& x, const Field& f, std::uint64_t seed) {
      return variety == "334" ? check_334(x, route, a) : check_444(x, f, seed, a);
    };
    auto [v, j] = run(tx, eval_field, a.seed);
    verdict = v;
    report["result"] = j;
    // A MEMBER verdict over one prime can be a false zero; repeat it over a second prime.
    if (a.mode == "modp" && t.field().is_exact() && !t.field().is_prime_field()) {
      const std::uint64_t p2 = a.confirm_prime.value_or(a.prime == modp::kMersenne61 ? modp::kMersenne31
                                                                                       : modp::kMersenne61);
      if (p2 != 0) {
        const Field f2 = Field::prime(p2);
        auto [v2, j2] = run(t.convert(f2), f2, derive_seed(a.seed, {2}));
        report["confirmation"] = j2;
        report["alarm"] = v2 != v;
        // A nonzero value modulo any prime is nonzero over Q, so NON_MEMBER wins.
        if (v2 == Verdict::NonMember) verdict = Verdict::NonMember;
      }
    }
  }
  report["verdict"] = to_string(verdict);
  emit(io, a.out, dump(report));
  if (!a.out.empty()) io.out << to_string(verdict) << "\n";
  return exit_code(verdict);
}

// ---- derive -------------------------------------------------------------

int run_derive_lm6(std::uint64_t seed, const std::string& out, bool log, const Io& io) {
  const auto polys = derive_lm_family(seed, log ? &io.err : nullptr);
  const std::vector<std::string> header{
      "Degree-6 equations of the 3x3x4 border-rank-4 variety: weight basis p_kl,",
      "one line per (k,l) in order (1,1),(1,2),(1,3),(1,4),(2,2),(2,3),(2,4),(3,3),(3,4),(4,4).",
      "Regenerate with: salmon derive lm6-family --seed " + std::to_string(seed) + " --out data/lm6.txt"};
  emit(io, out, format_poly_file(polys, header));
  return 0;
}

struct StrassenArgs {
  int l = 3;
  std::string mode = "modp";
  std::uint64_t prime = modp::kMersenne31;
  std::size_t term_cap = kDefaultTermCap;
  std::string out;
  std::string report;
};

int run_derive_strassen(const StrassenArgs& a, const Io& io) {
  const Field field = resolve_field(a.mode, a.prime);
  if (!field.is_exact()) throw UsageError("strassen generation runs in exact or modp mode");
  const StrassenFamily fam = strassen_generate(a.l, field, a.term_cap);
  const std::vector<std::string> header{
      "Degree-5 coefficient polynomials of U1 adj(U2) U3 - U3 adj(U2) U1, direction l = " + std::to_string(a.l) +
          ", " + field.name(),
      std::to_string(fam.spanning.size()) + " distinct of " + std::to_string(fam.coefficients.size()) +
          " coefficients; " + std::to_string(fam.terms_processed) + " intermediate terms"};
  emit(io, a.out, format_poly_file(fam.spanning, header));
  if (!a.report.empty())
    write_text_file(a.report, dump({{"l", a.l},
                                    {"mode", field.name()},
                                    {"coefficients", fam.coefficients.size()},
                                    {"distinct", fam.spanning.size()},
                                    {"terms_processed", fam.terms_processed}}));
  return 0;
}

struct DimensionArgs {
  std::vector<int> ls{3};
  std::uint64_t prime = modp::kMersenne31;
  std::size_t samples = kDefaultDimensionSamples;
  std::uint64_t seed = 0;
  std::string out;
};

int run_derive_dimension(const DimensionArgs& a, const Io& io) {
  emit(io, a.out, dump(strassen_dimension(a.ls, a.prime, a.samples, a.seed).to_json()));
  return 0;
}

struct LiftArgs {
  std::string family = "lm6";
  int l = 1;
  std::uint64_t prime = modp::kMersenne31;
  std::size_t budget = kDefaultLiftBudget;
  std::uint64_t seed = 0;
  std::vector<std::size_t> conditions;
  std::string lm_file;
  std::string out;
  std::string report;
};

int run_derive_lift(const LiftArgs& a, const Io& io) {
  const LiftFamily fam = a.family == "lm6" ? LiftFamily::LM6 : LiftFamily::SYM9;
  std::optional<LMFamily> lm;
  if (fam == LiftFamily::LM6) lm = load_family(a.lm_file);
  const LiftGeneration g = lift_generate_modp(fam, a.l, a.prime, a.budget, a.seed, lm ? &*lm : nullptr, a.conditions);
  // Each polynomial line is preceded by a comment naming its condition and (p,q)-monomial.
  std::ostringstream os;
  for (const auto& h : g.header()) os << "# " << h << "\n";
  const Field f = Field::prime(a.prime);
  for (const auto& c : g.coefficients) {
    const MultiPoly mono = MultiPoly::from_terms(lift_registry(), f, {{c.pq, f.one()}});
    std::string m = mono.to_text();
    if (m.rfind("1*", 0) == 0) m.erase(0, 2);
    os << "# condition " << c.condition << ", coefficient of " << m << "\n" << c.coeff.to_text() << "\n";
  }
  emit(io, a.out, os.str());
  if (!a.report.empty()) write_text_file(a.report, dump(g.to_json()));
  return 0;
}

int run_restricted(const std::string& lm_file, const std::string& out, const Io& io) {
  const RestrictedReport r = restricted_identity_check(load_family(lm_file));
  emit(io, out, dump(r.to_json()));
  if (!out.empty()) io.out << (r.pass ? "PASS" : "FAIL") << "\n";
  return r.pass ? 0 : 1;
}

// ---- verify -------------------------------------------------------------

struct CrossArgs {
  ExperimentSpec spec;
  std::string mode = "exact";
  std::uint64_t prime = modp::kMersenne31;
  std::string lm_file;
  std::string out;
  bool timing = false;
};

int run_cross(CrossArgs a, const Io& io) {
  a.spec.field = resolve_field(a.mode, a.prime);
  if (!a.spec.field.is_exact()) throw UsageError("cross validation runs in exact or modp mode");
  const CrossValidation cv = cross_validate_334(a.spec, load_family(a.lm_file));
  nlohmann::json j = cv.to_json(a.timing);
  j["plan"] = a.spec.to_json();
  emit(io, a.out, dump(j));
  std::size_t mismatches = 0;
  for (const auto& [name, cls] : cv.classes.items()) mismatches += cls["oracle_mismatches"].get<std::size_t>();
  return cv.disagreements.empty() && mismatches == 0 ? 0 : 1;
}

int run_acceptance_cmd(AcceptanceOptions opts, const std::string& lm_file, const std::string& json_out,
                       const Io& io) {
  if (!lm_file.empty()) opts.lm_file = lm_file;
  const AcceptanceReport r = run_acceptance(opts, [&](const CriterionResult& c) { io.out << c.line() << std::endl; });
  if (!json_out.empty()) write_text_file(json_out, dump(r.to_json()));
  return r.ok() ? 0 : 1;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const Io io{out, err};
  CLI::App app{"Border rank 4 membership tests for 3x3x4 and 4x4x4 tensors", "salmon"};
  app.require_subcommand(1);
  const std::vector<std::string> modes{"exact", "modp", "float"};

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Sample a tensor and write it as JSON");
  g->add_option("--rank", gen.rank, "sum of this many random rank-one tensors");
  g->add_flag("--dense", gen.dense, "independent random entries");
  g->add_option("--special", gen.special, "special 3x3x4 zero pattern")
      ->check(CLI::IsMember({"x33-zero", "f-zero", "generic"}));
  g->add_flag("--essentially-234", gen.essentially_234, "3x3x4 tensor supported on a 2x3x4 block");
  g->add_flag("--matmul", gen.matmul, "the 2x2 matrix multiplication tensor (4x4x4)");
  g->add_option("--dims", gen.dims, "m,n,l (default 3,3,4)")->delimiter(',');
  g->add_option("--seed", gen.seed);
  g->add_option("--bound", gen.bound, "entries or factor entries in [-bound, bound]")->check(CLI::PositiveNumber);
  g->add_option("--mode", gen.mode)->check(CLI::IsMember(modes));
  g->add_option("--prime", gen.prime, "modulus for --mode modp");
  g->add_option("--out", gen.out, "output file (default stdout)");

  CheckArgs chk;
  auto* c = app.add_subcommand("check", "Decide border rank <= 4 for a tensor file");
  c->add_option("tensor", chk.input, "tensor JSON file")->required();
  c->add_option("--variety", chk.variety, "334 or 444 (default from the tensor shape)")
      ->check(CLI::IsMember({"334", "444"}));
  c->add_option("--route", chk.route, "a (degree 9+16), b (degree 9+6), full (both; the only 444 route)")
      ->check(CLI::IsMember({"a", "b", "full"}));
  c->add_option("--mode", chk.mode)->check(CLI::IsMember(modes));
  c->add_option("--lm-file", chk.lm_file, "LM data file (default $SALMON_LM_FILE or the shipped file)");
  c->add_option("--prime", chk.prime, "modulus for --mode modp");
  c->add_option("--confirm-prime", chk.confirm_prime, "second modulus for rational input in modp mode (0: off)");
  c->add_option("--trials", chk.trials, "random trials per 4x4x4 stage");
  c->add_option("--seed", chk.seed);
  c->add_option("--out", chk.out, "report file (default stdout)");
  c->add_flag("--timing", chk.timing, "include stage timings in the report");

  auto* d = app.add_subcommand("derive", "Generate polynomial families and audits");
  d->require_subcommand(1);
  std::uint64_t lm_seed = 1;
  std::string lm_out;
  bool lm_log = false;
  auto* d_lm = d->add_subcommand("lm6-family", "Rebuild the ten degree-6 equations");
  d_lm->add_option("--seed", lm_seed);
  d_lm->add_option("--out", lm_out);
  d_lm->add_flag("--log", lm_log, "progress on stderr");

  StrassenArgs st;
  auto* d_st = d->add_subcommand("strassen", "Symbolic degree-5 coefficient polynomials for one direction");
  d_st->add_option("--l", st.l)->check(CLI::Range(1, 3));
  d_st->add_option("--mode", st.mode)->check(CLI::IsMember({"exact", "modp"}));
  d_st->add_option("--prime", st.prime);
  d_st->add_option("--term-cap", st.term_cap);
  d_st->add_option("--out", st.out);
  d_st->add_option("--report", st.report, "summary JSON");

  DimensionArgs dim;
  auto* d_dim = d->add_subcommand("strassen-dimension", "Dimension of the span of the degree-5 coefficients");
  d_dim->add_option("--l", dim.ls, "directions, e.g. 3 or 1,2,3")->delimiter(',')->check(CLI::Range(1, 3));
  d_dim->add_option("--prime", dim.prime);
  d_dim->add_option("--samples", dim.samples);
  d_dim->add_option("--seed", dim.seed);
  d_dim->add_option("--out", dim.out);

  LiftArgs lift;
  auto* d_lift = d->add_subcommand("lift", "Budgeted (p,q)-coefficients of a lifted family mod p");
  d_lift->add_option("--family", lift.family)->check(CLI::IsMember({"lm6", "sym9"}));
  d_lift->add_option("--l", lift.l)->check(CLI::Range(1, 3));
  d_lift->add_option("--prime", lift.prime);
  d_lift->add_option("--budget", lift.budget);
  d_lift->add_option("--seed", lift.seed);
  d_lift->add_option("--conditions", lift.conditions, "LM6 1..10, SYM9 0..439")->delimiter(',');
  d_lift->add_option("--lm-file", lift.lm_file);
  d_lift->add_option("--out", lift.out);
  d_lift->add_option("--report", lift.report, "coverage JSON");

  std::string rc_lm, rc_out;
  auto* d_rc = d->add_subcommand("restricted-check", "Audit the LM file on the special stratum");
  d_rc->add_option("--lm-file", rc_lm);
  d_rc->add_option("--out", rc_out);

  auto* v = app.add_subcommand("verify", "Cross-validation and acceptance suites");
  v->require_subcommand(1);
  CrossArgs cross;
  auto* v_cv = v->add_subcommand("cross-validate", "Route A against route B on a 3x3x4 sample plan");
  v_cv->add_option("--rank4", cross.spec.rank4);
  v_cv->add_option("--generic", cross.spec.generic);
  v_cv->add_option("--special", cross.spec.special, "per special-form variant");
  v_cv->add_option("--essentially-234", cross.spec.essentially_234);
  v_cv->add_option("--seed", cross.spec.seed);
  v_cv->add_option("--mode", cross.mode)->check(CLI::IsMember({"exact", "modp"}));
  v_cv->add_option("--prime", cross.prime);
  v_cv->add_option("--lm-file", cross.lm_file);
  v_cv->add_option("--out", cross.out);
  v_cv->add_flag("--timing", cross.timing);

  AcceptanceOptions acc;
  std::string acc_lm, acc_json;
  auto* v_acc = v->add_subcommand("acceptance", "Acceptance criteria 1-9, one line each");
  v_acc->add_option("--criteria", acc.criteria)->delimiter(',')->check(CLI::Range(1, 9));
  v_acc->add_option("--lm-file", acc_lm);
  v_acc->add_option("--seed", acc.seed);
  v_acc->add_option("--dimension-samples", acc.dimension_samples);
  v_acc->add_option("--json", acc_json, "full report file");

  std::vector<char*> argv;
  std::vector<std::string> owned(args.empty() ? std::vector<std::string>{"salmon"} : args);
  for (auto& s : owned) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    const CLI::App* deepest = &app;
    while (!deepest->get_subcommands().empty()) deepest = deepest->get_subcommands().back();
    out << deepest->help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "salmon: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*g) return run_gen(gen, io);
    if (*c) return run_check(chk, io);
    if (*d_lm) return run_derive_lm6(lm_seed, lm_out, lm_log, io);
    if (*d_st) return run_derive_strassen(st, io);
    if (*d_dim) return run_derive_dimension(dim, io);
    if (*d_lift) return run_derive_lift(lift, io);
    if (*d_rc) return run_restricted(rc_lm, rc_out, io);
    if (*v_cv) return run_cross(cross, io);
    if (*v_acc) return run_acceptance_cmd(acc, acc_lm, acc_json, io);
  } catch (const UsageError& e) {
    err << "salmon: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "salmon: error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace salmon
