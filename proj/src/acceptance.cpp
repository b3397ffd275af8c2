#include "salmon/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>

#include "salmon/driver.hpp"
#include "salmon/errors.hpp"
#include "salmon/lm6.hpp"
#include "salmon/lm_derive.hpp"
#include "salmon/random.hpp"
#include "salmon/salmon444.hpp"
#include "salmon/sampling.hpp"
#include "salmon/sym9.hpp"

namespace salmon {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "PASS";
    case Outcome::Fail: return "FAIL";
    case Outcome::Skip: return "SKIP";
  }
  return "?";
}

std::string CriterionResult::line() const {
  char timing[64];
  std::snprintf(timing, sizeof timing, "(%.2f s / %g s)", seconds, limit_seconds);
  std::string s = to_string(outcome) + "  " + std::to_string(id) + "  " + title + "  " + timing;
  if (!detail.empty()) s += "  " + detail;
  return s;
}

bool AcceptanceReport::ok() const {
  for (const auto& r : results)
    if (r.outcome == Outcome::Fail) return false;
  return true;
}

nlohmann::json AcceptanceReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results)
    arr.push_back({{"criterion", r.id},
                   {"title", r.title},
                   {"outcome", to_string(r.outcome)},
                   {"seconds", r.seconds},
                   {"limit_seconds", r.limit_seconds},
                   {"detail", r.detail},
                   {"data", r.data}});
  return {{"ok", ok()}, {"criteria", arr}};
}

namespace {

const Field Q = Field::rational();
const Field P31 = Field::prime(modp::kMersenne31);
const Field P61 = Field::prime(modp::kMersenne61);

struct Context {
  const AcceptanceOptions& opts;
  /// The family used by route B everywhere.
  std::optional<LMFamily> fam;
  /// The data file as loaded, when it could be.
  bool file_loaded = false;
  std::string file_problem;
  std::filesystem::path lm_path;
};

// Collects failures for one criterion.
struct Checker {
  std::vector<std::string> problems;
  void expect(bool ok, const std::string& what) {
    if (!ok && problems.size() < 5) problems.push_back(what);
    if (!ok) ++failures;
  }
  std::size_t failures = 0;
};

bool decided_with_witness(const MembershipReport& r) {
  if (r.verdict != Verdict::NonMember) return false;
  for (const auto& st : r.stages)
    if (st.name == r.decided_by) return st.witness.has_value();
  return false;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& p : v) s += (s.empty() ? "" : "; ") + p;
  return s;
}

void criterion1(Context& cx, CriterionResult& res, Checker& c) {
  const SymSystem s = build_sym_matrices(sample_dense({3, 3, 4}, Q, cx.opts.seed));
  c.expect(s.cl.rows() == 12 && s.cl.cols() == 9, "C_L is not 12x9");
  c.expect(s.cr.rows() == 12 && s.cr.cols() == 9, "C_R is not 12x9");
  const auto minors = sym9_minors(s);
  const std::size_t left = minor_values(s.cl, 9).size(), right = minor_values(s.cr, 9).size();
  c.expect(minors.size() == 440 && left == 220 && right == 220, "expected 220 minors per matrix");
  c.expect(cx.fam->polys.size() == 10, "LM family size " + std::to_string(cx.fam->polys.size()));
  for (const auto& p : cx.fam->polys) c.expect(p.is_homogeneous() && p.degree() == 6, "LM polynomial not of degree 6");
  const RestrictedReport rr = restricted_identity_check(*cx.fam);
  std::set<std::size_t> term_counts;
  for (const auto& e : rr.entries) term_counts.insert(e.restricted_terms);
  c.expect(rr.entries.size() == 10 && term_counts == std::set<std::size_t>{24}, "restricted term counts differ from 24");
  res.data = {{"CL", {s.cl.rows(), s.cl.cols()}},
              {"CR", {s.cr.rows(), s.cr.cols()}},
              {"minors", minors.size()},
              {"lm_polynomials", cx.fam->polys.size()},
              {"restricted_terms", term_counts}};
  res.detail = "C_L, C_R 12x9; 2x220 minors; 10 LM polynomials of degree 6; 24 restricted terms each";
}

void criterion2(Context& cx, CriterionResult& res, Checker& c) {
  if (!cx.file_loaded) {
    res.outcome = Outcome::Skip;
    res.detail = "LM data file unavailable (" + cx.file_problem + ")";
    return;
  }
  const RestrictedReport rr = restricted_identity_check(*cx.fam);
  c.expect(rr.pass, "restricted identity check failed: " + join(rr.problems));
  std::set<std::pair<int, int>> pairs;
  for (const auto& e : rr.entries)
    if (e.pair) pairs.insert(*e.pair);
  c.expect(pairs.size() == 10, "pairs (k,l) covered: " + std::to_string(pairs.size()));
  res.data = rr.to_json();
  res.detail = "10/10 restrictions equal c * x33k * x33l * f, every pair k <= l once";
}

void criterion3(Context& cx, CriterionResult& res, Checker& c) {
  std::size_t trace_checked = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    const Tensor3 t = sample_rank_r({3, 3, 4}, 4, Q, derive_seed(cx.opts.seed, {3, i}));
    const SymSystem s = build_sym_matrices(t);
    std::size_t nonzero = 0;
    for (const auto& m : sym9_minors(s)) nonzero += !m.value.is_zero();
    const Sym9Result r9 = sym9_test(s);
    c.expect(nonzero == 0 && r9.pass, "sample " + std::to_string(i) + ": nonzero 9x9 minor");
    if (r9.rank_l == 8 && r9.rank_r == 8) {
      const LRPair lr = extract_lr(s);
      c.expect(lr.defined && trace16_check(lr.l, lr.r), "sample " + std::to_string(i) + ": trace condition fails");
      ++trace_checked;
    }
    for (const auto& v : eval_lm(*cx.fam, t)) c.expect(v.is_zero(), "sample " + std::to_string(i) + ": LM value nonzero");
  }
  res.data = {{"samples", 100}, {"trace_checked", trace_checked}, {"failures", c.failures}};
  res.detail = "100/100 samples: 440 zero minors, zero LM values; trace condition checked on " +
               std::to_string(trace_checked);
}

void criterion4(Context& cx, CriterionResult& res, Checker& c) {
  std::size_t caught_a = 0, caught_b = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    const Tensor3 t = sample_dense({3, 3, 4}, Q, derive_seed(cx.opts.seed, {4, i}));
    const bool a = decided_with_witness(membership_route_a(t));
    const bool b = decided_with_witness(membership_route_b(t, *cx.fam));
    caught_a += a;
    caught_b += b;
    c.expect(a && b, "sample " + std::to_string(i) + " not rejected with a witness");
  }
  res.data = {{"samples", 100}, {"route_a", caught_a}, {"route_b", caught_b}};
  res.detail = "route A " + std::to_string(caught_a) + "/100, route B " + std::to_string(caught_b) + "/100 with witnesses";
}

void criterion5(Context& cx, CriterionResult& res, Checker& c) {
  ExperimentSpec spec;
  spec.rank4 = 100;
  spec.generic = 100;
  spec.special = 100;
  spec.seed = derive_seed(cx.opts.seed, {5});
  const CrossValidation cv = cross_validate_334(spec, *cx.fam);
  c.expect(cv.disagreements.empty(), std::to_string(cv.disagreements.size()) + " route disagreements");
  std::size_t mismatches = 0;
  for (const char* k : {"special_x33_zero", "special_f_zero", "special_generic"})
    mismatches += cv.classes[k]["oracle_mismatches"].get<std::size_t>();
  c.expect(mismatches == 0, std::to_string(mismatches) + " oracle mismatches on the special stratum");
  res.data = cv.to_json();
  res.detail = std::to_string(cv.agreements) + "/" + std::to_string(cv.samples) +
               " route agreements, oracle mismatches " + std::to_string(mismatches);
}

void criterion6(Context& cx, CriterionResult& res, Checker& c) {
  std::size_t accepted = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    const std::uint64_t seed = derive_seed(cx.opts.seed, {6, i});
    // Second half: x(3,3,k) = 0 in the special pattern leaves a 2x2x4 block.
    const Tensor3 t = i < 50 ? sample_essentially_234(Q, seed) : sample_special_form(true, false, Q, seed);
    const bool ok = membership_route_a(t).verdict == Verdict::Member &&
                    membership_route_b(t, *cx.fam).verdict == Verdict::Member;
    accepted += ok;
    c.expect(ok, std::string(i < 50 ? "2x3x4" : "2x2x4") + " sample " + std::to_string(i) + " rejected");
  }
  res.data = {{"samples", 100}, {"accepted", accepted}};
  res.detail = std::to_string(accepted) + "/100 accepted by both routes (50 essentially 2x3x4, 50 essentially 2x2x4)";
}

void criterion7(Context& cx, CriterionResult& res, Checker& c) {
  LiftConfig c31, c61;
  c61.field = P61;
  std::size_t members = 0, confirmed = 0, rejected = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    const Tensor3 t = sample_rank_r({4, 4, 4}, 4, Q, derive_seed(cx.opts.seed, {7, 1, i}));
    c31.seed = derive_seed(cx.opts.seed, {7, 31, i});
    c61.seed = derive_seed(cx.opts.seed, {7, 61, i});
    const MembershipReport r = membership444(t, *cx.fam, c31);
    bool all_stages = r.stages.size() == 9;
    for (const auto& st : r.stages) all_stages &= st.pass && st.info["trials"] == 32;
    members += r.verdict == Verdict::Member && all_stages;
    confirmed += membership444(t, *cx.fam, c61).verdict == Verdict::Member;
  }
  c.expect(members == 100, "rank-4 members at 2^31-1: " + std::to_string(members));
  c.expect(confirmed == 100, "rank-4 members at 2^61-1: " + std::to_string(confirmed));
  for (std::size_t i = 0; i < 100; ++i) {
    const Tensor3 t = sample_dense({4, 4, 4}, Q, derive_seed(cx.opts.seed, {7, 2, i}));
    c31.seed = derive_seed(cx.opts.seed, {7, 32, i});
    rejected += decided_with_witness(membership444(t, *cx.fam, c31));
  }
  c.expect(rejected == 100, "generic rejected: " + std::to_string(rejected));

  LiftConfig exact;
  exact.field = Q;
  exact.trials = 4;
  exact.seed = cx.opts.seed;
  const Tensor3 mm = matmul_tensor();
  const MembershipReport r = membership444(mm, *cx.fam, exact);
  const bool strassen_stage = r.decided_by.rfind("strassen5.", 0) == 0;
  c.expect(r.verdict == Verdict::NonMember && strassen_stage, "matmul tensor not rejected by a degree-5 stage");
  // Recompute the witness entry of E from its u values.
  bool recomputed = false;
  nlohmann::json witness;
  for (const auto& st : r.stages) {
    if (st.name != r.decided_by || !st.witness) continue;
    witness = *st.witness;
    const int l = st.info["l"].get<int>();
    const StrassenResult sr = strassen_eval(mm, l, exact.trials, exact.seed);
    if (sr.witness) {
      const Matrix e = strassen_commutator(mm.slices(l), sr.witness->u);
      recomputed = !e(sr.witness->row, sr.witness->col).is_zero() && sr.witness->to_json() == witness;
    }
  }
  c.expect(recomputed, "matmul witness does not recompute");
  res.data = {{"rank4_members_p31", members},
              {"rank4_members_p61", confirmed},
              {"generic_rejected", rejected},
              {"matmul", r.to_json()}};
  res.detail = "rank 4: " + std::to_string(members) + "/100 (2^31-1), " + std::to_string(confirmed) +
               "/100 (2^61-1); generic rejected " + std::to_string(rejected) + "/100; matmul rejected by " +
               r.decided_by + " over Q";
}

void criterion8(Context& cx, CriterionResult& res, Checker& c) {
  Rng rng(derive_seed(cx.opts.seed, {8}));
  // GL invariance, both routes.
  std::size_t gl_pairs = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    const std::uint64_t seed = derive_seed(cx.opts.seed, {8, 1, i});
    const Tensor3 t = i % 3 == 0   ? sample_rank_r({3, 3, 4}, 4, Q, seed)
                      : i % 3 == 1 ? sample_dense({3, 3, 4}, Q, seed)
                                   : sample_special_form(false, i % 2 == 0, Q, seed);
    const Tensor3 moved = t.change_basis(random_invertible(3, Q, 3, rng), random_invertible(3, Q, 3, rng),
                                         random_invertible(4, Q, 3, rng));
    const bool same = membership_route_a(t).verdict == membership_route_a(moved).verdict &&
                      membership_route_b(t, *cx.fam).verdict == membership_route_b(moved, *cx.fam).verdict;
    gl_pairs += same;
    c.expect(same, "GL pair " + std::to_string(i) + " changes verdict");
  }

  // Trace condition under independent scalings of L and R.
  std::vector<std::pair<Matrix, Matrix>> pairs;
  for (std::size_t i = 0; i < 10; ++i) {
    const SymSystem s = build_sym_matrices(sample_rank_r({3, 3, 4}, 4, Q, derive_seed(cx.opts.seed, {8, 2, i})));
    const LRPair lr = extract_lr(s);
    if (lr.defined) pairs.emplace_back(lr.l, lr.r);
    pairs.emplace_back(random_matrix(3, 3, Q, 5, rng), random_matrix(3, 3, Q, 5, rng));
  }
  std::size_t scalings = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    const auto& [l, r] = pairs[i % pairs.size()];
    const Scalar a = Q.from_int(rng.uniform_int(1, 99) * (rng.uniform_int(0, 1) ? 1 : -1)) / Q.from_int(rng.uniform_int(1, 99));
    const Scalar b = Q.from_int(rng.uniform_int(1, 99) * (rng.uniform_int(0, 1) ? 1 : -1)) / Q.from_int(rng.uniform_int(1, 99));
    const bool same = trace16_check(l, r) == trace16_check(l * a, r * b);
    scalings += same;
    c.expect(same, "trace condition not scale invariant");
  }

  // f_det changes sign under each of the 6 slice transpositions.
  std::size_t swaps = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    const Tensor3 t = sample_dense({3, 3, 4}, Q, derive_seed(cx.opts.seed, {8, 3, i}));
    const Scalar d = f_det(t);
    for (int k1 = 0; k1 < 4; ++k1)
      for (int k2 = k1 + 1; k2 < 4; ++k2) {
        auto sl = t.slices(3);
        std::swap(sl[k1], sl[k2]);
        const bool ok = f_det(Tensor3::from_frontal(sl)) == -d;
        swaps += ok;
        c.expect(ok, "f_det not alternating");
      }
  }

  // Two primes and two seeds agree with each other and with Q.
  std::size_t alarms = 0, sz_checks = 0;
  for (std::size_t i = 0; i < 30; ++i) {
    const std::uint64_t seed = derive_seed(cx.opts.seed, {8, 4, i});
    const Tensor3 t = i % 2 == 0 ? sample_rank_r({3, 3, 4}, 4, Q, seed) : sample_dense({3, 3, 4}, Q, seed);
    const Verdict va = membership_route_a(t).verdict, vb = membership_route_b(t, *cx.fam).verdict;
    for (const Field& f : {P31, P61}) {
      ++sz_checks;
      const Tensor3 tp = t.convert(f);
      if (membership_route_a(tp).verdict != va || membership_route_b(tp, *cx.fam).verdict != vb) ++alarms;
    }
    const Tensor3 t4 = i % 2 == 0 ? sample_rank_r({4, 4, 4}, 4, Q, seed) : sample_dense({4, 4, 4}, Q, seed);
    LiftConfig c1, c2;
    c1.seed = derive_seed(seed, {1});
    c2.seed = derive_seed(seed, {2});
    c2.field = P61;
    ++sz_checks;
    if (membership444(t4, *cx.fam, c1).verdict != membership444(t4, *cx.fam, c2).verdict) ++alarms;
  }
  c.expect(alarms == 0, std::to_string(alarms) + " two-prime alarms");
  res.data = {{"gl_pairs", gl_pairs}, {"scalings", scalings}, {"transpositions", swaps},
              {"two_prime_checks", sz_checks}, {"alarms", alarms}};
  res.detail = "GL " + std::to_string(gl_pairs) + "/50, scalings " + std::to_string(scalings) +
               "/1000, transpositions " + std::to_string(swaps) + "/30, two-prime alarms " + std::to_string(alarms) +
               " of " + std::to_string(sz_checks);
}

void criterion9(Context& cx, CriterionResult& res, Checker& c) {
  nlohmann::json runs = nlohmann::json::array();
  std::set<std::size_t> values;
  bool saturated = false;
  for (std::uint64_t s : {derive_seed(cx.opts.seed, {9, 1}), derive_seed(cx.opts.seed, {9, 2})})
    for (std::uint64_t p : {modp::kMersenne31, modp::kMersenne61}) {
      const StrassenDimension d = strassen_dimension({3}, p, cx.opts.dimension_samples, s);
      values.insert(d.dimension);
      saturated |= d.saturated;
      runs.push_back(d.to_json());
    }
  c.expect(values.size() == 1, "dimension differs across primes or seeds");
  c.expect(!saturated, "rank reached the sample count; raise the sample count");
  res.data = {{"runs", runs}};
  res.detail = "l = 3: dimension " + std::to_string(*values.begin()) + " at both primes and both seeds (" +
               std::to_string(cx.opts.dimension_samples) + " samples)";
}

struct Criterion {
  int id;
  const char* title;
  double limit;
  void (*run)(Context&, CriterionResult&, Checker&);
};

const Criterion kCriteria[] = {
    {1, "shape and count fixed points", 1, criterion1},
    {2, "restricted-identity audit", 5, criterion2},
    {3, "positive soundness 3x3x4", 60, criterion3},
    {4, "negative detection 3x3x4", 60, criterion4},
    {5, "route equivalence", 180, criterion5},
    {6, "degenerate strata", 60, criterion6},
    {7, "4x4x4 membership", 600, criterion7},
    {8, "invariance suite", 300, criterion8},
    {9, "strassen_dimension stability", 600, criterion9},
};

}  // namespace

AcceptanceReport run_acceptance(const AcceptanceOptions& opts,
                                const std::function<void(const CriterionResult&)>& on_result) {
  Context cx{opts, std::nullopt, false, {}, {}};
  cx.lm_path = opts.lm_file.value_or(default_lm_path());
  try {
    cx.fam = load_lm_file(cx.lm_path);
    cx.file_loaded = true;
  } catch (const Error& e) {
    cx.file_problem = e.what();
  }

  AcceptanceReport report;
  for (const auto& cr : kCriteria) {
    if (!opts.criteria.empty() && std::find(opts.criteria.begin(), opts.criteria.end(), cr.id) == opts.criteria.end())
      continue;
    CriterionResult res;
    res.id = cr.id;
    res.title = cr.title;
    res.limit_seconds = cr.limit;
    res.outcome = Outcome::Pass;
    // Without the data file the family is rebuilt in memory for the later criteria.
    if (!cx.fam && cr.id != 2) cx.fam = LMFamily{derive_lm_family(1), "derived in memory"};
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;
    try {
      cr.run(cx, res, c);
      if (res.outcome != Outcome::Skip) res.outcome = c.failures == 0 ? Outcome::Pass : Outcome::Fail;
      if (c.failures) res.detail = std::to_string(c.failures) + " failed checks: " + join(c.problems);
    } catch (const std::exception& e) {
      res.outcome = Outcome::Fail;
      res.detail = std::string("error: ") + e.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (res.outcome == Outcome::Pass && res.seconds > res.limit_seconds) {
      res.outcome = Outcome::Fail;
      res.detail = "over the time limit; " + res.detail;
    }
    if (!cx.file_loaded && res.outcome != Outcome::Skip) res.detail += " [LM family derived in memory]";
    if (on_result) on_result(res);
    report.results.push_back(std::move(res));
  }
  return report;
}

}  // namespace salmon
