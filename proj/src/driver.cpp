#include "salmon/driver.hpp"

#include <bit>
#include <cmath>
#include <functional>

#include "salmon/assign.hpp"
#include "salmon/errors.hpp"
#include "salmon/linalg.hpp"
#include "salmon/random.hpp"
#include "salmon/sampling.hpp"
#include "salmon/sym9.hpp"

namespace salmon {

Tensor3 matmul_tensor(const Field& field) {
  Tensor3 t({4, 4, 4}, field);
  auto flat = [](int a, int b) { return 2 * (a - 1) + (b - 1); };
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      for (int k = 1; k <= 2; ++k) t(flat(i, j), flat(j, k), flat(k, i)) = field.one();
  return t;
}

double ToleranceModel::threshold(double coeff_l1, int degree, double tensor_max) const {
  return epsilon * coeff_l1 * std::pow(std::max(1.0, tensor_max), degree);
}

nlohmann::json FamilyResiduals::to_json() const {
  return {{"family", family}, {"count", count},         {"zero", zero},
          {"ambiguous", ambiguous}, {"nonzero", nonzero}, {"max_residual", max_residual},
          {"max_ratio", max_ratio}};
}

nlohmann::json FloatCheckResult::to_json() const {
  nlohmann::json fams = nlohmann::json::array();
  for (const auto& f : families) fams.push_back(f.to_json());
  return {{"verdict", to_string(verdict)}, {"families", fams}};
}

namespace {

// Permanent of a 0/1 9x9 pattern by expansion over column subsets.
double permanent9(const std::array<std::array<bool, 9>, 9>& pat) {
  std::vector<double> dp(512, 0.0);
  dp[0] = 1;
  for (std::uint32_t mask = 0; mask < 511; ++mask) {
    if (dp[mask] == 0) continue;
    const int r = std::popcount(mask);
    for (int c = 0; c < 9; ++c)
      if (!(mask >> c & 1) && pat[r][c]) dp[mask | (1u << c)] += dp[mask];
  }
  return dp[511];
}

std::vector<double> make_minor_norms() {
  std::vector<double> out;
  for (bool left : {true, false}) {
    std::array<std::array<bool, 9>, 12> nz{};
    for (const auto& e : sym_contributions(left)) nz[e.row][e.col] = true;
    for_each_combination(12, 9, [&](std::span<const std::size_t> rows) {
      std::array<std::array<bool, 9>, 9> pat{};
      for (int r = 0; r < 9; ++r) pat[r] = nz[rows[r]];
      out.push_back(permanent9(pat));
      return true;
    });
  }
  return out;
}

// Determinant by LU with partial pivoting.
double det_lu(std::vector<double> a, int n) {
  double d = 1;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    if (a[piv * n + c] == 0) return 0;
    if (piv != c) {
      for (int k = 0; k < n; ++k) std::swap(a[piv * n + k], a[c * n + k]);
      d = -d;
    }
    d *= a[c * n + c];
    for (int r = c + 1; r < n; ++r) {
      const double f = a[r * n + c] / a[c * n + c];
      for (int k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
    }
  }
  return d;
}

void classify(FamilyResiduals& fr, double value, double thr, const ToleranceModel& tol) {
  const double v = std::abs(value);
  const double ratio = thr > 0 ? v / thr : (v == 0 ? 0 : INFINITY);
  ++fr.count;
  fr.max_residual = std::max(fr.max_residual, v);
  fr.max_ratio = std::max(fr.max_ratio, ratio);
  if (ratio > tol.band)
    ++fr.nonzero;
  else if (ratio >= 1 / tol.band)
    ++fr.ambiguous;
  else
    ++fr.zero;
}

}  // namespace

double sym9_minor_norm(std::size_t minor) {
  static const std::vector<double> norms = make_minor_norms();
  return norms.at(minor);
}

FloatCheckResult float_check(const Tensor3& t, const LMFamily* fam, const ToleranceModel& tol) {
  if (t.field().is_exact()) throw ModeMismatch("float_check needs a float tensor");
  if (t.dims() != Tensor3::Dims{3, 3, 4}) throw DomainError("float_check: tensor must be 3x3x4");
  const double scale = t.max_abs();
  FloatCheckResult res;

  FamilyResiduals s9{"sym9"};
  const SymSystem sys = build_sym_matrices(t);
  std::size_t idx = 0;
  for (const Matrix* m : {&sys.cl, &sys.cr}) {
    for_each_combination(12, 9, [&](std::span<const std::size_t> rows) {
      std::vector<double> a(81);
      for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 9; ++c) a[r * 9 + c] = (*m)(rows[r], c).float_value();
      classify(s9, det_lu(std::move(a), 9), tol.threshold(sym9_minor_norm(idx), 9, scale), tol);
      ++idx;
      return true;
    });
  }
  res.families.push_back(s9);

  if (fam) {
    FamilyResiduals f6{"lm6"};
    const auto vals = eval_lm(*fam, t);
    for (std::size_t i = 0; i < vals.size(); ++i)
      classify(f6, vals[i].float_value(), tol.threshold(fam->polys[i].coeff_l1(), 6, scale), tol);
    res.families.push_back(f6);
  }

  bool ambiguous = false;
  for (const auto& f : res.families) {
    if (f.nonzero > 0) {
      res.verdict = Verdict::NonMember;
      return res;
    }
    ambiguous |= f.ambiguous > 0;
  }
  res.verdict = ambiguous ? Verdict::Inconclusive : Verdict::Member;
  return res;
}

nlohmann::json ExperimentSpec::to_json() const {
  return {{"rank4", rank4},     {"generic", generic}, {"special", special}, {"essentially_234", essentially_234},
          {"seed", seed},       {"mode", field.name()}};
}

nlohmann::json CrossValidation::to_json(bool with_timing) const {
  nlohmann::json j{{"samples", samples},
                   {"agreements", agreements},
                   {"disagreements", disagreements},
                   {"classes", classes}};
  if (with_timing) j["stage_seconds"] = stage_seconds;
  return j;
}

CrossValidation cross_validate_334(const ExperimentSpec& spec, const LMFamily& fam) {
  if (!spec.field.is_exact()) throw ModeMismatch("cross validation runs in an exact mode");
  const Field Q = Field::rational();
  struct Plan {
    const char* name;
    std::size_t count;
    std::function<Tensor3(std::uint64_t)> sample;
    bool special;
  };
  const std::vector<Plan> plans = {
      {"rank4", spec.rank4, [&](std::uint64_t s) { return sample_rank_r({3, 3, 4}, 4, Q, s); }, false},
      {"generic", spec.generic, [&](std::uint64_t s) { return sample_dense({3, 3, 4}, Q, s); }, false},
      {"special_x33_zero", spec.special, [&](std::uint64_t s) { return sample_special_form(true, false, Q, s); }, true},
      {"special_f_zero", spec.special, [&](std::uint64_t s) { return sample_special_form(false, true, Q, s); }, true},
      {"special_generic", spec.special, [&](std::uint64_t s) { return sample_special_form(false, false, Q, s); }, true},
      {"essentially_234", spec.essentially_234, [&](std::uint64_t s) { return sample_essentially_234(Q, s); }, false},
  };

  CrossValidation out;
  std::uint64_t tag = 0;
  for (const auto& plan : plans) {
    ++tag;
    if (plan.count == 0) continue;
    std::size_t member_a = 0, member_b = 0, oracle_mismatch = 0;
    for (std::size_t i = 0; i < plan.count; ++i) {
      const std::uint64_t seed = derive_seed(spec.seed, {tag, i});
      const Tensor3 t = plan.sample(seed).convert(spec.field);
      const MembershipReport a = membership_route_a(t);
      const MembershipReport b = membership_route_b(t, fam);
      for (const auto* rep : {&a, &b})
        for (const auto& st : rep->stages) out.stage_seconds[rep->route + "." + st.name] += st.seconds;
      ++out.samples;
      member_a += a.verdict == Verdict::Member;
      member_b += b.verdict == Verdict::Member;
      if (a.verdict == b.verdict) {
        ++out.agreements;
      } else {
        out.disagreements.push_back({{"class", plan.name}, {"index", i}, {"seed", seed},
                                     {"route_a", to_string(a.verdict)}, {"route_b", to_string(b.verdict)}});
      }
      if (plan.special) {
        const bool oracle = special_membership(t);
        if (oracle != (a.verdict == Verdict::Member) || oracle != (b.verdict == Verdict::Member)) ++oracle_mismatch;
      }
    }
    out.classes[plan.name] = {{"samples", plan.count},
                              {"member_route_a", member_a},
                              {"member_route_b", member_b},
                              {"oracle_mismatches", oracle_mismatch}};
  }
  return out;
}

}  // namespace salmon
