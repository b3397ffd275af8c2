#include "salmon/salmon444.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <functional>
#include <map>

#include "salmon/assign.hpp"
#include "salmon/errors.hpp"
#include "salmon/linalg.hpp"
#include "salmon/random.hpp"
#include "salmon/strassen.hpp"
#include "salmon/sym9.hpp"

namespace salmon {

namespace {

constexpr std::int64_t kRationalLiftBound = 1024;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void require_444(const Tensor3& t, const char* op) {
  if (t.dims() != Tensor3::Dims{4, 4, 4}) throw DomainError(std::string(op) + ": tensor must be 4x4x4");
}

Tensor3 into_field(const Tensor3& t, const Field& f) {
  if (!f.is_exact()) throw ModeMismatch("lift evaluation needs an exact mode");
  if (t.field() == f) return t;
  if (t.field().is_rational()) return t.convert(f);
  throw ModeMismatch("tensor is over " + t.field().name() + ", configuration asks for " + f.name());
}

Matrix random_square(const Field& f, Rng& rng) {
  Matrix m(4, 4, f);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      m(r, c) = f.is_prime_field() ? f.from_int(static_cast<std::int64_t>(rng.uniform_residue(f.modulus())))
                                   : f.from_int(rng.uniform_int(-kRationalLiftBound, kRationalLiftBound));
  return m;
}

// Position of a 9-row subset among the 220 in lexicographic order.
std::size_t row_subset_index(const std::vector<std::size_t>& rows) {
  std::size_t idx = 0, found = 0;
  for_each_combination(12, 9, [&](std::span<const std::size_t> c) {
    if (std::equal(c.begin(), c.end(), rows.begin(), rows.end())) {
      found = idx;
      return false;
    }
    ++idx;
    return true;
  });
  return found;
}

}  // namespace

std::string to_string(LiftFamily f) { return f == LiftFamily::LM6 ? "lm6" : "sym9"; }

Tensor3 lift_tensor(const Tensor3& t, int l, const Matrix& p, const Matrix& q) {
  require_444(t, "lift_tensor");
  const auto sections = t.slices(l);
  Tensor3 y({3, 3, 4}, t.field());
  for (int k = 0; k < 4; ++k) {
    const Matrix m = p * sections[k] * q;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) y(i, j, k) = m(i, j);
  }
  return y;
}

nlohmann::json LiftWitness::to_json() const {
  auto mat = [](const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c).to_string());
      rows.push_back(row);
    }
    return rows;
  };
  return {{"l", l}, {"trial", trial}, {"P", mat(p)}, {"Q", mat(q)}, {"condition", condition}, {"value", value.to_string()}};
}

LiftResult lift_eval(const Tensor3& t0, int l, LiftFamily family, const LMFamily* fam, const LiftConfig& cfg) {
  require_444(t0, "lift_eval");
  if (l < 1 || l > 3) throw DomainError("direction l must be 1, 2 or 3");
  if (family == LiftFamily::LM6 && fam == nullptr) throw PreconditionViolation("lift_eval: LM6 needs an LM family");
  if (cfg.trials < 1) throw DomainError("lift_eval: trials must be positive");
  const Field f = cfg.field;
  const Tensor3 t = into_field(t0, f);

  std::optional<LMModpEvaluator> fast;
  if (family == LiftFamily::LM6 && f.is_prime_field()) fast.emplace(*fam, f.modulus());

  LiftResult res;
  res.l = l;
  res.family = family;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    Rng rng(derive_seed(cfg.seed, {0x11f7, static_cast<std::uint64_t>(family), static_cast<std::uint64_t>(l),
                                   static_cast<std::uint64_t>(trial)}));
    Matrix p = random_square(f, rng), q = random_square(f, rng);
    const Tensor3 y = lift_tensor(t, l, p, q);
    ++res.trials;
    std::optional<std::pair<std::size_t, Scalar>> bad;
    if (family == LiftFamily::LM6) {
      if (fast) {
        const auto vals = (*fast)(x_residues(y, *registry_334()));
        for (std::size_t i = 0; i < vals.size() && !bad; ++i)
          if (vals[i] != 0) bad.emplace(i + 1, f.from_int(static_cast<std::int64_t>(vals[i])));
      } else {
        const auto vals = eval_lm(*fam, y);
        for (std::size_t i = 0; i < vals.size() && !bad; ++i)
          if (!vals[i].is_zero()) bad.emplace(i + 1, vals[i]);
      }
    } else {
      const Sym9Result r = sym9_test(build_sym_matrices(y));
      if (r.witness_l) bad.emplace(row_subset_index(r.witness_l->rows), r.witness_l->value);
      else if (r.witness_r) bad.emplace(220 + row_subset_index(r.witness_r->rows), r.witness_r->value);
    }
    if (bad) {
      res.pass = false;
      res.witness = LiftWitness{l, trial, std::move(p), std::move(q), bad->first, bad->second};
      return res;
    }
  }
  return res;
}

MembershipReport membership444(const Tensor3& t0, const LMFamily& fam, const LiftConfig& cfg) {
  require_444(t0, "membership444");
  const Tensor3 t = into_field(t0, cfg.field);
  MembershipReport rep;
  rep.route = "full444";
  rep.mode = cfg.field.name();
  rep.seed = cfg.seed;
  const nlohmann::json prime = cfg.field.is_prime_field() ? nlohmann::json(cfg.field.modulus()) : nlohmann::json(nullptr);

  auto finish = [&](Stage st) {
    if (!st.pass && rep.decided_by.empty()) {
      rep.verdict = Verdict::NonMember;
      rep.decided_by = st.name;
    }
    rep.stages.push_back(std::move(st));
  };

  for (int l = 1; l <= 3; ++l) {
    const auto t1 = std::chrono::steady_clock::now();
    const StrassenResult r = strassen_eval(t, l, cfg.trials, cfg.seed);
    Stage st{"strassen5.l" + std::to_string(l), r.pass, std::nullopt,
             {{"l", l}, {"family", "strassen5"}, {"trials", r.trials}, {"prime", prime}}, 0};
    if (r.witness) st.witness = r.witness->to_json();
    st.seconds = seconds_since(t1);
    finish(std::move(st));
  }
  std::vector<LiftFamily> families;
  if (cfg.lm6) families.push_back(LiftFamily::LM6);
  if (cfg.sym9) families.push_back(LiftFamily::SYM9);
  for (LiftFamily family : families)
    for (int l = 1; l <= 3; ++l) {
      const auto t1 = std::chrono::steady_clock::now();
      const LiftResult r = lift_eval(t, l, family, &fam, cfg);
      Stage st{"lift." + to_string(family) + ".l" + std::to_string(l), r.pass, std::nullopt,
               {{"l", l}, {"family", to_string(family)}, {"trials", r.trials}, {"prime", prime}}, 0};
      if (r.witness) st.witness = r.witness->to_json();
      st.seconds = seconds_since(t1);
      finish(std::move(st));
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Symbolic lift by supports.

const RegistryPtr& lift_registry() {
  static const RegistryPtr reg = VarRegistry::make({{4, 4, 4}, {0, 0}, 4, 4});
  return reg;
}

int lift_p_bit(int i, int a) { return (i - 1) * 4 + (a - 1); }
int lift_q_bit(int b, int j) { return 12 + (b - 1) * 3 + (j - 1); }

std::uint32_t lift_support(const Monomial& m) {
  const RegistryPtr& reg = lift_registry();
  std::uint32_t mask = 0;
  for (const auto& vp : m.factors()) {
    const VarName& n = reg->name(vp.var);
    if (n.cls == VarClass::P) {
      if (n.idx[0] > 3) throw DomainError("p(" + std::to_string(n.idx[0]) + ",.) never reaches the leading block");
      mask |= 1u << lift_p_bit(n.idx[0], n.idx[1]);
    } else if (n.cls == VarClass::Q) {
      if (n.idx[1] > 3) throw DomainError("q(.," + std::to_string(n.idx[1]) + ") never reaches the leading block");
      mask |= 1u << lift_q_bit(n.idx[0], n.idx[1]);
    }
  }
  return mask;
}

namespace {

class LiftExpander {
 public:
  LiftExpander(LiftFamily family, int l, std::uint64_t prime, const LMFamily* fam, std::vector<bool> wanted,
               LiftGeneration& out)
      : family_(family), l_(l), field_(Field::prime(prime)), wanted_(std::move(wanted)), out_(out), reg_(lift_registry()) {
    if (family == LiftFamily::LM6) {
      const RegistryPtr& r334 = registry_334();
      for (const auto& g : fam->polys) {
        lm_.push_back(g.convert(field_));
        std::vector<std::uint16_t> masks;
        for (const auto& t : lm_.back().terms()) {
          std::uint16_t m = 0;
          for (const auto& vp : t.mono.factors()) {
            const VarName& n = r334->name(vp.var);
            m |= static_cast<std::uint16_t>(1u << ((n.idx[0] - 1) * 3 + (n.idx[1] - 1)));
          }
          masks.push_back(m);
        }
        term_cells_.push_back(std::move(masks));
      }
    } else {
      for (int side = 0; side < 2; ++side) {
        regular_[side].resize(512);
        for (std::uint32_t cells = 0; cells < 512; ++cells) {
          std::array<bool, 108> nz{};
          for (const auto& e : sym_contributions(side == 0))
            if (cells >> (e.i * 3 + e.j) & 1) nz[e.row * 9 + e.col] = true;
          for_each_combination(12, 9, [&](std::span<const std::size_t> rows) {
            const std::size_t idx = side * 220 + regular_[side][cells].size();
            regular_[side][cells].push_back(wanted_[idx] && structurally_regular(nz, rows));
            return true;
          });
        }
      }
    }
  }

  void process(std::uint32_t support) {
    ++out_.work;
    build_y(support);
    if (family_ == LiftFamily::LM6) {
      for (std::size_t c = 0; c < lm_.size(); ++c)
        if (wanted_[c + 1]) expand_lm(c, support);
    } else {
      expand_sym(true, support);
      expand_sym(false, support);
    }
  }

 private:
  void build_y(std::uint32_t support) {
    cells_ = 0;
    y_.assign(36, MultiPoly(reg_, field_));
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j)
        for (int k = 1; k <= 4; ++k) {
          std::vector<Term> terms;
          for (int a = 1; a <= 4; ++a) {
            if (!(support >> lift_p_bit(i, a) & 1)) continue;
            for (int b = 1; b <= 4; ++b) {
              if (!(support >> lift_q_bit(b, j) & 1)) continue;
              const auto pos = section_position(l_, k - 1, a - 1, b - 1);
              Monomial m({{static_cast<std::uint32_t>(reg_->x(pos[0] + 1, pos[1] + 1, pos[2] + 1)), 1},
                          {static_cast<std::uint32_t>(reg_->p(i, a)), 1},
                          {static_cast<std::uint32_t>(reg_->q(b, j)), 1}});
              terms.push_back({std::move(m), field_.one()});
            }
          }
          if (!terms.empty()) cells_ |= static_cast<std::uint16_t>(1u << ((i - 1) * 3 + (j - 1)));
          y_[yi(i, j, k)] = MultiPoly::from_terms(reg_, field_, std::move(terms));
        }
  }

  static std::size_t yi(int i, int j, int k) { return ((i - 1) * 3 + (j - 1)) * 4 + (k - 1); }

  MultiPoly mul(const MultiPoly& a, const MultiPoly& b) {
    out_.work += a.term_count() * b.term_count();
    return a * b;
  }

  void emit(std::size_t condition, const MultiPoly& g, std::uint32_t support) {
    std::map<Monomial, PolyBuilder, GrlexLess> groups;
    for (const auto& t : g.terms()) {
      std::vector<VarPower> xs, pq;
      for (const auto& vp : t.mono.factors()) (reg_->name(vp.var).cls == VarClass::X ? xs : pq).push_back(vp);
      Monomial pm(std::move(pq));
      if (lift_support(pm) != support) continue;
      groups.try_emplace(pm, reg_, field_).first->second.add(Monomial(std::move(xs)), t.coeff);
    }
    for (auto& [pm, b] : groups) {
      MultiPoly c = std::move(b).build();
      if (!c.is_zero()) out_.coefficients.push_back({condition, pm, std::move(c)});
    }
  }

  void expand_lm(std::size_t c, std::uint32_t support) {
    const auto& cells = term_cells_[c];
    if (std::none_of(cells.begin(), cells.end(), [&](std::uint16_t m) { return (m & ~cells_) == 0; })) return;
    const RegistryPtr& r334 = registry_334();
    PolyBuilder acc(reg_, field_);
    const auto terms = lm_[c].terms();
    for (std::size_t t = 0; t < terms.size(); ++t) {
      if (cells[t] & ~cells_) continue;
      std::optional<MultiPoly> prod;
      for (const auto& vp : terms[t].mono.factors()) {
        const VarName& n = r334->name(vp.var);
        const MultiPoly& y = y_[yi(n.idx[0], n.idx[1], n.idx[2])];
        for (std::uint32_t e = 0; e < vp.exp; ++e) prod = prod ? mul(*prod, y) : y;
      }
      out_.work += prod->term_count();
      acc.add_product(terms[t].coeff, Monomial(), *prod);
    }
    emit(c + 1, std::move(acc).build(), support);
  }

  void expand_sym(bool left, std::uint32_t support) {
    std::vector<MultiPoly> m(12 * 9, MultiPoly(reg_, field_));
    for (const auto& e : sym_contributions(left)) {
      const MultiPoly& y = y_[yi(e.i + 1, e.j + 1, e.k + 1)];
      m[e.row * 9 + e.col] = e.sign > 0 ? m[e.row * 9 + e.col] + y : m[e.row * 9 + e.col] - y;
    }
    const auto& regular = regular_[left ? 0 : 1][cells_];
    if (std::none_of(regular.begin(), regular.end(), [](bool b) { return b; })) return;
    std::size_t idx = 0;
    for_each_combination(12, 9, [&](std::span<const std::size_t> rows) {
      if (regular[idx]) emit((left ? 0 : 220) + idx, det9(m, rows), support);
      ++idx;
      return true;
    });
  }

  // Perfect matching on the nonzero pattern; without one the minor vanishes identically.
  static bool structurally_regular(const std::array<bool, 108>& nz, std::span<const std::size_t> rows) {
    std::array<int, 9> match_col;
    match_col.fill(-1);
    std::function<bool(int, std::uint32_t&)> augment = [&](int r, std::uint32_t& seen) {
      for (int c = 0; c < 9; ++c) {
        if (!nz[rows[r] * 9 + c] || (seen >> c & 1)) continue;
        seen |= 1u << c;
        if (match_col[c] < 0 || augment(match_col[c], seen)) {
          match_col[c] = r;
          return true;
        }
      }
      return false;
    };
    for (int r = 0; r < 9; ++r) {
      std::uint32_t seen = 0;
      if (!augment(r, seen)) return false;
    }
    return true;
  }

  // Row-by-row expansion over column subsets.
  MultiPoly det9(const std::vector<MultiPoly>& m, std::span<const std::size_t> rows) {
    std::vector<std::optional<MultiPoly>> dp(512);
    dp[0] = MultiPoly::constant(reg_, field_.one());
    for (std::uint32_t mask = 0; mask < 511; ++mask) {
      if (!dp[mask] || dp[mask]->is_zero()) continue;
      const int r = std::popcount(mask);
      for (int c = 0; c < 9; ++c) {
        if (mask >> c & 1) continue;
        const MultiPoly& e = m[rows[r] * 9 + c];
        if (e.is_zero()) continue;
        MultiPoly term = mul(*dp[mask], e);
        if (std::popcount(mask >> (c + 1)) % 2 == 1) term = -term;
        auto& slot = dp[mask | (1u << c)];
        slot = slot ? *slot + term : term;
      }
    }
    return dp[511] ? *dp[511] : MultiPoly(reg_, field_);
  }

  LiftFamily family_;
  int l_;
  Field field_;
  std::vector<bool> wanted_;  // by condition number
  LiftGeneration& out_;
  RegistryPtr reg_;
  std::vector<MultiPoly> lm_;
  std::vector<std::vector<std::uint16_t>> term_cells_;
  // regular_[side][cells][minor]: the minor has a perfect matching when Y is
  // nonzero exactly on `cells`.
  std::array<std::vector<std::vector<bool>>, 2> regular_;
  std::vector<MultiPoly> y_;
  std::uint16_t cells_ = 0;
};

}  // namespace

std::vector<std::string> LiftGeneration::header() const {
  std::string conds = conditions.empty() ? "all" : nlohmann::json(conditions).dump();
  return {"lifted " + to_string(family) + " coefficients, l = " + std::to_string(l) + ", GF(" + std::to_string(prime) +
              "), seed " + std::to_string(seed) + ", conditions " + conds,
          "budget " + std::to_string(budget) + ", work " + std::to_string(work) + ", supports processed " +
              std::to_string(supports_processed) + ", complete through support size " +
              std::to_string(complete_through) + (exhausted ? ", budget exhausted at " + frontier.dump() : "")};
}

nlohmann::json LiftGeneration::to_json() const {
  return {{"family", to_string(family)},
          {"l", l},
          {"prime", prime},
          {"budget", budget},
          {"seed", seed},
          {"conditions", conditions},
          {"polynomials", coefficients.size()},
          {"work", work},
          {"supports_processed", supports_processed},
          {"complete_through", complete_through},
          {"exhausted", exhausted},
          {"frontier", frontier}};
}

LiftGeneration lift_generate_modp(LiftFamily family, int l, std::uint64_t prime, std::size_t budget,
                                  std::uint64_t seed, const LMFamily* fam, const std::vector<std::size_t>& conditions) {
  if (l < 1 || l > 3) throw DomainError("direction l must be 1, 2 or 3");
  if (family == LiftFamily::LM6 && fam == nullptr) throw PreconditionViolation("lift_generate_modp: LM6 needs an LM family");
  const std::size_t lo = family == LiftFamily::LM6 ? 1 : 0, hi = family == LiftFamily::LM6 ? 10 : 439;
  std::vector<bool> wanted(hi + 1, conditions.empty());
  for (std::size_t c : conditions) {
    if (c < lo || c > hi) throw DomainError("condition " + std::to_string(c) + " out of range for " + to_string(family));
    wanted[c] = true;
  }
  LiftGeneration out;
  out.family = family;
  out.l = l;
  out.prime = prime;
  out.budget = budget;
  out.seed = seed;
  LiftExpander ex(family, l, prime, fam, std::move(wanted), out);
  out.conditions = conditions;
  out.complete_through = 0;
  for (int size = 1; size <= 24; ++size) {
    if (out.work >= budget) {
      out.exhausted = true;
      out.frontier = {{"size", size}, {"position", 0}, {"of", binomial(24, size)}};
      return out;
    }
    std::vector<std::uint32_t> cls;
    cls.reserve(binomial(24, size));
    // Gosper's hack over 24-bit masks of the given popcount.
    for (std::uint32_t m = (1u << size) - 1; m < (1u << 24);) {
      cls.push_back(m);
      const std::uint32_t c = m & -m, r = m + c;
      m = (((r ^ m) >> 2) / c) | r;
    }
    Rng rng(derive_seed(seed, {0x5a9, static_cast<std::uint64_t>(size)}));
    std::shuffle(cls.begin(), cls.end(), rng.engine());
    for (std::size_t pos = 0; pos < cls.size(); ++pos) {
      if (out.work >= budget) {
        out.exhausted = true;
        out.frontier = {{"size", size}, {"position", pos}, {"of", cls.size()}};
        return out;
      }
      ex.process(cls[pos]);
      ++out.supports_processed;
    }
    out.complete_through = size;
  }
  return out;
}

}  // namespace salmon
