#include "salmon/sym9.hpp"

#include <chrono>

#include "salmon/errors.hpp"

namespace salmon {

namespace {

std::vector<SymContribution> make_contributions(bool left) {
  std::vector<SymContribution> out;
  int row = 0;
  for (const auto& [k, a, b] : sym_rows()) {
    for (int c = 0; c < 3; ++c) {
      if (left) {
        // (L X)[a][b] - (L X)[b][a] = sum_c L[a][c] X[c][b] - L[b][c] X[c][a]
        out.push_back({row, 3 * a + c, +1, c, b, k});
        out.push_back({row, 3 * b + c, -1, c, a, k});
      } else {
        // (X R)[a][b] - (X R)[b][a] = sum_c X[a][c] R[c][b] - X[b][c] R[c][a]
        out.push_back({row, 3 * c + b, +1, a, c, k});
        out.push_back({row, 3 * c + a, -1, b, c, k});
      }
    }
    ++row;
  }
  return out;
}

void require_334(const Tensor3& t, const char* op) {
  if (t.dims() != Tensor3::Dims{3, 3, 4}) throw DomainError(std::string(op) + ": tensor must be 3x3x4");
}

Matrix reshape3(const std::vector<Scalar>& v, const Field& f) { return Matrix(3, 3, f, v); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

const std::vector<SymRow>& sym_rows() {
  static const std::vector<SymRow> rows = [] {
    std::vector<SymRow> r;
    for (int k = 0; k < 4; ++k)
      for (auto [a, b] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) r.push_back({k, a, b});
    return r;
  }();
  return rows;
}

const std::vector<SymContribution>& sym_contributions(bool left) {
  static const std::vector<SymContribution> l = make_contributions(true);
  static const std::vector<SymContribution> r = make_contributions(false);
  return left ? l : r;
}

SymSystem build_sym_matrices(const Tensor3& t) {
  require_334(t, "build_sym_matrices");
  const Field& f = t.field();
  SymSystem s{Matrix(12, 9, f), Matrix(12, 9, f), sym_rows(), {}};
  for (int c = 0; c < 9; ++c) s.col_map.push_back({c / 3, c % 3});
  for (const auto& e : sym_contributions(true)) {
    if (e.sign > 0)
      s.cl(e.row, e.col) += t(e.i, e.j, e.k);
    else
      s.cl(e.row, e.col) -= t(e.i, e.j, e.k);
  }
  for (const auto& e : sym_contributions(false)) {
    if (e.sign > 0)
      s.cr(e.row, e.col) += t(e.i, e.j, e.k);
    else
      s.cr(e.row, e.col) -= t(e.i, e.j, e.k);
  }
  return s;
}

Sym9Result sym9_test(const SymSystem& s) {
  Sym9Result r;
  r.rank_l = rank(s.cl);
  r.rank_r = rank(s.cr);
  if (r.rank_l == 9) r.witness_l = first_nonzero_minor(s.cl, 9);
  if (r.rank_r == 9) r.witness_r = first_nonzero_minor(s.cr, 9);
  r.pass = r.rank_l <= 8 && r.rank_r <= 8;
  return r;
}

std::vector<Minor> sym9_minors(const SymSystem& s) {
  auto out = minor_values(s.cl, 9);
  auto more = minor_values(s.cr, 9);
  out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
  return out;
}

LRPair extract_lr(const SymSystem& s) {
  const Field& f = s.cl.field();
  const std::size_t rl = rank(s.cl), rr = rank(s.cr);
  if (rl == 9 || rr == 9) throw PreconditionViolation("extract_lr: symmetrization system has rank 9");
  LRPair out{Matrix(3, 3, f), Matrix(3, 3, f), false};
  if (rl < 8 || rr < 8) return out;
  out.l = reshape3(kernel_basis(s.cl).at(0), f);
  out.r = reshape3(kernel_basis(s.cr).at(0), f);
  out.defined = true;
  return out;
}

bool trace16_check(const Matrix& l, const Matrix& r) {
  if (l.rows() != 3 || l.cols() != 3 || r.rows() != 3 || r.cols() != 3) {
    throw DomainError("trace16_check expects 3x3 matrices");
  }
  const Field& f = l.field();
  const Matrix lrt = l * r.transpose();
  const Matrix rtl = r.transpose() * l;
  if (lrt != rtl) return false;
  return lrt * f.from_int(3) == Matrix::identity(3, f) * lrt.trace();
}

nlohmann::json minor_to_json(const Minor& m, const char* matrix) {
  return {{"matrix", matrix}, {"rows", m.rows}, {"cols", m.cols}, {"value", m.value.to_string()}};
}

MembershipReport membership_route_a(const Tensor3& t) {
  require_334(t, "membership_route_a");
  if (!t.field().is_exact()) throw ModeMismatch("route A needs an exact mode");
  MembershipReport rep;
  rep.route = "A";
  rep.mode = t.field().name();

  auto t0 = std::chrono::steady_clock::now();
  const SymSystem s = build_sym_matrices(t);
  const Sym9Result r9 = sym9_test(s);
  Stage st9{"sym9", r9.pass, std::nullopt, {{"rank_CL", r9.rank_l}, {"rank_CR", r9.rank_r}}, 0};
  if (!r9.pass) {
    nlohmann::json w = nlohmann::json::array();
    if (r9.witness_l) w.push_back(minor_to_json(*r9.witness_l, "CL"));
    if (r9.witness_r) w.push_back(minor_to_json(*r9.witness_r, "CR"));
    st9.witness = std::move(w);
  }
  st9.seconds = seconds_since(t0);
  rep.stages.push_back(std::move(st9));
  if (!r9.pass) {
    rep.verdict = Verdict::NonMember;
    rep.decided_by = "sym9";
    return rep;
  }

  t0 = std::chrono::steady_clock::now();
  const LRPair lr = extract_lr(s);
  Stage st16{"trace16", true, std::nullopt, {{"defined", lr.defined}}, 0};
  if (lr.defined) {
    st16.pass = trace16_check(lr.l, lr.r);
    if (!st16.pass) {
      st16.witness = nlohmann::json{{"L", lr.l.to_string()}, {"R", lr.r.to_string()},
                                    {"LRt", (lr.l * lr.r.transpose()).to_string()},
                                    {"RtL", (lr.r.transpose() * lr.l).to_string()}};
    }
  }
  st16.seconds = seconds_since(t0);
  rep.stages.push_back(std::move(st16));
  if (!rep.stages.back().pass) {
    rep.verdict = Verdict::NonMember;
    rep.decided_by = "trace16";
  }
  return rep;
}

}  // namespace salmon
