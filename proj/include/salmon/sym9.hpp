#pragma once

#include <array>
#include <optional>
#include <vector>

#include "salmon/linalg.hpp"
#include "salmon/report.hpp"
#include "salmon/tensor.hpp"

namespace salmon {

/// Row label of the 12x9 systems: slice k (0..3) and strict-upper position (a,b).
struct SymRow {
  int k;
  int a;
  int b;
};

/// One contribution sign * x(i,j,k) to entry (row, col) of C_L or C_R.
struct SymContribution {
  int row;
  int col;
  int sign;
  int i;
  int j;
  int k;
};

/// C_L * vec(L) stacks the strict-upper entries of L X_k - X_k^T L^T, and
/// C_R * vec(R) those of X_k R - R^T X_k^T, for k = 1..4. Rows are k-major with
/// positions (1,2), (1,3), (2,3); vec is row-major.
struct SymSystem {
  Matrix cl;
  Matrix cr;
  std::vector<SymRow> row_map;
  /// Column c is entry (c / 3, c % 3) of L (or R).
  std::vector<std::array<int, 2>> col_map;
};

const std::vector<SymRow>& sym_rows();
/// The entries of C_L (left = true) or C_R as signed tensor coordinates.
const std::vector<SymContribution>& sym_contributions(bool left);

SymSystem build_sym_matrices(const Tensor3& t);

struct Sym9Result {
  bool pass = true;
  std::size_t rank_l = 0;
  std::size_t rank_r = 0;
  /// A nonzero 9x9 minor for each matrix of rank 9.
  std::optional<Minor> witness_l;
  std::optional<Minor> witness_r;
};

/// Degree-9 test: both systems have rank at most 8.
Sym9Result sym9_test(const SymSystem& s);

/// All 220 maximal minors of C_L followed by the 220 of C_R.
std::vector<Minor> sym9_minors(const SymSystem& s);

struct LRPair {
  Matrix l;
  Matrix r;
  /// False when either system has rank <= 7: the minor expressions for L and R
  /// then vanish identically and the trace condition holds vacuously.
  bool defined = false;
};

/// Kernel directions of C_L and C_R reshaped to 3x3 (row-major).
/// Throws PreconditionViolation when either system has rank 9.
LRPair extract_lr(const SymSystem& s);

/// L R^T = R^T L = (tr(L R^T) / 3) I.
bool trace16_check(const Matrix& l, const Matrix& r);

/// Degree 9 + degree 16 decision for a 3x3x4 tensor in an exact mode.
MembershipReport membership_route_a(const Tensor3& t);

nlohmann::json minor_to_json(const Minor& m, const char* matrix);

}  // namespace salmon
