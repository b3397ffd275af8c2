#include "salmon/linalg.hpp"

#include <numeric>
#include <utility>

#include "salmon/errors.hpp"
#include "salmon/modarith.hpp"

namespace salmon {

namespace {

void require_exact(const Matrix& m, const char* op) {
  if (!m.field().is_exact()) throw ModeMismatch(std::string(op) + ": float matrices are not supported");
}

/// Integer image of a rational matrix: row r scaled by the lcm of its denominators.
struct IntegerImage {
  std::vector<mpz_class> a;
  mpz_class scale = 1;  // product of the row scalings
};

IntegerImage integer_image(const Matrix& m) {
  IntegerImage img;
  img.a.resize(m.rows() * m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    mpz_class l = 1;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const mpz_class& d = m(r, c).rational_value().get_den();
      if (d != 1) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
    }
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const mpq_class& q = m(r, c).rational_value();
      img.a[r * m.cols() + c] = q.get_num() * (l / q.get_den());
    }
    img.scale *= l;
  }
  return img;
}

struct BareissResult {
  std::size_t rank = 0;
  int sign = 1;
  mpz_class last_pivot = 1;
};

/// Fraction-free elimination with full pivoting; every division is exact.
BareissResult bareiss(std::vector<mpz_class>& a, std::size_t rows, std::size_t cols) {
  BareissResult res;
  mpz_class prev = 1;
  std::vector<std::size_t> colperm(cols);
  std::iota(colperm.begin(), colperm.end(), 0);
  auto at = [&](std::size_t r, std::size_t c) -> mpz_class& { return a[r * cols + colperm[c]]; };
  std::size_t k = 0;
  for (; k < rows && k < cols; ++k) {
    std::size_t pr = rows, pc = cols;
    for (std::size_t c = k; c < cols && pr == rows; ++c) {
      for (std::size_t r = k; r < rows; ++r) {
        if (sgn(at(r, c)) != 0) {
          pr = r;
          pc = c;
          break;
        }
      }
    }
    if (pr == rows) break;
    if (pr != k) {
      for (std::size_t c = 0; c < cols; ++c) std::swap(a[pr * cols + c], a[k * cols + c]);
      res.sign = -res.sign;
    }
    if (pc != k) {
      std::swap(colperm[pc], colperm[k]);
      res.sign = -res.sign;
    }
    const mpz_class pivot = at(k, k);
    for (std::size_t r = k + 1; r < rows; ++r) {
      const mpz_class factor = at(r, k);
      for (std::size_t c = k + 1; c < cols; ++c) {
        mpz_class& x = at(r, c);
        x = pivot * x - factor * at(k, c);
        mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), prev.get_mpz_t());
      }
      at(r, k) = 0;
    }
    prev = pivot;
  }
  res.rank = k;
  res.last_pivot = prev;
  return res;
}

struct ModResult {
  std::size_t rank = 0;
  std::uint64_t det = 1;
};

ModResult gauss_modp(std::vector<std::uint64_t>& a, std::size_t rows, std::size_t cols, std::uint64_t p) {
  ModResult res;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < rows; ++c) {
    std::size_t pr = row;
    while (pr < rows && a[pr * cols + c] == 0) ++pr;
    if (pr == rows) {
      res.det = 0;
      continue;
    }
    if (pr != row) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(a[pr * cols + j], a[row * cols + j]);
      res.det = modp::neg(res.det, p);
    }
    const std::uint64_t pivot = a[row * cols + c];
    res.det = modp::mul(res.det, pivot, p);
    const std::uint64_t pinv = modp::inv(pivot, p);
    for (std::size_t r = row + 1; r < rows; ++r) {
      std::uint64_t f = a[r * cols + c];
      if (f == 0) continue;
      f = modp::mul(f, pinv, p);
      for (std::size_t j = c; j < cols; ++j) {
        a[r * cols + j] = modp::sub(a[r * cols + j], modp::mul(f, a[row * cols + j], p), p);
      }
    }
    ++row;
  }
  res.rank = row;
  if (row < rows || row < cols) res.det = 0;
  return res;
}

std::vector<std::uint64_t> residues(const Matrix& m) {
  std::vector<std::uint64_t> a;
  a.reserve(m.rows() * m.cols());
  for (const auto& e : m.entries()) a.push_back(e.residue_value());
  return a;
}

}  // namespace

Scalar det(const Matrix& m) {
  require_exact(m, "det");
  if (!m.is_square()) throw DomainError("det: matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  const Field& f = m.field();
  const std::size_t n = m.rows();
  if (n == 0) return f.one();
  if (f.is_prime_field()) {
    auto a = residues(m);
    ModResult r = gauss_modp(a, n, n, f.modulus());
    return Scalar(Residue{r.det, f.modulus()});
  }
  IntegerImage img = integer_image(m);
  BareissResult r = bareiss(img.a, n, n);
  if (r.rank < n) return f.zero();
  mpq_class d(r.last_pivot * r.sign, img.scale);
  return Scalar(std::move(d));
}

Matrix adjugate(const Matrix& m) {
  require_exact(m, "adjugate");
  if (!m.is_square()) throw DomainError("adjugate: matrix is not square");
  const std::size_t n = m.rows();
  const Field& f = m.field();
  Matrix adj(n, n, f);
  if (n == 0) return adj;
  if (n == 1) {
    adj(0, 0) = f.one();
    return adj;
  }
  std::vector<std::size_t> keep_r(n - 1), keep_c(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t t = 0, s = 0; t < n; ++t)
        if (t != i) keep_r[s++] = t;
      for (std::size_t t = 0, s = 0; t < n; ++t)
        if (t != j) keep_c[s++] = t;
      Scalar cof = det(m.submatrix(keep_r, keep_c));
      adj(j, i) = ((i + j) % 2 == 0) ? cof : -cof;
    }
  }
  return adj;
}

std::size_t rank(const Matrix& m) {
  require_exact(m, "rank");
  if (m.rows() == 0 || m.cols() == 0) return 0;
  if (m.field().is_prime_field()) {
    auto a = residues(m);
    return gauss_modp(a, m.rows(), m.cols(), m.field().modulus()).rank;
  }
  IntegerImage img = integer_image(m);
  return bareiss(img.a, m.rows(), m.cols()).rank;
}

RowEchelon rref(const Matrix& m) {
  require_exact(m, "rref");
  Matrix a = m;
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < a.cols() && row < a.rows(); ++c) {
    std::size_t pr = row;
    while (pr < a.rows() && a(pr, c).is_zero()) ++pr;
    if (pr == a.rows()) continue;
    if (pr != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(pr, j), a(row, j));
    const Scalar pinv = a(row, c).inverse();
    for (std::size_t j = c; j < a.cols(); ++j) a(row, j) *= pinv;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row || a(r, c).is_zero()) continue;
      const Scalar f = a(r, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(r, j) -= f * a(row, j);
    }
    pivots.push_back(c);
    ++row;
  }
  return {std::move(a), std::move(pivots)};
}

std::vector<std::vector<Scalar>> kernel_basis(const Matrix& m) {
  require_exact(m, "kernel_basis");
  const Field& f = m.field();
  RowEchelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<Scalar>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Scalar> v(m.cols(), f.zero());
    v[free] = f.one();
    for (std::size_t i = 0; i < e.pivot_cols.size(); ++i) v[e.pivot_cols[i]] = -e.reduced(i, free);
    if (f.is_rational()) {
      mpz_class l = 1, g = 0;
      for (const auto& s : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), s.rational_value().get_den().get_mpz_t());
      for (auto& s : v) {
        s = Scalar(mpq_class(s.rational_value() * l));
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), s.rational_value().get_num().get_mpz_t());
      }
      for (auto& s : v) s = Scalar(mpq_class(s.rational_value() / g));
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

Matrix inverse(const Matrix& m) {
  require_exact(m, "inverse");
  if (!m.is_square()) throw DomainError("inverse: matrix is not square");
  const std::size_t n = m.rows();
  Matrix aug(n, 2 * n, m.field());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
    aug(r, n + r) = m.field().one();
  }
  RowEchelon e = rref(aug);
  if (e.pivot_cols.size() < n || e.pivot_cols[n - 1] != n - 1) throw DomainError("inverse: matrix is singular");
  Matrix inv(n, n, m.field());
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = e.reduced(r, n + c);
  return inv;
}

void for_each_combination(std::size_t n, std::size_t k,
                          const std::function<bool(std::span<const std::size_t>)>& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (!fn(idx)) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<Minor> minor_values(const Matrix& m, std::size_t size) {
  require_exact(m, "minor_values");
  if (size > m.rows() || size > m.cols()) throw DomainError("minor size exceeds matrix dimensions");
  std::vector<Minor> out;
  out.reserve(binomial(m.rows(), size) * binomial(m.cols(), size));
  for_each_combination(m.rows(), size, [&](std::span<const std::size_t> rs) {
    for_each_combination(m.cols(), size, [&](std::span<const std::size_t> cs) {
      out.push_back({{rs.begin(), rs.end()}, {cs.begin(), cs.end()}, det(m.submatrix(rs, cs))});
      return true;
    });
    return true;
  });
  return out;
}

std::optional<Minor> first_nonzero_minor(const Matrix& m, std::size_t size) {
  require_exact(m, "first_nonzero_minor");
  if (size > m.rows() || size > m.cols()) throw DomainError("minor size exceeds matrix dimensions");
  std::optional<Minor> found;
  for_each_combination(m.rows(), size, [&](std::span<const std::size_t> rs) {
    for_each_combination(m.cols(), size, [&](std::span<const std::size_t> cs) {
      Scalar d = det(m.submatrix(rs, cs));
      if (d.is_zero()) return true;
      found = Minor{{rs.begin(), rs.end()}, {cs.begin(), cs.end()}, std::move(d)};
      return false;
    });
    return !found.has_value();
  });
  return found;
}

}  // namespace salmon

namespace salmon {

std::size_t modp_rank(ModpDense m) { return gauss_modp(m.a, m.rows, m.cols, m.p).rank; }

std::vector<std::vector<std::uint64_t>> modp_kernel(ModpDense m) {
  const std::uint64_t p = m.p;
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < m.cols && row < m.rows; ++c) {
    std::size_t pr = row;
    while (pr < m.rows && m(pr, c) == 0) ++pr;
    if (pr == m.rows) continue;
    if (pr != row)
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(pr, j), m(row, j));
    const std::uint64_t pinv = modp::inv(m(row, c), p);
    for (std::size_t j = c; j < m.cols; ++j) m(row, j) = modp::mul(m(row, j), pinv, p);
    for (std::size_t r = 0; r < m.rows; ++r) {
      if (r == row || m(r, c) == 0) continue;
      const std::uint64_t f = m(r, c);
      std::uint64_t* dst = &m.a[r * m.cols];
      const std::uint64_t* src = &m.a[row * m.cols];
      for (std::size_t j = c; j < m.cols; ++j) dst[j] = modp::sub(dst[j], modp::mul(f, src[j], p), p);
    }
    pivots.push_back(c);
    ++row;
  }
  std::vector<bool> is_pivot(m.cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<std::uint64_t>> basis;
  for (std::size_t free = 0; free < m.cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<std::uint64_t> v(m.cols, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = modp::neg(m(i, free), p);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace salmon
