#include "salmon/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include "salmon/errors.hpp"
#include "salmon/modarith.hpp"

namespace salmon {

// ---------------------------------------------------------------- registry

std::string VarName::to_string() const {
  static constexpr const char* kPrefix[] = {"x", "u", "p", "q"};
  std::string s = kPrefix[static_cast<int>(cls)];
  const int arity = cls == VarClass::X ? 3 : 2;
  for (int t = 0; t < arity; ++t) s += "_" + std::to_string(idx[t]);
  return s;
}

VarRegistry::VarRegistry(const Layout& layout) : layout_(layout) {
  const auto& xd = layout.x_dims;
  class_offset_[0] = names_.size();
  for (int i = 1; i <= xd[0]; ++i)
    for (int j = 1; j <= xd[1]; ++j)
      for (int k = 1; k <= xd[2]; ++k) names_.push_back({VarClass::X, {i, j, k}});
  class_offset_[1] = names_.size();
  for (int j = 1; j <= layout.u_dims[0]; ++j)
    for (int i = 1; i <= layout.u_dims[1]; ++i) names_.push_back({VarClass::U, {j, i, 0}});
  class_offset_[2] = names_.size();
  for (int a = 1; a <= layout.p_dim; ++a)
    for (int b = 1; b <= layout.p_dim; ++b) names_.push_back({VarClass::P, {a, b, 0}});
  class_offset_[3] = names_.size();
  for (int a = 1; a <= layout.q_dim; ++a)
    for (int b = 1; b <= layout.q_dim; ++b) names_.push_back({VarClass::Q, {a, b, 0}});
}

RegistryPtr VarRegistry::make(const Layout& layout) {
  for (int d : layout.x_dims)
    if (d < 0 || d > 9) throw DomainError("x index range must be within 0..9");
  return RegistryPtr(new VarRegistry(layout));
}

RegistryPtr VarRegistry::tensor(int m, int n, int l) {
  Layout lay;
  lay.x_dims = {m, n, l};
  return make(lay);
}

std::size_t VarRegistry::x(int i, int j, int k) const {
  const auto& d = layout_.x_dims;
  if (i < 1 || i > d[0] || j < 1 || j > d[1] || k < 1 || k > d[2]) {
    throw DomainError("x(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) +
                      ") outside registry");
  }
  return class_offset_[0] + static_cast<std::size_t>(((i - 1) * d[1] + (j - 1)) * d[2] + (k - 1));
}

std::size_t VarRegistry::u(int j, int i) const {
  const auto& d = layout_.u_dims;
  if (j < 1 || j > d[0] || i < 1 || i > d[1]) throw DomainError("u variable outside registry");
  return class_offset_[1] + static_cast<std::size_t>((j - 1) * d[1] + (i - 1));
}

std::size_t VarRegistry::p(int a, int b) const {
  const int d = layout_.p_dim;
  if (a < 1 || a > d || b < 1 || b > d) throw DomainError("p variable outside registry");
  return class_offset_[2] + static_cast<std::size_t>((a - 1) * d + (b - 1));
}

std::size_t VarRegistry::q(int a, int b) const {
  const int d = layout_.q_dim;
  if (a < 1 || a > d || b < 1 || b > d) throw DomainError("q variable outside registry");
  return class_offset_[3] + static_cast<std::size_t>((a - 1) * d + (b - 1));
}

std::size_t VarRegistry::id(const VarName& n) const {
  switch (n.cls) {
    case VarClass::X:
      return x(n.idx[0], n.idx[1], n.idx[2]);
    case VarClass::U:
      return u(n.idx[0], n.idx[1]);
    case VarClass::P:
      return p(n.idx[0], n.idx[1]);
    case VarClass::Q:
      return q(n.idx[0], n.idx[1]);
  }
  throw DomainError("bad variable class");
}

std::optional<std::size_t> VarRegistry::lookup(std::string_view text) const {
  if (text.size() < 3) return std::nullopt;
  VarName n{};
  switch (text[0]) {
    case 'x':
      n.cls = VarClass::X;
      break;
    case 'u':
      n.cls = VarClass::U;
      break;
    case 'p':
      n.cls = VarClass::P;
      break;
    case 'q':
      n.cls = VarClass::Q;
      break;
    default:
      return std::nullopt;
  }
  const int arity = n.cls == VarClass::X ? 3 : 2;
  std::size_t pos = 1;
  for (int t = 0; t < arity; ++t) {
    if (pos >= text.size() || text[pos] != '_') return std::nullopt;
    ++pos;
    int v = 0;
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + (text[pos] - '0');
      ++pos;
    }
    if (pos == start) return std::nullopt;
    n.idx[t] = v;
  }
  if (pos != text.size()) return std::nullopt;
  try {
    return id(n);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

std::vector<std::size_t> VarRegistry::ids_of(VarClass cls) const {
  const auto c = static_cast<std::size_t>(cls);
  const std::size_t end = c + 1 < class_offset_.size() ? class_offset_[c + 1] : names_.size();
  std::vector<std::size_t> out;
  for (std::size_t i = class_offset_[c]; i < end; ++i) out.push_back(i);
  return out;
}

// ---------------------------------------------------------------- monomial

Monomial::Monomial(std::vector<VarPower> factors) : f_(std::move(factors)) {
  std::sort(f_.begin(), f_.end(), [](const VarPower& a, const VarPower& b) { return a.var < b.var; });
  std::vector<VarPower> merged;
  for (const auto& vp : f_) {
    if (vp.exp == 0) continue;
    if (!merged.empty() && merged.back().var == vp.var) {
      merged.back().exp += vp.exp;
    } else {
      merged.push_back(vp);
    }
  }
  f_ = std::move(merged);
}

Monomial Monomial::variable(std::size_t var, std::uint32_t exp) {
  Monomial m;
  if (exp > 0) m.f_.push_back({static_cast<std::uint32_t>(var), exp});
  return m;
}

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (const auto& vp : f_) d += vp.exp;
  return d;
}

std::uint32_t Monomial::exponent(std::size_t var) const {
  for (const auto& vp : f_)
    if (vp.var == var) return vp.exp;
  return 0;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.f_.reserve(f_.size() + o.f_.size());
  std::size_t i = 0, j = 0;
  while (i < f_.size() && j < o.f_.size()) {
    if (f_[i].var < o.f_[j].var) {
      r.f_.push_back(f_[i++]);
    } else if (f_[i].var > o.f_[j].var) {
      r.f_.push_back(o.f_[j++]);
    } else {
      r.f_.push_back({f_[i].var, f_[i].exp + o.f_[j].exp});
      ++i;
      ++j;
    }
  }
  while (i < f_.size()) r.f_.push_back(f_[i++]);
  while (j < o.f_.size()) r.f_.push_back(o.f_[j++]);
  return r;
}

std::optional<Monomial> Monomial::divide(const Monomial& o) const {
  Monomial r;
  std::size_t i = 0;
  for (const auto& d : o.f_) {
    while (i < f_.size() && f_[i].var < d.var) r.f_.push_back(f_[i++]);
    if (i == f_.size() || f_[i].var != d.var || f_[i].exp < d.exp) return std::nullopt;
    if (f_[i].exp > d.exp) r.f_.push_back({d.var, f_[i].exp - d.exp});
    ++i;
  }
  while (i < f_.size()) r.f_.push_back(f_[i++]);
  return r;
}

std::size_t Monomial::hash() const {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (const auto& vp : f_) {
    h ^= (static_cast<std::size_t>(vp.var) << 8) ^ vp.exp;
    h *= 0x100000001b3ULL;
  }
  return h;
}

bool grlex_less(const Monomial& a, const Monomial& b) {
  const unsigned da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  auto fa = a.factors(), fb = b.factors();
  const std::size_t n = std::min(fa.size(), fb.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (fa[i].var != fb[i].var) return fa[i].var > fb[i].var;  // b has the smaller variable
    if (fa[i].exp != fb[i].exp) return fa[i].exp < fb[i].exp;
  }
  return fa.size() < fb.size();
}

// ---------------------------------------------------------------- builder

void PolyBuilder::add(const Monomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = acc_.try_emplace(m, c);
  if (!inserted) it->second += c;
}

void PolyBuilder::add(Monomial&& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = acc_.try_emplace(std::move(m), c);
  if (!inserted) it->second += c;
}

void PolyBuilder::add_product(const Scalar& coeff, const Monomial& mono, const MultiPoly& p) {
  for (const auto& t : p.terms()) add(mono * t.mono, coeff * t.coeff);
}

MultiPoly PolyBuilder::build() && {
  MultiPoly out(reg_, field_);
  out.terms_.reserve(acc_.size());
  for (auto& [m, c] : acc_) {
    if (!c.is_zero()) out.terms_.push_back({m, std::move(c)});
  }
  std::sort(out.terms_.begin(), out.terms_.end(),
            [](const Term& a, const Term& b) { return grlex_less(b.mono, a.mono); });
  acc_.clear();
  return out;
}

// ---------------------------------------------------------------- polynomial

MultiPoly MultiPoly::constant(RegistryPtr reg, const Scalar& c) {
  MultiPoly p(std::move(reg), c.field());
  if (!c.is_zero()) p.terms_.push_back({Monomial(), c});
  return p;
}

MultiPoly MultiPoly::variable(RegistryPtr reg, std::size_t var, const Field& field) {
  if (var >= reg->size()) throw DomainError("variable id outside registry");
  MultiPoly p(std::move(reg), field);
  p.terms_.push_back({Monomial::variable(var), field.one()});
  return p;
}

MultiPoly MultiPoly::from_terms(RegistryPtr reg, Field field, std::vector<Term> terms) {
  PolyBuilder b(reg, field);
  for (auto& t : terms) {
    if (t.coeff.field() != field) throw ModeMismatch("term coefficient in " + t.coeff.field().name());
    b.add(std::move(t.mono), t.coeff);
  }
  return std::move(b).build();
}

int MultiPoly::degree() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, static_cast<int>(t.mono.degree()));
  return d;
}

bool MultiPoly::is_homogeneous() const {
  if (terms_.empty()) return true;
  const unsigned d = terms_.front().mono.degree();
  return std::all_of(terms_.begin(), terms_.end(), [d](const Term& t) { return t.mono.degree() == d; });
}

std::vector<std::size_t> MultiPoly::variables() const {
  std::set<std::size_t> s;
  for (const auto& t : terms_)
    for (const auto& vp : t.mono.factors()) s.insert(vp.var);
  return {s.begin(), s.end()};
}

void MultiPoly::require_compatible(const MultiPoly& o) const {
  if (!(*reg_ == *o.reg_)) throw DomainError("polynomials over different variable registries");
  if (field_ != o.field_) throw ModeMismatch("polynomial field mismatch: " + field_.name() + " vs " + o.field_.name());
}

namespace {

template <typename Combine>
std::vector<Term> merge_terms(std::span<const Term> a, std::span<const Term> b, Combine combine, bool negate_b) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && grlex_less(b[j].mono, a[i].mono))) {
      out.push_back(a[i++]);
    } else if (i == a.size() || grlex_less(a[i].mono, b[j].mono)) {
      out.push_back({b[j].mono, negate_b ? -b[j].coeff : b[j].coeff});
      ++j;
    } else {
      Scalar c = combine(a[i].coeff, b[j].coeff);
      if (!c.is_zero()) out.push_back({a[i].mono, std::move(c)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  require_compatible(o);
  MultiPoly r(reg_, field_);
  r.terms_ = merge_terms(terms_, o.terms_, [](const Scalar& x, const Scalar& y) { return x + y; }, false);
  return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const {
  require_compatible(o);
  MultiPoly r(reg_, field_);
  r.terms_ = merge_terms(terms_, o.terms_, [](const Scalar& x, const Scalar& y) { return x - y; }, true);
  return r;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  require_compatible(o);
  if (terms_.empty() || o.terms_.empty()) return MultiPoly(reg_, field_);
  PolyBuilder b(reg_, field_);
  for (const auto& t : terms_)
    for (const auto& s : o.terms_) b.add(t.mono * s.mono, t.coeff * s.coeff);
  return std::move(b).build();
}

MultiPoly MultiPoly::operator*(const Scalar& s) const {
  if (s.field() != field_) throw ModeMismatch("scalar field mismatch in polynomial scaling");
  MultiPoly r(reg_, field_);
  if (s.is_zero()) return r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({t.mono, t.coeff * s});
  return r;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r(*this);
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

bool MultiPoly::operator==(const MultiPoly& o) const {
  if (!(*reg_ == *o.reg_) || field_ != o.field_ || terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!(terms_[i].mono == o.terms_[i].mono) || terms_[i].coeff != o.terms_[i].coeff) return false;
  }
  return true;
}

MultiPoly MultiPoly::substitute_zero(std::span<const std::size_t> vars) const {
  MultiPoly r(reg_, field_);
  for (const auto& t : terms_) {
    bool killed = false;
    for (auto v : vars) {
      if (t.mono.exponent(v) > 0) {
        killed = true;
        break;
      }
    }
    if (!killed) r.terms_.push_back(t);
  }
  return r;
}

MultiPoly MultiPoly::derivative(std::size_t var) const {
  PolyBuilder b(reg_, field_);
  for (const auto& t : terms_) {
    const std::uint32_t e = t.mono.exponent(var);
    if (e == 0) continue;
    b.add(*t.mono.divide(Monomial::variable(var)), t.coeff * field_.from_int(e));
  }
  return std::move(b).build();
}

MultiPoly MultiPoly::convert(const Field& target) const {
  if (target == field_) return *this;
  MultiPoly r(reg_, target);
  for (const auto& t : terms_) {
    Scalar c = convert_scalar(t.coeff, target);
    if (!c.is_zero()) r.terms_.push_back({t.mono, std::move(c)});
  }
  return r;
}

double MultiPoly::coeff_l1() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::fabs(t.coeff.to_double());
  return s;
}

Scalar MultiPoly::eval(std::span<const Scalar> values) const {
  Scalar acc = field_.zero();
  for (const auto& t : terms_) {
    Scalar v = t.coeff;
    for (const auto& vp : t.mono.factors()) {
      if (vp.var >= values.size()) throw DomainError("evaluation point does not cover " + reg_->name(vp.var).to_string());
      v *= vp.exp == 1 ? values[vp.var] : values[vp.var].pow(vp.exp);
    }
    acc += v;
  }
  return acc;
}

namespace {

std::string coeff_text(const Scalar& c, bool& negative) {
  if (c.kind() == ScalarKind::PrimeField) {
    const std::uint64_t p = c.field().modulus();
    const std::uint64_t v = c.residue_value();
    negative = v > p / 2;
    return std::to_string(negative ? p - v : v);
  }
  if (c.kind() == ScalarKind::Rational) {
    negative = sgn(c.rational_value()) < 0;
    return mpq_class(abs(c.rational_value())).get_str();
  }
  negative = c.float_value() < 0;
  return Scalar(std::fabs(c.float_value())).to_string();
}

}  // namespace

std::string MultiPoly::to_text() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : terms_) {
    bool negative = false;
    std::string c = coeff_text(t.coeff, negative);
    if (first) {
      out += negative ? "-" : "";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    out += c;
    for (const auto& vp : t.mono.factors()) {
      out += "*" + reg_->name(vp.var).to_string();
      if (vp.exp > 1) out += "^" + std::to_string(vp.exp);
    }
  }
  return out;
}

// ---------------------------------------------------------------- free functions

MultiPoly poly_div_exact(const MultiPoly& f, const MultiPoly& g) {
  if (g.is_zero()) throw DomainError("division by the zero polynomial");
  if (!(*f.registry() == *g.registry())) throw DomainError("polynomials over different variable registries");
  if (f.field() != g.field()) throw ModeMismatch("polynomial field mismatch in division");
  std::map<Monomial, Scalar, GrlexLess> rem;
  for (const auto& t : f.terms()) rem.emplace(t.mono, t.coeff);
  const Term& lg = g.leading_term();
  PolyBuilder quotient(f.registry(), f.field());
  while (!rem.empty()) {
    auto top = std::prev(rem.end());
    auto t = top->first.divide(lg.mono);
    if (!t) throw NotDivisible("divisor leading term does not divide the remainder; polynomial is not divisible");
    const Scalar c = top->second / lg.coeff;
    for (const auto& s : g.terms()) {
      Monomial m = *t * s.mono;
      auto it = rem.find(m);
      Scalar delta = c * s.coeff;
      if (it == rem.end()) {
        rem.emplace(std::move(m), -delta);
      } else {
        it->second -= delta;
        if (it->second.is_zero()) rem.erase(it);
      }
    }
    quotient.add(std::move(*t), c);
  }
  return std::move(quotient).build();
}

std::map<Monomial, MultiPoly, GrlexLess> poly_extract_coeffs(const MultiPoly& f,
                                                             std::span<const std::size_t> vars) {
  std::vector<bool> selected(f.registry()->size(), false);
  for (auto v : vars) {
    if (v >= selected.size()) throw DomainError("extraction variable outside registry");
    selected[v] = true;
  }
  std::map<Monomial, std::vector<Term>, GrlexLess> groups;
  for (const auto& t : f.terms()) {
    std::vector<VarPower> inside, outside;
    for (const auto& vp : t.mono.factors()) (selected[vp.var] ? inside : outside).push_back(vp);
    groups[Monomial(std::move(inside))].push_back({Monomial(std::move(outside)), t.coeff});
  }
  std::map<Monomial, MultiPoly, GrlexLess> out;
  for (auto& [m, terms] : groups) {
    out.emplace(m, MultiPoly::from_terms(f.registry(), f.field(), std::move(terms)));
  }
  return out;
}

Scalar poly_eval(const MultiPoly& f, const std::map<std::size_t, Scalar>& assignment) {
  std::vector<Scalar> dense(f.registry()->size(), f.field().zero());
  for (auto v : f.variables()) {
    auto it = assignment.find(v);
    if (it == assignment.end()) throw DomainError("no value for variable " + f.registry()->name(v).to_string());
    dense[v] = it->second;
  }
  return f.eval(dense);
}

namespace {

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

}  // namespace

MultiPoly parse_poly(std::string_view line, const RegistryPtr& reg, const Field& field) {
  const std::string s = strip_spaces(line);
  if (s.empty()) throw ParseError("empty polynomial line");
  PolyBuilder b(reg, field);
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) {
    throw ParseError(why + " at column " + std::to_string(pos) + " in '" + s + "'");
  };
  bool first = true;
  while (pos < s.size()) {
    bool negative = false;
    if (s[pos] == '+' || s[pos] == '-') {
      negative = s[pos] == '-';
      ++pos;
    } else if (!first) {
      fail("expected '+' or '-'");
    }
    first = false;
    Scalar coeff = field.one();
    std::vector<VarPower> factors;
    bool have_factor = false;
    bool expect_variable = true;
    if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      std::size_t start = pos;
      while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/')) ++pos;
      coeff = field.parse(std::string_view(s).substr(start, pos - start));
      have_factor = true;
      expect_variable = pos < s.size() && s[pos] == '*';
      if (expect_variable) ++pos;
    }
    while (expect_variable) {
      std::size_t start = pos;
      while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
      if (pos == start) fail("expected a variable");
      auto name = std::string_view(s).substr(start, pos - start);
      auto id = reg->lookup(name);
      if (!id) fail("unknown variable '" + std::string(name) + "'");
      std::uint32_t e = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        std::size_t es = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == es) fail("expected an exponent");
        e = static_cast<std::uint32_t>(std::stoul(s.substr(es, pos - es)));
      }
      factors.push_back({static_cast<std::uint32_t>(*id), e});
      have_factor = true;
      expect_variable = pos < s.size() && s[pos] == '*';
      if (expect_variable) ++pos;
    }
    if (!have_factor) fail("empty term");
    b.add(Monomial(std::move(factors)), negative ? -coeff : coeff);
  }
  return std::move(b).build();
}

std::vector<MultiPoly> parse_poly_file(std::string_view text, const RegistryPtr& reg, const Field& field) {
  std::vector<MultiPoly> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      try {
        out.push_back(parse_poly(line, reg, field));
      } catch (const ParseError& e) {
        throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    start = end + 1;
  }
  return out;
}

std::string format_poly_file(std::span<const MultiPoly> polys, std::span<const std::string> header) {
  std::ostringstream os;
  for (const auto& h : header) os << "# " << h << "\n";
  for (const auto& p : polys) os << p.to_text() << "\n";
  return os.str();
}

ModpEvaluator::ModpEvaluator(const MultiPoly& f, std::uint64_t p) : p_(p) {
  const Field target = Field::prime(p);
  coeffs_.reserve(f.term_count());
  offsets_.push_back(0);
  for (const auto& t : f.terms()) {
    coeffs_.push_back(convert_scalar(t.coeff, target).residue_value());
    for (const auto& vp : t.mono.factors())
      for (std::uint32_t e = 0; e < vp.exp; ++e) vars_.push_back(vp.var);
    offsets_.push_back(static_cast<std::uint32_t>(vars_.size()));
  }
}

std::uint64_t ModpEvaluator::operator()(std::span<const std::uint64_t> values) const {
  std::uint64_t acc = 0;
  for (std::size_t t = 0; t < coeffs_.size(); ++t) {
    std::uint64_t v = coeffs_[t];
    for (std::uint32_t i = offsets_[t]; i < offsets_[t + 1]; ++i) v = modp::mul(v, values[vars_[i]], p_);
    acc = modp::add(acc, v, p_);
  }
  return acc;
}

}  // namespace salmon
