#include "hoopflux/polynomial.hpp"

#include <algorithm>
#include <cctype>

#include "hoopflux/error.hpp"

namespace hoopflux {

namespace {

void trim(Monomial& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

Monomial product(const Monomial& a, const Monomial& b) {
  Monomial out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

unsigned total(const Monomial& m) {
  unsigned d = 0;
  for (unsigned e : m) d += e;
  return d;
}

}  // namespace

Polynomial Polynomial::constant(const Rational& value) {
  Polynomial p;
  p.add_term({}, value);
  return p;
}

Polynomial Polynomial::variable(std::size_t index) {
  Polynomial p;
  Monomial m(index + 1, 0);
  m[index] = 1;
  p.add_term(std::move(m), 1);
  return p;
}

Polynomial Polynomial::linear(const Vector& coefficients) {
  Polynomial p;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    Monomial m(i + 1, 0);
    m[i] = 1;
    p.add_term(std::move(m), coefficients[i]);
  }
  return p;
}

bool Polynomial::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational Polynomial::constant_term() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? Rational(0) : it->second;
}

std::size_t Polynomial::variable_count() const noexcept {
  std::size_t n = 0;
  for (const auto& [m, c] : terms_) n = std::max(n, m.size());
  return n;
}

unsigned Polynomial::degree() const noexcept {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, total(m));
  return d;
}

void Polynomial::add_term(Monomial monomial, const Rational& coefficient) {
  if (coefficient == 0) return;
  trim(monomial);
  auto [it, fresh] = terms_.emplace(std::move(monomial), coefficient);
  if (!fresh) {
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial out = *this;
  for (const auto& [m, c] : o.terms_) out.add_term(m, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator-() const { return scaled(-1); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial out;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) out.add_term(product(ma, mb), ca * cb);
  }
  return out;
}

Polynomial Polynomial::scaled(const Rational& factor) const {
  Polynomial out;
  if (factor == 0) return out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, c * factor);
  return out;
}

Polynomial Polynomial::pow(unsigned exponent) const {
  Polynomial out = constant(1);
  Polynomial base = *this;
  while (exponent > 0) {
    if (exponent & 1u) out = out * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return out;
}

Polynomial derivative(const Polynomial& p, std::size_t variable) {
  Polynomial out;
  for (const auto& [m, c] : p.terms()) {
    if (variable >= m.size() || m[variable] == 0) continue;
    Monomial d = m;
    const unsigned e = d[variable]--;
    out.add_term(std::move(d), c * e);
  }
  return out;
}

Polynomial directional_derivative(const Polynomial& p, const Vector& direction) {
  Polynomial out;
  for (std::size_t i = 0; i < direction.size(); ++i) {
    if (direction[i] != 0) out = out + derivative(p, i).scaled(direction[i]);
  }
  return out;
}

Polynomial substitute(const Polynomial& p, const std::vector<Polynomial>& images) {
  if (p.variable_count() > images.size()) {
    throw Error(ErrorCode::DimensionMismatch, "polynomial uses x" + std::to_string(p.variable_count()) +
                                                  " but only " + std::to_string(images.size()) +
                                                  " substitutions were given");
  }
  Polynomial out;
  for (const auto& [m, c] : p.terms()) {
    Polynomial term = Polynomial::constant(c);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] > 0) term = term * images[i].pow(m[i]);
    }
    out = out + term;
  }
  return out;
}

Rational evaluate(const Polynomial& p, const Vector& point) {
  if (p.variable_count() > point.size()) {
    throw Error(ErrorCode::DimensionMismatch, "evaluation point has " + std::to_string(point.size()) +
                                                  " coordinates, polynomial needs " +
                                                  std::to_string(p.variable_count()));
  }
  Rational sum = 0;
  for (const auto& [m, c] : p.terms()) {
    Rational term = c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (unsigned k = 0; k < m[i]; ++k) term *= point[i];
    }
    sum += term;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  Parser(std::string_view text, const VariableResolver& resolve) : text_(text), resolve_(resolve) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::Parse, "polynomial column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    skip_space();
    if (pos_ == text_.size()) fail("expected a term");
    Polynomial sum;
    bool negative = false;
    if (accept('-')) {
      negative = true;
    } else {
      accept('+');
    }
    Polynomial t = term();
    sum = negative ? -t : t;
    for (;;) {
      if (accept('+')) {
        sum = sum + term();
      } else if (accept('-')) {
        sum = sum - term();
      } else {
        return sum;
      }
    }
  }

  Polynomial term() {
    Polynomial p = factor();
    while (accept('*')) p = p * factor();
    return p;
  }

  Polynomial factor() {
    Polynomial b = base();
    if (accept('^')) {
      skip_space();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected an exponent");
      if (pos_ - start > 4) fail("exponent too large");
      b = b.pow(static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start)))));
    }
    return b;
  }

  std::string_view digits() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '~';
  }

  Polynomial base() {
    skip_space();
    if (pos_ == text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (c == '-') {
      ++pos_;
      return -factor();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string literal(digits());
      if (pos_ < text_.size() && text_[pos_] == '/') {
        ++pos_;
        const std::string_view den = digits();
        if (den.empty()) fail("expected a denominator");
        literal += "/" + std::string(den);
      }
      return Polynomial::constant(parse_rational(literal));
    }
    if (ident_start(c)) {
      const std::size_t start = pos_;
      if (text_.substr(pos_, 3) == "x_{") {
        const std::size_t close = text_.find('}', pos_);
        if (close == std::string_view::npos) fail("unterminated x_{...}");
        pos_ = close + 1;
      } else {
        while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
      }
      const std::string_view name = text_.substr(start, pos_ - start);
      try {
        return Polynomial::variable(resolve_(name));
      } catch (const Error& e) {
        throw Error(e.code(), e.detail() + " (polynomial column " + std::to_string(start + 1) + ")");
      }
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const VariableResolver& resolve_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, const VariableResolver& resolve) {
  return Parser(text, resolve).parse();
}

Polynomial parse_polynomial(std::string_view text) {
  return parse_polynomial(text, [](std::string_view name) -> std::size_t {
    if (name.size() >= 2 && name[0] == 'x' && std::all_of(name.begin() + 1, name.end(), [](char c) {
          return std::isdigit(static_cast<unsigned char>(c));
        })) {
      const unsigned long k = std::stoul(std::string(name.substr(1)));
      if (k >= 1 && k < 100000) return k - 1;
    }
    throw Error(ErrorCode::UnknownName, "unknown variable '" + std::string(name) + "'");
  });
}

// ---------------------------------------------------------------------------
// Formatting

std::string format(const Polynomial& p, const VariableNamer& name) {
  if (p.is_zero()) return "0";
  std::vector<std::pair<Monomial, Rational>> ordered(p.terms().begin(), p.terms().end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    const unsigned da = total(a.first);
    const unsigned db = total(b.first);
    if (da != db) return da > db;
    return a.first > b.first;
  });
  std::string out;
  bool first = true;
  for (const auto& [m, c] : ordered) {
    const bool negative = c < 0;
    const Rational magnitude = negative ? Rational(-c) : c;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::vector<std::string> factors;
    if (m.empty() || magnitude != 1) factors.push_back(to_string(magnitude));
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      std::string f = name(i);
      if (m[i] > 1) f += "^" + std::to_string(m[i]);
      factors.push_back(std::move(f));
    }
    for (std::size_t k = 0; k < factors.size(); ++k) {
      if (k > 0) out += "*";
      out += factors[k];
    }
  }
  return out;
}

std::string format(const Polynomial& p) {
  return format(p, [](std::size_t i) { return "x" + std::to_string(i + 1); });
}

}  // namespace hoopflux
