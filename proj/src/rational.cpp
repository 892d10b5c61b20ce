#include "hoopflux/rational.hpp"

#include <cctype>

#include "hoopflux/error.hpp"

namespace hoopflux {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    throw Error(ErrorCode::Parse, "malformed rational literal '" + std::string(text) + "'");
  }
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) {
    throw Error(ErrorCode::Parse, "zero denominator in '" + std::string(text) + "'");
  }
  if (negative) n = -n;
  Rational value(n, d);
  value.canonicalize();
  return value;
}

std::string to_string(const Rational& value) { return value.get_str(); }

bool is_integer(const Rational& value) { return value.get_den() == 1; }

}  // namespace hoopflux
