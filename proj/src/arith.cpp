#include "qlat/arith.hpp"

#include <cctype>

namespace qlat {

std::vector<Int> prime_divisors(Int n) {
  if (n == 0) throw PreconditionError("prime_divisors of zero");
  n = abs(n);
  std::vector<Int> out;
  for (Int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

Int next_prime(const Int& n) {
  Int p = n < 2 ? Int(2) : n;
  while (!is_prime(p)) ++p;
  return p;
}

std::int64_t to_i64(const Int& x, const char* what) {
  if (!x.fits_slong_p()) throw ResourceError(std::string(what) + " exceeds 64-bit range");
  return x.get_si();
}

std::string rat_to_string(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rat rat_from_string(const std::string& s) {
  auto valid_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  auto strip_plus = [](const std::string& t) { return (!t.empty() && t[0] == '+') ? t.substr(1) : t; };
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    if (!valid_int(s)) throw PreconditionError("not an integer: '" + s + "'");
    return Rat(Int(strip_plus(s)));
  }
  std::string a = s.substr(0, slash), b = s.substr(slash + 1);
  if (!valid_int(a) || !valid_int(b)) throw PreconditionError("not a rational: '" + s + "'");
  Int den(strip_plus(b));
  if (den == 0) throw PreconditionError("zero denominator in '" + s + "'");
  Rat q(Int(strip_plus(a)), den);
  q.canonicalize();
  return q;
}

std::string sqrt_decimal(const Rat& q, int digits) {
  if (q < 0) throw PreconditionError("sqrt of a negative rational");
  Int scale = ipow(10, 2 * static_cast<unsigned long>(digits));
  Int scaled = floor(q * Rat(scale));
  Int root = isqrt(scaled);
  std::string s = root.get_str();
  if (digits == 0) return s;
  if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
  s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  return s;
}

}  // namespace qlat
