#include "homkit/rational.hpp"

#include <algorithm>
#include <cctype>

#include "homkit/errors.hpp"

namespace homkit {

Int int_pow(const Int& base, unsigned long e) {
  Int out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

Rat rat_pow(const Rat& base, long e) {
  if (e == 0) return Rat(1);
  if (base == 0) {
    if (e < 0) throw_precondition("rat_pow: 0 raised to a negative power");
    return Rat(0);
  }
  unsigned long mag = static_cast<unsigned long>(e < 0 ? -e : e);
  Int num = int_pow(base.get_num(), mag);
  Int den = int_pow(base.get_den(), mag);
  Rat out;
  if (e > 0) {
    out = Rat(num, den);
  } else {
    out = Rat(den, num);
  }
  out.canonicalize();
  return out;
}

Rat parse_rat(const std::string& s) {
  if (s.empty()) throw_parse("empty rational literal");
  // Accept only [-]digits[/digits]; mpq_set_str is laxer than we want.
  size_t slash = s.find('/');
  auto digits_ok = [](const std::string& t, bool allow_sign) {
    if (t.empty()) return false;
    size_t i = 0;
    if (allow_sign && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!digits_ok(num, true) || !digits_ok(den, false))
    throw_parse("bad rational literal: '" + s + "'");
  Rat r;
  if (mpq_set_str(r.get_mpq_t(), (num + "/" + den).c_str(), 10) != 0)
    throw_parse("bad rational literal: '" + s + "'");
  if (r.get_den() == 0) throw_parse("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

std::string rat_to_string(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string int_to_string(const Int& n) { return n.get_str(); }

double rat_to_double(const Rat& r) { return r.get_d(); }

size_t rat_bits(const Rat& r) {
  size_t nb = mpz_sizeinbase(r.get_num().get_mpz_t(), 2);
  size_t db = mpz_sizeinbase(r.get_den().get_mpz_t(), 2);
  return std::max(nb, db);
}

}  // namespace homkit
