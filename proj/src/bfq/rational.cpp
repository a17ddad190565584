#include "bfq/rational.hpp"

namespace bfq {

Rat rat_from_string(const std::string& s) {
  try {
    return Rat(s);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a rational: '" + s + "'");
  }
}

std::string GaussianRational::str() const {
  if (im == 0) return re.str();
  if (re == 0) return im.str() + "*i";
  std::string s = re.str();
  if (im > 0) s += "+";
  s += im.str() + "*i";
  return s;
}

GaussianRational i_power(long long k) {
  k = ((k % 4) + 4) % 4;
  switch (k) {
    case 0: return GaussianRational(Rat(1));
    case 1: return GaussianRational::i();
    case 2: return GaussianRational(Rat(-1));
    default: return GaussianRational(Rat(0), Rat(-1));
  }
}

std::pair<Int, Int> extract_square(Int n) {
  if (n <= 0) throw std::domain_error("extract_square needs n > 0");
  Int root = 1, rest = 1;
  for (Int p = 2; p * p <= n; ++p) {
    while (n % (p * p) == 0) {
      n /= p * p;
      root *= p;
    }
    if (n % p == 0) {
      n /= p;
      rest *= p;
    }
  }
  rest *= n;
  return {root, rest};
}

}  // namespace bfq
