#include "bfq/scalar.hpp"

#include <stdexcept>

namespace bfq {

void Scalar::prune() {
  for (auto it = c_.begin(); it != c_.end();) {
    if (it->second.is_zero()) it = c_.erase(it);
    else ++it;
  }
}

Scalar Scalar::operator-() const {
  Scalar r;
  for (auto& [k, v] : c_) r.c_[k] = -v;
  return r;
}

Scalar Scalar::operator+(const Scalar& o) const {
  Scalar r = *this;
  for (auto& [k, v] : o.c_) r.c_[k] += v;
  r.prune();
  return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
  Scalar r = *this;
  for (auto& [k, v] : o.c_) r.c_[k] -= v;
  r.prune();
  return r;
}

Scalar Scalar::operator*(const Scalar& o) const {
  Scalar r;
  for (auto& [k1, v1] : c_)
    for (auto& [k2, v2] : o.c_) r.c_[k1 + k2] += v1 * v2;
  r.prune();
  return r;
}

Scalar Scalar::operator/(const Scalar& o) const {
  if (o.c_.size() != 1) throw std::domain_error("scalar division needs a monomial divisor");
  auto [k, v] = *o.c_.begin();
  Scalar r;
  GaussianRational inv = v.inverse();
  for (auto& [k1, v1] : c_) r.c_[k1 - k] = v1 * inv;
  return r;
}

bool Scalar::operator<(const Scalar& o) const {
  auto key = [](const std::map<long long, GaussianRational>& m) {
    std::string s;
    for (auto& [k, v] : m) s += std::to_string(k) + ":" + v.str() + ";";
    return s;
  };
  return key(c_) < key(o.c_);
}

std::string Scalar::str() const {
  if (c_.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto& [k, v] : c_) {
    if (!first) s += " + ";
    first = false;
    s += "(" + v.str() + ")";
    if (k != 0) s += "*hbar^" + std::to_string(k);
  }
  return s;
}

}  // namespace bfq
