#include "ncafem/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace ncafem {

double Polynomial::operator()(const Vec2 &p) const {
  double s = 0.0;
  for (const auto &t : terms) s += t.c * std::pow(p.x, t.i) * std::pow(p.y, t.j);
  return s;
}

Vec2 Polynomial::gradient(const Vec2 &p) const {
  Vec2 g;
  for (const auto &t : terms) {
    if (t.i > 0) g.x += t.c * t.i * std::pow(p.x, t.i - 1) * std::pow(p.y, t.j);
    if (t.j > 0) g.y += t.c * t.j * std::pow(p.x, t.i) * std::pow(p.y, t.j - 1);
  }
  return g;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto &t : terms)
    if (t.c != 0.0) d = std::max(d, t.i + t.j);
  return d;
}

bool Polynomial::is_zero() const {
  return std::all_of(terms.begin(), terms.end(), [](const Term &t) { return t.c == 0.0; });
}

Polynomial Polynomial::from_json(const nlohmann::json &j) {
  if (j.is_number()) return constant(j.get<double>());
  if (!j.is_array()) throw std::invalid_argument("polynomial must be a number or a list of [c, i, j]");
  Polynomial p;
  for (const auto &t : j) {
    if (!t.is_array() || t.size() != 3 || !t[0].is_number() || !t[1].is_number_integer() ||
        !t[2].is_number_integer() || t[1].get<int>() < 0 || t[2].get<int>() < 0)
      throw std::invalid_argument("polynomial term must be [c, i, j] with integer exponents >= 0");
    p.terms.push_back({t[0].get<double>(), t[1].get<int>(), t[2].get<int>()});
  }
  return p;
}

nlohmann::json Polynomial::to_json() const {
  if (terms.size() == 1 && terms[0].i == 0 && terms[0].j == 0) return terms[0].c;
  nlohmann::json out = nlohmann::json::array();
  for (const auto &t : terms) out.push_back({t.c, t.i, t.j});
  return out;
}

} // namespace ncafem
