#pragma once

#include "ncafem/geometry.hpp"

#include <json.hpp>
#include <vector>

namespace ncafem {

/// Bivariate polynomial sum c x^i y^j.
struct Polynomial {
  struct Term {
    double c = 0.0;
    int i = 0;
    int j = 0;
  };
  std::vector<Term> terms;

  static Polynomial constant(double c) { return Polynomial{{{c, 0, 0}}}; }

  double operator()(const Vec2 &p) const;
  Vec2 gradient(const Vec2 &p) const;
  int degree() const;
  bool is_zero() const;

  /// Accepts a number or a list of [c, i, j] triples.
  static Polynomial from_json(const nlohmann::json &j);
  nlohmann::json to_json() const;
};

} // namespace ncafem
