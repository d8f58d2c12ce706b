#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pentagram/polyalg.hpp"

namespace pentagram {

enum class Chart { Corner, AB };

const char* chart_name(Chart c);

// Log-constant bracket {z_i, z_j} = c(i,j) z_i z_j on the 2n coordinates,
// laid out as in invariants.hpp (first n are x or a, last n are y or b).
class PoissonStructure {
 public:
  static PoissonStructure corner(int n);
  static PoissonStructure ab(int n);

  int n() const { return n_; }
  int dim() const { return 2 * n_; }
  Chart chart() const { return chart_; }
  int c(int i, int j) const { return table_[i * dim() + j]; }
  // Row i of the table as (j, c(i,j)) pairs with c nonzero.
  const std::vector<std::pair<int, int>>& row(int i) const { return rows_[i]; }

  // Copy with c(i,j) and c(j,i) negated. For mutation controls.
  PoissonStructure with_flipped_entry(int i, int j) const;

 private:
  PoissonStructure(int n, Chart chart, std::vector<int> table);
  int n_;
  Chart chart_;
  std::vector<int> table_;
  std::vector<std::vector<std::pair<int, int>>> rows_;
};

// {f, g} = Σ c(i,j) z_i z_j ∂_i f ∂_j g.
LaurentPoly bracket_poly(const LaurentPoly& f, const LaurentPoly& g, const PoissonStructure& s);

using DualExpr = std::function<DualScalar(std::span<const DualScalar>)>;

// Seeds each coordinate as an independent dual variable.
std::vector<DualScalar> dual_point(std::span<const Rational> point);

// Bracket of two functions already evaluated as dual numbers at point.
Rational bracket_of_duals(const DualScalar& f, const DualScalar& g, std::span<const Rational> point,
                          const PoissonStructure& s);

Rational bracket_at_point(const DualExpr& f, const DualExpr& g, std::span<const Rational> point,
                          const PoissonStructure& s);

// Random rational corner point with nonzero coordinates and x_i y_i != 1.
std::vector<Rational> random_corner_point(int n, std::mt19937_64& rng);

struct InvarianceReport {
  int n = 0;
  int points_checked = 0;
  int points_skipped = 0;
  long pairs_checked = 0;
  Rational max_violation;
  std::vector<Rational> counterexample;
  bool exact() const { return sgn(max_violation) == 0; }
};

// Checks {T*z_i, T*z_j} = T*{z_i, z_j} for all coordinate pairs at random
// points, where T is the map in the corner chart. The structure defaults to
// the corner bracket; pass a modified one to test the test.
InvarianceReport verify_T_invariance(int n, int trials, std::uint64_t seed);
InvarianceReport verify_T_invariance(int n, int trials, std::uint64_t seed, const PoissonStructure& s);

struct BracketCheckReport {
  int n = 0;
  int checked = 0;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

// {O_k, O_l}, {E_k, E_l}, {O_k, E_l} all vanish identically.
BracketCheckReport verify_commutation(int n);
BracketCheckReport verify_commutation(int n, const PoissonStructure& s);

// O_n, E_n (and the even-n pair) bracket to zero with every coordinate.
BracketCheckReport verify_casimirs(int n);
BracketCheckReport verify_casimirs(int n, const PoissonStructure& s);

int structure_corank(int n, Chart chart);

}  // namespace pentagram
