#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pentagram/polyalg.hpp"
#include "pentagram/polygon.hpp"

namespace pentagram {

// Variable layout. (a,b) chart: a_i -> i, b_i -> n + i.
// Corner chart: x_i -> i, y_i -> n + i.
inline int var_a(int i, int n) { return wrap(i, n); }
inline int var_b(int i, int n) { return n + wrap(i, n); }
inline int var_x(int i, int n) { return wrap(i, n); }
inline int var_y(int i, int n) { return n + wrap(i, n); }

using SymbolicMatrix = std::array<std::array<LaurentPoly, 3>, 3>;

// N_0 N_1 ... N_{n-1} with N_j = [[0,0,1],[1,0,b_j],[0,1,a_j]].
SymbolicMatrix monodromy_matrix_symbolic(int n);

template <class T>
Mat3<T> monodromy_matrix(const ABCoords<T>& c);

// Weight of I_j under a -> s·a, b -> b/s.
int invariant_weight(int n, int j);
std::vector<int> ab_weights(int n);
std::vector<int> corner_weights(int n);

struct TraceInvariants {
  int n = 0;
  int k = 0;
  LaurentPoly F;
  std::vector<LaurentPoly> I;  // I_0 .. I_k
  std::vector<LaurentPoly> J;  // J_j = σ(I_j)
  std::vector<int> w;          // w(0) .. w(k)
};

// Trace of the monodromy graded by weight, plus the dual family. Cached per n.
const TraceInvariants& trace_invariants(int n);
inline const std::vector<LaurentPoly>& dual_invariants(int n) { return trace_invariants(n).J; }

// σ: a_i -> −b_{−i}, b_i -> −a_{−i}.
LaurentPoly sigma(const LaurentPoly& f, int n);

// T_0 .. T_k built from admissible markings of the n-cycle. Cached per n.
const std::vector<LaurentPoly>& combinatorial_invariants(int n);

// An admissible marking as a string over {a, *, b}, one symbol per vertex,
// with the number of ways to place blocks on the cycle that produce it.
// That number is 1 except for the all-star marking when 3 divides n, which
// has 3.
struct Marking {
  std::string symbols;
  int placements = 1;
};

std::vector<Marking> admissible_markings(int n);

struct CornerInvariants {
  int n = 0;
  int k = 0;
  std::vector<LaurentPoly> O;  // O_1 .. O_k
  std::vector<LaurentPoly> E;  // E_1 .. E_k
  LaurentPoly On;
  LaurentPoly En;
  std::optional<LaurentPoly> On2;  // even n: product of even-indexed x plus product of odd-indexed x
  std::optional<LaurentPoly> En2;
};

const CornerInvariants& corner_monodromy_invariants(int n);

// τ: x_i -> x_{1−i}, y_i -> y_{−i}.
LaurentPoly tau(const LaurentPoly& f, int n);

// Images of x_i, y_i in terms of (a,b): x_i = a_{i−2}/(b_{i−2}b_{i−1}), y_i = −b_{i−1}/(a_{i−2}a_{i−1}).
std::vector<LaurentPoly> corner_in_ab(int n);

// The functions whose gradients are tested for independence: O_1..O_k,
// E_1..E_k, O_n, E_n, leaving out O_{n/2}, E_{n/2} for even n.
std::vector<LaurentPoly> independence_family(int n);
int algebraic_independence_rank(int n, std::span<const Rational> point);

template <class T>
struct CornerInvariantValues {
  std::vector<T> O;
  std::vector<T> E;
  T On{};
  T En{};
  std::optional<T> On2;
  std::optional<T> En2;
};

template <class T>
struct ABInvariantValues {
  std::vector<T> I;
  std::vector<T> J;
  std::vector<int> w;
};

template <class T>
CornerInvariantValues<T> evaluate_invariants(const CornerCoords<T>& c);

template <class T>
ABInvariantValues<T> evaluate_invariants(const ABCoords<T>& c);

template <class T>
struct HilbertData {
  std::vector<T> z;
  T H{};
};

template <class T>
HilbertData<T> hilbert_data(const TwistedPolygon<T>& p);

// ΣI_j − 3, ΣJ_j − 3, Σw(j)I_j, Σw(j)J_j, Σw(j)²(I_j − J_j).
template <class T>
std::array<T, 5> closed_relations_residual(const ABCoords<T>& c, double tol = 1e-9);

}  // namespace pentagram
