#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace pentagram {

// Real trigonometric polynomial of period 1:
// c0 + Σ_k (cos_k cos 2πkx + sin_k sin 2πkx), k = 1..K.
class PeriodicField {
 public:
  PeriodicField() = default;
  PeriodicField(double c0, std::vector<double> cos_coef, std::vector<double> sin_coef);

  static PeriodicField constant(double c) { return PeriodicField(c, {}, {}); }
  static PeriodicField mode(int k, double cos_amp, double sin_amp);
  // Random coefficients with Gaussian amplitudes decaying like exp(-k/2), modes 1..kmax.
  static PeriodicField random_band_limited(int kmax, double amplitude, std::uint64_t seed);
  // Trigonometric interpolant of samples at x_j = j/N, N even.
  static PeriodicField from_samples(std::span<const double> samples);

  int max_mode() const { return static_cast<int>(cos_.size()); }
  double mean() const { return c0_; }

  double operator()(double x) const { return static_cast<double>(eval(x, 0)); }
  // Value of the order-th derivative at x.
  long double eval(long double x, int order = 0) const;
  PeriodicField derivative(int order = 1) const;
  std::vector<double> sample(int n) const;

  PeriodicField operator+(const PeriodicField& o) const;
  PeriodicField operator-(const PeriodicField& o) const;
  PeriodicField operator*(double s) const;

 private:
  double c0_ = 0.0;
  std::vector<double> cos_, sin_;
};

// Fields on the grid x_j = j/N of the unit circle.
struct BoussinesqState {
  int n = 0;
  std::vector<double> u;
  std::vector<double> w;
  double t = 0.0;
};

// N must be a power of two, at least 8.
BoussinesqState make_state(const PeriodicField& u, const PeriodicField& w, int n);

struct BoussinesqRhs {
  std::vector<double> du;
  std::vector<double> dw;
};

// u_t = w', w_t = -(u^2)'/6 - u'''/12 by FFT differentiation. The quadratic
// term is dealiased and the result is projected onto |k| <= N/3.
BoussinesqRhs rhs(const BoussinesqState& s);

// Classical RK4. Explicit, so dt must stay below about (1/N)^2.
BoussinesqState step(const BoussinesqState& s, double dt);

inline double default_dt(int n) { return 0.5 / (static_cast<double>(n) * n); }

struct FunctionalValue {
  double H1 = 0.0;
  double H2 = 0.0;
  double H3 = 0.0;
  double H = 0.0;
};

FunctionalValue functionals(const BoussinesqState& s);

// h = w2·w^2 + u3·u^3 + uu2·u·u''. The defaults give the Hamiltonian of the flow.
struct HamiltonianDensity {
  double w2 = 0.5;
  double u3 = -1.0 / 18.0;
  double uu2 = -1.0 / 24.0;
};

// Max-norm distance between ((δ_w H)', (δ_u H)') and rhs(s).
double hamiltonian_consistency(const BoussinesqState& s, const HamiltonianDensity& h = {});

// Coefficients of a(x, ε), b(x, ε) in powers of ε, from the canonically
// lifted curve sampled at x, x + ε, x + 2ε, x + 3ε.
struct ExpansionFit {
  std::array<double, 4> a{};
  std::array<double, 4> b{};
  int degree = 0;
  double max_residual = 0.0;  // largest misfit of the least-squares polynomial
  double max_unit_gap = 0.0;  // largest |c − 1| for the coefficient of Γ(x)
};

std::vector<double> default_eps_list();

ExpansionFit discretization_expansion(const PeriodicField& u, const PeriodicField& w, double x,
                                      std::span<const double> eps_list, int degree = 8);

// Envelope of the chords (γ(x−ε), γ(x+ε)), lifted with unit Wronskian,
// against (1 + ε²u/3)Γ + (ε²/2)Γ''. Returns the max-norm gap divided by ε³.
double curve_flow_check(const PeriodicField& u, const PeriodicField& w, double x, double eps);

struct FlowVelocity {
  double estimate = 0.0;  // limit of (u_ε(x) − u(x))/ε² as ε → 0
  double expected = 0.0;  // w'(x)
};

FlowVelocity envelope_flow_velocity(const PeriodicField& u, const PeriodicField& w, double x,
                                    std::span<const double> eps_list);

}  // namespace pentagram
