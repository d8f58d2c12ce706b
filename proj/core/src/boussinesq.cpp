#include "pentagram/boussinesq.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>

#include "pentagram/errors.hpp"

namespace pentagram {

namespace {

constexpr long double kTwoPi = 2.0L * std::numbers::pi_v<long double>;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// FFTW planning and plan destruction are not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

// ---------------------------------------------------------------- PeriodicField

PeriodicField::PeriodicField(double c0, std::vector<double> cos_coef, std::vector<double> sin_coef)
    : c0_(c0), cos_(std::move(cos_coef)), sin_(std::move(sin_coef)) {
  std::size_t k = std::max(cos_.size(), sin_.size());
  cos_.resize(k, 0.0);
  sin_.resize(k, 0.0);
}

PeriodicField PeriodicField::mode(int k, double cos_amp, double sin_amp) {
  if (k < 0) throw Error(Errc::InvalidParameters, "negative mode");
  if (k == 0) return constant(cos_amp);
  std::vector<double> c(k, 0.0), s(k, 0.0);
  c[k - 1] = cos_amp;
  s[k - 1] = sin_amp;
  return PeriodicField(0.0, std::move(c), std::move(s));
}

PeriodicField PeriodicField::random_band_limited(int kmax, double amplitude, std::uint64_t seed) {
  if (kmax < 1) throw Error(Errc::InvalidParameters, "kmax must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> c(kmax), s(kmax);
  for (int k = 1; k <= kmax; ++k) {
    double damp = amplitude * std::exp(-0.5 * k);
    c[k - 1] = damp * g(rng);
    s[k - 1] = damp * g(rng);
  }
  return PeriodicField(0.0, std::move(c), std::move(s));
}

PeriodicField PeriodicField::from_samples(std::span<const double> samples) {
  int n = static_cast<int>(samples.size());
  if (n < 2 || n % 2) throw Error(Errc::InvalidParameters, "sample count must be even");
  std::vector<std::complex<double>> spec(n / 2 + 1);
  std::vector<double> in(samples.begin(), samples.end());
  std::lock_guard lock(fftw_planner_mutex());
  fftw_plan p = fftw_plan_dft_r2c_1d(n, in.data(), reinterpret_cast<fftw_complex*>(spec.data()), FFTW_ESTIMATE);
  fftw_execute(p);
  fftw_destroy_plan(p);
  std::vector<double> c(n / 2, 0.0), s(n / 2, 0.0);
  for (int k = 1; k < n / 2; ++k) {
    c[k - 1] = 2.0 * spec[k].real() / n;
    s[k - 1] = -2.0 * spec[k].imag() / n;
  }
  c[n / 2 - 1] = spec[n / 2].real() / n;
  return PeriodicField(spec[0].real() / n, std::move(c), std::move(s));
}

long double PeriodicField::eval(long double x, int order) const {
  long double r = order == 0 ? c0_ : 0.0L;
  for (std::size_t i = 0; i < cos_.size(); ++i) {
    long double om = kTwoPi * static_cast<long double>(i + 1);
    long double ph = om * x;
    long double c = std::cos(ph), s = std::sin(ph);
    // d^m/dx^m of (A cos + B sin) cycles through four phases
    long double A = cos_[i], B = sin_[i];
    long double f = std::pow(om, order);
    switch (order % 4) {
      case 0: r += f * (A * c + B * s); break;
      case 1: r += f * (-A * s + B * c); break;
      case 2: r += f * (-A * c - B * s); break;
      default: r += f * (A * s - B * c); break;
    }
  }
  return r;
}

PeriodicField PeriodicField::derivative(int order) const {
  if (order < 0) throw Error(Errc::InvalidParameters, "negative derivative order");
  std::vector<double> c(cos_.size()), s(sin_.size());
  for (std::size_t i = 0; i < cos_.size(); ++i) {
    double om = 2.0 * std::numbers::pi * static_cast<double>(i + 1);
    double f = std::pow(om, order);
    double A = cos_[i], B = sin_[i];
    switch (order % 4) {
      case 0: c[i] = f * A; s[i] = f * B; break;
      case 1: c[i] = f * B; s[i] = -f * A; break;
      case 2: c[i] = -f * A; s[i] = -f * B; break;
      default: c[i] = -f * B; s[i] = f * A; break;
    }
  }
  return PeriodicField(order == 0 ? c0_ : 0.0, std::move(c), std::move(s));
}

std::vector<double> PeriodicField::sample(int n) const {
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) out[j] = static_cast<double>(eval(static_cast<long double>(j) / n));
  return out;
}

PeriodicField PeriodicField::operator+(const PeriodicField& o) const {
  std::size_t k = std::max(cos_.size(), o.cos_.size());
  std::vector<double> c(k, 0.0), s(k, 0.0);
  for (std::size_t i = 0; i < cos_.size(); ++i) c[i] += cos_[i], s[i] += sin_[i];
  for (std::size_t i = 0; i < o.cos_.size(); ++i) c[i] += o.cos_[i], s[i] += o.sin_[i];
  return PeriodicField(c0_ + o.c0_, std::move(c), std::move(s));
}

PeriodicField PeriodicField::operator*(double f) const {
  std::vector<double> c = cos_, s = sin_;
  for (auto& v : c) v *= f;
  for (auto& v : s) v *= f;
  return PeriodicField(c0_ * f, std::move(c), std::move(s));
}

PeriodicField PeriodicField::operator-(const PeriodicField& o) const { return *this + o * -1.0; }

// -------------------------------------------------------------- spectral ops

namespace {

// FFTW plans for one grid size, kept per thread.
class Spectral {
 public:
  explicit Spectral(int n) : n_(n), kmax_((n - 1) / 3) {
    real_ = fftw_alloc_real(n);
    spec_ = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard lock(fftw_planner_mutex());
    fwd_ = fftw_plan_dft_r2c_1d(n, real_, spec_, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_1d(n, spec_, real_, FFTW_ESTIMATE);
  }
  ~Spectral() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(real_);
    fftw_free(spec_);
  }
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  static Spectral& get(int n) {
    thread_local std::map<int, std::unique_ptr<Spectral>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Spectral>(n);
    return *slot;
  }

  using Spectrum = std::vector<std::complex<double>>;

  Spectrum forward(const std::vector<double>& f) {
    std::copy(f.begin(), f.end(), real_);
    fftw_execute(fwd_);
    Spectrum s(n_ / 2 + 1);
    for (int k = 0; k <= n_ / 2; ++k) s[k] = {spec_[k][0] / n_, spec_[k][1] / n_};
    return s;
  }

  std::vector<double> backward(const Spectrum& s) {
    for (int k = 0; k <= n_ / 2; ++k) {
      bool keep = k <= kmax_;
      spec_[k][0] = keep ? s[k].real() : 0.0;
      spec_[k][1] = keep ? s[k].imag() : 0.0;
    }
    fftw_execute(bwd_);
    return std::vector<double>(real_, real_ + n_);
  }

  // (ik·2π)^order applied to a spectrum.
  Spectrum diff(Spectrum s, int order) const {
    for (int k = 0; k <= n_ / 2; ++k) {
      std::complex<double> f = std::pow(std::complex<double>(0.0, 2.0 * std::numbers::pi * k), order);
      s[k] *= f;
    }
    return s;
  }

  std::vector<double> derivative(const std::vector<double>& f, int order) { return backward(diff(forward(f), order)); }

  // Band-limited product: the grid product is exact for modes up to N/3.
  Spectrum product(const std::vector<double>& f, const std::vector<double>& g) {
    std::vector<double> h(n_);
    for (int j = 0; j < n_; ++j) h[j] = f[j] * g[j];
    return forward(h);
  }

 private:
  int n_, kmax_;
  double* real_;
  fftw_complex* spec_;
  fftw_plan fwd_, bwd_;
};

void require_finite(const std::vector<double>& f, const char* what) {
  for (std::size_t j = 0; j < f.size(); ++j)
    if (!std::isfinite(f[j])) throw Error(Errc::NonFinite, static_cast<int>(j), what);
}

void check_state(const BoussinesqState& s) {
  if (!is_power_of_two(s.n) || s.n < 8) throw Error(Errc::InvalidParameters, "grid size must be a power of two >= 8");
  if (static_cast<int>(s.u.size()) != s.n || static_cast<int>(s.w.size()) != s.n)
    throw Error(Errc::InvalidParameters, "field length does not match grid size");
}

}  // namespace

// ------------------------------------------------------------------ evolution

BoussinesqState make_state(const PeriodicField& u, const PeriodicField& w, int n) {
  BoussinesqState s;
  s.n = n;
  s.u = u.sample(n);
  s.w = w.sample(n);
  check_state(s);
  return s;
}

BoussinesqRhs rhs(const BoussinesqState& s) {
  check_state(s);
  require_finite(s.u, "u");
  require_finite(s.w, "w");
  Spectral& sp = Spectral::get(s.n);
  auto uh = sp.forward(s.u);
  auto wh = sp.forward(s.w);
  auto u2 = sp.diff(sp.product(s.u, s.u), 1);
  auto u3 = sp.diff(uh, 3);
  Spectral::Spectrum dw(uh.size());
  for (std::size_t k = 0; k < dw.size(); ++k) dw[k] = -u2[k] / 6.0 - u3[k] / 12.0;
  return {sp.backward(sp.diff(wh, 1)), sp.backward(dw)};
}

BoussinesqState step(const BoussinesqState& s, double dt) {
  auto axpy = [&](const BoussinesqState& base, const BoussinesqRhs& k, double h) {
    BoussinesqState r = base;
    for (int j = 0; j < base.n; ++j) {
      r.u[j] += h * k.du[j];
      r.w[j] += h * k.dw[j];
    }
    return r;
  };
  BoussinesqRhs k1 = rhs(s);
  BoussinesqRhs k2 = rhs(axpy(s, k1, dt / 2));
  BoussinesqRhs k3 = rhs(axpy(s, k2, dt / 2));
  BoussinesqRhs k4 = rhs(axpy(s, k3, dt));
  BoussinesqState r = s;
  for (int j = 0; j < s.n; ++j) {
    r.u[j] += dt / 6 * (k1.du[j] + 2 * k2.du[j] + 2 * k3.du[j] + k4.du[j]);
    r.w[j] += dt / 6 * (k1.dw[j] + 2 * k2.dw[j] + 2 * k3.dw[j] + k4.dw[j]);
  }
  r.t = s.t + dt;
  for (int j = 0; j < s.n; ++j) {
    if (!std::isfinite(r.u[j]) || !std::isfinite(r.w[j]) || std::abs(r.u[j]) > 1e8 || std::abs(r.w[j]) > 1e8)
      throw Error(Errc::Instability, j, "field blowup at t = " + std::to_string(r.t));
  }
  return r;
}

FunctionalValue functionals(const BoussinesqState& s) {
  check_state(s);
  Spectral& sp = Spectral::get(s.n);
  std::vector<double> upp = sp.derivative(s.u, 2);
  FunctionalValue f;
  for (int j = 0; j < s.n; ++j) {
    double u = s.u[j], w = s.w[j];
    f.H1 += u;
    f.H2 += w;
    f.H3 += u * w;
    f.H += w * w / 2 - u * u * u / 18 - u * upp[j] / 24;
  }
  double h = 1.0 / s.n;
  f.H1 *= h;
  f.H2 *= h;
  f.H3 *= h;
  f.H *= h;
  return f;
}

double hamiltonian_consistency(const BoussinesqState& s, const HamiltonianDensity& h) {
  BoussinesqRhs r = rhs(s);
  Spectral& sp = Spectral::get(s.n);
  // Euler-Lagrange: δ_w = 2 w2 w, δ_u = 3 u3 u² + uu2 u'' + (uu2 u)''.
  auto uh = sp.forward(s.u);
  auto u2 = sp.product(s.u, s.u);
  auto wh = sp.forward(s.w);
  auto upp = sp.diff(uh, 2);
  Spectral::Spectrum du(uh.size()), dw(uh.size());
  for (std::size_t k = 0; k < uh.size(); ++k) {
    du[k] = 2.0 * h.w2 * wh[k];
    dw[k] = 3.0 * h.u3 * u2[k] + 2.0 * h.uu2 * upp[k];
  }
  std::vector<double> pu = sp.backward(sp.diff(du, 1));
  std::vector<double> pw = sp.backward(sp.diff(dw, 1));
  double m = 0.0;
  for (int j = 0; j < s.n; ++j) {
    m = std::max(m, std::abs(pu[j] - r.du[j]));
    m = std::max(m, std::abs(pw[j] - r.dw[j]));
  }
  return m;
}

// --------------------------------------------------------- lifted curve ODE

namespace {

using Frame = std::array<long double, 9>;  // Γ, Γ', Γ'' as three columns of three

struct LiftOde {
  const PeriodicField& u;
  const PeriodicField& v;
  void operator()(const Frame& f, Frame& df, long double x) const {
    long double uu = u.eval(x), vv = v.eval(x);
    for (int i = 0; i < 3; ++i) {
      df[i] = f[3 + i];
      df[3 + i] = f[6 + i];
      df[6 + i] = -uu * f[3 + i] - vv * f[i];
    }
  }
};

// Frames at the requested points, starting from the identity frame at 0,
// which has unit Wronskian.
std::vector<Frame> lift_frames(const PeriodicField& u, const PeriodicField& v, const std::vector<long double>& xs) {
  namespace ode = boost::numeric::odeint;
  std::vector<std::size_t> order(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<long double> times;
  times.reserve(xs.size() + 1);
  times.push_back(0.0L);
  for (std::size_t i : order) {
    if (xs[i] < 0) throw Error(Errc::InvalidParameters, "lift requested at negative x");
    times.push_back(xs[i]);
  }
  Frame f{};
  f[0] = f[4] = f[8] = 1.0L;
  std::vector<Frame> seen;
  seen.reserve(times.size());
  auto stepper = ode::make_controlled(1e-18L, 1e-18L, ode::runge_kutta_fehlberg78<Frame, long double>());
  ode::integrate_times(stepper, LiftOde{u, v}, f, times.begin(), times.end(), 1e-3L,
                       [&](const Frame& s, long double) { seen.push_back(s); });
  std::vector<Frame> out(xs.size());
  for (std::size_t j = 0; j < order.size(); ++j) out[order[j]] = seen[j + 1];
  return out;
}

using V3 = std::array<long double, 3>;

V3 column(const Frame& f, int c) { return {f[3 * c], f[3 * c + 1], f[3 * c + 2]}; }

long double det3l(const V3& a, const V3& b, const V3& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
}

// log|t| for the per-point scale making every det(V(y), V(y+ε), V(y+2ε)) = 1,
// with V = tΓ. Solved mode by mode on a periodic grid.
struct LiftScale {
  long double mean = 0;
  std::vector<std::complex<long double>> modes;  // k = 1..K
  long double sign = 1;

  long double log_abs(long double x) const {
    long double r = mean;
    for (std::size_t k = 1; k <= modes.size(); ++k) {
      std::complex<long double> e = std::polar(1.0L, kTwoPi * static_cast<long double>(k) * x);
      r += 2.0L * (modes[k - 1] * e).real();
    }
    return r;
  }
};

LiftScale solve_lift_scale(const PeriodicField& u, const PeriodicField& v, long double eps, int grid) {
  std::vector<long double> xs;
  xs.reserve(3 * grid);
  for (int m = 0; m < grid; ++m)
    for (int j = 0; j < 3; ++j) xs.push_back(static_cast<long double>(m) / grid + j * eps);
  std::vector<Frame> fr = lift_frames(u, v, xs);
  std::vector<long double> r(grid);
  long double sign = 0;
  for (int m = 0; m < grid; ++m) {
    long double d = det3l(column(fr[3 * m], 0), column(fr[3 * m + 1], 0), column(fr[3 * m + 2], 0));
    long double sg = d > 0 ? 1 : -1;
    if (m == 0) sign = sg;
    if (sg != sign || d == 0) throw Error(Errc::IllConditionedFit, "sample determinant changes sign");
    r[m] = -std::log(std::abs(d));
  }
  LiftScale ls;
  ls.sign = sign;
  int kmax = grid / 2 - 1;
  ls.modes.resize(kmax);
  for (int k = 0; k <= kmax; ++k) {
    std::complex<long double> rk = 0;
    for (int m = 0; m < grid; ++m) rk += r[m] * std::polar(1.0L, -kTwoPi * k * m / grid);
    rk /= static_cast<long double>(grid);
    std::complex<long double> om = std::polar(1.0L, kTwoPi * k * eps);
    std::complex<long double> den = 1.0L + om + om * om;
    std::complex<long double> lk = std::abs(den) < 1e-9L ? 0.0L : rk / den;
    if (k == 0) ls.mean = lk.real();
    else ls.modes[k - 1] = lk;
  }
  return ls;
}

void fit_series(std::span<const double> eps, const std::vector<long double>& ys, int degree, std::array<double, 4>& coef,
                double& residual) {
  int m = static_cast<int>(eps.size());
  if (m < degree + 1) throw Error(Errc::IllConditionedFit, "fewer samples than unknowns");
  double emax = *std::max_element(eps.begin(), eps.end());
  Eigen::MatrixXd A(m, degree + 1);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    double s = eps[i] / emax;
    for (int d = 0; d <= degree; ++d) A(i, d) = std::pow(s, d);
    y(i) = static_cast<double>(ys[i]);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-12 * sv(0)) throw Error(Errc::IllConditionedFit, "singular design matrix");
  Eigen::VectorXd c = svd.solve(y);
  residual = std::max(residual, (A * c - y).cwiseAbs().maxCoeff());
  for (int d = 0; d < 4; ++d) coef[d] = d <= degree ? c(d) / std::pow(emax, d) : 0.0;
}

}  // namespace

std::vector<double> default_eps_list() {
  std::vector<double> e;
  for (int i = 0; i < 21; ++i) e.push_back(0.005 + 0.0025 * i);
  return e;
}

ExpansionFit discretization_expansion(const PeriodicField& u, const PeriodicField& w, double x,
                                      std::span<const double> eps_list, int degree) {
  if (degree < 3) throw Error(Errc::InvalidParameters, "fit degree must be at least 3");
  for (double e : eps_list)
    if (!(e > 0.0 && e < 0.25)) throw Error(Errc::InvalidParameters, "eps out of range");
  PeriodicField v = w + u.derivative(1) * 0.5;
  long double x0 = x - std::floor(x);
  int grid = 64;
  while (grid / 3 < 2 * std::max(u.max_mode(), v.max_mode()) + 8) grid *= 2;

  ExpansionFit fit;
  fit.degree = degree;
  std::vector<long double> as, bs;
  for (double eps : eps_list) {
    LiftScale ls = solve_lift_scale(u, v, eps, grid);
    std::vector<long double> xs{x0, x0 + eps, x0 + 2 * eps, x0 + 3 * eps};
    std::vector<Frame> fr = lift_frames(u, v, xs);
    std::array<V3, 4> V;
    for (int j = 0; j < 4; ++j) {
      long double t = ls.sign * std::exp(ls.log_abs(xs[j]));
      V3 g = column(fr[j], 0);
      for (int i = 0; i < 3; ++i) V[j][i] = t * g[i];
    }
    long double d = det3l(V[0], V[1], V[2]);
    as.push_back(det3l(V[0], V[1], V[3]) / d);
    bs.push_back(det3l(V[0], V[3], V[2]) / d);
    long double c = det3l(V[3], V[1], V[2]) / d;
    fit.max_unit_gap = std::max(fit.max_unit_gap, static_cast<double>(std::abs(c - 1)));
  }
  fit_series(eps_list, as, degree, fit.a, fit.max_residual);
  fit_series(eps_list, bs, degree, fit.b, fit.max_residual);
  return fit;
}

// ---------------------------------------------------------------- envelopes

namespace {

constexpr int kJet = 12;

// Truncated Taylor series in h.
struct Jet {
  std::array<long double, kJet> c{};

  Jet operator+(const Jet& o) const {
    Jet r;
    for (int i = 0; i < kJet; ++i) r.c[i] = c[i] + o.c[i];
    return r;
  }
  Jet operator-(const Jet& o) const {
    Jet r;
    for (int i = 0; i < kJet; ++i) r.c[i] = c[i] - o.c[i];
    return r;
  }
  Jet operator*(const Jet& o) const {
    Jet r;
    for (int i = 0; i < kJet; ++i)
      for (int j = 0; i + j < kJet; ++j) r.c[i + j] += c[i] * o.c[j];
    return r;
  }
  Jet d() const {
    Jet r;
    for (int i = 0; i + 1 < kJet; ++i) r.c[i] = (i + 1) * c[i + 1];
    return r;
  }
  // Value of the m-th derivative at h = 0.
  long double at(int m) const {
    long double f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return f * c[m];
  }
};

// f^(-1/3) with the real cube root.
Jet inv_cbrt(const Jet& f) {
  if (f.c[0] == 0) throw Error(Errc::IllConditionedFit, "envelope Wronskian vanishes");
  const long double alpha = -1.0L / 3.0L;
  Jet p;
  p.c[0] = 1.0L / std::cbrt(f.c[0]);
  for (int m = 1; m < kJet; ++m) {
    long double s = 0;
    for (int k = 1; k <= m; ++k) s += (alpha * k - (m - k)) * f.c[k] * p.c[m - k];
    p.c[m] = s / (m * f.c[0]);
  }
  return p;
}

using JetVec = std::array<Jet, 3>;

JetVec cross(const JetVec& a, const JetVec& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

JetVec d(const JetVec& a) { return {a[0].d(), a[1].d(), a[2].d()}; }

Jet det(const JetVec& a, const JetVec& b, const JetVec& c) {
  JetVec bc = cross(b, c);
  return a[0] * bc[0] + a[1] * bc[1] + a[2] * bc[2];
}

Jet taylor(const PeriodicField& f, long double x0) {
  Jet j;
  long double fact = 1;
  for (int m = 0; m < kJet; ++m) {
    if (m > 0) fact *= m;
    j.c[m] = f.eval(x0, m) / fact;
  }
  return j;
}

// Taylor jet of Γ(x0 + h) from the frame at x0 and Γ''' = −uΓ' − vΓ.
JetVec gamma_jet(const Frame& fr, const PeriodicField& u, const PeriodicField& v, long double x0) {
  Jet uj = taylor(u, x0), vj = taylor(v, x0);
  JetVec g;
  for (int i = 0; i < 3; ++i) {
    Jet& gi = g[i];
    gi.c[0] = fr[i];
    gi.c[1] = fr[3 + i];
    gi.c[2] = fr[6 + i] / 2;
    for (int m = 0; m + 3 < kJet; ++m) {
      long double s = 0;
      for (int a = 0; a <= m; ++a) s += uj.c[a] * (m - a + 1) * gi.c[m - a + 1] + vj.c[a] * gi.c[m - a];
      gi.c[m + 3] = -s / ((m + 1) * (m + 2) * (m + 3));
    }
  }
  return g;
}

struct EnvelopeData {
  std::array<long double, 3> G0;  // unit-Wronskian envelope lift at x
  long double u_eps = 0;
  Frame frame_x{};
};

EnvelopeData envelope(const PeriodicField& u, const PeriodicField& v, long double x, long double eps) {
  long double base = std::ceil(eps) + 1;  // keep integration times positive
  std::vector<long double> xs{base + x - eps, base + x + eps, base + x};
  std::vector<Frame> fr = lift_frames(u, v, xs);
  JetVec gm = gamma_jet(fr[0], u, v, xs[0]);
  JetVec gp = gamma_jet(fr[1], u, v, xs[1]);
  JetVec l = cross(gm, gp);
  JetVec E = cross(l, d(l));
  JetVec E1 = d(E), E2 = d(E1);
  Jet f = inv_cbrt(det(E, E1, E2));
  JetVec G{f * E[0], f * E[1], f * E[2]};
  JetVec G1 = d(G), G2 = d(G1), G3 = d(G2);
  EnvelopeData out;
  for (int i = 0; i < 3; ++i) out.G0[i] = G[i].c[0];
  long double w = det(G, G1, G2).c[0];
  out.u_eps = -det(G, G3, G2).c[0] / w;
  out.frame_x = fr[2];
  return out;
}

}  // namespace

double curve_flow_check(const PeriodicField& u, const PeriodicField& w, double x, double eps) {
  if (!(eps > 0.0 && eps < 0.25)) throw Error(Errc::InvalidParameters, "eps out of range");
  PeriodicField v = w + u.derivative(1) * 0.5;
  EnvelopeData e = envelope(u, v, x, eps);
  long double ux = u.eval(std::ceil(static_cast<long double>(eps)) + 1 + x);
  long double e2 = static_cast<long double>(eps) * eps;
  long double r = 0;
  for (int i = 0; i < 3; ++i) {
    long double p = (1 + e2 * ux / 3) * e.frame_x[i] + e2 / 2 * e.frame_x[6 + i];
    r = std::max(r, std::abs(e.G0[i] - p));
  }
  return static_cast<double>(r / (e2 * eps));
}

FlowVelocity envelope_flow_velocity(const PeriodicField& u, const PeriodicField& w, double x,
                                    std::span<const double> eps_list) {
  PeriodicField v = w + u.derivative(1) * 0.5;
  int m = static_cast<int>(eps_list.size());
  if (m < 3) throw Error(Errc::IllConditionedFit, "need at least three eps values");
  // u_ε is even in ε: fit (u_ε − u)/ε² as a polynomial in ε².
  Eigen::MatrixXd A(m, 3);
  Eigen::VectorXd y(m);
  double emax = *std::max_element(eps_list.begin(), eps_list.end());
  for (int i = 0; i < m; ++i) {
    double eps = eps_list[i];
    if (!(eps > 0.0 && eps < 0.25)) throw Error(Errc::InvalidParameters, "eps out of range");
    EnvelopeData e = envelope(u, v, x, eps);
    long double ux = u.eval(std::ceil(static_cast<long double>(eps)) + 1 + x);
    y(i) = static_cast<double>((e.u_eps - ux) / (static_cast<long double>(eps) * eps));
    double s = (eps / emax) * (eps / emax);
    A(i, 0) = 1;
    A(i, 1) = s;
    A(i, 2) = s * s;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-12 * sv(0)) throw Error(Errc::IllConditionedFit, "singular design matrix");
  Eigen::VectorXd c = svd.solve(y);
  return {c(0), static_cast<double>(w.eval(x, 1))};
}

}  // namespace pentagram
