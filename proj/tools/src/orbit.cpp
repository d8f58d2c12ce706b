#include <cmath>
#include <ostream>

#include "pentagram/invariants.hpp"
#include "pentagram/pentagram_map.hpp"
#include "pentagram_cli/cli.hpp"

namespace pentagram::cli {

std::vector<std::string> orbit_columns(int n) {
  int k = n / 2;
  std::vector<std::string> c{"iter"};
  for (int j = 1; j <= k; ++j) c.push_back("O" + std::to_string(j));
  for (int j = 1; j <= k; ++j) c.push_back("E" + std::to_string(j));
  c.push_back("On");
  c.push_back("En");
  if (n % 2 == 0) {
    c.push_back("On2");
    c.push_back("En2");
  }
  c.push_back("H");
  c.push_back("sup_log_coord");
  return c;
}

namespace {

// Invariant values in column order, without iter, H and sup_log_coord.
std::vector<double> invariant_row(const CornerCoords<double>& c) {
  CornerInvariantValues<double> v = evaluate_invariants(c);
  std::vector<double> r(v.O.begin(), v.O.end());
  r.insert(r.end(), v.E.begin(), v.E.end());
  r.push_back(v.On);
  r.push_back(v.En);
  if (v.On2) {
    r.push_back(*v.On2);
    r.push_back(*v.En2);
  }
  return r;
}

double sup_log(const CornerCoords<double>& c) {
  double m = 0.0;
  for (int i = 0; i < c.n(); ++i) m = std::max({m, std::abs(std::log(std::abs(c.x[i]))), std::abs(std::log(std::abs(c.y[i])))});
  return m;
}

}  // namespace

json OrbitSummary::to_json() const {
  json j = {{"iterations_done", iterations_done}, {"max_relative_drift", max_relative_drift},
            {"sup_log_coord", sup_log_coord},     {"columns", columns},
            {"singular_iteration", nullptr},      {"singular_index", nullptr},
            {"period", nullptr}};
  if (singular_iteration) j["singular_iteration"] = *singular_iteration;
  if (singular_index) j["singular_index"] = *singular_index;
  if (period) j["period"] = *period;
  return j;
}

OrbitSummary run_orbit(const CornerCoords<double>& start, long iterations, std::ostream* csv, long every) {
  if (every < 1) throw UsageError("snapshot interval must be positive");
  int n = start.n();
  OrbitSummary s;
  s.columns = orbit_columns(n);
  std::size_t on_idx = 2 * static_cast<std::size_t>(n / 2);
  auto emit = [&](long it, const std::vector<double>& vals, double sl) {
    if (!csv) return;
    *csv << it;
    for (double v : vals) *csv << ',' << v;
    *csv << ',' << 1.0 / (vals[on_idx] * vals[on_idx + 1]) << ',' << sl << '\n';
  };
  if (csv) {
    csv->precision(17);
    for (std::size_t i = 0; i < s.columns.size(); ++i) *csv << (i ? "," : "") << s.columns[i];
    *csv << '\n';
  }
  std::vector<double> ref = invariant_row(start);
  s.sup_log_coord = sup_log(start);
  emit(0, ref, s.sup_log_coord);
  CornerCoords<double> c = start;
  for (long it = 1; it <= iterations; ++it) {
    try {
      c = pentagram_in_corner(c);
    } catch (const Error& e) {
      if (e.code() != Errc::MapSingularity) throw;
      s.singular_iteration = it;
      s.singular_index = e.index().value_or(-1);
      break;
    }
    s.iterations_done = it;
    std::vector<double> vals = invariant_row(c);
    double sl = sup_log(c);
    if (!std::isfinite(sl)) {
      s.singular_iteration = it;
      break;
    }
    s.sup_log_coord = std::max(s.sup_log_coord, sl);
    for (std::size_t k = 0; k < vals.size(); ++k) {
      double scale = std::abs(ref[k]) > 1e-300 ? std::abs(ref[k]) : 1.0;
      s.max_relative_drift = std::max(s.max_relative_drift, std::abs(vals[k] - ref[k]) / scale);
    }
    if (!s.period && it <= 12 && corner_shift(c, start, 1e-9)) s.period = static_cast<int>(it);
    if (it % every == 0 || it == iterations) emit(it, vals, sl);
  }
  return s;
}

}  // namespace pentagram::cli
