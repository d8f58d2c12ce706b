#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "pentagram/boussinesq.hpp"
#include "pentagram/pentagram_map.hpp"
#include "pentagram_cli/cli.hpp"

namespace pentagram::cli {

namespace {

void emit(const json& j, const RunConfig& cfg, std::ostream& out) {
  if (cfg.out.empty()) {
    out << j.dump(2) << '\n';
  } else {
    std::ofstream f(cfg.out);
    if (!f) throw UsageError("cannot write " + cfg.out);
    f << j.dump(2) << '\n';
  }
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write " + path);
  return f;
}

io::AnyPolygon load_polygon(const std::string& path, double tol) {
  if (path.empty()) throw UsageError("--in is required");
  return io::polygon_from_json(io::read_json_file(path), tol);
}

std::pair<int, int> parse_range(const std::string& s) {
  auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      int n = std::stoi(s);
      return {n, n};
    }
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw UsageError("n range must look like 4..8");
  }
}

template <class T>
json map_polygon(const TwistedPolygon<T>& p, long iterations) {
  TwistedPolygon<T> q = p;
  for (long i = 0; i < iterations; ++i) q = pentagram_vertices(q);
  json r = {{"polygon", io::polygon_to_json(q)}, {"corner", io::corner_to_json(corner_coords(q))},
            {"equivalent_to_input", projectively_equivalent(p, q, p.tolerance())}};
  return r;
}

CornerCoords<double> orbit_start(const io::AnyPolygon& p) {
  return std::visit(
      [](const auto& poly) -> CornerCoords<double> {
        using P = std::decay_t<decltype(poly)>;
        if constexpr (std::is_same_v<P, TwistedPolygon<Rational>>) return to_double(corner_coords(poly));
        else return corner_coords(poly);
      },
      p);
}

struct BoussinesqOptions {
  int grid = 256;
  double dt = 0.0;
  double t_end = 0.5;
  std::string preset = "random";
  int kmax = 6;
  double amplitude = 0.5;
  int mode = 1;
  std::string csv;
  std::string snapshots;
  long snapshot_every = 0;
  long record_every = 64;
};

json run_boussinesq(const BoussinesqOptions& o, const RunConfig& cfg) {
  PeriodicField u, w;
  if (o.preset == "random") {
    u = PeriodicField::random_band_limited(o.kmax, o.amplitude, cfg.seed);
    w = PeriodicField::random_band_limited(o.kmax, o.amplitude, cfg.seed + 1);
  } else if (o.preset == "sine") {
    u = PeriodicField::mode(o.mode, 0.0, o.amplitude);
  } else {
    throw UsageError("--preset must be random or sine");
  }
  if (o.t_end < 0) throw UsageError("--t-end must be non-negative");
  BoussinesqState s = make_state(u, w, o.grid);
  double dt = o.dt > 0 ? o.dt : default_dt(o.grid);
  long steps = static_cast<long>(std::ceil(o.t_end / dt - 1e-9));
  if (steps > 0) dt = o.t_end / steps;
  std::ofstream csv, snap;
  if (!o.csv.empty()) {
    csv = open_csv(o.csv);
    csv.precision(17);
    csv << "t,H1,H2,H3,H\n";
  }
  if (!o.snapshots.empty()) {
    snap = open_csv(o.snapshots);
    snap.precision(17);
    snap << "t,j,x,u,w\n";
  }
  auto record = [&](const BoussinesqState& st) {
    if (csv.is_open()) {
      FunctionalValue f = functionals(st);
      csv << st.t << ',' << f.H1 << ',' << f.H2 << ',' << f.H3 << ',' << f.H << '\n';
    }
  };
  auto snapshot = [&](const BoussinesqState& st) {
    if (!snap.is_open()) return;
    for (int j = 0; j < st.n; ++j)
      snap << st.t << ',' << j << ',' << static_cast<double>(j) / st.n << ',' << st.u[j] << ',' << st.w[j] << '\n';
  };
  FunctionalValue f0 = functionals(s);
  double d12 = 0, d3 = 0, dh = 0;
  record(s);
  snapshot(s);
  json status = "completed";
  try {
    for (long i = 1; i <= steps; ++i) {
      s = step(s, dt);
      FunctionalValue f = functionals(s);
      d12 = std::max({d12, std::abs(f.H1 - f0.H1), std::abs(f.H2 - f0.H2)});
      d3 = std::max(d3, std::abs(f.H3 - f0.H3) / std::max(std::abs(f0.H3), 1e-300));
      dh = std::max(dh, std::abs(f.H - f0.H) / std::max(std::abs(f0.H), 1e-300));
      if (i % o.record_every == 0 || i == steps) record(s);
      if (o.snapshot_every > 0 && (i % o.snapshot_every == 0 || i == steps)) snapshot(s);
    }
  } catch (const Error& e) {
    if (e.code() != Errc::Instability) throw;
    status = std::string("instability: ") + e.what();
  }
  return {{"status", status},
          {"t", s.t},
          {"dt", dt},
          {"steps", steps},
          {"initial", {{"H1", f0.H1}, {"H2", f0.H2}, {"H3", f0.H3}, {"H", f0.H}}},
          {"casimir_drift", d12},
          {"H3_relative_drift", d3},
          {"H_relative_drift", dh},
          {"hamiltonian_consistency", hamiltonian_consistency(s)}};
}

bool is_usage_error(Errc c) {
  return c == Errc::ParseError || c == Errc::InvalidParameters || c == Errc::InvalidEigenvalues;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pentagram map on twisted polygons: generation, iteration, invariants, Poisson checks, Boussinesq limit."};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--mode", cfg.mode, "Arithmetic: rational or float")->check(CLI::IsMember({"rational", "float"}));
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--out", cfg.out, "Write the JSON report here instead of stdout");
  app.add_option("--tol", cfg.tol, "Float tolerance");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a polygon as JSON");
  std::string kind;
  double eigen_a = 0.5, eigen_b = 2.0, jitter = 0.0, theta = 0.3, d = 1.05;
  std::string gx = "1", gy = "2";
  gen->add_option("kind", kind, "uconvex | spiral | random | convex | closed4 | closed5")->required();
  gen->add_option("-n", cfg.n, "Number of vertices");
  gen->add_option("--eigen-a", eigen_a, "uconvex: eigenvalue in (0, 1)");
  gen->add_option("--eigen-b", eigen_b, "uconvex: eigenvalue above 1");
  gen->add_option("--jitter", jitter, "uconvex/spiral: parameter jitter in [0, 1/2)");
  gen->add_option("--theta", theta, "spiral: turning angle per period");
  gen->add_option("--d", d, "spiral: dilation per period");
  gen->add_option("--x", gx, "closed5: family parameter x (p/q)");
  gen->add_option("--y", gy, "closed5: family parameter y (p/q)");

  // map
  auto* map = app.add_subcommand("map", "Apply the pentagram map to a polygon file");
  std::string in;
  long map_iters = 1;
  map->add_option("--in", in, "Polygon JSON")->required();
  map->add_option("-k,--iterations", map_iters, "Number of applications");

  // orbit
  auto* orbit = app.add_subcommand("orbit", "Float orbit with invariant drift tracking");
  std::string orbit_kind = "uconvex", csv_path;
  long orbit_iters = 100000, every = 1;
  double drift_tol = 1e-8, orbit_jitter = 0.3;
  orbit->add_option("--in", in, "Polygon JSON (instead of --kind)");
  orbit->add_option("--kind", orbit_kind, "uconvex | spiral when no --in is given");
  orbit->add_option("-n", cfg.n, "Number of vertices for --kind");
  orbit->add_option("--jitter", orbit_jitter, "Parameter jitter for --kind (0 gives a fixed point)");
  orbit->add_option("--theta", theta, "spiral turning angle");
  orbit->add_option("--d", d, "spiral dilation");
  orbit->add_option("-k,--iterations", orbit_iters, "Iterations");
  orbit->add_option("--every", every, "CSV row interval");
  orbit->add_option("--csv", csv_path, "CSV output path");
  orbit->add_option("--drift-tol", drift_tol, "Relative drift threshold");

  // invariants
  auto* inv = app.add_subcommand("invariants", "Monodromy invariants of a polygon file");
  inv->add_option("--in", in, "Polygon JSON")->required();

  // poisson-check
  auto* pc = app.add_subcommand("poisson-check", "Exact Poisson checks for one n");
  int trials = 5;
  bool mutate = false;
  pc->add_option("-n", cfg.n, "Number of vertices")->required();
  pc->add_option("--trials", trials, "Random points for the invariance check");
  pc->add_flag("--mutate", mutate, "Flip one bracket entry (control run)");

  // verify
  auto* ver = app.add_subcommand("verify", "Run a verification suite; exit 0 iff all checks pass");
  std::string suite = "all", range = "4..8";
  ver->add_option("suite", suite, "all | poisson | invariants | closed | boussinesq");
  ver->add_option("--n-range", range, "Range of n, e.g. 4..8");
  ver->add_flag("--mutate", mutate, "Flip one bracket entry (control run)");

  // boussinesq
  auto* bq = app.add_subcommand("boussinesq", "Integrate the continuous limit");
  BoussinesqOptions bo;
  bq->add_option("-N,--grid", bo.grid, "Grid size (power of two)");
  bq->add_option("--dt", bo.dt, "Time step (default 0.5/N^2)");
  bq->add_option("--t-end", bo.t_end, "Final time");
  bq->add_option("--preset", bo.preset, "random | sine");
  bq->add_option("--kmax", bo.kmax, "random: highest mode");
  bq->add_option("--amplitude", bo.amplitude, "Initial amplitude");
  bq->add_option("--sine-mode", bo.mode, "sine: wavenumber");
  bq->add_option("--csv", bo.csv, "CSV of t,H1,H2,H3,H");
  bq->add_option("--record-every", bo.record_every, "Steps between CSV rows");
  bq->add_option("--snapshots", bo.snapshots, "CSV of field snapshots");
  bq->add_option("--snapshot-every", bo.snapshot_every, "Steps between snapshots (0: first and last only)");

  // conic-experiment
  auto* conic = app.add_subcommand("conic-experiment", "Compare E_k and O_k on polygons inscribed in a conic");
  int samples = 10;
  conic->add_option("-n", cfg.n, "Number of vertices")->required();
  conic->add_option("--samples", samples, "Number of sampled polygons");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? 0 : 2;
  }

  try {
    auto* chosen = app.get_subcommands().front();
    cfg.command = chosen->get_name();
    cfg.validate();
    if (chosen == gen) {
      cfg.params = {{"kind", kind}, {"eigen_a", eigen_a}, {"eigen_b", eigen_b}, {"jitter", jitter},
                    {"theta", theta}, {"d", d},           {"x", gx},             {"y", gy}};
      emit(generate(kind, cfg), cfg, out);
      return 0;
    }
    if (chosen == map) {
      cfg.iterations = map_iters;
      cfg.params = {{"in", in}};
      io::AnyPolygon poly = load_polygon(in, cfg.tol);
      cfg.n = std::visit([](const auto& p) { return p.n(); }, poly);
      json r = std::visit([&](const auto& p) { return map_polygon(p, map_iters); }, poly);
      r["config"] = cfg.to_json();
      emit(r, cfg, out);
      return 0;
    }
    if (chosen == orbit) {
      cfg.iterations = orbit_iters;
      cfg.mode = "float";
      cfg.params = {{"in", in}, {"kind", orbit_kind}, {"jitter", orbit_jitter}, {"every", every},
                    {"csv", csv_path}, {"drift_tol", drift_tol}};
      CornerCoords<double> start;
      if (!in.empty()) {
        start = orbit_start(load_polygon(in, cfg.tol));
      } else if (orbit_kind == "uconvex") {
        start = corner_coords(generate_universally_convex(cfg.n > 0 ? cfg.n : 7, 0.5, 2.0, 1.0, 1.0, orbit_jitter, cfg.seed));
      } else if (orbit_kind == "spiral") {
        start = corner_coords(generate_spiral(cfg.n > 0 ? cfg.n : 8, theta, d, orbit_jitter, cfg.seed));
      } else {
        throw UsageError("--kind must be uconvex or spiral");
      }
      cfg.n = start.n();
      OrbitSummary s;
      if (!csv_path.empty()) {
        std::ofstream f = open_csv(csv_path);
        s = run_orbit(start, orbit_iters, &f, every);
      } else {
        s = run_orbit(start, orbit_iters, nullptr, every);
      }
      json r = s.to_json();
      bool ok = s.max_relative_drift < drift_tol && !s.singular_iteration && std::isfinite(s.sup_log_coord);
      r["passed"] = ok;
      r["config"] = cfg.to_json();
      emit(r, cfg, out);
      return ok ? 0 : 1;
    }
    if (chosen == inv) {
      cfg.params = {{"in", in}};
      io::AnyPolygon poly = load_polygon(in, cfg.tol);
      cfg.n = std::visit([](const auto& p) { return p.n(); }, poly);
      json r = invariants_report(poly);
      r["config"] = cfg.to_json();
      emit(r, cfg, out);
      return 0;
    }
    if (chosen == pc) {
      cfg.params = {{"trials", trials}, {"mutate", mutate}};
      if (cfg.n < 4 || cfg.n > 12) throw UsageError("-n must lie in 4..12");
      json r = poisson_report(cfg.n, trials, cfg.seed, mutate);
      r["config"] = cfg.to_json();
      emit(r, cfg, out);
      return r["passed"].get<bool>() ? 0 : 1;
    }
    if (chosen == ver) {
      auto [lo, hi] = parse_range(range);
      cfg.params = {{"suite", suite}, {"n_range", range}, {"mutate", mutate}};
      json r = verify(suite, lo, hi, cfg.seed, mutate);
      r["config"] = cfg.to_json();
      emit(r, cfg, out);
      return r["passed"].get<bool>() ? 0 : 1;
    }
    if (chosen == bq) {
      cfg.mode = "float";
      cfg.n = bo.grid;
      cfg.params = {{"dt", bo.dt}, {"t_end", bo.t_end}, {"preset", bo.preset}, {"kmax", bo.kmax},
                    {"amplitude", bo.amplitude}, {"sine_mode", bo.mode}, {"csv", bo.csv}, {"snapshots", bo.snapshots}};
      json r = run_boussinesq(bo, cfg);
      r["config"] = cfg.to_json();
      emit(r, cfg, out);
      return r["status"] == "completed" ? 0 : 1;
    }
    if (chosen == conic) {
      cfg.params = {{"samples", samples}};
      json r = conic_experiment(cfg.n, samples, cfg.seed);
      r["config"] = cfg.to_json();
      emit(r, cfg, out);
      return 0;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_usage_error(e.code()) ? 2 : 1;
  } catch (const json::exception& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace pentagram::cli
