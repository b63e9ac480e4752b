#include "experiments.hpp"

#include "pool.hpp"

#include "tdefl/rtt.hpp"
#include "tdefl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace tdefl::cli {

const Table& ExperimentOutput::table(const std::string& name) const {
  for (const Table& t : tables)
    if (t.name == name) return t;
  throw std::out_of_range("no table named " + name);
}

namespace {

std::vector<std::uint64_t> seed_list(const Config& c) {
  const auto base = static_cast<std::uint64_t>(c.integer("seed"));
  const long n = c.has("seeds") ? c.integer("seeds") : 1;
  std::vector<std::uint64_t> s;
  for (long t = 0; t < n; ++t) s.push_back(trial_seed(base, static_cast<std::uint64_t>(t)));
  return s;
}

struct Stats {
  double mean = NAN, stddev = NAN;
  std::int64_t n = 0;
};

Stats stats_of(const std::vector<double>& xs) {
  Stats s;
  std::vector<double> v;
  for (double x : xs)
    if (std::isfinite(x)) v.push_back(x);
  s.n = static_cast<std::int64_t>(v.size());
  if (v.empty()) return s;
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += sqr(x - s.mean);
  s.stddev = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  return s;
}

std::string error_status(const std::exception& e) {
  if (dynamic_cast<const DomainError*>(&e)) return "below_edge";
  if (dynamic_cast<const ParameterError*>(&e)) return "invalid";
  return "no_convergence";
}

struct ModelGrid {
  std::vector<double> beta1, beta2, alpha, gamma;
};

ModelGrid model_grid(const Config& c, bool with_gamma) {
  ModelGrid g{c.grid("beta1"), c.grid("beta2"), c.grid("alpha"), {}};
  if (with_gamma) g.gamma = c.grid("gamma");
  return g;
}

struct GridPoint {
  ModelParams m;
  double gamma = 1.0;
};

std::vector<GridPoint> expand(const ModelGrid& g) {
  std::vector<GridPoint> out;
  const std::vector<double> gammas = g.gamma.empty() ? std::vector<double>{1.0} : g.gamma;
  for (double a : g.alpha)
    for (double b1 : g.beta1)
      for (double b2 : g.beta2)
        for (double gm : gammas) out.push_back({{b1, b2, a}, gm});
  return out;
}

Cell num(double x) { return Cell{x}; }
Cell integer(std::int64_t x) { return Cell{x}; }
Cell text(std::string s) { return Cell{std::move(s)}; }

// ---------------------------------------------------------------------------
// Key sets and validation

struct KeySpec {
  std::string key, value;
};

const std::map<std::string, std::vector<KeySpec>>& key_table() {
  static const std::map<std::string, std::vector<KeySpec>> t = {
      {"spectrum",
       {{"p", "200"}, {"beta1", "20"}, {"beta2", "15"}, {"alpha", "0.8"}, {"gamma", "none"}, {"bins", "40"},
        {"seed", "1"}, {"density_points", "1201"}, {"density_lo", "-3"}, {"density_hi", "3"}}},
      {"deflate",
       {{"p", "150"}, {"beta1", "6"}, {"beta2", "5.7"}, {"alpha", "0.5"}, {"gamma", "1"}, {"mode", "baseline"},
        {"seeds", "1"}, {"seed", "1"}, {"eps_step", "0.02"}}},
      {"solve",
       {{"sweep", "snr"}, {"p", "100"}, {"beta1", "10"}, {"beta2", "8"}, {"alpha", "0.6"}, {"gamma", "1"},
        {"seeds", "10"}, {"seed", "1"}}},
      {"estimate",
       {{"p", "150"}, {"beta1", "6,8,10,12"}, {"beta2", "5"}, {"alpha", "0.5"}, {"seeds", "20"}, {"seed", "1"}}},
      {"improve",
       {{"p", "150"}, {"beta1", "6"}, {"beta2", "5.7"}, {"alpha", "0.5"}, {"seeds", "1"}, {"seed", "1"},
        {"eps_step", "0.02"}}},
  };
  return t;
}

void require_range(bool ok, const std::string& what) {
  if (!ok) throw ConfigRangeError("config: " + what);
}

void validate(const std::string& command, const Config& c) {
  const long p = c.integer("p");
  require_range(p >= 2 && p <= 400, "p must lie in [2, 400]");
  for (const char* k : {"beta1", "beta2"})
    for (double b : c.grid(k)) require_range(b >= 0.0 && b <= 1e3, std::string(k) + " must lie in [0, 1000]");
  for (double a : c.grid("alpha")) require_range(a >= 0.0 && a < 1.0, "alpha must lie in [0, 1)");
  require_range(c.integer("seed") >= 0, "seed must be >= 0");
  if (c.has("seeds")) require_range(c.integer("seeds") >= 1 && c.integer("seeds") <= 100000, "seeds must lie in [1, 100000]");
  if (c.has("gamma") && c.str("gamma") != "none")
    for (double g : c.grid("gamma")) require_range(g >= 0.0 && g <= 1.0, "gamma must lie in [0, 1]");
  if (c.has("eps_step")) {
    const double e = c.num("eps_step");
    require_range(e > 0.0 && e <= 0.2, "eps_step must lie in (0, 0.2]");
  }
  if (command == "spectrum") {
    require_range(c.integer("bins") >= 1 && c.integer("bins") <= 10000, "bins must lie in [1, 10000]");
    require_range(c.integer("density_points") >= 2 && c.integer("density_points") <= 100000,
                  "density_points must lie in [2, 100000]");
    require_range(c.num("density_lo") < c.num("density_hi"), "density_lo must be below density_hi");
    require_range(c.grid("beta1").size() == 1 && c.grid("beta2").size() == 1 && c.grid("alpha").size() == 1,
                  "spectrum takes a single model, not a grid");
    if (c.str("gamma") != "none") require_range(c.grid("gamma").size() == 1, "spectrum takes a single gamma");
  }
  if (command == "deflate") {
    const std::string mode = c.str("mode");
    require_range(mode == "baseline" || mode == "improved" || mode == "both", "mode must be baseline, improved or both");
  }
  if (command == "solve") {
    const std::string s = c.str("sweep");
    require_range(s == "snr" || s == "gamma", "sweep must be snr or gamma");
  }
}

// ---------------------------------------------------------------------------

std::vector<std::string> alignment_columns() {
  return {"rho11", "rho12", "theta21", "theta22", "rho21", "rho22", "kappa", "eta"};
}

std::array<double, 8> alignments_of(const FirstStepSolution& f, const SecondStepSolution& s) {
  return {f.rho11, f.rho12, s.theta21, s.theta22, s.rho21, s.rho22, s.kappa, s.eta};
}

}  // namespace

// ---------------------------------------------------------------------------
// Building blocks

SimulatedMeans simulated_means(const ModelParams& m, double gamma, Index p, int seeds, std::uint64_t base_seed,
                               unsigned jobs) {
  struct One {
    std::optional<SignedMeasurement> meas;
  };
  const auto runs = parallel_map<One>(static_cast<std::size_t>(seeds), jobs, [&](std::size_t t) {
    One o;
    try {
      o.meas = simulated_initializer(m, gamma, p, trial_seed(base_seed, t));
    } catch (const PowerIterationError&) {
    }
    return o;
  });
  SimulatedMeans out;
  Vector first = Vector::Zero(3), second = Vector::Zero(7);
  for (const One& o : runs) {
    if (!o.meas) {
      ++out.failed;
      continue;
    }
    ++out.used;
    first += o.meas->first.to_vector();
    second += o.meas->second.to_vector();
  }
  if (out.used > 0) {
    first /= out.used;
    second /= out.used;
  } else {
    first.setConstant(NAN);
    second.setConstant(NAN);
  }
  out.first = FirstStepSolution::from_vector(first);
  out.second = SecondStepSolution::from_vector(second, gamma);
  out.second.tau = tau_of(gamma, out.second.kappa);
  return out;
}

SolvedPoint solve_point(const ModelParams& m, double gamma, const FirstStepSolution& first_init,
                        const SecondStepSolution& second_init, const SolverConfig& cfg) {
  SolvedPoint out;
  try {
    out.first = solve_first(m, first_init, cfg);
  } catch (const Error& e) {
    out.status = error_status(e);
    return out;
  }
  try {
    if (gamma == 1.0) {
      out.second = solve_second_gamma1(m, *out.first, second_init, cfg);
    } else {
      SecondStepSolution init = second_init;
      init.gamma = gamma;
      out.second = solve_second(m, gamma, *out.first, init, cfg);
    }
  } catch (const Error& e) {
    out.status = error_status(e);
  }
  return out;
}

SecondStepSolution trivial_second_seed(const FirstStepSolution& first) {
  SecondStepSolution s;
  s.lambda2 = first.lambda1;
  s.theta21 = s.rho21 = first.rho11;
  s.theta22 = s.rho22 = first.rho12;
  s.kappa = 1.0;
  s.eta = 1.0;
  s.gamma = 0.0;
  s.tau = tau_of(0.0, 1.0);
  return s;
}

namespace {

/// Walks from the solution `x` at gamma `from` to `to` in adaptive steps.
std::optional<SecondStepSolution> continue_to(const ModelParams& m, const FirstStepSolution& first,
                                              SecondStepSolution x, double from, double to, const SolverConfig& cfg) {
  const double dir = to > from ? 1.0 : -1.0;
  double g = from, h = std::abs(to - from);
  while (dir * (to - g) > 1e-15) {
    if (h < 1e-5) return std::nullopt;
    const double gn = dir > 0 ? std::min(to, g + h) : std::max(to, g - h);
    try {
      x = solve_second(m, gn, first, x, cfg);
      g = gn;
      h = std::min(2.0 * h, std::abs(to - g));
    } catch (const Error&) {
      h /= 2.0;
    }
  }
  return x;
}

}  // namespace

std::vector<GammaPoint> gamma_sweep(const ModelParams& m, const FirstStepSolution& first,
                                    const SecondStepSolution& at_one, const std::vector<double>& grid,
                                    const SolverConfig& cfg) {
  if (!std::is_sorted(grid.begin(), grid.end())) throw ParameterError("gamma_sweep: grid must be ascending");
  std::vector<GammaPoint> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i].gamma = grid[i];

  // downward from gamma = 1
  std::optional<SecondStepSolution> x = at_one;
  double g = 1.0;
  for (std::size_t k = grid.size(); k-- > 0 && x;) {
    if (grid[k] == 1.0) {
      out[k].solution = *x;
      out[k].branch = "from_one";
      continue;
    }
    x = continue_to(m, first, *x, g, grid[k], cfg);
    if (x) {
      g = grid[k];
      out[k].solution = *x;
      out[k].branch = "from_one";
    }
  }

  // upward from gamma = 0 for whatever is left
  std::optional<SecondStepSolution> y;
  try {
    y = solve_second(m, 0.0, first, trivial_second_seed(first), cfg);
  } catch (const Error&) {
    return out;
  }
  g = 0.0;
  for (std::size_t k = 0; k < grid.size() && y; ++k) {
    if (out[k].solution) break;
    if (grid[k] != 0.0) y = continue_to(m, first, *y, g, grid[k], cfg);
    if (y) {
      g = grid[k];
      out[k].solution = *y;
      out[k].branch = "from_zero";
    }
  }
  return out;
}

int interior_local_maxima(const std::vector<double>& v) {
  int count = 0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (v[i] > v[i - 1] && v[i] > v[i + 1]) ++count;
  return count;
}

// ---------------------------------------------------------------------------
// spectrum

ExperimentOutput run_spectrum(const Config& c, const RunContext&) {
  ExperimentOutput out;
  const std::uint64_t seed = static_cast<std::uint64_t>(c.integer("seed"));
  out.seeds = {seed};
  const ModelParams m{c.num("beta1"), c.num("beta2"), c.num("alpha")};
  const Index p = c.integer("p");
  const SpikedSample s = gen_spiked({p, m.beta1, m.beta2, m.alpha, seed});
  const bool with_m = c.str("gamma") != "none";
  const double gamma = with_m ? c.num("gamma") : 1.0;
  const DeflationRun run = deflate(s.tensor, gamma, &s.truth);
  const int bins = static_cast<int>(c.integer("bins"));
  const std::vector<double> grid =
      linspace(c.num("density_lo"), c.num("density_hi"), static_cast<int>(c.integer("density_points")));

  Table summary("summary", {"matrix", "size", "tau", "tau_source", "ks_distance", "hist_sup_deviation",
                            "lambda_min", "lambda_max", "support_edge"});

  auto emit = [&](const std::string& tag, const SpectrumResult& spec, const DensityTable& dens,
                  const std::function<double(double)>& cdf, double tau, const std::string& tau_source, double edge) {
    Table eig("spectrum_" + tag, {"index", "eigenvalue"});
    for (Index i = 0; i < spec.size(); ++i) eig.add({integer(i), num(spec.eigenvalues[i])});
    const Histogram h = histogram(spec, bins);
    Table hist("histogram_" + tag, {"bin_center", "density"});
    for (std::size_t i = 0; i < h.centers.size(); ++i) hist.add({num(h.centers[i]), num(h.density[i])});
    Table den("density_" + tag, {"x", "density"});
    for (std::size_t i = 0; i < dens.grid.size(); ++i) den.add({num(dens.grid[i]), num(dens.values[i])});
    summary.add({text(tag), integer(spec.size()), num(tau), text(tau_source), num(ks_distance(spec, cdf)),
                 num(histogram_sup_deviation(h, cdf)), num(spec.eigenvalues[0]),
                 num(spec.eigenvalues[spec.size() - 1]), num(edge)});
    out.tables.push_back(std::move(eig));
    out.tables.push_back(std::move(hist));
    out.tables.push_back(std::move(den));
    Plot pl;
    pl.table = "histogram_" + tag;
    pl.x = "bin_center";
    pl.ys = {"density"};
    pl.columns = true;
    pl.title = "eigenvalues of " + tag;
    pl.overlay_table = "density_" + tag;
    pl.overlay_x = "x";
    pl.overlay_y = "density";
    out.plots.push_back(pl);
  };

  {
    const SpectrumResult spec =
        sym_eigenvalues(build_N(s.truth.noise, run.factor1.u, run.factor1.v, run.factor1.w), "N");
    DensityTable dens;
    dens.grid = grid;
    for (double x : grid) dens.values.push_back(semicircle_density(x));
    emit("N", spec, dens, [](double x) { return semicircle_cdf(x); }, -1.0, "semicircle", kSemicircleEdge);
  }
  if (with_m) {
    const SignedMeasurement meas = signed_measurement(run, s.truth);
    const SolvedPoint sp = solve_point(m, gamma, meas.first, meas.second);
    double tau = meas.second.tau;
    std::string source = "measured_kappa";
    if (sp.status == "ok") {
      tau = sp.second->tau;
      source = "solved";
    } else {
      out.notes.push_back("asymptotic solve failed (" + sp.status + "), using tau from the measured kappa");
    }
    const SpectrumResult spec = sym_eigenvalues(
        build_M(s.truth.noise, run.factor1.u, run.factor2.u, run.factor2.v, run.factor2.w, gamma), "M");
    const DensityTable dens = nu_density(grid, tau);
    const TabulatedCdf cdf(dens);
    emit("M", spec, dens, cdf, tau, source, support_right_edge(tau));
  }
  out.tables.insert(out.tables.begin(), std::move(summary));
  return out;
}

// ---------------------------------------------------------------------------
// deflate

ExperimentOutput run_deflate(const Config& c, const RunContext& ctx) {
  ExperimentOutput out;
  out.seeds = seed_list(c);
  const Index p = c.integer("p");
  const std::string mode = c.str("mode");
  const double eps = c.num("eps_step");
  std::vector<GridPoint> points = expand(model_grid(c, true));
  if (mode != "baseline") {
    // improved runs pick their own gamma
    std::vector<GridPoint> uniq;
    for (const GridPoint& g : points) {
      const bool seen = std::any_of(uniq.begin(), uniq.end(), [&](const GridPoint& u) {
        return u.m.beta1 == g.m.beta1 && u.m.beta2 == g.m.beta2 && u.m.alpha == g.m.alpha;
      });
      if (!seen) uniq.push_back({g.m, 1.0});
    }
    points = uniq;
  }

  const std::vector<std::string> cols = {"beta1",   "beta2",   "alpha",   "gamma",   "mode",    "seed",
                                         "lambda1", "lambda2", "rho11",   "rho12",   "theta21", "theta22",
                                         "rho21",   "rho22",   "kappa",   "eta",     "factor1_component",
                                         "factor2_component", "factor1_alignment", "factor2_alignment", "status"};
  using Rows = std::vector<std::vector<Cell>>;
  const std::size_t ns = out.seeds.size();
  const auto blocks = parallel_map<Rows>(points.size() * ns, ctx.jobs, [&](std::size_t idx) {
    const GridPoint& gp = points[idx / ns];
    const std::uint64_t seed = out.seeds[idx % ns];
    const SpikedSample s = gen_spiked({p, gp.m.beta1, gp.m.beta2, gp.m.alpha, seed});
    Rows rows;
    auto row = [&](const std::string& tag, double gamma, const RankOneFactor& f1, const RankOneFactor& f2,
                   const Vector& u1, const Vector& v1, const Vector& w1, const Vector& u2, const Vector& v2,
                   const Vector& w2, const std::string& status) {
      const AlignmentRecord a = measure_alignments(u1, v1, w1, u2, v2, w2, s.truth);
      const ComponentMatch cm = match_components({&u1, &v1, &w1}, {&u2, &v2, &w2}, s.truth);
      rows.push_back({num(gp.m.beta1), num(gp.m.beta2), num(gp.m.alpha), num(gamma), text(tag),
                      integer(static_cast<std::int64_t>(seed)), num(f1.lambda), num(f2.lambda), num(a.rho1_u[0]),
                      num(a.rho1_u[1]), num(a.theta2[0]), num(a.theta2[1]), num(a.rho2_v[0]), num(a.rho2_v[1]),
                      num(a.kappa), num(a.eta_v), integer(cm.component[0] + 1), integer(cm.component[1] + 1),
                      num(cm.alignment_u[0]), num(cm.alignment_u[1]), text(status)});
    };
    auto failed_row = [&](const std::string& tag, double gamma) {
      std::vector<Cell> r = {num(gp.m.beta1), num(gp.m.beta2), num(gp.m.alpha), num(gamma), text(tag),
                             integer(static_cast<std::int64_t>(seed))};
      while (r.size() + 1 < cols.size()) r.push_back(num(NAN));
      r.push_back(text("no_convergence"));
      rows.push_back(std::move(r));
    };
    if (mode == "baseline") {
      try {
        const DeflationRun r = deflate(s.tensor, gp.gamma);
        row("baseline", gp.gamma, r.factor1, r.factor2, r.factor1.u, r.factor1.v, r.factor1.w, r.factor2.u,
            r.factor2.v, r.factor2.w, "ok");
      } catch (const PowerIterationError&) {
        failed_row("baseline", gp.gamma);
      }
      return rows;
    }
    ImprovedResult ir;
    try {
      ir = improved_deflation(s.tensor, eps);
    } catch (const PowerIterationError&) {
      if (mode == "both") failed_row("baseline", 1.0);
      failed_row("improved", NAN);
      return rows;
    }
    const DeflationRun& b = ir.baseline;
    if (mode == "both") {
      row("baseline", 1.0, b.factor1, b.factor2, b.factor1.u, b.factor1.v, b.factor1.w, b.factor2.u, b.factor2.v,
          b.factor2.w, "ok");
    }
    RankOneFactor f1{ir.components[0].beta, ir.components[0].u, ir.components[0].v, ir.components[0].w, 0, true};
    RankOneFactor f2{ir.components[1].beta, ir.components[1].u, ir.components[1].v, ir.components[1].w, 0, true};
    row("improved", ir.gamma_star, f1, f2, f1.u, f1.v, f1.w, f2.u, f2.v, f2.w, ir.aborted ? "fallback" : "ok");
    return rows;
  });

  Table runs("runs", cols);
  for (const Rows& b : blocks)
    for (const auto& r : b) runs.add(r);

  // per grid point and mode
  Table summary("summary", {"beta1", "beta2", "alpha", "gamma", "mode", "n", "factor1_alignment_mean",
                            "factor1_alignment_std", "factor2_alignment_mean", "factor2_alignment_std", "gamma_mean"});
  const std::size_t ig = runs.column_index("gamma");
  const std::vector<std::string> modes =
      mode == "both" ? std::vector<std::string>{"baseline", "improved"} : std::vector<std::string>{mode};
  for (std::size_t gi = 0; gi < points.size(); ++gi) {
    for (const std::string& md : modes) {
      std::vector<double> a1, a2, gs;
      for (std::size_t t = 0; t < ns; ++t) {
        // a seed counts only when every row it produced converged, so the
        // baseline and improved means in mode=both are paired
        const Rows& blk = blocks[gi * ns + t];
        if (std::any_of(blk.begin(), blk.end(), [](const auto& r) {
              return std::get<std::string>(r.back()) == "no_convergence";
            }))
          continue;
        for (const auto& r : blk) {
          if (std::get<std::string>(r[4]) != md) continue;
          a1.push_back(std::get<double>(r[18]));
          a2.push_back(std::get<double>(r[19]));
          gs.push_back(std::get<double>(r[ig]));
        }
      }
      const Stats s1 = stats_of(a1), s2 = stats_of(a2), sg = stats_of(gs);
      summary.add({num(points[gi].m.beta1), num(points[gi].m.beta2), num(points[gi].m.alpha),
                   num(md == "improved" ? NAN : points[gi].gamma), text(md), integer(s1.n), num(s1.mean),
                   num(s1.stddev), num(s2.mean), num(s2.stddev), num(sg.mean)});
    }
  }
  // x axis: whichever model parameter varies
  std::string xaxis = "beta2";
  if (c.grid("alpha").size() > 1) xaxis = "alpha";
  if (c.grid("beta1").size() > 1) xaxis = "beta1";
  if (c.grid("beta2").size() > 1) xaxis = "beta2";
  Plot pl;
  pl.table = "summary";
  pl.x = xaxis;
  pl.ys = {"factor1_alignment_mean", "factor2_alignment_mean"};
  pl.group = mode == "both" ? "mode" : (xaxis != "alpha" && c.grid("alpha").size() > 1 ? "alpha" : "");
  pl.title = "mean alignments";
  out.plots.push_back(pl);
  out.tables.push_back(std::move(summary));
  out.tables.push_back(std::move(runs));
  return out;
}

// ---------------------------------------------------------------------------
// solve

ExperimentOutput run_solve(const Config& c, const RunContext& ctx) {
  ExperimentOutput out;
  out.seeds = seed_list(c);
  const Index p = c.integer("p");
  const int seeds = static_cast<int>(c.integer("seeds"));
  const auto base = static_cast<std::uint64_t>(c.integer("seed"));

  if (c.str("sweep") == "snr") {
    const std::vector<GridPoint> points = expand(model_grid(c, true));
    std::vector<std::string> cols = {"beta1",   "beta2",   "alpha",   "gamma", "lambda1",        "rho11",
                                     "rho12",   "lambda2", "theta21", "theta22", "rho21",        "rho22",
                                     "kappa",   "eta",     "tau",     "residual_first", "residual_second", "status"};
    cols.push_back("sim_lambda1");
    cols.push_back("sim_lambda2");
    for (const std::string& a : alignment_columns()) cols.push_back("sim_" + a);
    cols.push_back("sim_runs");
    cols.push_back("max_alignment_gap");
    Table t("solve", cols);
    // the simulations fan out inside each point, points run in order
    for (const GridPoint& gp : points) {
      const SimulatedMeans sm = simulated_means(gp.m, gp.gamma, p, seeds, base, ctx.jobs);
      SolvedPoint sp;
      if (sm.used == 0) {
        sp.status = "no_simulation";
      } else if (!(sm.first.lambda1 > kSemicircleEdge)) {
        sp.status = "below_edge";
      } else {
        sp = solve_point(gp.m, gp.gamma, sm.first, sm.second);
      }
      const FirstStepSolution f = sp.first.value_or(FirstStepSolution{NAN, NAN, NAN, NAN});
      SecondStepSolution s;
      if (sp.second && sp.status == "ok") {
        s = *sp.second;
      } else {
        for (double* v : {&s.lambda2, &s.theta21, &s.theta22, &s.rho21, &s.rho22, &s.kappa, &s.eta, &s.tau, &s.residual})
          *v = NAN;
      }
      const auto solved = alignments_of(f, s);
      const auto sim = alignments_of(sm.first, sm.second);
      double gap = NAN;
      if (sp.status == "ok") {
        gap = 0.0;
        for (std::size_t i = 0; i < solved.size(); ++i) gap = std::max(gap, std::abs(solved[i] - sim[i]));
      }
      std::vector<Cell> row = {num(gp.m.beta1), num(gp.m.beta2), num(gp.m.alpha), num(gp.gamma), num(f.lambda1),
                               num(f.rho11),    num(f.rho12),    num(s.lambda2),  num(s.theta21), num(s.theta22),
                               num(s.rho21),    num(s.rho22),    num(s.kappa),    num(s.eta),     num(s.tau),
                               num(f.residual), num(s.residual), text(sp.status)};
      row.push_back(num(sm.first.lambda1));
      row.push_back(num(sm.second.lambda2));
      for (double a : sim) row.push_back(num(a));
      row.push_back(integer(sm.used));
      row.push_back(num(gap));
      t.add(std::move(row));
    }
    std::string xaxis = "beta1";
    if (c.grid("beta2").size() > 1) xaxis = "beta2";
    if (c.grid("alpha").size() > 1) xaxis = "alpha";
    if (c.grid("beta1").size() > 1) xaxis = "beta1";
    Plot pl;
    pl.table = "solve";
    pl.x = xaxis;
    pl.ys = {"rho11", "rho12", "theta21", "theta22", "sim_rho11", "sim_rho12", "sim_theta21", "sim_theta22"};
    pl.group = c.grid("gamma").size() > 1 ? "gamma" : "";
    pl.title = "asymptotic vs simulated alignments";
    out.plots.push_back(pl);
    out.tables.push_back(std::move(t));
    return out;
  }

  // gamma sweep per model
  std::vector<double> gammas = c.grid("gamma");
  std::sort(gammas.begin(), gammas.end());
  gammas.erase(std::unique(gammas.begin(), gammas.end()), gammas.end());
  Table t("gamma_sweep", {"beta1",   "beta2",   "alpha", "gamma", "lambda1", "rho11", "rho12", "lambda2",
                          "theta21", "theta22", "rho21", "rho22", "kappa",   "eta",   "tau",   "residual",
                          "value",   "branch",  "status"});
  Table peaks("peaks", {"beta1", "beta2", "alpha", "gamma_star", "value_star", "interior_maxima", "status"});
  for (const GridPoint& gp : expand(model_grid(c, false))) {
    const SimulatedMeans sm = simulated_means(gp.m, 1.0, p, seeds, base, ctx.jobs);
    const SolvedPoint anchor = sm.used > 0 && sm.first.lambda1 > kSemicircleEdge
                                   ? solve_point(gp.m, 1.0, sm.first, sm.second)
                                   : SolvedPoint{std::nullopt, std::nullopt, "below_edge"};
    std::vector<GammaPoint> sweep(gammas.size());
    for (std::size_t i = 0; i < gammas.size(); ++i) sweep[i].gamma = gammas[i];
    if (anchor.status == "ok") sweep = gamma_sweep(gp.m, *anchor.first, *anchor.second, gammas);
    const FirstStepSolution f = anchor.first.value_or(FirstStepSolution{NAN, NAN, NAN, NAN});
    std::vector<double> values;
    bool complete = true;
    for (const GammaPoint& g : sweep) {
      std::vector<Cell> row = {num(gp.m.beta1), num(gp.m.beta2), num(gp.m.alpha), num(g.gamma),
                               num(f.lambda1),  num(f.rho11),    num(f.rho12)};
      if (g.solution) {
        const SecondStepSolution& s = *g.solution;
        const double v = std::max(s.theta22, s.rho22);
        values.push_back(v);
        for (double x : {s.lambda2, s.theta21, s.theta22, s.rho21, s.rho22, s.kappa, s.eta, s.tau, s.residual, v})
          row.push_back(num(x));
        row.push_back(text(g.branch));
        row.push_back(text("ok"));
      } else {
        complete = false;
        values.push_back(NAN);
        for (int i = 0; i < 10; ++i) row.push_back(num(NAN));
        row.push_back(text(""));
        row.push_back(text(anchor.status == "ok" ? "unreached" : anchor.status));
      }
      t.add(std::move(row));
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
      if (!(values[i] <= values[best]) && std::isfinite(values[i])) best = i;
    peaks.add({num(gp.m.beta1), num(gp.m.beta2), num(gp.m.alpha), num(values.empty() ? NAN : gammas[best]),
               num(values.empty() ? NAN : values[best]), integer(interior_local_maxima(values)),
               text(complete ? "ok" : "incomplete")});
  }
  Plot pl;
  pl.table = "gamma_sweep";
  pl.x = "gamma";
  pl.ys = {"theta22", "rho22", "value"};
  pl.title = "second-step alignments vs gamma";
  out.plots.push_back(pl);
  out.tables.push_back(std::move(t));
  out.tables.push_back(std::move(peaks));
  return out;
}

// ---------------------------------------------------------------------------
// estimate

ExperimentOutput run_estimate(const Config& c, const RunContext& ctx) {
  ExperimentOutput out;
  out.seeds = seed_list(c);
  const Index p = c.integer("p");
  const std::vector<GridPoint> points = expand(model_grid(c, false));
  const std::size_t ns = out.seeds.size();

  std::vector<std::string> cols = {"beta1",     "beta2",     "alpha",     "seed",          "lambda1_hat",
                                   "lambda2_hat", "eta_hat", "beta1_hat", "beta2_hat",     "alpha_hat",
                                   "residual",  "swapped"};
  for (const char* a : {"rho11", "rho12", "theta21", "theta22", "rho21", "rho22"}) cols.push_back(std::string(a) + "_est");
  for (const char* a : {"rho11", "rho12", "theta21", "theta22", "rho21", "rho22"}) cols.push_back(std::string(a) + "_sim");
  cols.push_back("status");

  struct Trial {
    std::vector<Cell> row;
    SignedMeasurement meas;
    bool measured = false;
  };
  const auto trials_out = parallel_map<Trial>(points.size() * ns, ctx.jobs, [&](std::size_t idx) {
    const GridPoint& gp = points[idx / ns];
    const std::uint64_t seed = out.seeds[idx % ns];
    const SpikedSample s = gen_spiked({p, gp.m.beta1, gp.m.beta2, gp.m.alpha, seed});
    std::vector<Cell> row = {num(gp.m.beta1), num(gp.m.beta2), num(gp.m.alpha), integer(static_cast<std::int64_t>(seed))};
    DeflationRun run;
    try {
      run = deflate(s.tensor, 1.0);
    } catch (const PowerIterationError&) {
      while (row.size() + 1 < cols.size()) row.push_back(num(NAN));
      row[11] = integer(0);
      row.push_back(text("no_convergence"));
      return Trial{std::move(row), {}, false};
    }
    const SignedMeasurement meas = signed_measurement(run, s.truth);
    const Observables obs{run.factor1.lambda, run.factor2.lambda, run.eta_hat};
    for (double x : {obs.lambda1_hat, obs.lambda2_hat, obs.eta_hat}) row.push_back(num(x));
    std::string status = "ok";
    ModelEstimate est;
    bool have = false;
    try {
      est = estimate(obs);
      have = true;
      if (!est.warnings.empty()) status = "out_of_model";
    } catch (const DomainError&) {
      status = "below_edge";
    } catch (const Error&) {
      status = "no_convergence";
    }
    if (have) {
      for (double x : {est.beta1_hat, est.beta2_hat, est.alpha_hat, est.residual_norm}) row.push_back(num(x));
      row.push_back(integer(est.swapped ? 1 : 0));
      for (double x : est.rho_hat) row.push_back(num(x));
    } else {
      for (int i = 0; i < 4; ++i) row.push_back(num(NAN));
      row.push_back(integer(0));
      for (int i = 0; i < 6; ++i) row.push_back(num(NAN));
    }
    for (double x : {meas.first.rho11, meas.first.rho12, meas.second.theta21, meas.second.theta22, meas.second.rho21,
                     meas.second.rho22})
      row.push_back(num(x));
    row.push_back(text(status));
    return Trial{std::move(row), meas, true};
  });
  Table trials("trials", cols);
  for (const auto& t : trials_out) trials.add(t.row);

  // asymptotic round trip: solve at the true parameters, feed the limits back
  Table rt("round_trip", {"beta1", "beta2", "alpha", "lambda1", "lambda2", "eta", "beta1_rt", "beta2_rt",
                          "alpha_rt", "max_error", "status"});
  Table summary("summary", {"beta1", "beta2", "alpha", "n", "beta1_hat_mean", "beta1_hat_std", "beta1_abs_error",
                            "beta2_hat_mean", "beta2_hat_std", "beta2_abs_error", "alpha_hat_mean", "alpha_hat_std",
                            "alpha_abs_error"});
  const std::size_t ib1 = trials.column_index("beta1_hat");
  for (std::size_t gi = 0; gi < points.size(); ++gi) {
    const ModelParams& m = points[gi].m;
    std::vector<double> b1, b2, al, e1, e2, ea;
    for (std::size_t t = 0; t < ns; ++t) {
      const auto& r = trials_out[gi * ns + t].row;
      const double x1 = std::get<double>(r[ib1]), x2 = std::get<double>(r[ib1 + 1]), xa = std::get<double>(r[ib1 + 2]);
      b1.push_back(x1);
      b2.push_back(x2);
      al.push_back(xa);
      e1.push_back(std::abs(x1 - m.beta1));
      e2.push_back(std::abs(x2 - m.beta2));
      ea.push_back(std::abs(xa - m.alpha));
    }
    const Stats s1 = stats_of(b1), s2 = stats_of(b2), sa = stats_of(al);
    summary.add({num(m.beta1), num(m.beta2), num(m.alpha), integer(s1.n), num(s1.mean), num(s1.stddev),
                 num(stats_of(e1).mean), num(s2.mean), num(s2.stddev), num(stats_of(e2).mean), num(sa.mean),
                 num(sa.stddev), num(stats_of(ea).mean)});

    // seed the limit solve from the first measured realisation at this grid point
    std::size_t first_ok = 0;
    while (first_ok + 1 < ns && !trials_out[gi * ns + first_ok].measured) ++first_ok;
    const SignedMeasurement& meas = trials_out[gi * ns + first_ok].meas;
    const SolvedPoint sp = solve_point(m, 1.0, meas.first, meas.second);
    if (sp.status != "ok") {
      rt.add({num(m.beta1), num(m.beta2), num(m.alpha), num(NAN), num(NAN), num(NAN), num(NAN), num(NAN), num(NAN),
              num(NAN), text(sp.status)});
      continue;
    }
    const Observables obs{sp.first->lambda1, sp.second->lambda2, std::abs(sp.second->eta)};
    try {
      const ModelEstimate e = estimate(obs);
      const double err = std::max({std::abs(e.beta1_hat - m.beta1), std::abs(e.beta2_hat - m.beta2),
                                   std::abs(e.alpha_hat - m.alpha)});
      rt.add({num(m.beta1), num(m.beta2), num(m.alpha), num(obs.lambda1_hat), num(obs.lambda2_hat), num(obs.eta_hat),
              num(e.beta1_hat), num(e.beta2_hat), num(e.alpha_hat), num(err), text("ok")});
    } catch (const Error& e) {
      rt.add({num(m.beta1), num(m.beta2), num(m.alpha), num(obs.lambda1_hat), num(obs.lambda2_hat), num(obs.eta_hat),
              num(NAN), num(NAN), num(NAN), num(NAN), text(error_status(e))});
    }
  }
  std::string xaxis = "beta1";
  if (c.grid("beta2").size() > 1) xaxis = "beta2";
  if (c.grid("alpha").size() > 1) xaxis = "alpha";
  if (c.grid("beta1").size() > 1) xaxis = "beta1";
  Plot pl;
  pl.table = "summary";
  pl.x = xaxis;
  pl.ys = {"beta1_hat_mean", "beta2_hat_mean", "alpha_hat_mean"};
  pl.title = "estimated parameters";
  out.plots.push_back(pl);
  out.tables.push_back(std::move(summary));
  out.tables.push_back(std::move(trials));
  out.tables.push_back(std::move(rt));
  return out;
}

// ---------------------------------------------------------------------------
// improve

ExperimentOutput run_improve(const Config& c, const RunContext& ctx) {
  ExperimentOutput out;
  out.seeds = seed_list(c);
  const Index p = c.integer("p");
  const double eps = c.num("eps_step");
  const std::vector<GridPoint> points = expand(model_grid(c, false));
  const std::size_t ns = out.seeds.size();

  struct One {
    std::vector<Cell> row;
    std::vector<std::vector<Cell>> trace;
  };
  const auto runs = parallel_map<One>(points.size() * ns, ctx.jobs, [&](std::size_t idx) {
    const GridPoint& gp = points[idx / ns];
    const std::uint64_t seed = out.seeds[idx % ns];
    const SpikedSample s = gen_spiked({p, gp.m.beta1, gp.m.beta2, gp.m.alpha, seed});
    One o;
    const auto sd = static_cast<std::int64_t>(seed);
    const double nan = NAN;
    ImprovedResult r;
    try {
      r = improved_deflation(s.tensor, eps);
    } catch (const PowerIterationError&) {
      o.row = {num(gp.m.beta1), num(gp.m.beta2), num(gp.m.alpha), integer(sd)};
      while (o.row.size() < 14) o.row.push_back(num(nan));
      o.row.push_back(integer(0));
      o.row.push_back(text("no_convergence"));
      return o;
    }
    const DeflationRun& b = r.baseline;
    const ComponentMatch mb =
        match_components({&b.factor1.u, &b.factor1.v, &b.factor1.w}, {&b.factor2.u, &b.factor2.v, &b.factor2.w}, s.truth);
    const auto& k = r.components;
    const ComponentMatch mi = match_components({&k[0].u, &k[0].v, &k[0].w}, {&k[1].u, &k[1].v, &k[1].w}, s.truth);
    o.row = {num(gp.m.beta1), num(gp.m.beta2), num(gp.m.alpha), integer(sd), num(r.gamma_star),
             num(r.estimates ? r.estimates->beta1_hat : nan), num(r.estimates ? r.estimates->beta2_hat : nan),
             num(r.estimates ? r.estimates->alpha_hat : nan), num(k[0].beta), num(k[1].beta),
             num(mb.alignment_u[0]), num(mb.alignment_u[1]), num(mi.alignment_u[0]), num(mi.alignment_u[1]),
             integer(static_cast<std::int64_t>(r.warnings.size())), text(r.aborted ? "fallback" : "ok")};
    for (const SweepPoint& pt : r.sweep_trace) {
      o.trace.push_back({num(gp.m.beta1), num(gp.m.beta2), num(gp.m.alpha), integer(sd), num(pt.gamma), num(pt.value),
                         integer(pt.tracked == 0 ? 21 : 22), num(pt.solution.kappa), num(pt.solution.tau)});
    }
    return o;
  });

  Table t("runs", {"beta1", "beta2", "alpha", "seed", "gamma_star", "beta1_hat", "beta2_hat", "alpha_hat",
                   "component1_beta", "component2_beta", "baseline_alignment1", "baseline_alignment2",
                   "improved_alignment1", "improved_alignment2", "warnings", "status"});
  Table tr("sweep_trace", {"beta1", "beta2", "alpha", "seed", "gamma", "predicted_alignment", "tracked", "kappa", "tau"});
  for (const One& o : runs) {
    t.add(o.row);
    for (const auto& r : o.trace) tr.add(r);
  }
  Table summary("summary", {"beta1", "beta2", "alpha", "n", "baseline_alignment2_mean", "improved_alignment2_mean",
                            "gap", "baseline_alignment1_mean", "improved_alignment1_mean", "gamma_star_mean",
                            "fallbacks"});
  for (std::size_t gi = 0; gi < points.size(); ++gi) {
    std::vector<double> b1, b2, i1, i2, gs;
    std::int64_t fallbacks = 0;
    for (std::size_t s = 0; s < ns; ++s) {
      const auto& r = runs[gi * ns + s].row;
      if (std::get<std::string>(r[15]) == "no_convergence") continue;
      gs.push_back(std::get<double>(r[4]));
      b1.push_back(std::get<double>(r[10]));
      b2.push_back(std::get<double>(r[11]));
      i1.push_back(std::get<double>(r[12]));
      i2.push_back(std::get<double>(r[13]));
      if (std::get<std::string>(r[15]) != "ok") ++fallbacks;
    }
    const double mb2 = stats_of(b2).mean, mi2 = stats_of(i2).mean;
    summary.add({num(points[gi].m.beta1), num(points[gi].m.beta2), num(points[gi].m.alpha),
                 integer(static_cast<std::int64_t>(b2.size())), num(mb2), num(mi2), num(mi2 - mb2), num(stats_of(b1).mean),
                 num(stats_of(i1).mean), num(stats_of(gs).mean), integer(fallbacks)});
  }
  Plot pl;
  pl.table = "summary";
  pl.x = c.grid("alpha").size() > 1 ? "alpha" : (c.grid("beta1").size() > 1 ? "beta1" : "beta2");
  pl.ys = {"baseline_alignment2_mean", "improved_alignment2_mean"};
  pl.title = "second-component alignment";
  out.plots.push_back(pl);
  out.tables.push_back(std::move(summary));
  out.tables.push_back(std::move(t));
  out.tables.push_back(std::move(tr));
  return out;
}

// ---------------------------------------------------------------------------

ExperimentOutput run_command(const std::string& command, const Config& c, const RunContext& ctx) {
  if (command == "spectrum") return run_spectrum(c, ctx);
  if (command == "deflate") return run_deflate(c, ctx);
  if (command == "solve") return run_solve(c, ctx);
  if (command == "estimate") return run_estimate(c, ctx);
  if (command == "improve") return run_improve(c, ctx);
  throw ConfigError("unknown command '" + command + "'");
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> n = {"spectrum", "deflate", "solve", "estimate", "improve"};
  return n;
}

Config command_defaults(const std::string& command) {
  auto it = key_table().find(command);
  if (it == key_table().end()) throw ConfigError("unknown command '" + command + "'");
  Config c;
  for (const KeySpec& k : it->second) c.set(k.key, k.value);
  return c;
}

Config effective_config(const std::string& command, const Config& user) {
  Config c = command_defaults(command);
  std::set<std::string> allowed;
  for (const auto& [k, v] : c.values()) allowed.insert(k);
  user.check_keys(allowed, command);
  c.merge(user);
  validate(command, c);
  return c;
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = [] {
    auto mk = [](std::string name, std::string cmd, std::string desc, std::string cfg, long full) {
      return Preset{std::move(name), std::move(cmd), std::move(desc), Config::parse(cfg, "preset"), full};
    };
    return std::vector<Preset>{
        mk("fig1", "deflate", "alignments of gamma = 1 deflation while beta2 varies, beta1 = 12",
           "p = 150\nbeta1 = 12\nbeta2 = 0:14:1\nalpha = 0,0.5\ngamma = 1\nmode = baseline\nseeds = 3\n", 0),
        mk("fig2", "spectrum", "spectrum of N against the semicircle law",
           "p = 200\nbeta1 = 20\nbeta2 = 15\nalpha = 0.8\ngamma = none\nbins = 40\n", 0),
        mk("fig3", "solve", "asymptotic vs simulated alignments at gamma = 1 while beta1 varies",
           "sweep = snr\np = 100\nbeta1 = 0:15:1\nbeta2 = 5\nalpha = 0.5\ngamma = 1\nseeds = 10\n", 0),
        mk("fig4", "spectrum", "spectrum of M at gamma = 0.85 against the deformed law",
           "p = 200\nbeta1 = 20\nbeta2 = 15\nalpha = 0.8\ngamma = 0.85\nbins = 40\n", 0),
        mk("fig5", "solve", "asymptotic second-step alignments over gamma",
           "sweep = gamma\np = 100\nbeta1 = 10\nbeta2 = 8\nalpha = 0.6\ngamma = 0:1:0.02\nseeds = 1\n", 0),
        mk("fig6", "deflate", "gamma = 1 against improved deflation while alpha varies",
           "p = 150\nbeta1 = 6\nbeta2 = 5.7\nalpha = 0:0.8:0.1\nmode = both\nseeds = 50\n", 200),
        mk("fig7", "estimate", "SNR estimates from single realisations",
           "p = 150\nbeta1 = 6,8,10,12\nbeta2 = 5\nalpha = 0.5\nseeds = 20\n", 100),
        mk("fig8", "estimate", "estimated against simulated alignments while alpha varies",
           "p = 100\nbeta1 = 15\nbeta2 = 5\nalpha = 0:0.8:0.1\nseeds = 20\n", 100),
        mk("fig9", "solve", "asymptotic vs simulated alignments at gamma = 0.8 while beta1 varies",
           "sweep = snr\np = 100\nbeta1 = 0:15:1\nbeta2 = 5\nalpha = 0.5\ngamma = 0.8\nseeds = 10\n", 0),
    };
  }();
  return all;
}

const Preset& preset(const std::string& name) {
  for (const Preset& p : presets())
    if (p.name == name) return p;
  throw ConfigError("unknown figure preset '" + name + "'");
}

std::string schema_help() {
  std::ostringstream o;
  o << "Output files (CSV, header row first):\n"
       "  spectrum:  summary.csv          matrix,size,tau,tau_source,ks_distance,hist_sup_deviation,lambda_min,\n"
       "                                  lambda_max,support_edge\n"
       "             spectrum_{N,M}.csv   index,eigenvalue\n"
       "             histogram_{N,M}.csv  bin_center,density\n"
       "             density_{N,M}.csv    x,density\n"
       "  deflate:   runs.csv             beta1,beta2,alpha,gamma,mode,seed,lambda1,lambda2,rho11,rho12,theta21,\n"
       "                                  theta22,rho21,rho22,kappa,eta,factor1_component,factor2_component,\n"
       "                                  factor1_alignment,factor2_alignment,status\n"
       "             summary.csv          beta1,beta2,alpha,gamma,mode,n,factor1_alignment_mean,\n"
       "                                  factor1_alignment_std,factor2_alignment_mean,factor2_alignment_std,gamma_mean\n"
       "  solve:     solve.csv (sweep=snr)\n"
       "                                  beta1,beta2,alpha,gamma,lambda1,rho11,rho12,lambda2,theta21,theta22,rho21,\n"
       "                                  rho22,kappa,eta,tau,residual_first,residual_second,status,sim_lambda1,\n"
       "                                  sim_lambda2,sim_rho11,...,sim_eta,sim_runs,max_alignment_gap\n"
       "             gamma_sweep.csv (sweep=gamma)\n"
       "                                  beta1,beta2,alpha,gamma,lambda1,rho11,rho12,lambda2,theta21,theta22,rho21,\n"
       "                                  rho22,kappa,eta,tau,residual,value,branch,status\n"
       "             peaks.csv            beta1,beta2,alpha,gamma_star,value_star,interior_maxima,status\n"
       "  estimate:  trials.csv           beta1,beta2,alpha,seed,lambda1_hat,lambda2_hat,eta_hat,beta1_hat,\n"
       "                                  beta2_hat,alpha_hat,residual,swapped,<six>_est,<six>_sim,status\n"
       "             summary.csv          beta1,beta2,alpha,n,beta{1,2}_hat_{mean,std},beta{1,2}_abs_error,\n"
       "                                  alpha_hat_{mean,std},alpha_abs_error\n"
       "             round_trip.csv       beta1,beta2,alpha,lambda1,lambda2,eta,beta1_rt,beta2_rt,alpha_rt,\n"
       "                                  max_error,status\n"
       "  improve:   runs.csv             beta1,beta2,alpha,seed,gamma_star,beta1_hat,beta2_hat,alpha_hat,\n"
       "                                  component1_beta,component2_beta,baseline_alignment{1,2},\n"
       "                                  improved_alignment{1,2},warnings,status\n"
       "             summary.csv          beta1,beta2,alpha,n,baseline_alignment2_mean,improved_alignment2_mean,gap,\n"
       "                                  baseline_alignment1_mean,improved_alignment1_mean,gamma_star_mean,fallbacks\n"
       "             sweep_trace.csv      beta1,beta2,alpha,seed,gamma,predicted_alignment,tracked,kappa,tau\n"
       "  every run: manifest.json        command, version, config, seeds, wall_clock_seconds, outputs[sha256]\n"
       "\n"
       "Config keys (key = value; grids accept a,b,c or lo:hi:step):\n";
  for (const auto& [cmd, keys] : key_table()) {
    o << "  " << cmd << ":";
    for (const KeySpec& k : keys) o << " " << k.key << "=" << k.value;
    o << "\n";
  }
  o << "\nFigure presets:\n";
  for (const Preset& p : presets()) o << "  " << p.name << " (" << p.command << "): " << p.description << "\n";
  return o.str();
}

}  // namespace tdefl::cli
