// kpztt: command-line front end for the two-time library.
#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "kpztt/io.hpp"
#include "kpztt/suites.hpp"

#ifndef KPZTT_BUILD_ID
#define KPZTT_BUILD_ID "unknown"
#endif

using nlohmann::json;
using namespace kpztt;

namespace {

struct Common {
  int nodes = 48;
  int circle_points = 128;
  double radius = 2.0;
  double delta = 0.1;
  double h = 1e-3;
  int wedge_nodes = 60;
  std::string path = "auto";
  double tol = 0;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 20261015;
  unsigned threads = 0;
  std::string cache_dir;

  Precision precision() const { return {nodes, h}; }

  ContourConfig contour() const {
    ContourConfig c;
    c.circle_points = circle_points;
    c.radius = radius;
    c.delta = delta;
    c.wedge_nodes = wedge_nodes;
    c.path = path == "direct" ? KernelPath::Direct : path == "factorized" ? KernelPath::Factorized : KernelPath::Auto;
    c.threads = resolve_threads(threads);
    return c;
  }

  json precision_block() const {
    return {{"nodes", nodes}, {"h", h},           {"circle_points", circle_points}, {"radius", radius},
            {"delta", delta}, {"wedge_nodes", wedge_nodes}, {"path", path},         {"tol", tol}};
  }
};

// grid LO HI N, or an explicit list
std::vector<double> grid_or(const std::vector<double>& grid, const std::vector<double>& list) {
  if (grid.empty()) {
    if (list.empty()) throw std::invalid_argument("grid is empty");
    return list;
  }
  const int n = int(grid[2]);
  if (n < 1 || double(n) != grid[2]) throw std::invalid_argument("grid count must be a positive integer");
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? grid[0] : grid[0] + (grid[1] - grid[0]) * i / (n - 1);
  return v;
}

ResultTable make_table(std::initializer_list<const char*> names) {
  ResultTable t;
  for (const char* n : names) t.columns.push_back({n, false});
  return t;
}

struct Job {
  std::string name;
  json params;
  std::function<ResultTable()> run;
  bool cacheable = true;
};

std::string render(const ResultTable& t, const std::string& format) {
  return format == "json" ? to_json(t).dump(2) + "\n" : to_csv(t);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"KPZ two-time distribution: Fredholm determinants, asymptotics, LPP simulation"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML or INI config file (flags take precedence)");

  Common co;
  app.add_option("--nodes", co.nodes, "quadrature nodes per half-line")->check(CLI::Range(4, 4000))->capture_default_str();
  app.add_option("--circle-points", co.circle_points, "nodes on the u-circle")
      ->check(CLI::Range(8, 100000))
      ->capture_default_str();
  app.add_option("--radius", co.radius, "u-circle radius (> 1)")->check(CLI::Range(1.0 + 1e-9, 1e6))->capture_default_str();
  app.add_option("--delta", co.delta, "contour offset delta")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--fd-step", co.h, "finite-difference step")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--wedge-nodes", co.wedge_nodes, "nodes per wedge ray (direct path)")
      ->check(CLI::Range(8, 4000))
      ->capture_default_str();
  app.add_option("--path", co.path, "kernel path")
      ->check(CLI::IsMember({"auto", "factorized", "direct"}))
      ->capture_default_str();
  app.add_option("--tol", co.tol, "tolerance override (verify suites, ftt |Im| threshold)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--out", co.out, "output file (stdout when empty)");
  app.add_option("--format", co.format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--seed", co.seed, "simulator seed")->capture_default_str();
  app.add_option("--threads", co.threads, "worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--cache-dir", co.cache_dir, "result cache directory");

  std::vector<Job> jobs;
  auto add_job = [&](CLI::App* sub, std::function<Job()> make) {
    sub->final_callback([&jobs, make] { jobs.push_back(make()); });
  };

  // f2
  auto* f2 = app.add_subcommand("f2", "Tracy-Widom F2 and its first two derivatives");
  std::vector<double> f2_xi{0}, f2_grid;
  f2->add_option("--xi", f2_xi, "evaluation points")->capture_default_str();
  f2->add_option("--grid", f2_grid, "LO HI N (overrides --xi)")->expected(3);
  add_job(f2, [&] {
    const auto xs = grid_or(f2_grid, f2_xi);
    return Job{"f2", {{"xi", xs}}, [&co, xs] {
                 const Precision pr = co.precision();
                 ResultTable t = make_table({"xi", "F2", "dF2", "d2F2"});
                 std::vector<std::vector<Cell>> rows(xs.size());
                 parallel_for(xs.size(), co.threads, [&](std::size_t i) {
                   const F2Derivs d = f2_derivs(xs[i], pr);
                   rows[i] = {xs[i], tracy_widom_f2(xs[i], pr), d.d1, d.d2};
                 });
                 for (auto& r : rows) t.add(std::move(r));
                 return t;
               }};
  });

  // ftt
  auto* fs = app.add_subcommand("ftt", "two-time distribution F_tt on a parameter product grid");
  std::vector<double> ft_xi1{0}, ft_eta1{0}, ft_xi2{0}, ft_eta2{0}, ft_alpha{0.5};
  fs->add_option("--xi1", ft_xi1)->capture_default_str();
  fs->add_option("--eta1", ft_eta1)->capture_default_str();
  fs->add_option("--xi2", ft_xi2)->capture_default_str();
  fs->add_option("--eta2", ft_eta2)->capture_default_str();
  fs->add_option("--alpha", ft_alpha)->check(CLI::PositiveNumber)->capture_default_str();
  add_job(fs, [&] {
    std::vector<TwoTimeParams> ps;
    for (double a : ft_alpha)
      for (double x1 : ft_xi1)
        for (double e1 : ft_eta1)
          for (double x2 : ft_xi2)
            for (double e2 : ft_eta2) ps.push_back({x1, e1, x2, e2, a});
    json params = {{"xi1", ft_xi1}, {"eta1", ft_eta1}, {"xi2", ft_xi2}, {"eta2", ft_eta2}, {"alpha", ft_alpha}};
    return Job{"ftt", params, [&co, ps] {
                 const Precision pr = co.precision();
                 const ContourConfig c = co.contour();
                 const double im_tol = co.tol > 0 ? co.tol : 1e-8;
                 ResultTable t = make_table({"xi1", "eta1", "xi2", "eta2", "alpha", "F_tt", "imag", "det_u1", "im_ok"});
                 t.columns.push_back({"path", true});
                 for (const auto& p : ps) {
                   const FttResult r = ftt(p, c, pr);
                   t.add({p.xi1, p.eta1, p.xi2, p.eta2, p.alpha, r.value, r.imag, r.det_u1,
                          std::abs(r.imag) < im_tol ? 1.0 : 0.0, std::string(r.direct ? "direct" : "factorized")});
                 }
                 return t;
               }};
  });

  // longtime
  auto* lt = app.add_subcommand("longtime", "alpha -> 0 expansion: closed-form e1, e2 against a fit of F_tt");
  LongTimePoint lt_pt;
  std::vector<double> lt_alphas{0.02, 0.04, 0.06, 0.08, 0.1};
  lt->add_option("--xi1", lt_pt.xi1)->capture_default_str();
  lt->add_option("--eta1", lt_pt.eta1)->capture_default_str();
  lt->add_option("--xi2", lt_pt.xi2)->capture_default_str();
  lt->add_option("--eta2", lt_pt.eta2)->capture_default_str();
  lt->add_option("--alphas", lt_alphas)->capture_default_str();
  add_job(lt, [&] {
    const LongTimePoint pt = lt_pt;
    const auto alphas = lt_alphas;
    json params = {{"xi1", pt.xi1}, {"eta1", pt.eta1}, {"xi2", pt.xi2}, {"eta2", pt.eta2}, {"alphas", alphas}};
    return Job{"longtime", params, [&co, pt, alphas] {
                 const LongTimeFit f = long_time_fit(pt, alphas, co.contour(), co.precision());
                 ResultTable t = make_table({"xi1", "eta1", "xi2", "eta2", "alpha", "ratio", "residual", "e1", "e1_hat",
                                             "e2", "e2_hat", "e3_hat", "slope"});
                 for (std::size_t i = 0; i < f.alphas.size(); ++i)
                   t.add({pt.xi1, pt.eta1, pt.xi2, pt.eta2, f.alphas[i], f.ratio[i], f.residual[i], f.e1, f.e1_hat, f.e2,
                          f.e2_hat, f.e3_hat, f.slope});
                 return t;
               }};
  });

  // shorttime
  auto* st = app.add_subcommand("shorttime", "alpha -> infinity: dF_tt/dxi1 against F2'(xi1) d/dxi[F2 psi]");
  ShortTimeFrame st_fr;
  std::vector<double> st_alphas{5, 10, 20};
  bool st_total = false;
  st->add_option("--xi1", st_fr.xi1)->capture_default_str();
  st->add_option("--eta1", st_fr.eta1)->capture_default_str();
  st->add_option("--xi", st_fr.xi)->capture_default_str();
  st->add_option("--eta", st_fr.eta)->capture_default_str();
  st->add_option("--alphas", st_alphas)->capture_default_str();
  st->add_flag("--total", st_total, "also compute the total xi1-derivative (xi2 moving)");
  add_job(st, [&] {
    const ShortTimeFrame fr = st_fr;
    const auto alphas = st_alphas;
    const bool total = st_total;
    json params = {{"xi1", fr.xi1}, {"eta1", fr.eta1}, {"xi", fr.xi}, {"eta", fr.eta}, {"alphas", alphas},
                   {"total", total}};
    return Job{"shorttime", params, [&co, fr, alphas, total] {
                 ResultTable t = make_table({"xi1", "eta1", "xi", "eta", "alpha", "xi2", "eta2", "lhs", "lhs_total", "rhs",
                                             "psi", "gap"});
                 for (double a : alphas) {
                   ShortTimeFrame g = fr;
                   g.alpha = a;
                   const TwoTimeParams p = g.params();
                   const ShortTimeCheck r = short_time_check(g, co.contour(), co.precision(), total);
                   t.add({g.xi1, g.eta1, g.xi, g.eta, a, p.xi2, p.eta2, r.lhs,
                          total ? r.lhs_total : std::numeric_limits<double>::quiet_NaN(), r.rhs, r.psi, r.gap()});
                 }
                 return t;
               }};
  });

  // baikrains
  auto* br = app.add_subcommand("baikrains", "Baik-Rains F0 = d/dxi[F2 psi(., 0)]");
  std::vector<double> br_xi{0}, br_grid;
  br->add_option("--xi", br_xi)->capture_default_str();
  br->add_option("--grid", br_grid, "LO HI N (overrides --xi)")->expected(3);
  add_job(br, [&] {
    const auto xs = grid_or(br_grid, br_xi);
    return Job{"baikrains", {{"xi", xs}}, [&co, xs] {
                 const Precision pr = co.precision();
                 ResultTable t = make_table({"xi", "F0", "F0_err", "F2", "psi"});
                 std::vector<std::vector<Cell>> rows(xs.size());
                 parallel_for(xs.size(), co.threads, [&](std::size_t i) {
                   double err = 0;
                   const double f0 = baik_rains_f0(xs[i], pr, &err);
                   rows[i] = {xs[i], f0, err, tracy_widom_f2(xs[i], pr), short_time_psi(xs[i], 0, pr).psi};
                 });
                 for (auto& r : rows) t.add(std::move(r));
                 return t;
               }};
  });

  // simulate
  auto* sm = app.add_subcommand("simulate", "geometric LPP: empirical joint CDF of the rescaled heights");
  LppConfig lc;
  std::vector<double> sm_g1{-6, 4, 21}, sm_g2{-6, 4, 21};
  bool sm_heights = false;
  sm->add_option("--q", lc.q)->capture_default_str();
  sm->add_option("--T", lc.T)->capture_default_str();
  sm->add_option("--t1", lc.t1)->capture_default_str();
  sm->add_option("--t2", lc.t2)->capture_default_str();
  sm->add_option("--eta1", lc.eta1)->capture_default_str();
  sm->add_option("--eta2", lc.eta2)->capture_default_str();
  sm->add_option("--samples", lc.samples)->capture_default_str();
  sm->add_option("--grid1", sm_g1, "LO HI N for the t1 threshold")->expected(3)->capture_default_str();
  sm->add_option("--grid2", sm_g2, "LO HI N for the t2 threshold")->expected(3)->capture_default_str();
  sm->add_flag("--heights", sm_heights, "emit per-sample heights instead of the CDF grid");
  add_job(sm, [&] {
    LppConfig cfg = lc;
    cfg.seed = co.seed;
    cfg.threads = co.threads;
    cfg.validate();
    const auto x1 = grid_or(sm_g1, {}), x2 = grid_or(sm_g2, {});
    const bool heights = sm_heights;
    json params = {{"q", cfg.q},       {"T", cfg.T},           {"t1", cfg.t1},   {"t2", cfg.t2},
                   {"eta1", cfg.eta1}, {"eta2", cfg.eta2},     {"samples", cfg.samples},
                   {"seed", cfg.seed}, {"heights", heights},   {"grid1", x1},    {"grid2", x2}};
    return Job{"simulate", params, [&co, cfg, x1, x2, heights] {
                 const LppSamples s = simulate_lpp(cfg);
                 const F2Table F(-8, 5, 0.01, co.precision());
                 ResultTable t;
                 if (heights) {
                   t = make_table({"sample", "h1", "h2"});
                   for (std::size_t i = 0; i < s.h1.size(); ++i) t.add({double(i), s.h1[i], s.h2[i]});
                 } else {
                   const EmpiricalJoint e = empirical_joint(s, x1, x2);
                   t = make_table({"q", "T", "t1", "t2", "eta1", "eta2", "x1", "x2", "joint", "marg1", "marg2"});
                   for (std::size_t i = 0; i < x1.size(); ++i)
                     for (std::size_t j = 0; j < x2.size(); ++j)
                       t.add({cfg.q, cfg.T, cfg.t1, cfg.t2, cfg.eta1, cfg.eta2, x1[i], x2[j], e.cdf(i, j),
                              double(e.marg1[i]) / e.total, double(e.marg2[j]) / e.total});
                 }
                 t.meta["ks_t1"] = ks_distance(s.h1, F);
                 t.meta["ks_t2"] = ks_distance(s.h2, F);
                 t.meta["cells"] = s.cells;
                 t.meta["sim_seconds"] = s.seconds;
                 return t;
               }};
  });

  // verify
  auto* vf = app.add_subcommand("verify", "run identity suites; nonzero exit on any failure");
  std::vector<std::string> vf_names{"all"};
  bool vf_list = false;
  vf->add_option("suites", vf_names, "suite names or 'all'")->capture_default_str();
  vf->add_flag("--list", vf_list, "list suites and exit");
  add_job(vf, [&] {
    std::vector<std::string> names;
    for (const auto& n : vf_names) {
      if (n == "all") {
        for (const auto& [k, _] : suites()) names.push_back(k);
      } else {
        if (!suites().count(n)) throw std::invalid_argument("unknown suite: " + n);
        names.push_back(n);
      }
    }
    if (vf_list) {
      names.clear();
      for (const auto& [k, _] : suites()) names.push_back(k);
    }
    const bool list = vf_list;
    return Job{"verify", {{"suites", names}, {"list", list}}, [&co, names, list] {
                 ResultTable t;
                 t.columns = {{"suite", true}, {"check", true}, {"deviation", false}, {"tolerance", false}, {"pass", false}};
                 if (list) {
                   t.columns.resize(1);
                   for (const auto& n : names) t.add({n});
                   return t;
                 }
                 SuiteOptions o;
                 o.pr = co.precision();
                 o.contour = co.contour();
                 o.tol = co.tol;
                 for (const auto& n : names)
                   for (const Check& c : run_suite(n, o))
                     t.add({c.suite, c.what, c.deviation, c.tolerance, c.pass() ? 1.0 : 0.0});
                 return t;
               },
               false};
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "kpztt: error: " << e.what() << "\n";
    return 2;
  }

  try {
    const Job& job = jobs.at(0);
    const auto t0 = std::chrono::steady_clock::now();
    const json prec = co.precision_block();
    namespace fs = std::filesystem;
    fs::path cache_file;
    if (!co.cache_dir.empty() && job.cacheable) {
      json key_params = job.params;
      key_params["seed"] = co.seed;
      cache_file = fs::path(co.cache_dir) / hex64(fnv1a(prec.dump())) /
                   (job.name + "-" + hex64(fnv1a(key_params.dump())) + ".json");
    }

    ResultTable t;
    bool hit = false;
    if (!cache_file.empty() && fs::exists(cache_file)) {
      t = from_json(json::parse(read_file(cache_file)));
      hit = true;
    } else {
      t = job.run();
    }
    if (!hit) {
      json m = t.meta;
      t.meta = {{"command", job.name},
                {"config",
                 {{"precision", prec},
                  {"params", job.params},
                  {"seed", co.seed},
                  {"threads", resolve_threads(co.threads)},
                  {"format", co.format}}},
                {"build", KPZTT_BUILD_ID}};
      if (!m.empty()) t.meta["results"] = m;
      t.meta["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (!cache_file.empty()) write_atomic(cache_file, to_json(t).dump(2) + "\n");
    }
    t.meta["cache"] = cache_file.empty() ? "off" : hit ? "hit" : "miss";

    const std::string data = render(t, co.format);
    if (co.out.empty()) {
      std::cout << data;
    } else {
      write_atomic(co.out, data);
      if (co.format == "csv") write_atomic(co.out + ".meta.json", t.meta.dump(2) + "\n");
    }

    if (job.name == "verify") {
      int failed = 0;
      for (const auto& row : t.rows) {
        if (row.size() < 5 || std::get<double>(row[4]) == 1.0) continue;
        ++failed;
        std::fprintf(stderr, "FAIL %s: %s deviation=%.3e tolerance=%.1e\n", std::get<std::string>(row[0]).c_str(),
                     std::get<std::string>(row[1]).c_str(), std::get<double>(row[2]), std::get<double>(row[3]));
      }
      if (failed) {
        std::fprintf(stderr, "%d check(s) failed\n", failed);
        return 1;
      }
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "kpztt: error: " << e.what() << "\n";
    return 2;
  }
}
