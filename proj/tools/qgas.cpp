/*
 * Copyright 2026 The qgas Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// qgas command line runner: emits CSV series, a JSON manifest and a text summary per run.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <random>

#include <Eigen/QR>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qgas/bounds.hpp"
#include "qgas/boson_quench.hpp"
#include "qgas/fermi_box.hpp"
#include "qgas/fock.hpp"
#include "qgas/lattice.hpp"
#include "qgas/timeseries.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qgas;
using cli::RunParameters;

namespace {

constexpr double kPi = std::numbers::pi;

struct Run {
  fs::path dir;
  std::vector<fs::path> outputs;
  std::ostringstream summary;

  std::ofstream open(const std::string& name) {
    const fs::path path = dir / name;
    outputs.push_back(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
  }
};

std::string num(double v) { return format_double(v); }

Statistics parse_statistics(const std::string& s) { return s == "boson" ? Statistics::boson : Statistics::fermion; }

BoxConfig box_config(const RunParameters& p, int N) {
  BoxConfig cfg;
  cfg.N = N;
  cfg.statistics = parse_statistics(p.statistics);
  cfg.a = p.a;
  cfg.samples = p.samples;
  return cfg;
}

int run_fermibox(const RunParameters& p, Run& run) {
  if (!p.scan_N.empty()) {
    const auto [lo, hi] = cli::parse_range(p.scan_N);
    std::vector<int> Ns;
    for (int n = lo; n <= hi; ++n) Ns.push_back(n);
    const auto scan = scan_N(box_config(p, lo), Ns);
    auto out = run.open("fermibox_scan.csv");
    out << "N,meanD\n";
    for (std::size_t i = 0; i < scan.N.size(); ++i) out << scan.N[i] << ',' << num(scan.mean_D[i]) << '\n';
    run.summary << "N scan " << lo << ".." << hi << " (" << p.statistics << ")\n";
    run.summary << "fitted exponent: " << num(scan.fit.exponent) << " (r^2 " << num(scan.fit.r_squared) << ")\n";
    return 0;
  }
  const BoxConfig cfg = box_config(p, p.N);
  const BoxSeries series(cfg);
  const auto D = series.half_period_grid(static_cast<std::size_t>(p.samples));
  {
    auto out = run.open("fermibox.csv");
    write_csv(out, TimeSeries(0.0, cfg.recurrence_time() / 2.0, D));
  }
  const auto avg = time_average_D(cfg);
  run.summary << "box, N = " << cfg.N << " " << p.statistics << "s, basis cutoff " << resolved_cutoff(cfg) << "\n";
  run.summary << "recurrence time: " << num(cfg.recurrence_time()) << "\n";
  run.summary << "time-averaged D over [0, T_rec/2]: " << num(avg.mean) << "\n";
  if (cfg.statistics == Statistics::fermion) {
    const auto teq = equilibration_time(cfg);
    run.summary << "analytic bound on <D>: " << num(avg.bound) << " (" << (avg.within_bound ? "PASS" : "FAIL")
                << ")\n";
    run.summary << "T_eq: " << num(teq.T_eq) << " (D(T_eq) = " << num(teq.D_at_T_eq) << " vs " << num(teq.bound)
                << ", " << (teq.certified ? "PASS" : "FAIL") << ")\n";
  }
  return 0;
}

int run_bosonquench(const RunParameters& p, Run& run) {
  detail::require(!p.gamma.empty(), "bosonquench: need at least one gamma");
  double longest = 0.0;
  std::vector<HarmonicQuench> cfgs;
  for (double g : p.gamma) {
    HarmonicQuench cfg;
    cfg.gamma = g;
    validate(cfg);
    longest = std::max(longest, kPi / cfg.omega());
    cfgs.push_back(cfg);
  }
  const auto grid = uniform_grid(0.0, longest, static_cast<std::size_t>(p.samples));
  auto out = run.open("bosonquench.csv");
  out << 't';
  for (const auto& c : cfgs) out << ",gamma=" << num(c.gamma);
  out << '\n';
  for (double t : grid) {
    out << num(t);
    for (const auto& c : cfgs) out << ',' << num(central_mass_closed_form(c, t));
    out << '\n';
  }
  run.summary << "harmonic quench, window half-width^2 4/(m w0), p = 0.1\n";
  for (const auto& c : cfgs) {
    const auto ts = quench_equilibration_time(c, 0.1);
    run.summary << "gamma " << num(c.gamma) << ": T_eq estimate " << num(ts.formula) << ", first crossing "
                << (ts.measured ? num(*ts.measured) : std::string("none")) << " ("
                << (ts.equilibrates ? "equilibrates" : "does not reach p") << ")\n";
  }
  return 0;
}

int run_lattice(const RunParameters& p, Run& run) {
  const int L = p.L;
  const HoppingModel model = HoppingModel::ring(L);
  const auto cov = alternating_state(L);
  const int y = std::min(10, L - 1);
  const double T = 1000.0;
  const auto grid = uniform_grid(0.0, T, static_cast<std::size_t>(p.samples));
  // tr[rho(t) a_0^dagger a_y] as a single-particle expectation series.
  CMat op = CMat::Zero(L, L);
  op(0, y) = 1.0;
  const ExpectationSeries series(model.spectrum(), CMat(cov.correlations().transpose()), op);
  std::vector<double> values;
  for (const Complex& c : series.values(grid)) values.push_back(std::abs(c));
  {
    auto out = run.open("lattice.csv");
    write_csv(out, TimeSeries(0.0, T, values));
  }
  const auto dos = truncated_dos(model, p.p0);
  CVec phi = CVec::Zero(L);
  phi[0] = 1.0;
  const auto bound = single_mode_bound_check(model, cov, phi, 1, T, p.p0);
  run.summary << "ring L = " << L << ", alternating initial state, correlator sites 0 and " << y << "\n";
  run.summary << "n_max (truncated): " << num(dos.n_max) << ", excluded states " << num(dos.excluded_direct)
              << " vs " << num(dos.excluded_formula) << "\n";
  run.summary << "correlator RMS fluctuation over [0, " << num(T) << "]: " << num(correlator_fluctuation(model, cov, 0, y, T))
              << "\n";
  run.summary << "site-density bound: lhs " << num(bound.lhs) << " rhs " << num(bound.rhs) << " ("
              << (bound.ok ? "PASS" : "FAIL") << ")\n";
  return 0;
}

int run_bounds(const RunParameters& p, Run& run) {
  const std::vector<double> Ts{10.0, 100.0, 1000.0};
  auto cases = box_bound_cases(p.N, Ts);
  const auto ring = ring_bound_cases(p.L, Ts);
  cases.insert(cases.end(), ring.begin(), ring.end());
  auto out = run.open("bounds.csv");
  out << "case,T,measured,bound\n";
  int failures = 0;
  for (const auto& c : cases) {
    out << c.label << ',' << num(c.T) << ',' << num(c.measured) << ',' << num(c.bound.bound_value) << '\n';
    run.summary << c.label << " T = " << num(c.T) << ": " << num(c.measured) << " <= " << num(c.bound.bound_value)
                << " (" << (c.ok ? "PASS" : "FAIL") << ")\n";
    if (!c.ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify: brute-force Fock cross-checks on random small instances.

CMat random_complex(std::mt19937_64& rng, Eigen::Index n, Eigen::Index m) {
  std::normal_distribution<double> g;
  CMat a(n, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < n; ++i) a(i, j) = Complex(g(rng), g(rng));
  return a;
}

CMat random_unitary(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::HouseholderQR<CMat> qr(random_complex(rng, n, n));
  return qr.householderQ() * CMat::Identity(n, n);
}

json to_json(const CMat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

int run_verify(const RunParameters& p, int instances, Run& run) {
  std::mt19937_64 rng(p.seed);
  std::uniform_int_distribution<int> modes_dist(2, 5);
  std::uniform_real_distribution<double> time_dist(0.0, 20.0);
  double worst_theorem = 0.0;
  int lemma_checked = 0;
  for (int i = 0; i < instances; ++i) {
    const Statistics s = i % 2 == 0 ? Statistics::fermion : Statistics::boson;
    const int m = modes_dist(rng);
    const int N = std::uniform_int_distribution<int>(1, s == Statistics::fermion ? std::min(3, m) : 3)(rng);
    const CMat h0 = random_complex(rng, m, m);
    const CMat h = 0.5 * (h0 + h0.adjoint());
    const CMat U = random_unitary(rng, m);
    RVec occ = RVec::Zero(m);
    for (int k = 0; k < N; ++k)
      occ[s == Statistics::fermion ? k : std::uniform_int_distribution<int>(0, std::min(m, N) - 1)(rng)] += 1.0;
    std::vector<Eigen::Index> used;
    for (Eigen::Index k = 0; k < m; ++k)
      if (occ[k] > 0) used.push_back(k);
    CMat modes(m, static_cast<Eigen::Index>(used.size()));
    RVec n(static_cast<Eigen::Index>(used.size()));
    for (std::size_t k = 0; k < used.size(); ++k) {
      modes.col(static_cast<Eigen::Index>(k)) = U.col(used[k]);
      n[static_cast<Eigen::Index>(k)] = occ[used[k]];
    }
    const int rank = std::uniform_int_distribution<int>(1, m)(rng);
    const CMat P_modes = random_unitary(rng, m).leftCols(rank);

    const auto sys = SpectralSystem::from_hamiltonian(h);
    const auto ens = make_ensemble(s, modes, n);
    const ProjectorObservable P(m, P_modes);
    const FockSpace space(s, m, N, N);
    const CVec psi0 = space.product_state(ens);
    const ManyBodyEvolution evo(build_hamiltonian(space, sys));
    const CMat M = space.counting_operator(P);
    const auto red = reduce(ens, P);

    auto fail = [&](const std::string& what, double t, double a, double b) {
      json inst{{"check", what},       {"index", i},         {"statistics", to_string(s)},
                {"modes", m},          {"N", N},             {"t", t},
                {"many_body", a},      {"single_particle", b}, {"hamiltonian", to_json(h)},
                {"occupied_modes", to_json(modes)},          {"occupations", std::vector<double>(n.data(), n.data() + n.size())},
                {"counted_modes", to_json(P_modes)},         {"seed", p.seed}};
      auto out = run.open("failing_instance.json");
      out << inst.dump(2) << '\n';
      run.summary << "FAIL " << what << " on instance " << i << " at t = " << num(t) << ": " << num(a) << " vs "
                  << num(b) << "\n";
      return 1;
    };

    for (int k = 0; k < 20; ++k) {
      const double t = time_dist(rng);
      const double many = evo.expectation(psi0, M, t);
      const double single = red.N * expectation_P(evolve(sys, red.sigma, t), P);
      worst_theorem = std::max(worst_theorem, std::abs(many - single));
      if (std::abs(many - single) > 1e-10) return fail("many-body vs single-particle expectation", t, many, single);
    }
    const auto lemma = fluctuation_check(space, ens, P);
    ++lemma_checked;
    if (!lemma.bound_ok) return fail("second-moment inequality", 0.0, lemma.second_moment, lemma.bound);
  }
  run.summary << "PASS many-body vs single-particle expectation on " << instances
              << " instances x 20 times (max deviation " << num(worst_theorem) << ")\n";
  run.summary << "PASS second-moment inequality on " << lemma_checked << " product states\n";
  return 0;
}

void write_manifest(const std::string& subcommand, const RunParameters& p, double seconds, Run& run) {
  json outputs = json::array();
  for (const auto& f : run.outputs)
    outputs.push_back({{"file", f.filename().string()}, {"sha256", cli::sha256_hex(f)}, {"bytes", fs::file_size(f)}});
  json manifest{{"subcommand", subcommand},
                {"version", QGAS_VERSION},
                {"parameters",
                 {{"N", p.N},
                  {"scan-N", p.scan_N},
                  {"L", p.L},
                  {"gamma", p.gamma},
                  {"samples", p.samples},
                  {"a", p.a},
                  {"p0", p.p0},
                  {"seed", p.seed},
                  {"statistics", p.statistics},
                  {"out", p.out}}},
                {"wall_time_seconds", seconds},
                {"outputs", outputs}};
  std::ofstream(run.dir / "manifest.json") << manifest.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibration experiments for free quantum gases", "qgas"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(QGAS_VERSION));

  RunParameters p;
  std::string config_path;
  int verify_instances = 200;
  std::map<std::string, std::vector<CLI::Option*>> given;

  auto opt = [&](CLI::App* sub, const std::string& key, auto& target, const std::string& help) {
    CLI::Option* o = sub->add_option("--" + key, target, help);
    given[key].push_back(o);
    return o;
  };
  auto common = [&](CLI::App* sub) {
    opt(sub, "out", p.out, "Output directory");
    sub->add_option("--config", config_path, "Config file with key = value lines")->check(CLI::ExistingFile);
  };

  auto* fermibox = app.add_subcommand("fermibox", "Particles released from half a box");
  opt(fermibox, "N", p.N, "Particle number");
  opt(fermibox, "scan-N", p.scan_N, "Scan particle numbers a:b and fit <D> ~ N^k");
  opt(fermibox, "samples", p.samples, "Grid points over [0, T_rec/2]");
  opt(fermibox, "a", p.a, "Timescale constant");
  opt(fermibox, "statistics", p.statistics, "fermion or boson")->check(CLI::IsMember({"fermion", "boson"}));
  common(fermibox);

  auto* quench = app.add_subcommand("bosonquench", "Harmonic trap quench");
  opt(quench, "gamma", p.gamma, "Quench ratio omega0 / omega (repeatable)");
  opt(quench, "samples", p.samples, "Grid points");
  common(quench);

  auto* lattice = app.add_subcommand("lattice", "Free fermions on a hopping ring");
  opt(lattice, "L", p.L, "Number of sites");
  opt(lattice, "p0", p.p0, "Band-edge truncation momentum");
  opt(lattice, "samples", p.samples, "Grid points over [0, 1000]");
  common(lattice);

  auto* bounds = app.add_subcommand("bounds", "Time-averaged deviation against the general bound");
  opt(bounds, "N", p.N, "Fermions in the box");
  opt(bounds, "L", p.L, "Ring size");
  common(bounds);

  auto* verify = app.add_subcommand("verify", "Brute-force Fock-space cross-checks");
  opt(verify, "seed", p.seed, "Random seed");
  given["samples"].push_back(verify->add_option("--samples", verify_instances, "Number of random instances"));
  common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    if (!config_path.empty()) {
      for (const auto& [key, value] : cli::load_config(config_path)) {
        bool on_command_line = false;
        for (auto* o : given[key]) on_command_line = on_command_line || o->count() > 0;
        if (!on_command_line) {
          if (key == "samples" && name == "verify") verify_instances = std::stoi(value);
          else cli::assign(p, key, value);
        }
      }
    }
    if (!p.scan_N.empty()) cli::parse_range(p.scan_N);
  } catch (const cli::ConfigError& e) {
    std::cerr << "qgas: config error: " << e.what() << "\n";
    return 2;
  }

  Run run;
  run.dir = p.out;
  fs::create_directories(run.dir);
  const auto start = std::chrono::steady_clock::now();
  int status = 0;
  try {
    if (name == "fermibox") status = run_fermibox(p, run);
    else if (name == "bosonquench") status = run_bosonquench(p, run);
    else if (name == "lattice") status = run_lattice(p, run);
    else if (name == "bounds") status = run_bounds(p, run);
    else status = run_verify(p, verify_instances, run);
  } catch (const std::exception& e) {
    std::cerr << "qgas " << name << ": " << e.what() << "\n";
    return 3;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  {
    std::ofstream summary(run.dir / "summary.txt");
    summary << run.summary.str();
  }
  write_manifest(name, p, seconds, run);
  std::cout << run.summary.str();
  return status;
}
