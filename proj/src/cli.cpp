#include "qcmc/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "qcmc/analysis.hpp"

namespace qcmc {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int ExperimentConfig::steps_for(double t) const {
  if (N) return *N;
  const double r = t / *dt;
  const long k = std::lround(r);
  if (std::abs(r - static_cast<double>(k)) > 1e-9 * std::max(1.0, r))
    throw std::invalid_argument("t = " + fmt(t) + " is not a multiple of dt = " + fmt(*dt));
  return static_cast<int>(k);
}

Problem ExperimentConfig::problem() const {
  PauliString o = observable.empty() ? PauliString(h.n()) : PauliString::parse(observable);
  if (o.n() != h.n()) throw std::invalid_argument("observable has the wrong number of qubits");
  return {h, psi_i, psi_f, Observable::from_pauli(o)};
}

json ExperimentConfig::to_json() const {
  json j;
  j["hamiltonian"] = hamiltonian_to_json(h);
  if (lattice) j["model"] = lattice_to_json(*lattice);
  j["formula"] = formula.name();
  j["times"] = times;
  if (N) j["N"] = *N;
  else j["dt"] = *dt;
  auto state = [](const StateSpec& s) { return s.product; };
  j["psi_i"] = state(psi_i);
  j["psi_f"] = state(psi_f);
  j["observable"] = observable.empty() ? PauliString(h.n()).to_string() : observable;
  j["N_s"] = run.N_s;
  j["M_s"] = run.M_s;
  j["seed"] = run.seed;
  j["evaluation"] = to_string(run.mode);
  j["mitigation"] = to_string(run.mitigation);
  j["shots"] = run.shots == ShotMode::Sampled ? "sampled" : "expectation";
  j["topology"] = to_string(run.circuit.topology);
  j["merge_pairs"] = run.circuit.merge_pairs;
  if (noise) j["noise"] = noise_to_json(*noise);
  j["exact_reference"] = exact_reference;
  return j;
}

ExperimentConfig parse_experiment(const json& in, const std::string& base_dir) {
  const json& j = in.contains("config") ? in.at("config") : in;
  static const std::set<std::string> known = {"model", "hamiltonian", "hamiltonian_file", "formula", "t", "times", "N", "dt",
                                              "psi_i", "psi_f", "observable", "N_s", "M_s", "seed", "evaluation",
                                              "mitigation", "shots", "topology", "merge_pairs", "noise", "noise_file",
                                              "exact_reference"};
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw std::invalid_argument("unknown config key '" + k + "'");
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? p : (fs::path(base_dir) / p).string(); };

  ExperimentConfig c;
  const int sources = j.contains("model") + j.contains("hamiltonian") + j.contains("hamiltonian_file");
  if (sources == 0) throw std::invalid_argument("config needs a model, hamiltonian or hamiltonian_file");
  if (j.contains("hamiltonian")) {
    c.h = hamiltonian_from_json(j.at("hamiltonian"));
    if (j.contains("model")) c.lattice = lattice_from_json(j.at("model"));
  } else if (j.contains("hamiltonian_file")) {
    const auto path = resolve(j.at("hamiltonian_file").get<std::string>());
    if (!fs::exists(path)) throw std::invalid_argument("hamiltonian file " + path + " does not exist");
    c.h = hamiltonian_from_json(read_json_file(path));
  } else {
    c.lattice = lattice_from_json(j.at("model"));
    c.h = build_model(*c.lattice);
  }
  c.formula = FormulaChoice::parse(j.value("formula", std::string("lor1")));
  if (j.contains("times")) c.times = j.at("times").get<std::vector<double>>();
  else if (j.contains("t")) c.times = {j.at("t").get<double>()};
  else throw std::invalid_argument("config needs t or times");
  for (double t : c.times)
    if (!(t >= 0)) throw std::invalid_argument("times must be non-negative");
  if (j.contains("N") == j.contains("dt")) throw std::invalid_argument("give exactly one of N and dt");
  if (j.contains("N")) {
    c.N = j.at("N").get<int>();
    if (*c.N < 0) throw std::invalid_argument("N must be non-negative");
  } else {
    c.dt = j.at("dt").get<double>();
    if (!(*c.dt > 0)) throw std::invalid_argument("dt must be positive");
  }
  const int n = c.h.n();
  c.psi_i = j.contains("psi_i") ? state_from_json(j.at("psi_i"), n) : StateSpec::zeros(n);
  c.psi_f = j.contains("psi_f") ? state_from_json(j.at("psi_f"), n) : c.psi_i;
  c.observable = j.value("observable", std::string());
  c.run.N_s = j.value("N_s", 1000L);
  c.run.M_s = j.value("M_s", 1);
  c.run.seed = j.value("seed", std::uint64_t(0));
  c.run.mode = parse_eval_mode(j.value("evaluation", std::string("direct")));
  c.run.mitigation = parse_mitigation(j.value("mitigation", std::string("none")));
  const auto shots = j.value("shots", std::string("sampled"));
  if (shots != "sampled" && shots != "expectation") throw std::invalid_argument("shots must be sampled or expectation");
  c.run.shots = shots == "sampled" ? ShotMode::Sampled : ShotMode::Expectation;
  c.run.circuit.topology = parse_topology(j.value("topology", std::string("all-to-all")));
  c.run.circuit.merge_pairs = j.value("merge_pairs", true);
  if (j.contains("noise") && j.contains("noise_file")) throw std::invalid_argument("give at most one of noise and noise_file");
  if (j.contains("noise")) c.noise = noise_from_json(j.at("noise"));
  if (j.contains("noise_file")) {
    const auto path = resolve(j.at("noise_file").get<std::string>());
    if (!fs::exists(path)) throw std::invalid_argument("noise file " + path + " does not exist");
    c.noise = noise_from_json(read_json_file(path));
  }
  c.exact_reference = j.value("exact_reference", n <= kDenseMaxQubits);
  if (c.run.N_s < 1 || c.run.M_s < 1) throw std::invalid_argument("N_s and M_s must be positive");
  if (c.run.mode == EvalMode::Direct ? n > 26 : n + 1 > 26)
    throw std::invalid_argument("system of " + std::to_string(n) + " qubits exceeds the statevector cap");
  if (c.exact_reference && n > kDenseMaxQubits) throw std::invalid_argument("exact reference needs at most 12 qubits");
  c.problem();
  return c;
}

ExperimentConfig load_experiment(const std::string& path) {
  return parse_experiment(read_json_file(path), fs::path(path).parent_path().string().empty() ? "." : fs::path(path).parent_path().string());
}

std::string csv_header() { return "t,re,im,stderr_re,stderr_im,phase_avg_re,phase_avg_im,C_A,N,N_s,M_s,seed,exact_re,exact_im\n"; }

std::string csv_row(double t, const Estimate& e, std::uint64_t seed, std::optional<cplx> exact) {
  std::ostringstream os;
  os << fmt(t) << ',' << fmt(e.A.real()) << ',' << fmt(e.A.imag()) << ',' << fmt(e.stderr_re) << ',' << fmt(e.stderr_im) << ','
     << fmt(e.phase_average.real()) << ',' << fmt(e.phase_average.imag()) << ',' << fmt(e.c_a) << ',' << e.N << ',' << e.N_s
     << ',' << e.M_s << ',' << seed << ',';
  if (exact) os << fmt(exact->real()) << ',' << fmt(exact->imag());
  else os << ',';
  os << '\n';
  return os.str();
}

namespace {

int workers_from_env() {
  const char* w = std::getenv("QCMC_WORKERS");
  if (!w || !*w) return 0;
  try {
    int v = std::stoi(w);
    if (v < 0) throw std::invalid_argument("negative");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("QCMC_WORKERS must be a non-negative integer, got '") + w + "'");
  }
}

void emit(const std::string& out, const std::string& csv, const json& manifest) {
  if (out.empty() || out == "-") {
    std::cout << csv;
    return;
  }
  write_text_file(out + ".csv", csv);
  write_text_file(out + ".json", manifest.dump(2) + "\n");
}

int run_experiment(const std::string& config_path, std::optional<std::uint64_t> seed, int workers, const std::string& out,
                   bool classical, const std::string& command) {
  ExperimentConfig c = load_experiment(config_path);
  if (seed) c.run.seed = *seed;
  c.run.workers = workers > 0 ? workers : workers_from_env();
  if (classical) {
    c.formula = FormulaChoice::parse("poe0");
    if (c.noise) throw std::invalid_argument("the classical engine is noiseless");
  }
  const Problem p = c.problem();
  std::string csv = csv_header();
  json formulas = json::array();
  for (double t : c.times) {
    const int N = c.steps_for(t);
    Estimate e = classical ? classical_run(p, t, N, c.run)
                           : qcmc_run(p, c.formula, t, N, c.run, c.noise ? &*c.noise : nullptr);
    std::optional<cplx> exact;
    if (c.exact_reference) exact = exact_amplitude(p, t);
    csv += csv_row(t, e, c.run.seed, exact);
    formulas.push_back(formula_to_json(build_formula(c.h, c.formula, N ? t / N : 0.0)));
  }
  json manifest{{"command", command}, {"config", c.to_json()}, {"formulas", formulas}, {"csv", out + ".csv"}};
  emit(out, csv, manifest);
  return 0;
}

std::vector<double> parse_grid(const std::string& spec) {
  // "lo:hi:points_per_decade" or a comma list.
  std::vector<double> v;
  if (spec.find(':') != std::string::npos) {
    double lo, hi;
    int per;
    char c1, c2;
    std::istringstream is(spec);
    if (!(is >> lo >> c1 >> hi >> c2 >> per) || c1 != ':' || c2 != ':') throw std::invalid_argument("grid must be lo:hi:per_decade");
    return log_grid(lo, hi, per);
  }
  std::istringstream is(spec);
  std::string tok;
  while (std::getline(is, tok, ',')) v.push_back(std::stod(tok));
  return v;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Quantum-circuit Monte Carlo simulator"};
  app.require_subcommand(1);

  std::string config, out, model;
  std::optional<std::uint64_t> seed;
  int workers = 0;

  auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("--config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed, overrides the config");
    sub->add_option("--workers", workers, "worker threads (default: QCMC_WORKERS or all cores)")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", out, "output prefix for <out>.csv and <out>.json; '-' prints the CSV");
  };
  auto* run_q = app.add_subcommand("run-qcmc", "run the quantum-circuit Monte Carlo estimator");
  add_run_flags(run_q);
  auto* run_c = app.add_subcommand("run-classical", "run the zeroth-order POE Pauli-propagation engine");
  add_run_flags(run_c);

  auto* build = app.add_subcommand("build-model", "write a model Hamiltonian as JSON");
  build->set_help_flag("--help", "print this help message and exit");
  LatticeSpec lat;
  build->add_option("model", model, "fermi-hubbard or heisenberg")->required()->check(CLI::IsMember({"fermi-hubbard", "heisenberg"}));
  build->add_option("--sites", lat.sites, "number of sites")->required()->check(CLI::PositiveNumber);
  build->add_option("--J", lat.J, "hopping or exchange coupling");
  build->add_option("--U", lat.U, "on-site interaction (Hubbard)");
  build->add_option("--h", lat.h, "field (Heisenberg)");
  build->add_option("--out", out, "output file (default stdout)");

  auto* gam = app.add_subcommand("analyze-gamma", "minimum variance rate gamma over the step size");
  std::string formulas = "lor2", eps_spec;
  double eta = 1.0, h_tot_opt = 0.0;
  gam->add_option("--formula", formulas, "comma list of poe0..poe2, lor1, lor2, or 'all'");
  gam->add_option("--eta", eta, "correction-gate error ratio")->check(CLI::NonNegativeNumber);
  gam->add_option("--eps", eps_spec, "error rate per S1 block: value, comma list or lo:hi:per_decade")->required();
  gam->add_option("--h-tot", h_tot_opt, "report dt_opt in time units for this h_tot");
  gam->add_option("--out", out, "output prefix");

  auto* pv = app.add_subcommand("predict-variance", "(2 C_A^{4N} - |A|^2) / M_tot");
  double c_a = 1.0, m_tot = 1.0, abs_a = 0.0;
  int n_steps = 0;
  pv->add_option("--c-a", c_a, "one-step normalization")->required();
  pv->add_option("--N", n_steps, "time steps")->required()->check(CLI::NonNegativeNumber);
  pv->add_option("--m-tot", m_tot, "total shots per part")->required();
  pv->add_option("--abs-a", abs_a, "|A|");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  std::string command;
  for (int i = 0; i < argc; ++i) command += (i ? " " : "") + std::string(argv[i]);

  try {
    if (*run_q) return run_experiment(config, seed, workers, out, false, command);
    if (*run_c) return run_experiment(config, seed, workers, out, true, command);
    if (*build) {
      lat.model = model == "fermi-hubbard" ? Model::FermiHubbard : Model::Heisenberg;
      json j = hamiltonian_to_json(build_model(lat));
      j["model"] = lattice_to_json(lat);
      if (out.empty() || out == "-") std::cout << j.dump(2) << '\n';
      else write_text_file(out, j.dump(2) + "\n");
      return 0;
    }
    if (*gam) {
      std::vector<std::string> names;
      if (formulas == "all") names = {"poe0", "poe1", "poe2", "lor1", "lor2"};
      else {
        std::istringstream is(formulas);
        std::string tok;
        while (std::getline(is, tok, ',')) names.push_back(tok);
      }
      const auto grid = parse_grid(eps_spec);
      std::string csv = "formula,eps,dt_opt,gamma_min\n";
      json fits = json::object();
      for (const auto& name : names) {
        GammaModel m = parse_gamma_model(name, eta, 0.0);
        auto rows = gamma_min_curve({m}, grid);
        std::vector<double> xs, ys;
        for (const auto& r : rows) {
          const double dt = h_tot_opt > 0 ? r.x_opt / h_tot_opt : r.x_opt;
          csv += r.formula + ',' + fmt(r.eps) + ',' + fmt(dt) + ',' + fmt(r.gamma_min) + '\n';
          xs.push_back(r.eps);
          ys.push_back(r.gamma_min);
        }
        if (grid.size() >= 2 && m.order > 0) {
          auto fit = fit_power_law(xs, ys);
          fits[name] = {{"prefactor", fit.prefactor}, {"exponent", fit.exponent}};
          std::cerr << "# fit " << name << " gamma_min = " << fmt(fit.prefactor) << " eps^" << fmt(fit.exponent) << '\n';
        }
      }
      json manifest{{"command", command}, {"formulas", names}, {"eta", eta}, {"eps", grid}, {"h_tot", h_tot_opt}, {"fits", fits}};
      emit(out, csv, manifest);
      return 0;
    }
    if (*pv) {
      std::cout << fmt(predict_variance(c_a, n_steps, m_tot, abs_a)) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace qcmc
