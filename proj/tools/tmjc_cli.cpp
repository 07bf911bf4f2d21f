#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <tmjc/tmjc.hpp>

using namespace tmjc;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kOracleThreshold = 1e-9;

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

struct OutputOptions {
  std::string format = "csv";
  std::string out_path;
};

// Rows are assembled as ordered JSON objects; CSV and JSON Lines are two
// serializations of the same thing.
class TableWriter {
 public:
  explicit TableWriter(const OutputOptions& opts) : format_(opts.format) {
    if (!opts.out_path.empty()) {
      file_.open(opts.out_path);
      if (!file_) throw std::invalid_argument("cannot open output file " + opts.out_path);
    }
  }

  void write_row(const ordered_json& row) {
    std::ostream& os = file_.is_open() ? file_ : std::cout;
    if (format_ == "records") {
      os << row.dump() << '\n';
      return;
    }
    if (!header_done_) {
      bool first = true;
      for (auto it = row.begin(); it != row.end(); ++it) {
        if (!first) os << ',';
        os << it.key();
        first = false;
      }
      os << '\n';
      header_done_ = true;
    }
    bool first = true;
    for (auto it = row.begin(); it != row.end(); ++it) {
      if (!first) os << ',';
      const auto& v = it.value();
      if (v.is_number_float())
        os << sci(v.get<double>());
      else if (v.is_string())
        os << v.get<std::string>();
      else
        os << v.dump();
      first = false;
    }
    os << '\n';
  }

 private:
  std::string format_;
  std::ofstream file_;
  bool header_done_ = false;
};

// Index-addressed worker pool: each slot is written by exactly one worker,
// so the emitted table is byte-identical however many threads run.
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
  const unsigned hw = std::thread::hardware_concurrency();
  const int workers = std::clamp(hw == 0 ? 1 : static_cast<int>(hw), 1, n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

struct CouplingFlags {
  double g1_mag = 1.0;
  double g1_phase = 0.0;
  double g2_mag = 1.0;
  double g2_phase = 0.0;

  CouplingConfig make() const {
    return CouplingConfig(std::polar(g1_mag, g1_phase), std::polar(g2_mag, g2_phase));
  }
};

void add_coupling_flags(CLI::App* cmd, CouplingFlags& f) {
  cmd->add_option("--g1-mag", f.g1_mag, "Magnitude of the mode-1 coupling")
      ->capture_default_str();
  cmd->add_option("--g1-phase", f.g1_phase, "Phase of the mode-1 coupling, radians")
      ->capture_default_str();
  cmd->add_option("--g2-mag", f.g2_mag, "Magnitude of the mode-2 coupling")
      ->capture_default_str();
  cmd->add_option("--g2-phase", f.g2_phase, "Phase of the mode-2 coupling, radians")
      ->capture_default_str();
}

std::vector<double> tau_grid(double tau_max, int steps) {
  std::vector<double> grid(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i)
    grid[static_cast<std::size_t>(i)] = tau_max * i / (steps - 1);
  return grid;
}

int run_figure1(double tau_max, int steps, const OutputOptions& out) {
  struct Seed {
    AtomLevel atom;
    ModeFockLabel label;
  };
  std::vector<Seed> seeds;
  for (const ModeFockLabel& l : contributing_fock_set(1, AtomLevel::Excited))
    seeds.push_back({AtomLevel::Excited, l});
  for (const ModeFockLabel& l : contributing_fock_set(1, AtomLevel::Ground))
    seeds.push_back({AtomLevel::Ground, l});

  const CouplingConfig eq = CouplingConfig::equal_real();
  const std::vector<double> grid = tau_grid(tau_max, steps);
  std::vector<ordered_json> rows(grid.size() * seeds.size());
  parallel_for(static_cast<int>(grid.size()), [&](int i) {
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const TwoModeState field = make_basis_state(seeds[s].label, 3);
      const double tau = grid[static_cast<std::size_t>(i)];
      const double plus = single_step_probability(
          field, seeds[s].atom, TargetState::bell(1, BellSign::Plus), tau, eq);
      const double minus = single_step_probability(
          field, seeds[s].atom, TargetState::bell(1, BellSign::Minus), tau, eq);
      rows[static_cast<std::size_t>(i) * seeds.size() + s] =
          ordered_json{{"tau", tau},
                       {"atom", name_of(seeds[s].atom)},
                       {"n1", seeds[s].label.n1},
                       {"n2", seeds[s].label.n2},
                       {"p_plus", plus},
                       {"p_minus", minus}};
    }
  });
  TableWriter w(out);
  for (const ordered_json& r : rows) w.write_row(r);
  return 0;
}

int run_single(int n_photons, std::optional<double> tau, double tau_max, int steps,
               const std::string& bell_sign, const CouplingFlags& flags,
               const OutputOptions& out) {
  const CouplingConfig cfg = flags.make();
  const std::vector<double> grid =
      tau ? std::vector<double>{*tau} : tau_grid(tau_max, steps);
  std::vector<ordered_json> rows(grid.size());
  parallel_for(static_cast<int>(grid.size()), [&](int i) {
    const double t = grid[static_cast<std::size_t>(i)];
    const BellStepProbabilities p = bell_probabilities_from_N00(n_photons, t, cfg);
    ordered_json row{{"tau", t}};
    if (bell_sign != "minus") row["same_plus"] = p.same_plus;
    if (bell_sign != "plus") row["same_minus"] = p.same_minus;
    if (bell_sign != "minus") row["next_plus"] = p.next_plus;
    if (bell_sign != "plus") row["next_minus"] = p.next_minus;
    rows[static_cast<std::size_t>(i)] = std::move(row);
  });
  TableWriter w(out);
  for (const ordered_json& r : rows) w.write_row(r);
  return 0;
}

int run_conditional(int n_photons, std::vector<double> taus, const CouplingFlags& flags,
                    const OutputOptions& out) {
  if (taus.empty()) taus = certain_detection_taus(n_photons);
  if (static_cast<int>(taus.size()) != n_photons)
    throw std::invalid_argument("conditional: need exactly one interaction time per photon (" +
                                std::to_string(n_photons) + " expected, " +
                                std::to_string(taus.size()) + " given)");
  const CouplingConfig cfg = flags.make();
  const TwoModeState state = conditional_state(n_photons, cfg);
  const double success = conditional_success_probability(taus);
  const double plus = conditional_bell_overlap(n_photons, BellSign::Plus, cfg);
  const double minus = conditional_bell_overlap(n_photons, BellSign::Minus, cfg);

  TableWriter w(out);
  for (int k = 0; k <= n_photons; ++k) {
    const Complex a = state.amplitude({n_photons - k, k});
    w.write_row(ordered_json{{"n1", n_photons - k},
                             {"n2", k},
                             {"coeff_re", a.real()},
                             {"coeff_im", a.imag()},
                             {"success_probability", success},
                             {"bell_plus_overlap", plus},
                             {"bell_minus_overlap", minus}});
  }
  return 0;
}

int run_nonconditional(int steps, std::vector<double> taus, std::optional<int> n_photons,
                       const std::string& bell_sign, const CouplingFlags& flags,
                       const OutputOptions& out) {
  if (taus.empty()) {
    const int n = steps > 0 ? steps : (n_photons ? *n_photons : 1);
    taus = certain_detection_taus(n);
  } else if (steps > 0 && static_cast<int>(taus.size()) != steps) {
    throw std::invalid_argument("nonconditional: --steps disagrees with the --tau-list length");
  }
  const CouplingConfig cfg = flags.make();
  const NonConditionalWeights weights = nonconditional_weights(taus);

  if (n_photons && *n_photons > weights.steps())
    throw std::invalid_argument("nonconditional: " + std::to_string(weights.steps()) +
                                " steps cannot store " + std::to_string(*n_photons) +
                                " photons");

  std::vector<int> sectors;
  if (n_photons)
    sectors.push_back(*n_photons);
  else
    for (int twoj = 0; twoj <= weights.steps(); ++twoj) sectors.push_back(twoj);

  TableWriter w(out);
  for (int twoj : sectors) {
    ordered_json row{{"n_photons", twoj}, {"weight", weights.weight(twoj)}};
    const double plus = twoj >= 1 ? conditional_bell_overlap(twoj, BellSign::Plus, cfg) : 0.0;
    const double minus = twoj >= 1 ? conditional_bell_overlap(twoj, BellSign::Minus, cfg) : 0.0;
    if (bell_sign != "minus") row["bell_plus_probability"] = weights.weight(twoj) * plus;
    if (bell_sign != "plus") row["bell_minus_probability"] = weights.weight(twoj) * minus;
    w.write_row(row);
  }
  return 0;
}

int run_oracle(unsigned long long seed, int draws, int cutoff, double tau_max,
               const OutputOptions& out) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> taus(0.0, tau_max);
  const int max_total = std::min(4, cutoff);

  TableWriter w(out);
  double worst = 0.0;
  int worst_draw = -1;
  for (int draw = 0; draw < draws; ++draw) {
    Complex g1(normal(gen), normal(gen));
    Complex g2(normal(gen), normal(gen));
    if (std::abs(g1) + std::abs(g2) < 1e-6) g1 = 1.0;
    const CouplingConfig cfg(g1, g2);
    const double tau = taus(gen);

    std::string state_name;
    AtomFieldState in = [&] {
      if (draw % 4 == 3) {
        state_name = "superposition";
        TwoModeState e(cutoff, Basis::Mode), g(cutoff, Basis::Mode);
        for (int i = 0; i < fock_dimension(max_total); ++i) {
          e.set_amplitude(fock_label_at(i), Complex(normal(gen), normal(gen)));
          g.set_amplitude(fock_label_at(i), Complex(normal(gen), normal(gen)));
        }
        const double norm = std::sqrt(e.amplitudes().squaredNorm() +
                                      g.amplitudes().squaredNorm());
        return AtomFieldState(TwoModeState(cutoff, Basis::Mode, e.amplitudes() / norm),
                              TwoModeState(cutoff, Basis::Mode, g.amplitudes() / norm));
      }
      const ModeFockLabel label = fock_label_at(draw % fock_dimension(max_total));
      const AtomLevel atom = draw % 2 == 0 ? AtomLevel::Excited : AtomLevel::Ground;
      state_name = std::string(atom == AtomLevel::Excited ? "e;" : "g;") +
                   std::to_string(label.n1) + "." + std::to_string(label.n2);
      return AtomFieldState::product(atom, make_basis_state(label, cutoff));
    }();

    const CrosscheckResult res = crosscheck(in, tau, cfg, cutoff);
    if (res.max_deviation > worst) {
      worst = res.max_deviation;
      worst_draw = draw;
    }
    w.write_row(ordered_json{{"draw", draw},
                             {"g1_re", g1.real()},
                             {"g1_im", g1.imag()},
                             {"g2_re", g2.real()},
                             {"g2_im", g2.imag()},
                             {"tau", tau},
                             {"state", state_name},
                             {"max_deviation", res.max_deviation},
                             {"worst_part", name_of(res.worst_part)},
                             {"worst_n1", res.worst_label.n1},
                             {"worst_n2", res.worst_label.n2}});
  }
  std::fprintf(stderr, "oracle: max deviation %.3e over %d draws (threshold %.0e)%s\n", worst,
               draws, kOracleThreshold,
               worst <= kOracleThreshold ? "" : (", worst draw " + std::to_string(worst_draw)).c_str());
  return worst <= kOracleThreshold ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-mode cavity toolkit: entangled photon pairs from single-atom passes"};
  app.require_subcommand(1);
  app.fallthrough(true);
  app.set_config("--config", "", "Read options from an INI file");

  OutputOptions out;
  app.add_option("--format", out.format, "Output format")
      ->check(CLI::IsMember({"csv", "records"}))
      ->capture_default_str();
  app.add_option("--out", out.out_path, "Write rows to this file instead of stdout");

  auto* fig = app.add_subcommand(
      "figure1", "Single-step pair yields over a time grid for the eight low seeds");
  double fig_tau_max = kTwoPi;
  int fig_steps = 201;
  fig->add_option("--tau-max", fig_tau_max, "Largest interaction time on the grid")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fig->add_option("--steps", fig_steps, "Number of grid points")
      ->check(CLI::Range(2, 2000000))
      ->capture_default_str();

  auto* single = app.add_subcommand(
      "single", "Bell yields of one pass over a field holding N photons in mode 1");
  int single_n = 1;
  double single_tau_max = kTwoPi;
  int single_steps = 201;
  std::optional<double> single_tau;
  std::string single_sign;
  CouplingFlags single_couplings;
  single->add_option("--n-photons", single_n, "Stored photon number N")
      ->check(CLI::Range(1, 60))
      ->capture_default_str();
  single->add_option("--tau", single_tau, "Evaluate one interaction time instead of a grid");
  single->add_option("--tau-max", single_tau_max, "Largest interaction time on the grid")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  single->add_option("--steps", single_steps, "Number of grid points")
      ->check(CLI::Range(2, 2000000))
      ->capture_default_str();
  single->add_option("--bell-sign", single_sign, "Restrict output to one Bell combination")
      ->check(CLI::IsMember({"plus", "minus"}));
  add_coupling_flags(single, single_couplings);

  auto* cond = app.add_subcommand(
      "conditional", "State, success probability, and Bell overlaps of the detected-ground scheme");
  int cond_n = 1;
  std::vector<double> cond_taus;
  CouplingFlags cond_couplings;
  cond->add_option("--n-photons", cond_n, "Photon number to accumulate")
      ->check(CLI::Range(1, 60))
      ->capture_default_str();
  cond->add_option("--tau-list", cond_taus,
                   "Comma-separated interaction times, one per photon "
                   "(default: the certain-detection schedule)")
      ->delimiter(',');
  add_coupling_flags(cond, cond_couplings);

  auto* noncond = app.add_subcommand(
      "nonconditional", "Sector weights and Bell probabilities when atoms go undetected");
  int noncond_steps = 0;
  std::vector<double> noncond_taus;
  std::optional<int> noncond_n;
  std::string noncond_sign;
  CouplingFlags noncond_couplings;
  noncond->add_option("--steps", noncond_steps,
                      "Number of atom passes (default: taken from --tau-list or --n-photons)")
      ->check(CLI::Range(1, 10000));
  noncond->add_option("--tau-list", noncond_taus,
                      "Comma-separated interaction times, one per pass")
      ->delimiter(',');
  noncond->add_option("--n-photons", noncond_n, "Report only this photon-number sector")
      ->check(CLI::Range(1, 10000));
  noncond->add_option("--bell-sign", noncond_sign, "Restrict output to one Bell combination")
      ->check(CLI::IsMember({"plus", "minus"}));
  add_coupling_flags(noncond, noncond_couplings);

  auto* oracle = app.add_subcommand(
      "oracle", "Randomized agreement check of the closed form against brute force");
  unsigned long long oracle_seed = 12345;
  int oracle_draws = 50;
  int oracle_cutoff = 8;
  double oracle_tau_max = kTwoPi;
  oracle->add_option("--seed", oracle_seed, "Random seed")->capture_default_str();
  oracle->add_option("--steps", oracle_draws, "Number of random draws")
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();
  oracle->add_option("--cutoff", oracle_cutoff, "Total-photon truncation of both propagators")
      ->check(CLI::Range(1, 40))
      ->capture_default_str();
  oracle->add_option("--tau-max", oracle_tau_max, "Largest drawn interaction time")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fig) return run_figure1(fig_tau_max, fig_steps, out);
    if (*single)
      return run_single(single_n, single_tau, single_tau_max, single_steps, single_sign,
                        single_couplings, out);
    if (*cond) return run_conditional(cond_n, cond_taus, cond_couplings, out);
    if (*noncond)
      return run_nonconditional(noncond_steps, noncond_taus, noncond_n, noncond_sign,
                                noncond_couplings, out);
    if (*oracle)
      return run_oracle(oracle_seed, oracle_draws, oracle_cutoff, oracle_tau_max, out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
