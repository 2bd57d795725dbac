// Command-line front end; talks to the library exclusively through the
// C API in cvqkd.h.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cvqkd.h"

namespace {

constexpr int kExitDomain = 2;
constexpr int kExitIo = 3;

int exit_code_for(int status) {
  return status == CVQKD_ERR_IO ? kExitIo : kExitDomain;
}

[[noreturn]] void fail(int status) {
  std::cerr << "error: " << cvqkd_last_error() << "\n";
  std::exit(exit_code_for(status));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open '" << path << "'\n";
    std::exit(kExitIo);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open '" << path << "' for writing\n";
    std::exit(kExitIo);
  }
  out << text;
  if (!out) {
    std::cerr << "error: write failed for '" << path << "'\n";
    std::exit(kExitIo);
  }
}

struct GridOpts {
  double t = -1.0;
  double distance = -1.0;
  double d_max = -1.0;
  double gamma = 0.2;
  int points = 200;
};

// Resolves the (T) xor (distance, gamma) flag family into a list of
// (distance, transmittance) pairs; a plain T yields distance -1.
std::vector<std::pair<double, double>> resolve_grid(const GridOpts& g) {
  std::vector<std::pair<double, double>> out;
  if (g.t >= 0.0) {
    out.emplace_back(-1.0, g.t);
    return out;
  }
  if (g.distance >= 0.0) {
    double t = 0.0;
    if (int rc = cvqkd_transmittance_from_distance(g.distance, g.gamma, &t)) {
      fail(rc);
    }
    out.emplace_back(g.distance, t);
    return out;
  }
  const double dmax = g.d_max >= 0.0 ? g.d_max : 60.0;
  const int n = std::max(2, g.points);
  for (int i = 0; i < n; ++i) {
    const double d = dmax * i / (n - 1);
    double t = 0.0;
    if (int rc = cvqkd_transmittance_from_distance(d, g.gamma, &t)) fail(rc);
    out.emplace_back(d, t);
  }
  return out;
}

void add_grid_flags(CLI::App* cmd, GridOpts& g) {
  auto* t = cmd->add_option("--t", g.t, "channel transmittance");
  auto* dist = cmd->add_option("--distance", g.distance, "fiber length, km");
  auto* dmax =
      cmd->add_option("--d-max", g.d_max, "sweep distances 0..d-max km");
  auto* gamma =
      cmd->add_option("--gamma", g.gamma, "fiber loss, dB/km (default 0.2)");
  cmd->add_option("--points", g.points, "sweep grid size (default 200)");
  t->excludes(dist)->excludes(dmax)->excludes(gamma);
}

int detection_code(const std::string& s) {
  return s == "heterodyne" ? CVQKD_HETERODYNE : CVQKD_HOMODYNE;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CV-QKD key-rate toolkit"};
  app.require_subcommand(1);

  // ---- keyrate ----
  auto* keyrate = app.add_subcommand("keyrate", "secret key rates");
  keyrate->require_subcommand(1);

  struct {
    GridOpts grid;
    double beta = 0.95;
    double v_mod = 4.0;
    double xi_ch = 0.0;
    double xi_el = 0.0;
    double eta = 1.0;
    bool trusted = false;
    std::string detection = "heterodyne";
    std::string output;
  } gm;
  auto* gm_cmd = keyrate->add_subcommand(
      "gm", "Gaussian modulation, untrusted or trusted detector");
  add_grid_flags(gm_cmd, gm.grid);
  gm_cmd->add_option("--beta", gm.beta, "reconciliation efficiency");
  gm_cmd->add_option("--v-mod", gm.v_mod, "modulation variance, SNU");
  gm_cmd->add_option("--xi-ch", gm.xi_ch, "channel excess noise");
  gm_cmd->add_option("--xi-el", gm.xi_el, "electronic noise");
  gm_cmd->add_option("--eta", gm.eta, "detector efficiency");
  gm_cmd->add_flag("--trusted", gm.trusted, "calibrated-detector model");
  gm_cmd->add_option("--detection", gm.detection, "homodyne|heterodyne")
      ->check(CLI::IsMember({"homodyne", "heterodyne"}));
  gm_cmd->add_option("--output,-o", gm.output, "output CSV path");

  struct {
    std::string constellation_file;
    std::string modulation = "bpsk";
    double alpha = 0.15;
    double beta = 0.95;
    double t_lo = 0.05;
    double t_hi = 1.0;
    int t_points = 20;
    double t_single = -1.0;
    std::string detection = "homodyne";
    std::string recon = "reverse";
    std::string bound = "both";
    std::string output;
  } dm;
  auto* dm_cmd =
      keyrate->add_subcommand("dm", "discrete modulation over pure loss");
  dm_cmd->add_option("--constellation", dm.constellation_file,
                     "constellation JSON file");
  dm_cmd->add_option("--modulation", dm.modulation, "bpsk|qpsk")
      ->check(CLI::IsMember({"bpsk", "qpsk"}));
  dm_cmd->add_option("--alpha", dm.alpha, "coherent amplitude");
  dm_cmd->add_option("--beta", dm.beta, "reconciliation efficiency");
  auto* dm_t = dm_cmd->add_option("--t", dm.t_single, "single transmittance");
  auto* dm_lo = dm_cmd->add_option("--t-min", dm.t_lo, "grid start");
  auto* dm_hi = dm_cmd->add_option("--t-max", dm.t_hi, "grid end");
  auto* dm_np = dm_cmd->add_option("--t-points", dm.t_points, "grid size");
  dm_t->excludes(dm_lo)->excludes(dm_hi)->excludes(dm_np);
  dm_cmd->add_option("--detection", dm.detection, "homodyne|heterodyne")
      ->check(CLI::IsMember({"homodyne", "heterodyne"}));
  dm_cmd->add_option("--reconciliation", dm.recon, "direct|reverse")
      ->check(CLI::IsMember({"direct", "reverse"}));
  dm_cmd->add_option("--bound", dm.bound, "direct|extremality|both")
      ->check(CLI::IsMember({"direct", "extremality", "both"}));
  dm_cmd->add_option("--output,-o", dm.output, "output CSV path");

  struct {
    double xi = -1.0;
    double xi_lo = 4.5;
    double xi_hi = 10.0;
    int points = 20;
    std::string output;
  } mdi;
  auto* mdi_cmd = keyrate->add_subcommand("mdi", "symmetric-relay MDI rate");
  auto* mdi_xi = mdi_cmd->add_option("--xi", mdi.xi, "equivalent noise");
  auto* mdi_lo = mdi_cmd->add_option("--xi-min", mdi.xi_lo, "grid start");
  auto* mdi_hi = mdi_cmd->add_option("--xi-max", mdi.xi_hi, "grid end");
  auto* mdi_np = mdi_cmd->add_option("--points", mdi.points, "grid size");
  mdi_xi->excludes(mdi_lo)->excludes(mdi_hi)->excludes(mdi_np);
  mdi_cmd->add_option("--output,-o", mdi.output, "output CSV path");

  // ---- estimate ----
  struct {
    std::string input;
    double v_a = 4.0;
    double eps_pe = 1e-10;
    std::string convention = "paper";
    double alpha = 0.0;
    std::string output;
  } est;
  auto* est_cmd = app.add_subcommand(
      "estimate", "MLE and worst-case bounds from a CSV dataset");
  est_cmd->add_option("--input,-i", est.input, "CSV file (x,y rows)")
      ->required();
  est_cmd->add_option("--v-a", est.v_a, "modulation variance V_A");
  est_cmd->add_option("--eps-pe", est.eps_pe, "estimation failure prob");
  est_cmd->add_option("--convention", est.convention, "paper|gaussian")
      ->check(CLI::IsMember({"paper", "gaussian"}));
  est_cmd->add_option(
      "--alpha", est.alpha,
      "QPSK amplitude: switches to the QPSK moment estimators");
  est_cmd->add_option("--output,-o", est.output, "output JSON path");

  // ---- finite-size ----
  struct {
    double mutual_info = 0.0;
    double chi = 0.0;
    double beta = 0.95;
    double n_total = 1e9;
    double m_disclosed = 5e8;
    int d_bits = 5;
    double p_ec = 0.95;
    double eps = 1e-10;
    std::string output;
  } fs;
  auto* fs_cmd =
      app.add_subcommand("finite-size", "composable finite-size key rate");
  fs_cmd->add_option("--mutual-info", fs.mutual_info, "I(X;Y), bits")
      ->required();
  fs_cmd->add_option("--chi", fs.chi, "worst-case Holevo, bits")->required();
  fs_cmd->add_option("--beta", fs.beta, "reconciliation efficiency");
  fs_cmd->add_option("--n-total", fs.n_total, "total symbols N");
  fs_cmd->add_option("--m", fs.m_disclosed, "symbols disclosed for PE");
  fs_cmd->add_option("--d-bits", fs.d_bits, "discretization bits");
  fs_cmd->add_option("--p-ec", fs.p_ec, "error-correction success prob");
  fs_cmd->add_option("--eps", fs.eps,
                     "per-component failure prob (bar, h, cor, pe)");
  fs_cmd->add_option("--output,-o", fs.output, "output JSON path");

  // ---- simulate ----
  struct {
    GridOpts grid;
    std::string modulation = "gaussian";
    double v_mod = 4.0;
    double alpha = 0.5;
    double xi = 0.0;
    std::string detection = "homodyne";
    std::uint64_t rounds = 1000;
    std::uint64_t seed = 1;
    bool summary = false;
    std::string output;
  } sim;
  auto* sim_cmd =
      app.add_subcommand("simulate", "seeded Monte Carlo channel datasets");
  add_grid_flags(sim_cmd, sim.grid);
  sim_cmd->add_option("--modulation", sim.modulation, "gaussian|qpsk")
      ->check(CLI::IsMember({"gaussian", "qpsk"}));
  sim_cmd->add_option("--v-mod", sim.v_mod, "Gaussian modulation variance");
  sim_cmd->add_option("--alpha", sim.alpha, "QPSK amplitude");
  sim_cmd->add_option("--xi", sim.xi, "excess noise");
  sim_cmd->add_option("--detection", sim.detection, "homodyne|heterodyne")
      ->check(CLI::IsMember({"homodyne", "heterodyne"}));
  sim_cmd->add_option("--rounds", sim.rounds, "number of rounds");
  sim_cmd->add_option("--seed", sim.seed, "RNG seed");
  sim_cmd->add_flag("--summary", sim.summary,
                    "print a JSON summary instead of the CSV");
  sim_cmd->add_option("--output,-o", sim.output, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  if (gm_cmd->parsed()) {
    cvqkd_protocol protocol{detection_code(gm.detection), CVQKD_REVERSE,
                            gm.beta, gm.v_mod};
    std::ostringstream out;
    out << "distance_km,t,mutual_info,holevo,keyrate,abort\n";
    for (const auto& [d, t] : resolve_grid(gm.grid)) {
      cvqkd_channel channel{t, gm.xi_ch, gm.eta, gm.xi_el,
                            gm.trusted ? 1 : 0};
      cvqkd_rate rate;
      if (int rc = cvqkd_keyrate_gm(&protocol, &channel, &rate)) fail(rc);
      out << fmt(d) << "," << fmt(t) << "," << fmt(rate.mutual_info) << ","
          << fmt(rate.holevo) << "," << fmt(rate.keyrate) << ","
          << rate.abort_flag << "\n";
    }
    write_output(gm.output, out.str());
    return 0;
  }

  if (dm_cmd->parsed()) {
    cvqkd_constellation* constellation = nullptr;
    int rc;
    if (!dm.constellation_file.empty()) {
      const std::string text = read_file(dm.constellation_file);
      rc = cvqkd_constellation_from_json(text.c_str(), &constellation);
    } else if (dm.modulation == "qpsk") {
      rc = cvqkd_constellation_qpsk(dm.alpha, &constellation);
    } else {
      rc = cvqkd_constellation_bpsk(dm.alpha, &constellation);
    }
    if (rc) fail(rc);
    std::unique_ptr<cvqkd_constellation, void (*)(cvqkd_constellation*)>
        guard(constellation, cvqkd_constellation_free);

    std::vector<double> t_grid;
    if (dm.t_single >= 0.0) {
      t_grid.push_back(dm.t_single);
    } else {
      const int n = std::max(2, dm.t_points);
      for (int i = 0; i < n; ++i) {
        t_grid.push_back(dm.t_lo + (dm.t_hi - dm.t_lo) * i / (n - 1));
      }
    }

    const bool want_direct = dm.bound != "extremality";
    const bool want_extremality = dm.bound != "direct";
    std::ostringstream out;
    out << "t,mutual_info";
    if (want_direct) out << ",chi_direct,k_direct";
    if (want_extremality) out << ",chi_extremality,k_extremality";
    out << "\n";
    for (double t : t_grid) {
      cvqkd_dm_config config{t,
                             0.0,
                             detection_code(dm.detection),
                             dm.recon == "direct" ? CVQKD_DIRECT
                                                  : CVQKD_REVERSE,
                             dm.beta,
                             0.0,
                             0,
                             0};
      double mi = 0.0;
      if ((rc = cvqkd_mutual_info_dm(constellation, &config, &mi))) fail(rc);
      out << fmt(t) << "," << fmt(mi);
      if (want_direct) {
        double chi = 0.0;
        if ((rc = cvqkd_holevo_dm(constellation, &config, CVQKD_BOUND_DIRECT,
                                  &chi))) {
          fail(rc);
        }
        out << "," << fmt(chi) << "," << fmt(dm.beta * mi - chi);
      }
      if (want_extremality) {
        double chi = 0.0;
        if ((rc = cvqkd_holevo_dm(constellation, &config,
                                  CVQKD_BOUND_EXTREMALITY, &chi))) {
          fail(rc);
        }
        out << "," << fmt(chi) << "," << fmt(dm.beta * mi - chi);
      }
      out << "\n";
    }
    write_output(dm.output, out.str());
    return 0;
  }

  if (mdi_cmd->parsed()) {
    std::vector<double> grid;
    if (mdi.xi >= 0.0) {
      grid.push_back(mdi.xi);
    } else {
      const int n = std::max(2, mdi.points);
      for (int i = 0; i < n; ++i) {
        grid.push_back(mdi.xi_lo + (mdi.xi_hi - mdi.xi_lo) * i / (n - 1));
      }
    }
    std::ostringstream out;
    out << "xi,keyrate\n";
    for (double xi : grid) {
      double k = 0.0;
      if (int rc = cvqkd_keyrate_mdi_symmetric(xi, &k)) fail(rc);
      out << fmt(xi) << "," << fmt(k) << "\n";
    }
    write_output(mdi.output, out.str());
    return 0;
  }

  if (est_cmd->parsed()) {
    const std::string text = read_file(est.input);
    cvqkd_dataset* dataset = nullptr;
    if (int rc = cvqkd_dataset_from_csv(text.c_str(), &dataset)) fail(rc);
    std::unique_ptr<cvqkd_dataset, void (*)(cvqkd_dataset*)> guard(
        dataset, cvqkd_dataset_free);

    std::ostringstream out;
    out.precision(12);
    if (est.alpha > 0.0) {
      double t_hat = 0.0, xi_hat = 0.0;
      if (int rc =
              cvqkd_estimate_qpsk(dataset, est.alpha, &t_hat, &xi_hat)) {
        fail(rc);
      }
      out << "{\"t_hat\": " << t_hat << ", \"xi_hat\": " << xi_hat << "}\n";
    } else {
      cvqkd_estimate r;
      const int convention = est.convention == "gaussian"
                                 ? CVQKD_QUANTILE_GAUSSIAN
                                 : CVQKD_QUANTILE_PAPER;
      if (int rc = cvqkd_estimate_mle(dataset, est.v_a, est.eps_pe,
                                      convention, &r)) {
        fail(rc);
      }
      out << "{\"t_hat\": " << r.t_hat << ", \"sigma2_hat\": " << r.sigma2_hat
          << ", \"t_min\": " << r.t_min << ", \"sigma2_max\": " << r.sigma2_max
          << ", \"epsilon_pe\": " << r.epsilon_pe << ", \"z\": " << r.z
          << "}\n";
    }
    write_output(est.output, out.str());
    return 0;
  }

  if (fs_cmd->parsed()) {
    cvqkd_fs_params params{fs.n_total, fs.m_disclosed, fs.d_bits, fs.p_ec,
                           fs.eps,     fs.eps,         fs.eps,    fs.eps};
    cvqkd_fs_result r;
    if (int rc =
            cvqkd_keyrate_finite(fs.mutual_info, fs.chi, fs.beta, &params, &r)) {
      fail(rc);
    }
    std::ostringstream out;
    out.precision(12);
    out << "{\"k_eps\": " << r.k_eps << ", \"delta_n\": " << r.delta_n
        << ", \"eps_total\": " << r.eps_total
        << ", \"abort\": " << (r.abort_flag ? "true" : "false") << "}\n";
    write_output(fs.output, out.str());
    return 0;
  }

  if (sim_cmd->parsed()) {
    if (sim.grid.t < 0.0 && sim.grid.distance < 0.0 && sim.grid.d_max < 0.0) {
      sim.grid.t = 1.0;  // single point by default
    }
    const auto grid = resolve_grid(sim.grid);
    if (grid.size() != 1) {
      std::cerr << "error: simulate needs a single --t or --distance\n";
      return kExitDomain;
    }
    cvqkd_sim_spec spec{};
    spec.modulation =
        sim.modulation == "qpsk" ? CVQKD_MOD_QPSK : CVQKD_MOD_GAUSSIAN;
    spec.v_mod = sim.v_mod;
    spec.alpha = sim.alpha;
    spec.transmittance = grid.front().second;
    spec.excess_noise = sim.xi;
    spec.detection = detection_code(sim.detection);
    spec.rounds = sim.rounds;
    spec.seed = sim.seed;

    cvqkd_dataset* dataset = nullptr;
    if (int rc = cvqkd_simulate(&spec, &dataset)) fail(rc);
    std::unique_ptr<cvqkd_dataset, void (*)(cvqkd_dataset*)> guard(
        dataset, cvqkd_dataset_free);

    char* text = nullptr;
    const int rc = sim.summary ? cvqkd_dataset_summary_json(dataset, &text)
                               : cvqkd_dataset_to_csv(dataset, &text);
    if (rc) fail(rc);
    std::string body(text);
    cvqkd_string_free(text);
    if (sim.summary) body += "\n";
    write_output(sim.output, body);
    return 0;
  }

  return 0;
}
