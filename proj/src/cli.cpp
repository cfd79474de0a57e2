#include "qbattery/cli.hpp"

#include "qbattery/battery.hpp"
#include "qbattery/haar.hpp"
#include "qbattery/protocols.hpp"
#include "qbattery/topology.hpp"
#include "qbattery/version.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

namespace qb::cli {

using nlohmann::json;

namespace {

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& context) {
  if (!obj.is_object()) throw ConfigError(context + ": expected a JSON object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.contains(key))
      throw ConfigError(context + ": unknown key '" + key + "'");
}

json load_config(const std::string& path, std::string& raw_bytes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  raw_bytes = ss.str();
  try {
    return json::parse(raw_bytes);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
}

json provenance(const std::string& config_hash, std::uint64_t seed) {
  return json{{"config_hash", "fnv1a:" + config_hash},
              {"seed", seed},
              {"version", qb::version}};
}

std::uint64_t effective_seed(const json& cfg, std::optional<std::uint64_t> seed_override) {
  if (seed_override) return *seed_override;
  if (cfg.contains("seed")) {
    if (!cfg["seed"].is_number_unsigned() &&
        !(cfg["seed"].is_number_integer() && cfg["seed"].get<std::int64_t>() >= 0))
      throw ConfigError("seed: expected a non-negative integer");
    return cfg["seed"].get<std::uint64_t>();
  }
  return 0;
}

LadderHamiltonian ladder_from_json(const json& j) {
  require_keys(j, {"kind", "N", "L", "spacing", "energies"}, "ladder");
  if (!j.contains("kind")) throw ConfigError("ladder: missing 'kind'");
  const std::string kind_str = j["kind"].get<std::string>();
  LadderKind kind;
  if (kind_str == "finite")
    kind = LadderKind::finite;
  else if (kind_str == "semi_infinite_truncated")
    kind = LadderKind::semi_infinite_truncated;
  else if (kind_str == "double_sided_truncated")
    kind = LadderKind::double_sided_truncated;
  else
    throw ConfigError("ladder: unknown kind '" + kind_str + "'");

  int n_or_l = 0;
  if (kind == LadderKind::double_sided_truncated) {
    if (!j.contains("L")) throw ConfigError("ladder: double-sided ladders need 'L'");
    n_or_l = j["L"].get<int>();
  } else {
    if (!j.contains("N")) throw ConfigError("ladder: finite ladders need 'N'");
    n_or_l = j["N"].get<int>();
  }
  try {
    if (j.contains("energies")) {
      const auto vals = j["energies"].get<std::vector<double>>();
      RealVector e(static_cast<Index>(vals.size()));
      for (Index i = 0; i < e.size(); ++i) e(i) = vals[static_cast<std::size_t>(i)];
      return build_ladder(kind, n_or_l, std::move(e));
    }
    const double spacing = j.value("spacing", 1.0);
    return build_ladder(kind, n_or_l, spacing);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("ladder: ") + e.what());
  }
}

json ladder_to_json(const LadderHamiltonian& h) {
  std::vector<double> e(h.energies.data(), h.energies.data() + h.dim());
  return json{{"kind", to_string(h.kind)},
              {"dim", h.dim()},
              {"bottom_label", h.bottom_label()},
              {"top_label", h.top_label()},
              {"energies", e}};
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << body;
}

std::string csv_sibling_path(const std::string& json_path) {
  const std::string suffix = ".json";
  if (json_path.size() > suffix.size() &&
      json_path.compare(json_path.size() - suffix.size(), suffix.size(), suffix) == 0)
    return json_path.substr(0, json_path.size() - suffix.size()) + ".csv";
  return json_path + ".csv";
}

Complex complex_from_json(const json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(context + ": expected [re, im]");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------- bloch-grid

std::vector<std::string> cmd_bloch_grid(const json& cfg, std::uint64_t seed,
                                        const std::string& config_hash,
                                        const std::string& out_path) {
  require_keys(cfg, {"unitary", "grid", "seed"}, "bloch-grid config");
  if (!cfg.contains("unitary") || !cfg.contains("grid"))
    throw ConfigError("bloch-grid config: needs 'unitary' and 'grid'");
  require_keys(cfg["unitary"], {"a", "b", "phase"}, "unitary");
  require_keys(cfg["grid"], {"n_theta", "n_phi", "n_r"}, "grid");

  const Complex a = complex_from_json(cfg["unitary"].at("a"), "unitary.a");
  const Complex b = complex_from_json(cfg["unitary"].at("b"), "unitary.b");
  const double phase = cfg["unitary"].at("phase").get<double>();
  if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-10)
    throw ConfigError("unitary: |a|^2 + |b|^2 must equal 1");

  const int n_theta = cfg["grid"].at("n_theta").get<int>();
  const int n_phi = cfg["grid"].at("n_phi").get<int>();
  const int n_r = cfg["grid"].at("n_r").get<int>();
  if (n_theta < 1 || n_phi < 1 || n_r < 1)
    throw ConfigError("grid: resolutions must be positive");

  const BlochGridResult result = bloch_grid_compute(a, b, phase, n_theta, n_phi, n_r);

  std::ostringstream csv;
  csv << "# config_hash=fnv1a:" << config_hash << ", seed=" << seed
      << ", version=" << qb::version << "\n";
  csv << "# summary: max_closed_numeric_diff=" << fmt17(result.max_closed_numeric_diff)
      << ", ball_mean=" << fmt17(result.ball_mean)
      << ", plane_fit_residual=" << fmt17(result.plane_fit_residual) << "\n";
  csv << "theta,phi,r,deltaE_closed_form,deltaE_numeric\n";
  for (const auto& p : result.rows)
    csv << fmt17(p.theta) << ',' << fmt17(p.phi) << ',' << fmt17(p.r) << ','
        << fmt17(p.closed_form) << ',' << fmt17(p.numeric) << "\n";
  write_text_file(out_path, csv.str());

  std::vector<std::string> failures;
  if (result.max_closed_numeric_diff > 1e-12)
    failures.push_back("closed-form and spectral-observable energies disagree beyond 1e-12");
  if (std::abs(result.ball_mean) > 1e-3)
    failures.push_back("uniform-ball average exceeds 1e-3");
  if (result.plane_fit_residual > 1e-6)
    failures.push_back("energy landscape deviates from a plane through the origin beyond 1e-6");
  return failures;
}

// ----------------------------------------------------------- protocol-report

std::vector<std::string> cmd_protocol_report(const json& cfg, std::uint64_t seed,
                                             const std::string& config_hash,
                                             const std::string& out_path) {
  require_keys(cfg, {"ladder", "control", "probes", "seed"}, "protocol-report config");
  if (!cfg.contains("ladder")) throw ConfigError("protocol-report config: needs 'ladder'");
  const LadderHamiltonian h = ladder_from_json(cfg["ladder"]);

  std::vector<ControlQubitState> controls;
  if (cfg.contains("control")) {
    if (!cfg["control"].is_array()) throw ConfigError("control: expected an array");
    for (const auto& c : cfg["control"]) {
      require_keys(c, {"theta", "phi"}, "control entry");
      try {
        controls.emplace_back(c.value("theta", 0.0), c.value("phi", 0.0));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("control entry: ") + e.what());
      }
    }
  } else {
    controls.emplace_back(0.0, 0.0);
    controls.emplace_back(kPi, 0.0);
  }
  if (cfg.contains("probes")) require_keys(cfg["probes"], {"random_pure"}, "probes");

  std::vector<std::string> failures;
  json report;
  report["provenance"] = provenance(config_hash, seed);
  report["ladder"] = ladder_to_json(h);

  // closed form vs time-evolved drive
  const UnitaryOperator closed = closed_form_unitary(h);
  const UnitaryOperator evolved = evolve_drive(build_drive(h));
  const double equivalence_residual = max_abs(evolved.mat - closed.mat);
  report["equivalence_residual"] = equivalence_residual;
  if (equivalence_residual > 1e-10)
    failures.push_back("time-evolved drive deviates from the closed form beyond 1e-10");

  // per-rung energy table for the control qubit held at |up>
  {
    const QuantumChannel up = induced_channel(closed, ControlQubitState(0.0, 0.0));
    const ChargingObservable q = charging_observable(up, h);
    json table = json::array();
    for (Index p = 0; p < h.dim(); ++p) {
      const double delta_e = q.q(p, p).real();
      const double gap = (p + 1 < h.dim()) ? h.energies(p + 1) - h.energies(p) : 0.0;
      table.push_back(json{{"state", "pi_" + std::to_string(h.labels[static_cast<std::size_t>(p)])},
                           {"delta_e", delta_e},
                           {"energy_gap", gap}});
      if (std::abs(delta_e - gap) > 1e-12)
        failures.push_back("rung energy change deviates from the level gap beyond 1e-12");
    }
    report["theta0_table"] = table;
  }

  // classification sweep over the requested control states
  const auto probes = default_probe_states(h, seed);
  std::vector<double> thetas, phis;
  std::ostringstream csv;
  csv << "# config_hash=fnv1a:" << config_hash << ", seed=" << seed
      << ", version=" << qb::version << "\n";
  csv << "theta,phi,state,delta_e\n";
  json classifications = json::array();
  for (const auto& chi : controls) {
    const SweepResult sweep = interpolation_sweep(h, {chi.theta}, {chi.phi}, probes);
    const SweepEntry& entry = sweep.entries.front();
    classifications.push_back(json{{"theta", entry.theta},
                                   {"phi", entry.phi},
                                   {"verdict", to_string(entry.verdict)},
                                   {"min_eig", entry.min_eig},
                                   {"max_eig", entry.max_eig}});
    for (const auto& [name, delta_e] : entry.delta_e)
      csv << fmt17(entry.theta) << ',' << fmt17(entry.phi) << ',' << name << ','
          << fmt17(delta_e) << "\n";
    if (std::abs(entry.theta) < 1e-12 && entry.verdict != Verdict::uc)
      failures.push_back("control |up> did not classify as UC");
    if (std::abs(entry.theta - kPi) < 1e-12 && entry.verdict != Verdict::ud)
      failures.push_back("control |down> did not classify as UD");
  }
  report["classifications"] = classifications;

  // double-sided ladders: the control qubit must act as a catalyst in the bulk
  if (h.kind == LadderKind::double_sided_truncated && h.top_label() >= 2) {
    const Index d = h.dim();
    const auto [s, s_dag] = shift_operators(h);
    const QuantumChannel up = induced_channel(closed, ControlQubitState(0.0, 0.0));
    const Matrix p_up = (Matrix(2, 2) << 1, 0, 0, 0).finished();
    double channel_residual = 0.0, environment_residual = 0.0;
    for (int k = 0; k < 5; ++k) {
      auto rng = substream_engine(seed, 4096 + static_cast<std::uint64_t>(k));
      Vector psi = Vector::Zero(d);
      for (Index p = 2; p < d - 2; ++p)
        psi(p) = Complex(standard_normal(rng), standard_normal(rng));
      const DensityMatrix rho = DensityMatrix::pure(psi);
      const DensityMatrix out = apply_channel(up, rho);
      channel_residual = std::max(channel_residual, max_abs(out.mat - s_dag * rho.mat * s));
      const DensityMatrix total(
          closed.mat * tensor_product(rho.mat, p_up) * closed.mat.adjoint());
      const DensityMatrix env = partial_trace_battery(total, d, 2);
      environment_residual = std::max(environment_residual, max_abs(env.mat - p_up));
    }
    report["catalysis"] = json{{"channel_residual", channel_residual},
                               {"environment_return_residual", environment_residual}};
    if (channel_residual > 1e-12)
      failures.push_back("bulk channel deviates from the pure energy shift beyond 1e-12");
    if (environment_residual > 1e-12)
      failures.push_back("control qubit does not return to |up> beyond 1e-12");
  }

  report["failures"] = failures;
  write_text_file(out_path, report.dump(2) + "\n");
  write_text_file(csv_sibling_path(out_path), csv.str());
  return failures;
}

// -------------------------------------------------------------------- haar

std::vector<std::string> cmd_haar(const json& cfg, std::uint64_t seed,
                                  const std::string& config_hash, const std::string& out_path) {
  require_keys(cfg, {"channel", "ladder", "dimension", "samples", "rho0", "seed"}, "haar config");
  if (!cfg.contains("channel")) throw ConfigError("haar config: needs 'channel'");
  require_keys(cfg["channel"], {"type", "unitary_seed", "kraus_rank"}, "channel");
  const std::string type = cfg["channel"].value("type", "");

  LadderHamiltonian h;
  if (cfg.contains("ladder")) {
    h = ladder_from_json(cfg["ladder"]);
    if (cfg.contains("dimension") && cfg["dimension"].get<Index>() != h.dim())
      throw ConfigError("haar config: 'dimension' disagrees with the ladder");
  } else if (cfg.contains("dimension")) {
    const int d = cfg["dimension"].get<int>();
    if (d < 2) throw ConfigError("haar config: dimension must be >= 2");
    h = build_ladder(LadderKind::finite, d, 1.0);
  } else {
    throw ConfigError("haar config: needs 'ladder' or 'dimension'");
  }

  const std::int64_t samples = cfg.value("samples", static_cast<std::int64_t>(0));
  if (samples < 100) throw ConfigError("haar config: samples must be >= 100");

  QuantumChannel channel;
  if (type == "haar_unitary") {
    const std::uint64_t useed = cfg["channel"].value("unitary_seed", 0ULL);
    channel = QuantumChannel::from_unitary(sample_haar_unitary(h.dim(), useed));
  } else if (type == "mup" || type == "mdown") {
    const auto [s, s_dag] = shift_operators(h);
    if (type == "mup")
      channel.kraus = {s_dag, DensityMatrix::basis_projector(h.dim(), h.dim() - 1).mat};
    else
      channel.kraus = {s, DensityMatrix::basis_projector(h.dim(), 0).mat};
  } else if (type == "random_cptp") {
    const Index rank = cfg["channel"].value("kraus_rank", 2);
    if (rank < 1 || rank > 8) throw ConfigError("channel: kraus_rank must be in 1..8");
    channel = sample_random_channel(h.dim(), rank, cfg["channel"].value("unitary_seed", 0ULL));
  } else {
    throw ConfigError("channel: unknown type '" + type + "'");
  }

  DensityMatrix rho0;
  const std::string rho0_kind = cfg.value("rho0", "ground");
  if (rho0_kind == "ground") {
    rho0 = DensityMatrix::basis_projector(h.dim(), 0);
  } else if (rho0_kind == "maximally_mixed") {
    rho0 = DensityMatrix::maximally_mixed(h.dim());
  } else if (rho0_kind == "random") {
    auto rng = substream_engine(seed, 0x7fffffffffffffffULL);
    Vector psi(h.dim());
    for (Index i = 0; i < h.dim(); ++i) psi(i) = Complex(standard_normal(rng), standard_normal(rng));
    rho0 = DensityMatrix::pure(psi);
  } else {
    throw ConfigError("haar config: unknown rho0 '" + rho0_kind + "'");
  }

  const double exact = haar_average_exact(channel, h);
  const HaarEstimate mc = haar_average_mc(channel, h, rho0, samples, seed);
  const bool compatible = (mc.std_error > 1e-15)
                              ? std::abs(mc.mean - exact) <= 4.0 * mc.std_error
                              : std::abs(mc.mean - exact) <= 1e-12;

  json out;
  out["provenance"] = provenance(config_hash, seed);
  out["channel"] = type;
  out["dimension"] = h.dim();
  out["rho0"] = rho0_kind;
  out["exact_average"] = exact;
  out["mc"] = json{{"mean", mc.mean},
                   {"std_error", mc.std_error},
                   {"samples", mc.samples},
                   {"seed", mc.seed}};
  out["compatible"] = compatible;
  if (type == "mup" || type == "mdown") {
    const double span = h.energies(h.dim() - 1) - h.energies(0);
    out["unprefixed_value"] = (type == "mup") ? span : -span;
    out["prefactor_note"] =
        "exact_average carries the 1/dim prefactor of the trace identity; the value is often "
        "quoted without it as +/-(E_top - E_bottom), listed here as unprefixed_value";
  }

  std::vector<std::string> failures;
  if (!compatible) failures.push_back("Monte Carlo estimate incompatible with the exact average");
  out["failures"] = failures;
  write_text_file(out_path, out.dump(2) + "\n");
  return failures;
}

// -------------------------------------------------------------------- flow

Matrix random_banded_hermitian(int window, int band, std::mt19937_64& rng) {
  const int dim = 2 * window + 1;
  Matrix h = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    h(i, i) = 2.0 * uniform_unit(rng) - 1.0;
    for (int j = i + 1; j <= std::min(dim - 1, i + band); ++j) {
      const Complex v(2.0 * uniform_unit(rng) - 1.0, 2.0 * uniform_unit(rng) - 1.0);
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return h;
}

std::vector<std::string> cmd_flow(const json& cfg, std::uint64_t seed,
                                  const std::string& config_hash, const std::string& out_path) {
  require_keys(cfg,
               {"family", "window", "cut", "power", "internal_dim", "band", "count", "locality",
                "seed"},
               "flow config");
  const std::string family = cfg.value("family", "");
  const int window = cfg.value("window", 0);
  const int cut = cfg.value("cut", 0);
  if (window < 1) throw ConfigError("flow config: window must be >= 1");
  if (cfg.contains("locality")) require_keys(cfg["locality"], {"C", "l"}, "locality");

  std::vector<std::string> failures;
  json out;
  out["provenance"] = provenance(config_hash, seed);
  out["family"] = family;
  out["window"] = window;
  json reports = json::array();

  auto push_report = [&](const FlowIndexReport& rep, long expected) {
    reports.push_back(json{{"cut", rep.cut_position},
                           {"raw_value", rep.raw_value},
                           {"rounded", rep.rounded},
                           {"residual", rep.residual},
                           {"globally_unitary", rep.globally_unitary},
                           {"cut_isometric", rep.cut_isometric},
                           {"expected", expected}});
    if (rep.residual > 1e-8) failures.push_back("flow index residual exceeds 1e-8");
    if (rep.rounded != expected) failures.push_back("flow index differs from the expected value");
  };

  try {
    if (family == "shift") {
      const int power = cfg.value("power", 1);
      const Index m = cfg.value("internal_dim", 1);
      const BandedBlockUnitary t = shift_power(window, m, power);
      push_report(flow_index(t, cut), static_cast<long>(power) * static_cast<long>(m));
    } else if (family == "protocol_composite") {
      const LadderHamiltonian h =
          build_ladder(LadderKind::double_sided_truncated, window, 1.0);
      const UnitaryOperator u = closed_form_unitary(h);
      push_report(flow_index(flatten_composite(u, h), cut), 0);
      if (cfg.contains("locality")) {
        const double c = cfg["locality"].value("C", 1.0);
        const double l = cfg["locality"].value("l", 1.0);
        const PiecewiseDrive drive = build_drive(h);
        json loc = json::array();
        for (std::size_t i = 0; i < drive.segments.size(); ++i) {
          const LocalityReport lr =
              locality_check(drive.segments[i].generator, window, 2, c, l);
          loc.push_back(json{{"segment", i}, {"ok", lr.ok}, {"worst_excess", lr.worst_excess}});
        }
        out["locality"] = loc;
      }
    } else if (family == "random_local_exponential") {
      const int band = cfg.value("band", 2);
      const int count = cfg.value("count", 20);
      if (band < 1 || band >= window)
        throw ConfigError("flow config: band must be in [1, window)");
      if (count < 1) throw ConfigError("flow config: count must be >= 1");
      bool locality_all_ok = true;
      double locality_worst = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < count; ++i) {
        auto rng = substream_engine(seed, static_cast<std::uint64_t>(i));
        const Matrix h = random_banded_hermitian(window, band, rng);
        const Matrix u = hermitian_propagator(h, 1.0);
        push_report(flow_index(make_banded(u, window, 1), cut), 0);
        if (cfg.contains("locality")) {
          const LocalityReport lr = locality_check(
              h, window, 1, cfg["locality"].value("C", 1.0), cfg["locality"].value("l", 1.0));
          locality_all_ok = locality_all_ok && lr.ok;
          locality_worst = std::max(locality_worst, lr.worst_excess);
        }
      }
      if (cfg.contains("locality"))
        out["locality"] =
            json{{"checked", count}, {"all_ok", locality_all_ok}, {"worst_excess", locality_worst}};
    } else {
      throw ConfigError("flow config: unknown family '" + family + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("flow config: ") + e.what());
  }

  out["reports"] = reports;
  out["failures"] = failures;
  write_text_file(out_path, out.dump(2) + "\n");
  return failures;
}

}  // namespace

double qubit_delta_e_closed_form(Complex a, Complex b, double phase, Complex alpha, Complex beta,
                                 double radius) {
  const Complex e_iphi = std::exp(Complex(0.0, phase));
  const double pure = (std::norm(a) - 1.0) * std::norm(beta) + std::norm(alpha) * std::norm(b) +
                      2.0 * (e_iphi * std::conj(a) * std::conj(b) * alpha * std::conj(beta)).real();
  return radius * pure;  // the I/2 component contributes nothing: Tr Q = 0
}

BlochGridResult bloch_grid_compute(Complex a, Complex b, double phase, int n_theta, int n_phi,
                                   int n_r) {
  Matrix u(2, 2);
  const Complex e_iphi = std::exp(Complex(0.0, phase));
  u << a, b, -std::conj(b) * e_iphi, std::conj(a) * e_iphi;
  Matrix h = Matrix::Zero(2, 2);
  h(1, 1) = 1.0;
  const Matrix q = u * h * u.adjoint() - h;  // observable of rho -> U^dag rho U

  BlochGridResult result;
  result.rows.reserve(static_cast<std::size_t>(n_theta) * n_phi * n_r);
  double sum = 0.0;
  Eigen::Matrix3d xtx = Eigen::Matrix3d::Zero();
  Eigen::Vector3d xty = Eigen::Vector3d::Zero();

  for (int it = 0; it < n_theta; ++it) {
    const double cos_theta = -1.0 + 2.0 * (it + 0.5) / n_theta;
    const double theta = std::acos(cos_theta);
    const double sin_theta = std::sin(theta);
    for (int ip = 0; ip < n_phi; ++ip) {
      const double phi = 2.0 * kPi * (ip + 0.5) / n_phi;
      const Complex alpha = std::cos(theta / 2.0);
      const Complex beta = std::exp(Complex(0.0, phi)) * std::sin(theta / 2.0);
      Matrix rho_pure(2, 2);
      rho_pure << std::norm(alpha), alpha * std::conj(beta), std::conj(alpha) * beta,
          std::norm(beta);
      for (int ir = 0; ir < n_r; ++ir) {
        const double r = std::cbrt((ir + 0.5) / n_r);
        const Matrix rho = r * rho_pure + (1.0 - r) * 0.5 * Matrix::Identity(2, 2);
        BlochPoint p;
        p.theta = theta;
        p.phi = phi;
        p.r = r;
        p.numeric = (q.cwiseProduct(rho.transpose())).sum().real();
        p.closed_form = qubit_delta_e_closed_form(a, b, phase, alpha, beta, r);
        result.rows.push_back(p);
        result.max_closed_numeric_diff =
            std::max(result.max_closed_numeric_diff, std::abs(p.closed_form - p.numeric));
        sum += p.numeric;
        const Eigen::Vector3d x(r * sin_theta * std::cos(phi), r * sin_theta * std::sin(phi),
                                r * cos_theta);
        xtx += x * x.transpose();
        xty += x * p.numeric;
      }
    }
  }
  result.ball_mean = sum / static_cast<double>(result.rows.size());
  const Eigen::Vector3d v = xtx.ldlt().solve(xty);
  std::size_t idx = 0;
  for (int it = 0; it < n_theta; ++it)
    for (int ip = 0; ip < n_phi; ++ip)
      for (int ir = 0; ir < n_r; ++ir) {
        const BlochPoint& p = result.rows[idx++];
        const Eigen::Vector3d x(p.r * std::sin(p.theta) * std::cos(p.phi),
                                p.r * std::sin(p.theta) * std::sin(p.phi),
                                p.r * std::cos(p.theta));
        result.plane_fit_residual =
            std::max(result.plane_fit_residual, std::abs(p.numeric - v.dot(x)));
      }
  return result;
}

int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_path, std::optional<std::uint64_t> seed_override) {
  try {
    std::string raw;
    const json cfg = load_config(config_path, raw);
    const std::string hash = fnv1a64_hex(raw);
    const std::uint64_t seed = effective_seed(cfg, seed_override);

    std::vector<std::string> failures;
    if (command == "bloch-grid")
      failures = cmd_bloch_grid(cfg, seed, hash, out_path);
    else if (command == "protocol-report")
      failures = cmd_protocol_report(cfg, seed, hash, out_path);
    else if (command == "haar")
      failures = cmd_haar(cfg, seed, hash, out_path);
    else if (command == "flow")
      failures = cmd_flow(cfg, seed, hash, out_path);
    else
      throw ConfigError("unknown command: " + command);

    if (!failures.empty()) {
      std::cout << json{{"failures", failures}}.dump(2) << std::endl;
      return 1;
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
}

}  // namespace qb::cli
