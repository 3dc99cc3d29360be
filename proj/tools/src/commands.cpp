#include "jetphase_cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <thread>

#include "CLI11.hpp"
#include "jetphase/momentum.hpp"

namespace jetphase::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Runs task(i) for i in [0, n) on up to worker_count() threads. The first
// exception (lowest index) is rethrown after every task has finished.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min(n, worker_count());
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

SymmetryAlgebra plain_algebra(std::vector<SpecialPhaseFunction> fields) {
  SymmetryAlgebra a;
  a.basis = std::move(fields);
  return a;
}

std::vector<std::string> names_of(const std::vector<SpecialPhaseFunction>& fs) {
  std::vector<std::string> out;
  for (const auto& f : fs) out.push_back(f.name);
  return out;
}

void write_text(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path.string() + ": cannot write");
  out << body;
  if (!out) throw ConfigError(path.string() + ": write failed");
}

json row(double residual, double tol) {
  return {{"residual", residual}, {"tolerance", tol}, {"pass", std::isfinite(residual) && residual < tol}};
}

json error_row(const std::string& what) { return {{"error", what}, {"pass", false}}; }

struct ProbeResult {
  DualityResiduals duality;
  double closure = 0.0;
  double top_form = 0.0;
  std::vector<double> killing, em, lift, holonomy, momentum;
  std::string momentum_error;
};

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, r.ptr);
}

std::size_t worker_count() {
  if (const char* env = std::getenv("JETPHASE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

json run_integrate(const RunConfig& cfg, const fs::path& out_dir) {
  if (cfg.initial_points.empty()) throw ConfigError("initial_points: integrate needs at least one point");
  if (!cfg.has_x0_end) throw ConfigError("x0_end: required for integrate");
  try {
    cfg.integrator.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("integrator: ") + e.what());
  }
  const CatalogModel cm = build_model(cfg);
  const SpacetimeModel& model = cm.model;
  const SymmetryAlgebra charges = plain_algebra(resolve_symmetries(cfg, cm));

  std::vector<PhasePoint> starts;
  for (std::size_t i = 0; i < cfg.initial_points.size(); ++i) {
    const std::string p = "initial_points[" + std::to_string(i) + "]";
    try {
      starts.push_back(PhasePoint::make(model, cfg.initial_points[i].x, cfg.initial_points[i].v));
    } catch (const Error& e) {
      throw ConfigError(p + ": " + e.what());
    }
    if (!(cfg.x0_end > cfg.initial_points[i].x[0])) throw ConfigError(p + ".x[0]: must be below x0_end");
  }

  std::string charge_error;
  try {
    momentum_map(model, charges, starts.front());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::MissingPotential) throw NumericFailure(e.what());
    charge_error = e.what();
  }
  const bool with_charges = charge_error.empty();
  const std::vector<std::string> names = with_charges ? names_of(charges.basis) : std::vector<std::string>{};

  fs::create_directories(out_dir);
  const std::size_t n = starts.size();
  std::vector<Trajectory> trajs(n);
  std::vector<Eigen::VectorXd> drift(n);
  parallel_for(n, [&](std::size_t i) {
    try {
      trajs[i] = integrate(model, starts[i], cfg.x0_end, cfg.integrator);
    } catch (const Error& e) {
      throw NumericFailure("initial_points[" + std::to_string(i) + "]: " + e.what());
    }
    const Trajectory& tr = trajs[i];
    std::string csv = "x0,x1,x2,x3,v1,v2,v3";
    for (const auto& nm : names) csv += "," + nm;
    csv += "\n";
    for (const Vec7& s : tr.samples) {
      for (int c = 0; c < 7; ++c) {
        if (!std::isfinite(s[c])) throw NumericFailure("initial_points[" + std::to_string(i) + "]: non-finite state");
        csv += (c ? "," : "") + format_double(s[c]);
      }
      if (with_charges) {
        const Eigen::VectorXd j = momentum_map(model, charges, PhasePoint::unchecked(s.head<4>(), s.tail<3>()));
        for (Eigen::Index k = 0; k < j.size(); ++k) csv += "," + format_double(j[k]);
      }
      csv += "\n";
    }
    write_text(out_dir / (cfg.trajectory_prefix + "_" + std::to_string(i) + ".csv"), csv);
    drift[i] = with_charges ? charge_drift(model, charges, tr) : Eigen::VectorXd();
  });

  const double drift_tol = cfg.tolerances.at("drift");
  json summary;
  summary["command"] = "integrate";
  summary["spacetime"] = cm.name;
  summary["method"] = to_string(cfg.integrator.method);
  summary["x0_end"] = cfg.x0_end;
  summary["charges"] = names;
  if (!with_charges) summary["charges_error"] = charge_error;
  summary["drift_tolerance"] = drift_tol;
  bool numeric_failure = false;
  std::string drift_csv = "trajectory";
  for (const auto& nm : names) drift_csv += "," + nm;
  drift_csv += "\n";
  json rows = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const Trajectory& tr = trajs[i];
    json t;
    t["index"] = i;
    t["file"] = cfg.trajectory_prefix + "_" + std::to_string(i) + ".csv";
    t["samples"] = tr.samples.size();
    t["termination"] = to_string(tr.termination);
    if (!tr.detail.empty()) t["detail"] = tr.detail;
    t["x0_final"] = tr.samples.back()[0];
    t["rejected_steps"] = tr.rejected_steps;
    if (with_charges) {
      json d = json::object();
      for (std::size_t k = 0; k < names.size(); ++k) d[names[k]] = drift[i][k];
      t["drift"] = d;
      const double worst = drift[i].size() ? drift[i].maxCoeff() : 0.0;
      t["drift_max"] = worst;
      t["drift_pass"] = worst < drift_tol;
      drift_csv += std::to_string(i);
      for (Eigen::Index k = 0; k < drift[i].size(); ++k) drift_csv += "," + format_double(drift[i][k]);
      drift_csv += "\n";
    }
    numeric_failure = numeric_failure || tr.termination == Termination::step_failure;
    rows.push_back(t);
  }
  summary["trajectories"] = rows;
  summary["numeric_failure"] = numeric_failure;
  write_text(out_dir / "drift.csv", drift_csv);
  write_text(out_dir / "summary.json", summary.dump(2) + "\n");
  if (numeric_failure) throw NumericFailure("integration step failure; see summary.json");
  return summary;
}

json run_audit(const RunConfig& cfg) {
  const CatalogModel cm = build_model(cfg);
  const SpacetimeModel& model = cm.model;
  const std::vector<SpecialPhaseFunction> fields = resolve_symmetries(cfg, cm);
  const std::vector<PhasePoint> points = cm.sample_points(cfg.probe_count, cfg.seed);
  const std::size_t nf = fields.size();

  std::vector<ProbeResult> res(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const PhasePoint& p = points[i];
    ProbeResult& r = res[i];
    try {
      const PhaseStructure s = phase_structure(model, p);
      r.duality = duality_residuals(s);
      r.top_form = std::abs(top_form_coefficient(s.tau_hat, s.omega));
      r.closure = closure_residual(omega_form(model), p.coords(), phase_fd_steps(model, p));
      for (const auto& f : fields) {
        r.killing.push_back(lie_metric(model, f.field, p.x()).cwiseAbs().maxCoeff());
        r.em.push_back(em_symmetry_residual(model, f, p.x()));
        r.lift.push_back((special_hamiltonian_lift(model, f, p) - holonomic_lift(model, f.field, p)).cwiseAbs().maxCoeff());
        r.holonomy.push_back(self_holonomy_residual(model, f, p));
      }
    } catch (const Error& e) {
      throw NumericFailure(std::string("probe ") + std::to_string(i) + ": " + e.what());
    }
    for (const auto& f : fields) {
      try {
        r.momentum.push_back(momentum_symplectic_residual(model, plain_algebra({f}), p));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::MissingPotential) throw NumericFailure(e.what());
        r.momentum_error = e.what();
        r.momentum.clear();
        break;
      }
    }
  });

  const auto& tol = cfg.tolerances;
  auto worst = [&](auto pick) {
    double w = 0.0;
    for (const auto& r : res) w = std::max(w, pick(r));
    return w;
  };
  json rep;
  rep["command"] = "audit";
  rep["spacetime"] = cm.name;
  rep["probes"] = points.size();
  rep["seed"] = cfg.seed;
  bool all = true;
  auto track = [&](const json& j) {
    all = all && j.at("pass").get<bool>();
    return j;
  };

  json st;
  st["duality_r1"] = track(row(worst([](const ProbeResult& r) { return r.duality.r1; }), tol.at("duality")));
  st["duality_r2"] = track(row(worst([](const ProbeResult& r) { return r.duality.r2; }), tol.at("duality")));
  st["duality_r3"] = track(row(worst([](const ProbeResult& r) { return r.duality.r3; }), tol.at("duality")));
  st["duality_r4"] = track(row(worst([](const ProbeResult& r) { return r.duality.r4; }), tol.at("duality")));
  st["closure"] = track(row(worst([](const ProbeResult& r) { return r.closure; }), tol.at("closure")));
  double min_top = std::numeric_limits<double>::infinity();
  for (const auto& r : res) min_top = std::min(min_top, r.top_form);
  st["nondegeneracy"] =
      track({{"min_abs", min_top}, {"threshold", tol.at("nondegeneracy")}, {"pass", min_top > tol.at("nondegeneracy")}});
  rep["structure"] = st;

  json syms = json::array();
  std::vector<bool> conserved(nf);
  for (std::size_t k = 0; k < nf; ++k) {
    auto per = [&](std::vector<double> ProbeResult::*member) {
      double w = 0.0;
      for (const auto& r : res) w = std::max(w, (r.*member)[k]);
      return w;
    };
    json s;
    s["name"] = fields[k].name;
    s["killing"] = track(row(per(&ProbeResult::killing), tol.at("killing")));
    s["em_symmetry"] = track(row(per(&ProbeResult::em), tol.at("em_symmetry")));
    s["lift"] = track(row(per(&ProbeResult::lift), tol.at("lift")));
    s["self_holonomy"] = track(row(per(&ProbeResult::holonomy), tol.at("self_holonomy")));
    if (!res.empty() && !res.front().momentum_error.empty())
      s["momentum"] = track(error_row(res.front().momentum_error));
    else
      s["momentum"] = track(row(per(&ProbeResult::momentum), tol.at("momentum")));
    conserved[k] = s["killing"]["pass"].get<bool>() && s["em_symmetry"]["pass"].get<bool>();
    syms.push_back(s);
  }
  rep["symmetries"] = syms;

  // bracket homomorphism on pairs that both pass the symmetry rows
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = i + 1; j < nf; ++j)
      if (conserved[i] && conserved[j]) pairs.emplace_back(i, j);
  std::vector<double> hom(pairs.size(), 0.0);
  parallel_for(pairs.size(), [&](std::size_t n) {
    const auto& f = fields[pairs[n].first];
    const auto& h = fields[pairs[n].second];
    const SpecialPhaseFunction fh = special_bracket(model, f, h);
    const PhaseVectorField lf = special_lift_field(model, f), lh = special_lift_field(model, h);
    try {
      for (const auto& p : points) {
        const Vec7 lhs = special_hamiltonian_lift(model, fh, p);
        const Vec7 rhs = commutator(lf, lh, p.coords(), phase_fd_steps(model, p, 1e-3));
        hom[n] = std::max(hom[n], (lhs - rhs).cwiseAbs().maxCoeff());
      }
    } catch (const Error& e) {
      throw NumericFailure(f.name + "," + h.name + ": " + e.what());
    }
  });
  json br = json::array();
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    json b = row(hom[n], tol.at("homomorphism"));
    track(b);
    b["pair"] = {fields[pairs[n].first].name, fields[pairs[n].second].name};
    br.push_back(b);
  }
  rep["brackets"] = br;
  rep["pass"] = all;
  return rep;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"jetphase: charged test particles in curved spacetime on the jet phase space"};
  app.require_subcommand(1);
  std::string config, out;
  std::vector<std::string> tols;
  std::uint64_t seed = 0;

  auto* integ = app.add_subcommand("integrate", "integrate trajectories and tabulate charges");
  integ->add_option("--config", config, "JSON run configuration")->required();
  integ->add_option("--out", out, "output directory")->required();
  integ->add_option("--tol", tols, "tolerance override name=value")->take_all();
  auto* integ_seed = integ->add_option("--seed", seed, "probe sampling seed");

  auto* audit = app.add_subcommand("audit", "audit structure identities and symmetries");
  audit->add_option("--config", config, "JSON run configuration")->required();
  audit->add_option("--out", out, "report path")->required();
  audit->add_option("--tol", tols, "tolerance override name=value")->take_all();
  auto* audit_seed = audit->add_option("--seed", seed, "probe sampling seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg = load_config(config);
    for (const auto& t : tols) apply_tolerance_override(cfg, t);
    if (integ_seed->count() || audit_seed->count()) cfg.seed = seed;
    if (integ->parsed()) {
      const json s = run_integrate(cfg, out);
      std::size_t ok = 0;
      for (const auto& t : s["trajectories"]) ok += t.value("drift_pass", true) ? 1 : 0;
      std::cout << s["trajectories"].size() << " trajectories written to " << out << "; " << ok
                << " within drift tolerance\n";
    } else {
      const json r = run_audit(cfg);
      const fs::path path(out);
      if (path.has_parent_path()) fs::create_directories(path.parent_path());
      write_text(path, r.dump(2) + "\n");
      for (const auto& [k, v] : r["structure"].items())
        std::cout << (v["pass"].get<bool>() ? "PASS " : "FAIL ") << k << "\n";
      for (const auto& s : r["symmetries"])
        for (const char* k : {"killing", "em_symmetry", "lift", "self_holonomy", "momentum"})
          std::cout << (s[k]["pass"].get<bool>() ? "PASS " : "FAIL ") << s["name"].get<std::string>() << " " << k
                    << "\n";
      for (const auto& b : r["brackets"])
        std::cout << (b["pass"].get<bool>() ? "PASS " : "FAIL ") << "homomorphism " << b["pair"][0].get<std::string>()
                  << "," << b["pair"][1].get<std::string>() << "\n";
      std::cout << (r["pass"].get<bool>() ? "audit PASS" : "audit FAIL") << "\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace jetphase::cli
