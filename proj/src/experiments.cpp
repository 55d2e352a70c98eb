#include "rigidlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "json.hpp"
#include "rigidlab/dpp.hpp"
#include "rigidlab/errors.hpp"
#include "rigidlab/gaf.hpp"
#include "rigidlab/io.hpp"
#include "rigidlab/lattice.hpp"
#include "rigidlab/measures.hpp"
#include "rigidlab/numerics.hpp"
#include "rigidlab/parallel.hpp"
#include "rigidlab/rigidity.hpp"

namespace rigidlab {

namespace {

using json = nlohmann::ordered_json;
using cd = std::complex<double>;

struct Emitter {
  std::string dir;
  std::string hash;
  std::set<std::string> emit;
  std::vector<std::string>* artifacts;

  bool wants(const std::string& kind) const { return emit.count(kind) > 0; }
  void file(const std::string& name, const std::string& content) const {
    std::string path = dir + "/" + name;
    io::write_file(path, content);
    artifacts->push_back(path);
  }
  void json_file(const std::string& name, json j) const {
    json wrapped;
    wrapped["config_hash"] = hash;
    for (auto& [k, v] : j.items()) wrapped[k] = v;
    file(name, wrapped.dump(2) + "\n");
  }
};

RadialMeasure measure_from(const ExperimentConfig& cfg) {
  const std::string& m = cfg.str("measure");
  if (m == "gaussian_power")
    return RadialMeasure::gaussian_power(cfg.real("a"), cfg.real("b"), cfg.real("c"));
  return RadialMeasure::disk_uniform(cfg.real("radius"));
}

std::string fd(double v) { return io::format_double(v); }

void run_ladder(const ExperimentConfig& cfg, const Emitter& out) {
  RadialMeasure measure = measure_from(cfg);
  MomentLadder ladder = compute_moments(measure, int(cfg.integer("j")));
  if (out.wants("csv")) {
    io::CsvBuilder csv(out.hash);
    csv.header({"j", "log_c", "mu", "sigma", "nu"});
    for (int j = 0; j <= ladder.J; ++j)
      csv.row({std::to_string(j), fd(ladder.log_c[std::size_t(j)]),
               fd(ladder.mu[std::size_t(j)]), fd(ladder.sigma[std::size_t(j)]),
               fd(ladder.nu[std::size_t(j)])});
    out.file("ladder.csv", csv.str());
  }
  if (out.wants("json")) {
    json j;
    j["measure"] = measure.describe();
    j["J"] = ladder.J;
    j["log_c"] = ladder.log_c;
    j["mu"] = ladder.mu;
    j["sigma"] = ladder.sigma;
    j["nu"] = ladder.nu;
    out.json_file("ladder.json", j);
  }
}

void run_classify(const ExperimentConfig& cfg, const Emitter& out) {
  RadialMeasure measure = measure_from(cfg);
  MomentLadder ladder = compute_moments(measure, int(cfg.integer("j")));
  Classification c = classify_rigidity(ladder, cfg.flag("abs_continuous"),
                                       int(cfg.integer("j_min")));
  json j;
  j["measure"] = measure.describe();
  j["verdict"] = to_string(c.verdict);
  j["note"] = c.note;
  j["sigma"] = {{"tail_exponent", c.sigma.tail_exponent},
                {"partial_sum", c.sigma.partial_sum},
                {"plateau", c.sigma.plateau},
                {"summable", c.sigma.summable}};
  j["nu"] = {{"tail_exponent", c.nu.tail_exponent},
             {"partial_sum", c.nu.partial_sum},
             {"plateau", c.nu.plateau},
             {"summable", c.nu.summable}};
  j["predicate_slope"] = c.predicate_slope;
  j["predicate_holds"] = c.predicate_holds;
  j["level1_a"] = c.level1_a;
  j["abs_continuous"] = c.abs_continuous;
  out.json_file("classification.json", j);
  if (out.wants("csv")) {
    io::CsvBuilder csv(out.hash);
    csv.header({"j", "log_c", "mu", "sigma", "nu"});
    for (int j2 = 0; j2 <= ladder.J; ++j2)
      csv.row({std::to_string(j2), fd(ladder.log_c[std::size_t(j2)]),
               fd(ladder.mu[std::size_t(j2)]), fd(ladder.sigma[std::size_t(j2)]),
               fd(ladder.nu[std::size_t(j2)])});
    out.file("ladder.csv", csv.str());
  }
}

std::string points_csv(const std::string& hash, const PointConfiguration& cfg,
                       bool one_dimensional) {
  io::CsvBuilder csv(hash);
  if (one_dimensional) {
    csv.header({"x"});
    for (auto z : cfg.points) csv.row({fd(z.real())});
  } else {
    csv.header({"re", "im"});
    for (auto z : cfg.points) csv.row({fd(z.real()), fd(z.imag())});
  }
  return csv.str();
}

void run_sample_gaf(const ExperimentConfig& cfg, const Emitter& out) {
  std::vector<double> alphas = cfg.has("alpha_list")
                                   ? cfg.real_list("alpha_list")
                                   : std::vector<double>{cfg.real("alpha")};
  int replicas = int(cfg.replicas);
  json summary;
  summary["replicas"] = replicas;
  json per_alpha = json::array();
  for (double alpha : alphas) {
    GafModel model = make_gaf_model(alpha, cfg.real("window_radius"), cfg.real("tail_tol"));
    std::vector<PointConfiguration> configs(static_cast<std::size_t>(replicas));
    parallel_for(replicas, [&](int i) {
      std::uint64_t seed = derive_seed(cfg.master_seed, std::uint64_t(i));
      Rng rng(seed);
      configs[std::size_t(i)] = sample_zero_set(model, rng, seed);
    });
    json t;
    t["alpha"] = alpha;
    t["truncation"] = model.truncation;
    json counts = json::array();
    for (int i = 0; i < replicas; ++i) {
      const auto& pc = configs[std::size_t(i)];
      counts.push_back(pc.points.size());
      std::string stem = "gaf_alpha" + fd(alpha) + "_r" + std::to_string(i);
      if (out.wants("csv")) out.file(stem + ".csv", points_csv(out.hash, pc, false));
      if (out.wants("svg")) out.file(stem + ".svg", io::svg_scatter(out.hash, pc));
    }
    t["counts"] = counts;
    per_alpha.push_back(t);
  }
  summary["models"] = per_alpha;
  out.json_file("summary.json", summary);
}

void run_sample_dpp(const ExperimentConfig& cfg, const Emitter& out) {
  RadialDppModel model = make_radial_dpp(measure_from(cfg), int(cfg.integer("rank")));
  int replicas = int(cfg.replicas);
  std::vector<PointConfiguration> configs(static_cast<std::size_t>(replicas));
  parallel_for(replicas, [&](int i) {
    std::uint64_t seed = derive_seed(cfg.master_seed, std::uint64_t(i));
    Rng rng(seed);
    configs[std::size_t(i)] = sample_full(model, rng, seed);
  });
  json summary;
  summary["model"] = configs.empty() ? "dpp" : configs[0].model_tag;
  json counts = json::array();
  for (int i = 0; i < replicas; ++i) {
    const auto& pc = configs[std::size_t(i)];
    counts.push_back(pc.points.size());
    std::string stem = "dpp_r" + std::to_string(i);
    if (out.wants("csv")) out.file(stem + ".csv", points_csv(out.hash, pc, false));
    if (out.wants("svg")) out.file(stem + ".svg", io::svg_scatter(out.hash, pc));
  }
  summary["counts"] = counts;
  out.json_file("summary.json", summary);
}

void run_sample_lattice(const ExperimentConfig& cfg, const Emitter& out) {
  PerturbedLatticeModel model =
      make_lattice(cfg.real("beta"), int(cfg.integer("m")), cfg.flag("symmetric"));
  int replicas = int(cfg.replicas);
  std::vector<PointConfiguration> configs(static_cast<std::size_t>(replicas));
  parallel_for(replicas, [&](int i) {
    std::uint64_t seed = derive_seed(cfg.master_seed, std::uint64_t(i));
    Rng rng(seed);
    configs[std::size_t(i)] = sample(model, rng, seed);
  });
  json summary;
  summary["model"] = configs.empty() ? "lattice" : configs[0].model_tag;
  summary["replicas"] = replicas;
  for (int i = 0; i < replicas; ++i) {
    const auto& pc = configs[std::size_t(i)];
    std::string stem = "lattice_r" + std::to_string(i);
    if (out.wants("csv")) out.file(stem + ".csv", points_csv(out.hash, pc, true));
    if (out.wants("svg")) out.file(stem + ".svg", io::svg_number_line(out.hash, pc));
  }
  out.json_file("summary.json", summary);
}

void run_variance_sweep(const ExperimentConfig& cfg, const Emitter& out) {
  const std::string target = cfg.str("target");
  const std::vector<double>& Ls = cfg.real_list("l_list");
  json j;
  j["target"] = target;
  if (target == "lattice") {
    double beta = cfg.real("beta");
    PerturbedLatticeModel model = make_lattice(beta, 1);
    RadialTestFunction h = RadialTestFunction::lattice_bump(cfg.real("eps"));
    io::CsvBuilder csv(out.hash);
    csv.header({"beta", "L", "variance"});
    std::vector<double> lx, ly;
    for (double L : Ls) {
      double v = variance_linear_statistic(model, h, L);
      csv.row({fd(beta), fd(L), fd(v)});
      lx.push_back(std::log(L));
      ly.push_back(std::log(v));
    }
    if (out.wants("csv")) out.file("variance.csv", csv.str());
    j["beta"] = beta;
    j["slope"] = num::fit_line(lx, ly).slope;
  } else {
    double alpha = cfg.real("alpha");
    const std::string mode = cfg.str("mode");
    int k = int(cfg.integer("k"));
    RadialTestFunction fn =
        RadialTestFunction::moment_weighted_any(k, cfg.real("r0"), cfg.real("eps"));
    io::CsvBuilder csv(out.hash);
    bool want_exact = mode != "bound";
    bool want_bound = mode != "exact";
    std::vector<std::string> head = {"L"};
    if (want_bound) head.push_back("bound");
    if (want_exact) head.push_back("exact");
    csv.header(head);
    std::vector<double> lx, lb;
    GafModel probe = make_gaf_model(alpha, 1.0, cfg.real("tail_tol"));
    for (double L : Ls) {
      std::vector<std::string> row = {fd(L)};
      if (want_bound) {
        double b = variance_bound(probe, fn, L);
        row.push_back(fd(b));
        lx.push_back(std::log(L));
        lb.push_back(std::log(b));
      }
      if (want_exact) {
        RadialTestFunction fl = fn.scaled(L);
        GafModel m = make_gaf_model(alpha, fl.outer_radius(), cfg.real("tail_tol"));
        row.push_back(fd(variance_exact(m, fl)));
      }
      csv.row(row);
    }
    if (out.wants("csv")) out.file("variance.csv", csv.str());
    j["alpha"] = alpha;
    j["k"] = k;
    if (lx.size() >= 2) j["bound_slope"] = num::fit_line(lx, lb).slope;
  }
  out.json_file("variance.json", j);
}

void run_palm_sweep(const ExperimentConfig& cfg, const Emitter& out) {
  RadialDppModel model = make_radial_dpp(measure_from(cfg), 1);
  const std::vector<double>& ns = cfg.real_list("n_list");
  int replicas = int(cfg.replicas);
  std::vector<PalmOverlapEstimate> estimates(ns.size());
  parallel_for(int(ns.size()), [&](int i) {
    Rng rng(derive_seed(cfg.master_seed, std::uint64_t(i)));
    estimates[std::size_t(i)] = palm_overlap(model, int(ns[std::size_t(i)]), replicas, rng);
  });
  io::CsvBuilder csv(out.hash);
  csv.header({"n", "mean_min", "se"});
  json rows = json::array();
  for (const auto& e : estimates) {
    csv.row({std::to_string(e.n), fd(e.mean_min), fd(e.standard_error)});
    rows.push_back({{"n", e.n}, {"mean_min", e.mean_min}, {"se", e.standard_error}});
  }
  if (out.wants("csv")) out.file("palm.csv", csv.str());
  json j;
  j["measure"] = model.measure.describe();
  j["replicas"] = replicas;
  j["estimates"] = rows;
  out.json_file("palm.json", j);
}

void run_kakutani(const ExperimentConfig& cfg, const Emitter& out) {
  double beta = cfg.real("beta");
  int k_max = int(cfg.integer("k_max"));
  std::vector<double> partial = kakutani_product(beta, k_max);
  io::CsvBuilder csv(out.hash);
  csv.header({"beta", "K", "partial_product"});
  for (int k = 1; k <= k_max; ++k)
    csv.row({fd(beta), std::to_string(k), fd(partial[std::size_t(k)])});
  if (out.wants("csv")) out.file("kakutani.csv", csv.str());
  json j;
  j["beta"] = beta;
  j["k_max"] = k_max;
  j["final_partial_product"] = partial.back();
  out.json_file("kakutani.json", j);
}

void run_recover(const ExperimentConfig& cfg, const Emitter& out) {
  const std::string process_name = cfg.str("process");
  ProcessHandle handle;
  if (process_name == "dpp") {
    RadialDppModel model = make_radial_dpp(measure_from(cfg), int(cfg.integer("rank")));
    handle = make_process(model);
  } else if (process_name == "gaf") {
    GafModel model = make_gaf_model(cfg.real("alpha"), 1.0, cfg.real("tail_tol"));
    handle = make_process(model);
  } else {
    handle = make_process(make_lattice(cfg.real("beta"), 1));
  }
  double eps = cfg.real("epsilon");
  double L = cfg.real("l");
  double delta = cfg.real("certificate_delta");
  json j;
  if (!(eps > 0.0 && L > 0.0)) {
    ProcessHandle scan_handle = handle;
    if (process_name == "dpp") {
      RadialDppModel model = make_radial_dpp(measure_from(cfg), int(cfg.integer("rank")));
      scan_handle = make_process_infinite(model, int(cfg.integer("j_max")));
    }
    Certificate cert = certificate_scan(scan_handle, 0, cfg.real("r0"), delta);
    j["certificate"] = {{"achieved", cert.achieved},
                        {"eps", cert.eps},
                        {"L", cert.L},
                        {"variance", cert.variance},
                        {"evaluated", cert.evaluated}};
    if (!cert.achieved) {
      j["verdict"] = "NotAchieved";
      out.json_file("recovery.json", j);
      if (out.wants("csv")) {
        io::CsvBuilder csv(out.hash);
        csv.header({"k", "success_rate", "residual_variance", "epsilon", "L"});
        out.file("recovery.csv", csv.str());
      }
      return;
    }
    eps = cert.eps;
    L = cert.L;
  }
  RecoveryReport rep =
      recover_inside_moments(handle, cfg.real("r0"), int(cfg.integer("k_max")), eps, L,
                             int(cfg.replicas), cfg.master_seed);
  j["process"] = process_name;
  j["replicas"] = rep.replicas;
  j["r0"] = rep.r0;
  j["epsilon"] = rep.epsilon;
  j["L"] = rep.L;
  j["success_rate"] = rep.success_rate;
  j["residual_variance"] = rep.residual_variance;
  j["residual_mean_abs"] = rep.residual_mean_abs;
  j["constraint_residual"] = rep.constraint_residual;
  j["manifold_dimension"] = rep.manifold_dimension;
  json per_k = json::array();
  for (std::size_t k = 0; k < rep.truth.size(); ++k) {
    json rows = json::array();
    for (int i = 0; i < rep.replicas; ++i) {
      rows.push_back({{"truth_re", rep.truth[k][std::size_t(i)].real()},
                      {"truth_im", rep.truth[k][std::size_t(i)].imag()},
                      {"estimate_re", rep.estimate[k][std::size_t(i)].real()},
                      {"estimate_im", rep.estimate[k][std::size_t(i)].imag()}});
    }
    per_k.push_back(rows);
  }
  j["replica_data"] = per_k;
  out.json_file("recovery.json", j);
  if (out.wants("csv")) {
    io::CsvBuilder csv(out.hash);
    csv.header({"k", "success_rate", "residual_variance", "epsilon", "L"});
    for (std::size_t k = 0; k < rep.residual_variance.size(); ++k)
      csv.row({std::to_string(k), k == 0 ? fd(rep.success_rate) : "",
               fd(rep.residual_variance[k]), fd(rep.epsilon), fd(rep.L)});
    out.file("recovery.csv", csv.str());
  }
}

void run_appendix(const ExperimentConfig&, const Emitter& out) {
  AppendixReport rep = verify_appendix_examples();
  json j;
  j["conditional_support_sizes"] = rep.conditional_support_sizes;
  j["common_sigma_trivial"] = rep.common_sigma_trivial;
  json pairs = json::array();
  const char* labels[4] = {"(0,0)", "(0,1)", "(1,0)", "(1,1)"};
  for (int p = 0; p < 4; ++p) {
    pairs.push_back({{"pair(x1,x_minus_1)", labels[p]},
                     {"pair_probability", rep.pair_probability[std::size_t(p)].str()},
                     {"p_x0_one", rep.p_x0_one_given_pair[std::size_t(p)].str()}});
  }
  j["two_dependent"] = pairs;
  j["forcing_case_deterministic"] = rep.forcing_case_deterministic;
  j["other_cases_nondegenerate"] = rep.other_cases_nondegenerate;
  j["groupwise_dichotomy"] = rep.groupwise_dichotomy;
  j["ok"] = rep.ok;
  out.json_file("appendix.json", j);
}

void run_mixture(const ExperimentConfig& cfg, const Emitter& out) {
  int rank = int(cfg.integer("rank"));
  RadialDppModel model = make_radial_dpp(measure_from(cfg), rank);
  int weak_index = int(cfg.integer("weak_index"));
  if (weak_index < 0) weak_index = rank;
  double lambda = cfg.real("weak_value");
  // Perturbation size delta = ||f||^2/2; the perturbed eigenvalues are
  // lambda -+ delta, so delta <= min(lambda, 1-lambda) keeps contractions.
  double delta = cfg.real("perturbation");
  if (delta < 0.0) delta = std::min(lambda, 1.0 - lambda);
  auto base = weak_direction_matrix(rank, weak_index, lambda);
  std::vector<cd> f(std::size_t(rank) + 1, cd{0.0, 0.0});
  f[std::size_t(weak_index)] = cd{std::sqrt(2.0 * delta), 0.0};
  MixtureDemoReport rep =
      mixture_demo(model, f, base, int(cfg.replicas), cfg.master_seed);
  json j;
  j["measure"] = model.measure.describe();
  j["rank"] = rank;
  j["weak_index"] = weak_index;
  j["weak_value"] = lambda;
  j["replicas"] = rep.replicas;
  j["count_histogram"] = rep.count_histogram;
  j["min_count_freq"] = rep.min_count_freq;
  json probes = json::array();
  for (std::size_t i = 0; i < rep.probe_radii.size(); ++i)
    probes.push_back({{"r", rep.probe_radii[i]},
                      {"expected", rep.probe_expected[i]},
                      {"observed", rep.probe_observed[i]},
                      {"se", rep.probe_se[i]}});
  j["probes"] = probes;
  j["pair_expected"] = rep.pair_expected;
  j["pair_observed"] = rep.pair_observed;
  j["pair_se"] = rep.pair_se;
  out.json_file("mixture.json", j);
  if (out.wants("csv")) {
    io::CsvBuilder csv(out.hash);
    csv.header({"count", "frequency"});
    for (std::size_t c = 0; c < rep.count_histogram.size(); ++c)
      csv.row({std::to_string(c),
               fd(double(rep.count_histogram[c]) / double(rep.replicas))});
    out.file("histogram.csv", csv.str());
  }
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const std::string& output_override) {
  RunResult result;
  std::string dir = output_override.empty() ? cfg.output_dir : output_override;
  try {
    io::ensure_directory(dir);
    Emitter out{dir, cfg.config_hash, cfg.emit, &result.artifacts};
    switch (cfg.kind) {
      case ExperimentKind::Ladder: run_ladder(cfg, out); break;
      case ExperimentKind::Classify: run_classify(cfg, out); break;
      case ExperimentKind::SampleGaf: run_sample_gaf(cfg, out); break;
      case ExperimentKind::SampleDpp: run_sample_dpp(cfg, out); break;
      case ExperimentKind::SampleLattice: run_sample_lattice(cfg, out); break;
      case ExperimentKind::VarianceSweep: run_variance_sweep(cfg, out); break;
      case ExperimentKind::PalmSweep: run_palm_sweep(cfg, out); break;
      case ExperimentKind::KakutaniSweep: run_kakutani(cfg, out); break;
      case ExperimentKind::Recover: run_recover(cfg, out); break;
      case ExperimentKind::AppendixDemos: run_appendix(cfg, out); break;
      case ExperimentKind::MixtureDemo: run_mixture(cfg, out); break;
    }
  } catch (const std::exception& e) {
    result.exit_code = 1;
    result.error = e.what();
    try {
      json err;
      err["config_hash"] = cfg.config_hash;
      err["experiment"] = to_string(cfg.kind);
      err["error"] = e.what();
      io::write_file(dir + "/error.json", err.dump(2) + "\n");
    } catch (...) {
      // directory may be unwritable; the error string still reaches the caller
    }
  }
  return result;
}

}  // namespace rigidlab
