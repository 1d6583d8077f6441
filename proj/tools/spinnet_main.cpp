// SPDX-License-Identifier: Apache-2.0
//
// spinnet command-line front end: model ingestion, subcommand dispatch,
// report and trace emission. Exit status is 0 on success (a "not
// equivalent" finding is a success), nonzero on input, validation or
// internal errors.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spinnet/cartan.hpp"
#include "spinnet/equivalence.hpp"
#include "spinnet/model_io.hpp"
#include "spinnet/report.hpp"

namespace {

using namespace spinnet;

struct Tolerances {
  std::map<std::string, double> values;

  static constexpr const char* known[] = {"structural", "falsify", "closure", "twolevel"};

  void parse(const std::vector<std::string>& entries) {
    for (const std::string& e : entries) {
      const auto eq = e.find('=');
      if (eq == std::string::npos)
        throw CLI::ValidationError("--tol", "expected <name>=<value>, got '" + e + "'");
      const std::string name = e.substr(0, eq);
      bool ok = false;
      for (const char* k : known) ok |= name == k;
      if (!ok) throw CLI::ValidationError("--tol", "unknown tolerance name '" + name + "'");
      values[name] = std::stod(e.substr(eq + 1));
    }
  }

  double get(const std::string& name, double fallback) const {
    const auto it = values.find(name);
    return it == values.end() ? fallback : it->second;
  }

  Json to_json() const {
    Json j = Json::object();
    for (const auto& [k, v] : values) j[k] = v;
    return j;
  }
};

void ensure_out_dir(const std::string& dir) { std::filesystem::create_directories(dir); }

int cmd_decompose(const std::string& model_path, const std::string& out_dir,
                  const Tolerances& tol) {
  const SpinNetworkModel m = load_model(model_path);
  const CartanSplit split = odd_even_split(m.site_dims);
  const ClosureReport closure = verify_closure(split);

  Json config{{"model", model_to_json(m)}, {"model_path", model_path}, {"tol", tol.to_json()}};
  Json rep = report_envelope("decompose", config, 0);
  rep["split"] = split_report_json(split, closure);
  ensure_out_dir(out_dir);
  write_report(out_dir, "decompose", rep);

  const double limit = tol.get("closure", 1e-10);
  std::cout << "decompose: odd " << split.odd_basis.size() << ", even " << split.even_basis.size()
            << ", worst closure residual " << fmt_double(closure.worst()) << "\n";
  if (closure.worst() > limit) {
    std::cerr << "decompose: closure residual exceeds " << fmt_double(limit) << "\n";
    return 1;
  }
  return 0;
}

int cmd_check_equiv(const std::string& path1, const std::string& path2, const std::string& out_dir,
                    const Tolerances& tol) {
  const SpinNetworkModel m1 = load_model(path1);
  const SpinNetworkModel m2 = load_model(path2);
  const EquivalenceVerdict v = condition_star_decide(m1, m2, tol.get("structural", 1e-10));

  Json config{{"model", model_to_json(m1)},
              {"model2", model_to_json(m2)},
              {"model_path", path1},
              {"model2_path", path2},
              {"tol", tol.to_json()}};
  Json rep = report_envelope("check-equiv", config, 0);
  rep["result"] = verdict_to_json(v);
  ensure_out_dir(out_dir);
  write_report(out_dir, "check_equiv", rep);

  std::cout << "check-equiv: " << to_string(v.verdict);
  if (!v.reason.empty()) std::cout << " (" << v.reason << ")";
  std::cout << "\n";
  return 0;
}

int cmd_simulate(const std::string& model_path, const std::string& schedule_path,
                 const std::string& out_dir, int samples) {
  const SpinNetworkModel m = load_model(model_path);
  const ControlSchedule schedule = load_schedule(schedule_path);
  PropagateOptions opt;
  opt.samples_per_segment = samples;
  const OutputTrace trace = propagate(to_bilinear(m), schedule, opt);

  ensure_out_dir(out_dir);
  write_file(out_dir + "/trace.csv", trace_to_csv(trace));
  Json config{{"model", model_to_json(m)},
              {"model_path", model_path},
              {"schedule", schedule_to_json(schedule)},
              {"samples_per_segment", samples}};
  Json rep = report_envelope("simulate", config, 0);
  rep["summary"] = Json{{"samples", trace.times.size()}, {"horizon", schedule.horizon()}};
  write_report(out_dir, "simulate", rep);
  std::cout << "simulate: " << trace.times.size() << " samples over horizon "
            << fmt_double(schedule.horizon()) << " -> " << out_dir << "/trace.csv\n";
  return 0;
}

int cmd_falsify(const std::string& path1, const std::string& path2, const std::string& out_dir,
                int trials, double horizon, std::uint64_t seed, const Tolerances& tol) {
  const SpinNetworkModel m1 = load_model(path1);
  const SpinNetworkModel m2 = load_model(path2);
  FalsifyParams params;
  params.trials = trials;
  params.horizon = horizon;
  params.seed = seed;
  params.tol = tol.get("falsify", 1e-8);
  const auto witness = falsify_by_simulation(m1, m2, params);

  Json config{{"model", model_to_json(m1)},
              {"model2", model_to_json(m2)},
              {"model_path", path1},
              {"model2_path", path2},
              {"tol", tol.to_json()}};
  Json rep = report_envelope("falsify", config, seed);
  rep["result"] = witness_to_json(witness, params);
  ensure_out_dir(out_dir);
  write_report(out_dir, "falsify", rep);

  if (witness)
    std::cout << "falsify: witness found at trial " << witness->trial << " with gap "
              << fmt_double(witness->gap) << "\n";
  else
    std::cout << "falsify: no witness in " << trials << " trials (tol "
              << fmt_double(params.tol) << ")\n";
  return 0;
}

int cmd_verify_theorems(const std::string& out_dir, std::uint64_t seed, const Tolerances& tol) {
  Json rep = report_envelope("verify-theorems", Json{{"tol", tol.to_json()}}, seed);
  bool all_passed = true;

  Json conj = Json::array();
  for (int twice = 1; twice <= 5; ++twice) {
    const ConjugationReport r = verify_theorem_1_2(HalfInt(twice), 1e-12);
    conj.push_back(Json{{"spin", HalfInt(twice).str()},
                        {"dimension", r.dim},
                        {"target", r.symplectic ? "sp(N/2)" : "so(N)"},
                        {"residuals", Json::array({r.residuals[0], r.residuals[1], r.residuals[2]})},
                        {"passed", r.passed}});
    all_passed &= r.passed;
  }
  rep["conjugation"] = conj;

  Json spectra = Json::array();
  for (int twice : {1, 3, 5}) {
    const SpectrumReport r = theorem3_spectral_premises(HalfInt(twice), 1e-10);
    spectra.push_back(Json{{"spin", HalfInt(twice).str()},
                           {"max_deviation", r.max_deviation},
                           {"min_gap", r.min_gap},
                           {"all_simple", r.all_simple},
                           {"passed", r.passed}});
    all_passed &= r.passed;
  }
  rep["spectral_premises"] = spectra;

  const double closure_limit = tol.get("closure", 1e-10);
  Json closures = Json::array();
  for (const std::vector<int>& dims :
       {std::vector<int>{2, 2}, std::vector<int>{2, 3}, std::vector<int>{2, 2, 2}}) {
    const CartanSplit split = odd_even_split(dims);
    const ClosureReport c = verify_closure(split);
    const InvolutionPropertyReport p =
        involution_property_check(Involution::from_split(split), 100, seed);
    const bool ok = c.worst() <= closure_limit && p.worst() <= closure_limit;
    closures.push_back(Json{{"site_dims", dims},
                            {"odd_count", split.odd_basis.size()},
                            {"even_count", split.even_basis.size()},
                            {"closure_worst", c.worst()},
                            {"involution_worst", p.worst()},
                            {"passed", ok}});
    all_passed &= ok;
  }
  rep["odd_even_closure"] = closures;
  rep["all_passed"] = all_passed;

  ensure_out_dir(out_dir);
  write_report(out_dir, "verify_theorems", rep);
  std::cout << "verify-theorems: " << (all_passed ? "all residuals within tolerance" : "FAILED")
            << "\n";
  return all_passed ? 0 : 1;
}

CMatrix rho_from_bloch(const std::vector<double>& r) {
  const SpinTriple& s = spin_matrices(HalfInt(1));
  return 0.5 * CMatrix::Identity(2, 2) + r[0] * s.x + r[1] * s.y + r[2] * s.z;
}

int cmd_two_level(double x, double y, const std::vector<double>& bloch, double x2, double y2,
                  const std::vector<double>& bloch2, const std::string& out_dir,
                  const Tolerances& tol) {
  const CMatrix rho0 = rho_from_bloch(bloch);
  const CMatrix rho0p = rho_from_bloch(bloch2);
  const TwoLevelVerdict v = two_level_decide(x, y, rho0, x2, y2, rho0p, tol.get("twolevel", 1e-9));

  Json config{{"x", x},       {"y", y},           {"bloch", bloch}, {"x2", x2},
              {"y2", y2},     {"bloch2", bloch2}, {"tol", tol.to_json()}};
  Json rep = report_envelope("two-level", config, 0);
  Json result{{"verdict", to_string(v.verdict)}, {"equivalent", v.equivalent}};
  if (v.equivalent) result["alpha"] = v.alpha;
  if (!v.reason.empty()) result["reason"] = v.reason;
  result["residuals"] = residuals_to_json(v.residuals);
  rep["result"] = result;
  ensure_out_dir(out_dir);
  write_report(out_dir, "two_level", rep);

  std::cout << "two-level: " << (v.equivalent ? "equivalent" : "not equivalent");
  if (v.equivalent) std::cout << ", alpha = " << fmt_double(v.alpha);
  if (!v.reason.empty()) std::cout << " (" << v.reason << ")";
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinnet: controlled spin-network models, Liouville simulation, odd-even Cartan "
               "decompositions and input-output equivalence decisions"};
  app.require_subcommand(1);

  std::string model_path, model2_path, schedule_path, out_dir = ".";
  std::vector<std::string> tol_entries;
  std::uint64_t seed = 0;
  int trials = 50, samples = 9;
  double horizon = 8.0;
  double x = 0, y = 0, x2 = 0, y2 = 0;
  std::vector<double> bloch{0, 0, 0}, bloch2{0, 0, 0};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "output directory for reports");
    sub->add_option("--tol", tol_entries, "tolerance override <name>=<value>");
  };

  CLI::App* dec = app.add_subcommand("decompose", "odd-even Cartan split of a model's carrier");
  dec->add_option("--model", model_path, "model config file")->required();
  add_common(dec);

  CLI::App* chk = app.add_subcommand("check-equiv", "structural equivalence decision");
  chk->add_option("--model", model_path, "first model")->required();
  chk->add_option("--model2", model2_path, "second model")->required();
  add_common(chk);

  CLI::App* sim = app.add_subcommand("simulate", "propagate a schedule and export the trace");
  sim->add_option("--model", model_path, "model config file")->required();
  sim->add_option("--schedule", schedule_path, "schedule file")->required();
  sim->add_option("--samples", samples, "samples per segment (default 9)");
  add_common(sim);

  CLI::App* fal = app.add_subcommand("falsify", "search for an output-separating schedule");
  fal->add_option("--model", model_path, "first model")->required();
  fal->add_option("--model2", model2_path, "second model")->required();
  fal->add_option("--trials", trials, "number of random schedules (default 50)");
  fal->add_option("--horizon", horizon, "schedule horizon in time units (default 8)");
  fal->add_option("--seed", seed, "master seed");
  add_common(fal);

  CLI::App* ver = app.add_subcommand("verify-theorems", "run the construction verification suite");
  ver->add_option("--seed", seed, "seed for the random property checks");
  add_common(ver);

  CLI::App* two = app.add_subcommand("two-level", "two-level equivalence and angle recovery");
  two->add_option("--x", x, "first drift x component")->required();
  two->add_option("--y", y, "first drift y component")->required();
  two->add_option("--bloch", bloch, "first state components r_x r_y r_z")->expected(3);
  two->add_option("--x2", x2, "second drift x component")->required();
  two->add_option("--y2", y2, "second drift y component")->required();
  two->add_option("--bloch2", bloch2, "second state components r_x r_y r_z")->expected(3);
  add_common(two);

  CLI11_PARSE(app, argc, argv);

  try {
    Tolerances tol;
    tol.parse(tol_entries);
    if (dec->parsed()) return cmd_decompose(model_path, out_dir, tol);
    if (chk->parsed()) return cmd_check_equiv(model_path, model2_path, out_dir, tol);
    if (sim->parsed()) return cmd_simulate(model_path, schedule_path, out_dir, samples);
    if (fal->parsed())
      return cmd_falsify(model_path, model2_path, out_dir, trials, horizon, seed, tol);
    if (ver->parsed()) return cmd_verify_theorems(out_dir, seed, tol);
    if (two->parsed()) return cmd_two_level(x, y, bloch, x2, y2, bloch2, out_dir, tol);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
