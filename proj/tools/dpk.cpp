// Command-line front end: instance generation, property suites and
// single-operator computations on JSON files.

#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpk/autos.hpp"
#include "dpk/factor.hpp"
#include "dpk/fredholm.hpp"
#include "dpk/io.hpp"
#include "dpk/proj.hpp"
#include "dpk/quotient.hpp"
#include "dpk/suites.hpp"
#include "dpk/topo.hpp"

namespace {

using dpk::io::Json;

struct Output {
  std::string path;
  std::string format = "json";
  bool no_meta = false;

  void emit(const std::string& text) const {
    if (path.empty())
      std::cout << text;
    else
      dpk::io::write_text_file(path, text);
  }
  void emit(const Json& j) const { emit(j.dump(2) + "\n"); }
};

dpk::EopOperator read_operator(const std::string& path) {
  return dpk::io::operator_from_json(dpk::io::read_json_file(path));
}

dpk::ModelProjection read_projection(const std::string& path) {
  return dpk::ModelProjection::make(read_operator(path));
}

Json fredholm_json(const dpk::FredholmData& f) {
  Json j;
  j["is_fredholm"] = f.is_fredholm;
  j["kernel_dim"] = f.kernel_dim ? Json(*f.kernel_dim) : Json(nullptr);
  j["cokernel_dim"] = f.cokernel_dim ? Json(*f.cokernel_dim) : Json(nullptr);
  j["index"] = f.index ? Json(*f.index) : Json(nullptr);
  j["infinite_kernel"] = f.infinite_kernel;
  j["tail_min_singular_value"] = f.tail_min_singular_value;
  return j;
}

std::vector<dpk::Generator> read_generators(const Json& j) {
  std::vector<dpk::Generator> out;
  const Json& list = j.contains("generators") ? j.at("generators") : j;
  for (const Json& g : list) {
    const std::string type = g.at("type").get<std::string>();
    if (type == "w")
      out.emplace_back(dpk::DiagonalGenerator{dpk::io::diagonal_from_json(g.at("w"))});
    else if (type == "x")
      out.emplace_back(dpk::ExponentialGenerator{dpk::io::operator_from_json(g.at("x"))});
    else if (type == "s")
      out.emplace_back(dpk::PermutationGenerator{dpk::io::permutation_from_json(g.at("sigma"))});
    else
      throw dpk::Error(dpk::ErrorCode::Parse, "generator type must be w, x or s");
  }
  return out;
}

std::vector<long long> parse_integers(const std::string& text) {
  std::vector<long long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
  return out;
}

void add_config_flags(CLI::App* app, dpk::ExperimentConfig& c, std::optional<double>& tol) {
  app->add_option("--seed", c.seed, "Base seed");
  app->add_option("--trials", c.trials, "Number of trials");
  app->add_option("--head", c.head_size, "Head size (multiple of the period)");
  app->add_option("--period", c.period, "Tail period");
  app->add_option("--tol", tol, "Threshold override for residual checks");
}

void add_output_flags(CLI::App* app, Output& out) {
  app->add_option("--out", out.path, "Write the result to this file instead of stdout");
  app->add_option("--format", out.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app->add_flag("--no-meta", out.no_meta, "Omit wall time and timestamp from reports");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eventually block-periodic model of diagonal plus compact operators"};
  app.require_subcommand(1);

  dpk::ExperimentConfig config;
  std::optional<double> tol;
  Output out;
  int exit_code = 0;

  // gen
  std::string kind = "operator";
  std::uint64_t trial = 0;
  auto* gen = app.add_subcommand("gen", "Generate a seeded random instance");
  gen->add_option("--kind", kind, "operator|unitary|projection|positive|functional|permutation");
  gen->add_option("--trial", trial, "Trial index mixed into the seed");
  add_config_flags(gen, config, tol);
  add_output_flags(gen, out);
  gen->callback([&] { out.emit(dpk::generate_instance(config, kind, trial)); });

  // verify
  bool list = false;
  auto* verify = app.add_subcommand("verify", "Run a property suite");
  verify->add_option("--suite", config.suite, "Suite name");
  verify->add_flag("--list", list, "List suite names");
  add_config_flags(verify, config, tol);
  add_output_flags(verify, out);
  verify->callback([&] {
    if (list) {
      for (const auto& name : dpk::suite_names()) std::cout << name << "\n";
      return;
    }
    config.tolerance = tol;
    const dpk::SuiteReport report = dpk::run_suite(config);
    if (out.format == "csv")
      out.emit(dpk::report_to_csv(report));
    else
      out.emit(dpk::report_to_json(report, !out.no_meta));
    exit_code = report.failed == 0 ? 0 : 1;
  });

  std::string in_path;
  std::string second_path;

  auto* fredholm = app.add_subcommand("fredholm", "Fredholm data of an operator");
  fredholm->add_option("--in", in_path, "Operator JSON")->required();
  add_output_flags(fredholm, out);
  fredholm->callback([&] { out.emit(fredholm_json(dpk::fredholm_data(read_operator(in_path)))); });

  auto* factor = app.add_subcommand("factor-unitary", "U = D e^{iX} for a D+K unitary");
  factor->add_option("--in", in_path, "Unitary JSON")->required();
  add_output_flags(factor, out);
  factor->callback([&] {
    const dpk::EopOperator u = read_operator(in_path);
    const dpk::UnitaryFactorization f = dpk::unitary_factorize(u);
    Json j;
    j["diagonal"] = dpk::io::to_json(f.diagonal_unitary);
    j["exponent"] = dpk::io::to_json(f.exponent);
    j["exponent_norm"] = dpk::operator_norm(f.exponent);
    j["residual"] = dpk::operator_norm(f.reconstruct() - u);
    out.emit(j);
  });

  bool trace = false;
  std::size_t max_iter = 500;
  auto* pr = app.add_subcommand("porta-recht", "A = D^{1/2} e^Z D^{1/2} for a positive D+K operator");
  pr->add_option("--in", in_path, "Positive operator JSON")->required();
  pr->add_option("--tol", tol, "Stopping tolerance");
  pr->add_option("--max-iter", max_iter, "Iteration budget");
  pr->add_flag("--trace", trace, "Emit the iteration trace");
  add_output_flags(pr, out);
  pr->callback([&] {
    dpk::PortaRechtOptions options;
    options.tol = tol.value_or(options.tol);
    options.max_iter = max_iter;
    options.trace = trace;
    const dpk::EopOperator a = read_operator(in_path);
    const dpk::PortaRechtResult r = dpk::porta_recht(a, options);
    Json j;
    j["diagonal"] = dpk::io::to_json(r.factorization.diagonal);
    j["exponent"] = dpk::io::to_json(r.factorization.exponent);
    j["iterations"] = r.iterations;
    j["diagonal_residual"] = r.diagonal_residual;
    j["reconstruction_residual"] = r.reconstruction_residual;
    if (trace) {
      Json steps = Json::array();
      for (const auto& s : r.trace)
        steps.push_back({{"iteration", s.iteration},
                         {"alpha", s.alpha},
                         {"diagonal_residual", s.diagonal_residual},
                         {"reconstruction_residual", s.reconstruction_residual},
                         {"accepted", s.accepted}});
      j["trace"] = steps;
    }
    out.emit(j);
  });

  auto* quotient = app.add_subcommand("quotient", "Class in (D+K)/K");
  quotient->add_option("--in", in_path, "Operator JSON")->required();
  add_output_flags(quotient, out);
  quotient->callback([&] {
    const dpk::EopOperator t = read_operator(in_path);
    const dpk::QuotientClass c = dpk::quotient_class(t);
    Json j;
    j["pattern"] = dpk::io::to_json(c.values());
    j["norm"] = c.norm();
    j["essential_norm"] = dpk::essential_norm(t);
    out.emit(j);
  });

  dpk::Index residue = 0;
  dpk::Index modulus = 0;
  auto* character = app.add_subcommand("character", "Evaluate a residue character");
  character->add_option("--in", in_path, "Operator JSON")->required();
  character->add_option("--residue", residue, "Residue r")->required();
  character->add_option("--modulus", modulus, "Modulus (defaults to the operator period)");
  add_output_flags(character, out);
  character->callback([&] {
    const dpk::EopOperator t = read_operator(in_path);
    const dpk::Complex v = modulus > 0 ? dpk::ResidueCharacter{residue, modulus}(t) : dpk::character_eval(t, residue);
    out.emit(Json{{"residue", residue}, {"value", dpk::io::to_json(v)}});
  });

  std::string mode;
  auto* autos = app.add_subcommand("autos", "Automorphisms: normal-form, stampfli, check, separation");
  autos->add_option("mode", mode, "normal-form|stampfli|check|separation")
      ->required()
      ->check(CLI::IsMember({"normal-form", "stampfli", "check", "separation"}));
  autos->add_option("--in", in_path, "Input JSON");
  add_config_flags(autos, config, tol);
  add_output_flags(autos, out);
  autos->callback([&] {
    if (mode == "separation") {
      config.suite = "separation";
      config.tolerance = tol;
      const dpk::SuiteReport report = dpk::run_suite(config);
      out.emit(dpk::report_to_json(report, !out.no_meta));
      exit_code = report.failed == 0 ? 0 : 1;
      return;
    }
    if (in_path.empty()) throw dpk::Error(dpk::ErrorCode::Config, "--in is required for " + mode);
    if (mode == "normal-form") {
      const dpk::AutomorphismWord w = dpk::normal_form(read_generators(dpk::io::read_json_file(in_path)));
      out.emit(dpk::io::to_json(w));
    } else if (mode == "stampfli") {
      const dpk::StampfliResult s = dpk::stampfli(read_operator(in_path), tol.value_or(1e-8));
      out.emit(Json{{"derivation_norm", s.derivation_norm},
                    {"center", dpk::io::to_json(s.center)},
                    {"radius", s.radius}});
    } else {
      const auto w = dpk::is_dpk_automorphism(read_operator(in_path));
      Json j;
      j["normalizes"] = w.has_value();
      if (w) {
        j["tail_permutation"] = w->tail_permutation;
        j["word"] = dpk::io::to_json(w->word);
      }
      out.emit(j);
    }
  });

  auto* proj = app.add_subcommand("proj", "Projections: index, classify, geodesic");
  proj->add_option("mode", mode, "index|classify|geodesic")
      ->required()
      ->check(CLI::IsMember({"index", "classify", "geodesic"}));
  proj->add_option("--p", in_path, "Projection P JSON")->required();
  proj->add_option("--q", second_path, "Projection Q JSON");
  add_output_flags(proj, out);
  proj->callback([&] {
    const dpk::ModelProjection p = read_projection(in_path);
    if (mode == "classify") {
      const dpk::ComponentClass c = dpk::classify_component(p);
      out.emit(Json{{"kind", dpk::to_string(c.kind)},
                    {"count", c.count},
                    {"pattern", dpk::io::to_json(c.pattern)},
                    {"base_index", c.base_index}});
      return;
    }
    if (second_path.empty()) throw dpk::Error(dpk::ErrorCode::Config, "--q is required for " + mode);
    const dpk::ModelProjection q = read_projection(second_path);
    if (mode == "index") {
      const dpk::PairIndexReport r = dpk::pair_index_report(p, q);
      out.emit(Json{{"index", r.index}, {"plus_one", r.plus_one}, {"minus_one", r.minus_one}});
      return;
    }
    const dpk::GeodesicExponent g = dpk::minimal_geodesic(p, q);
    const double gap = dpk::operator_norm(p.op() - q.op());
    Json j;
    j["length"] = g.length;
    j["distance"] = gap;
    j["arcsin_residual"] = gap < 1.0 ? std::abs(g.length - std::asin(gap)) : std::abs(g.length - std::numbers::pi / 2);
    j["endpoint_residual"] = dpk::operator_norm(dpk::geodesic_point(p, g, 1.0) - q.op());
    j["exponent"] = dpk::io::to_json(g.x);
    out.emit(j);
  });

  std::string k_text = "1";
  int samples = 64;
  auto* topo = app.add_subcommand("topo", "Topology: section, winding, k0");
  topo->add_option("mode", mode, "section|winding|k0")->required()->check(CLI::IsMember({"section", "winding", "k0"}));
  topo->add_option("--in", in_path, "Unitary (section) or projection (k0) JSON");
  topo->add_option("--k", k_text, "Comma-separated integer vector for the generator loop");
  topo->add_option("--samples", samples, "Loop samples");
  add_output_flags(topo, out);
  topo->callback([&] {
    if (mode == "winding") {
      const dpk::Pi1Pair r = dpk::pi1_iota(parse_integers(k_text), samples);
      out.emit(Json{{"diagonal_winding", r.diagonal}, {"compact_winding", r.compact}});
      return;
    }
    if (in_path.empty()) throw dpk::Error(dpk::ErrorCode::Config, "--in is required for " + mode);
    if (mode == "section") {
      const dpk::EopOperator u = read_operator(in_path);
      const dpk::BundleSection s = dpk::bundle_section(u);
      out.emit(Json{{"diagonal", dpk::io::to_json(s.diagonal)},
                    {"fiber", dpk::io::to_json(s.fiber)},
                    {"residual", dpk::operator_norm(s.reconstruct() - u)}});
    } else {
      const dpk::K0Class c = dpk::k0_class(read_projection(in_path));
      out.emit(Json{{"tail_pattern", dpk::io::to_json(c.tail_pattern)}, {"z_part", c.z_part}});
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const dpk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
