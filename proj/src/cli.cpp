#include "liestab/cli.hpp"

#include "liestab/curvature.hpp"
#include "liestab/errors.hpp"
#include "liestab/io.hpp"
#include "liestab/oracle.hpp"
#include "liestab/registry.hpp"
#include "liestab/variation.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

namespace liestab {
namespace {

struct RunConfig {
  std::string input;
  std::string format = "text";
  std::string convention = "both";
  std::optional<double> volume;
  std::string realization = "auto";
  std::uint64_t samples = 10000;
  std::uint64_t seed = 0;
  double step = 1e-3;
  std::string field = "invariant:1";
  unsigned threads = 0;
};

std::string num(double v) { return fmt::format("{}", v); }

std::string vec_text(const Vector& v) {
  std::string s = "[";
  for (int i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
  return s + "]";
}

// Text rendering of a flat JSON object, one "key = value" line per field.
void print_text(std::ostream& out, const json& doc, const std::string& indent = "") {
  for (const auto& [key, value] : doc.items()) {
    if (value.is_object()) {
      fmt::print(out, "{}{}:\n", indent, key);
      print_text(out, value, indent + "  ");
    } else if (value.is_array() && !value.empty() && value[0].is_array()) {
      fmt::print(out, "{}{}:\n", indent, key);
      for (const auto& row : value) {
        Vector r(static_cast<int>(row.size()));
        for (std::size_t i = 0; i < row.size(); ++i) r[static_cast<int>(i)] = row[i].get<double>();
        fmt::print(out, "{}  {}\n", indent, vec_text(r));
      }
    } else if (value.is_array()) {
      Vector r(static_cast<int>(value.size()));
      for (std::size_t i = 0; i < value.size(); ++i) r[static_cast<int>(i)] = value[i].get<double>();
      fmt::print(out, "{}{} = {}\n", indent, key, vec_text(r));
    } else if (value.is_number_float()) {
      fmt::print(out, "{}{} = {}\n", indent, key, num(value.get<double>()));
    } else if (value.is_string()) {
      fmt::print(out, "{}{} = {}\n", indent, key, value.get<std::string>());
    } else {
      fmt::print(out, "{}{} = {}\n", indent, key, value.dump());
    }
  }
}

void emit(std::ostream& out, const RunConfig& cfg, const json& doc) {
  if (cfg.format == "json") {
    out << doc.dump(2) << "\n";
  } else {
    print_text(out, doc);
  }
}

bool looks_like_hom(const std::string& input) {
  const std::filesystem::path p(input);
  if (!std::filesystem::is_regular_file(p)) return false;
  const auto j = read_json_file(p);
  return j.is_object() && j.contains("phi");
}

json pair_json(const MetrizedAlgebra& ma, bool& pass) {
  const auto ar = validate_algebra(ma.algebra);
  const auto mr = validate_metric(ma.algebra, ma.metric);
  pass = pass && ar.pass && mr.pass;
  return {{"name", ma.algebra.name()},
          {"dim", ma.dim()},
          {"algebra", to_json(ar)},
          {"metric", to_json(mr)}};
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  bool pass = true;
  json doc;
  if (looks_like_hom(cfg.input)) {
    const auto h = load_homomorphism(cfg.input);
    doc["kind"] = "homomorphism";
    doc["domain"] = pair_json(h.domain(), pass);
    doc["codomain"] = pair_json(h.codomain(), pass);
    const auto hr = validate_hom(h);
    pass = pass && hr.pass;
    doc["homomorphism"] = to_json(hr);
  } else {
    const auto ma = load_algebra(cfg.input);
    doc["kind"] = "algebra";
    doc["algebra"] = pair_json(ma, pass);
  }
  doc["pass"] = pass;
  emit(out, cfg, doc);
  return pass ? kExitOk : kExitValidation;
}

void require_pair_valid(const MetrizedAlgebra& ma) {
  const auto ar = validate_algebra(ma.algebra);
  if (!ar.pass) {
    throw ValidationError(fmt::format("'{}' is not a Lie algebra: antisymmetry residual {}, Jacobi residual {}",
                                      ma.algebra.name(), ar.antisymmetry_residual, ar.jacobi_residual));
  }
  const auto mr = validate_metric(ma.algebra, ma.metric);
  if (!mr.pass) {
    throw ValidationError(fmt::format(
        "metric on '{}' is not bi-invariant: positive definite {}, ad-invariance residual {}",
        ma.algebra.name(), mr.positive_definite, mr.ad_invariance_residual));
  }
}

int cmd_curvature(const RunConfig& cfg, std::ostream& out) {
  const auto ma = looks_like_hom(cfg.input) ? load_homomorphism(cfg.input).domain()
                                            : load_algebra(cfg.input);
  require_pair_valid(ma);
  const auto frame = orthonormal_frame(ma);
  json pairs = json::array();
  for (int i = 0; i < frame.size(); ++i)
    for (int j = i + 1; j < frame.size(); ++j) {
      pairs.push_back({{"i", i + 1}, {"j", j + 1}, {"K", sectional(ma, frame[i], frame[j])}});
    }
  const auto ric = ricci(ma);
  json doc = {{"name", ma.algebra.name()},
              {"dim", ma.dim()},
              {"ricci", to_json(ric.op)},
              {"scalar_curvature", ric.scalar},
              {"flat", is_flat(ma)}};
  if (cfg.format == "json") {
    doc["sectional"] = pairs;
    emit(out, cfg, doc);
  } else {
    print_text(out, doc);
    for (const auto& p : pairs) {
      fmt::print(out, "K(E{}, E{}) = {}\n", p["i"].get<int>(), p["j"].get<int>(), num(p["K"].get<double>()));
    }
  }
  return kExitOk;
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out) {
  const auto h = load_homomorphism(cfg.input);
  const auto rep = stability_report(h, cfg.volume);
  json doc = to_json(rep);
  if (cfg.convention == "paper") doc.erase("smith_density_standard");
  if (cfg.convention == "standard") doc.erase("smith_density_paper");
  doc["convention"] = cfg.convention;
  doc["tension_norm"] = tension(h).norm;
  doc["second_fundamental_form_max"] = is_totally_geodesic(h).max_residual;
  emit(out, cfg, doc);
  return kExitOk;
}

GroupRealization domain_realization(const RunConfig& cfg, const MetrizedAlgebra& dom) {
  if (cfg.realization == "auto") return GroupRealization::infer(dom);
  if (cfg.realization == "su2") {
    auto r = GroupRealization::su2(dom.metric.gram()(0, 0));
    r.check_compatible(dom);
    return r;
  }
  auto r = GroupRealization::torus(std::vector<double>(dom.dim(), 2.0 * std::numbers::pi));
  r.check_compatible(dom);
  return r;
}

SampledField parse_field(const std::string& spec, const Homomorphism& h, const GroupRealization& r1,
                         std::string& description) {
  description = spec;
  if (spec.rfind("builtin:", 0) == 0) return builtin_field(spec.substr(8), h, r1);
  if (spec.rfind("invariant:", 0) == 0) {
    std::vector<double> coords;
    std::stringstream ss(spec.substr(10));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        coords.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw StructuralError("--field: cannot parse coordinate '" + item + "'");
      }
    }
    const int n2 = h.codomain().dim();
    if (coords.size() == 1 && n2 > 1) {
      // invariant:<k> shorthand for the basis vector e_k
      const double k = coords[0];
      if (k != std::floor(k) || k < 1 || k > n2) throw StructuralError("--field: basis index out of range");
      return SampledField::invariant(Vector::Unit(n2, static_cast<int>(k) - 1));
    }
    if (static_cast<int>(coords.size()) != n2) {
      throw StructuralError(fmt::format("--field: expected {} coordinates, got {}", n2, coords.size()));
    }
    return SampledField::invariant(Eigen::Map<const Vector>(coords.data(), n2));
  }
  throw StructuralError("--field: expected invariant:<coords> or builtin:<name>");
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  const auto h = load_homomorphism(cfg.input);
  require_valid(h);
  const auto r1 = domain_realization(cfg, h.domain());
  const auto r2 = GroupRealization::infer(h.codomain());
  std::string field_desc;
  const auto w = parse_field(cfg.field, h, r1, field_desc);
  const QuadratureOptions opt{cfg.samples, cfg.seed, cfg.threads};

  const auto fd = second_variation_fd(h, r1, r2, w, cfg.step, opt);
  const double vol = r1.volume();
  json doc = {{"realization", cfg.realization},
              {"samples", cfg.samples},
              {"seed", cfg.seed},
              {"step", cfg.step},
              {"field", field_desc},
              {"volume", vol},
              {"energy", fd.energy},
              {"energy_closed_form", energy_density(h) * vol},
              {"first_variation", fd.first},
              {"first_variation_closed_form", 0.0},
              {"second_variation", fd.second},
              {"second_variation_closed_form", smith_quadrature(h, r1, w, opt)}};
  if (w.left_invariant) {
    doc["smith_index_density_paper_times_volume"] =
        smith_index_density(h, CurvatureConvention::Paper, w.constant) * vol;
  }
  emit(out, cfg, doc);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stability analysis of Lie group homomorphisms under bi-invariant metrics"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_format = [&cfg](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format (default text)")
        ->check(CLI::IsMember({"text", "json"}));
  };

  auto* validate = app.add_subcommand("validate", "Check algebra, metric and homomorphism axioms");
  validate->add_option("input", cfg.input, "Algebra file, homomorphism file, or registry name")->required();
  add_format(validate);

  auto* curvature = app.add_subcommand("curvature", "Sectional curvatures, Ricci operator, flatness");
  curvature->add_option("input", cfg.input, "Algebra file or registry name")->required();
  add_format(curvature);

  auto* analyze = app.add_subcommand("analyze", "Stability verdict of a homomorphism");
  analyze->add_option("input", cfg.input, "Homomorphism file")->required();
  analyze->add_option("--volume", cfg.volume, "Volume of the domain (default: report densities)")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--convention", cfg.convention, "Curvature sign convention (default both)")
      ->check(CLI::IsMember({"paper", "standard", "both"}));
  add_format(analyze);

  auto* oracle = app.add_subcommand("oracle", "Quadrature and finite-difference energy oracle");
  oracle->add_option("input", cfg.input, "Homomorphism file")->required();
  oracle->add_option("--realization", cfg.realization, "Domain group realization (default auto)")
      ->check(CLI::IsMember({"su2", "torus", "auto"}));
  oracle->add_option("--samples", cfg.samples, "Quadrature samples (default 10000)")
      ->check(CLI::PositiveNumber);
  oracle->add_option("--seed", cfg.seed, "Sampling seed (default 0)");
  oracle->add_option("--step", cfg.step, "Finite-difference step in (0, 0.1] (default 1e-3)")
      ->check(CLI::Range(0.0, 0.1) & CLI::PositiveNumber);
  oracle->add_option("--field", cfg.field,
                     "Variation field: invariant:<coords>|invariant:<k>|builtin:<name> (default invariant:1)");
  oracle->add_option("--threads", cfg.threads, "Worker threads (default: hardware concurrency)");
  add_format(oracle);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitMalformed;
  }

  try {
    if (validate->parsed()) return cmd_validate(cfg, out);
    if (curvature->parsed()) return cmd_curvature(cfg, out);
    if (analyze->parsed()) return cmd_analyze(cfg, out);
    return cmd_oracle(cfg, out);
  } catch (const StructuralError& e) {
    err << "malformed input: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const ValidationError& e) {
    err << "validation failed: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace liestab
