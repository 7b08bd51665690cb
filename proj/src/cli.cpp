#include "steklov/cli.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "steklov/acceptance.hpp"
#include "steklov/adaptivity.hpp"
#include "steklov/cr_space.hpp"
#include "steklov/studies.hpp"
#include "steklov/tables.hpp"
#include "steklov/verification.hpp"

namespace steklov {

std::string_view to_string(Command command) {
  switch (command) {
    case Command::Eig: return "eig";
    case Command::SourceRates: return "source-rates";
    case Command::Adapt: return "adapt";
    case Command::Verify: return "verify";
  }
  return "?";
}

Command command_from_string(std::string_view name) {
  if (name == "eig") return Command::Eig;
  if (name == "source-rates") return Command::SourceRates;
  if (name == "adapt") return Command::Adapt;
  if (name == "verify") return Command::Verify;
  throw UsageError("unknown command '" + std::string(name) +
                   "' (expected eig, source-rates, adapt or verify)");
}

void apply_config_json(RunConfig& config, const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw UsageError("config must be a JSON object");
  if (doc.empty()) throw UsageError("config is empty");

  double n_re = config.n.real(), n_im = config.n.imag();
  std::optional<double> sigma_re, sigma_im;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "command") config.command = command_from_string(value.get<std::string>());
      else if (key == "domain") config.domain = domain_kind_from_string(value.get<std::string>());
      else if (key == "n_re") n_re = value.get<double>();
      else if (key == "n_im") n_im = value.get<double>();
      else if (key == "k") config.k = value.get<double>();
      else if (key == "levels") config.levels = value.get<int>();
      else if (key == "theta") config.theta = value.get<double>();
      else if (key == "j") config.j = value.get<int>();
      else if (key == "max_dof") config.max_dof = value.get<int>();
      else if (key == "count") config.count = value.get<int>();
      else if (key == "sigma_re") sigma_re = value.get<double>();
      else if (key == "sigma_im") sigma_im = value.get<double>();
      else if (key == "quick") config.quick = value.get<bool>();
      else if (key == "out") config.out = value.get<std::string>();
      else if (key == "errors_out") config.errors_out = value.get<std::string>();
      else if (key == "mesh_out") config.mesh_out = value.get<std::string>();
      else if (key == "dump_matrices") config.dump_matrices = value.get<std::string>();
      else throw UsageError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::type_error& e) {
    throw UsageError(std::string("config value has the wrong type: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  config.n = cplx(n_re, n_im);
  if (sigma_re || sigma_im) config.sigma = cplx(sigma_re.value_or(0.0), sigma_im.value_or(0.0));
}

void validate(const RunConfig& config) {
  if (!(config.k > 0.0)) throw UsageError("k must be positive");
  if (config.levels < 1) throw UsageError("levels must be at least 1");
  if (!(config.theta > 0.0 && config.theta < 1.0)) throw UsageError("theta must lie in (0, 1)");
  if (config.j < 1) throw UsageError("j must be at least 1");
  if (config.max_dof < 1) throw UsageError("max_dof must be at least 1");
  if (config.count < 0) throw UsageError("count must not be negative");
  if (config.n.real() <= 0.0 || config.n.imag() < 0.0) {
    throw UsageError("n must have a positive real part and a non-negative imaginary part");
  }
}

int eigen_count(const RunConfig& config) {
  if (config.count > 0) return config.count;
  return config.domain == DomainKind::Disk && config.n.imag() != 0.0 ? 4 : 6;
}

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  return file;
}

// Reference values for the error table of the eig command: the tabulated
// values where they exist, otherwise the Richardson limit of each column.
std::vector<cplx> error_reference(const UniformStudy& study) {
  switch (study.domain) {
    case DomainKind::Disk: {
      const auto& ref = disk_reference();
      return study.complex_n() ? ref.complex_n : ref.real_n;
    }
    case DomainKind::LShape:
    case DomainKind::SlitSquare: {
      const auto& column = polygon_reference().column(study.domain, study.complex_n());
      return {column.begin(), column.end()};
    }
    case DomainKind::Square: break;
  }
  std::vector<cplx> out;
  if (study.levels.size() < 3) return out;
  for (int j = 0; j < study.count; ++j) {
    out.push_back(richardson(study.mesh_sizes(), study.column(j)).limit);
  }
  return out;
}

int cmd_eig(const RunConfig& config, std::ostream& out, std::ostream& log) {
  EigenOptions options;
  options.shift = config.sigma;
  const int count = eigen_count(config);
  const std::vector<int> resolutions = default_resolutions(config.domain, config.levels);
  const bool last_dumps = !config.mesh_out.empty() || !config.dump_matrices.empty();
  int level_index = 0;
  const UniformStudy study = run_uniform(
      config.domain, config.n, config.k, count, resolutions, options,
      [&](const UniformLevel& level, const Mesh& mesh) {
        log << "level " << level.resolution << ": " << level.dof << " dofs, "
            << format_fixed(level.seconds, 2) << " s\n";
        if (++level_index < static_cast<int>(resolutions.size()) || !last_dumps) return;
        if (!config.mesh_out.empty()) {
          auto file = open_output(config.mesh_out);
          write_mesh(file, mesh);
        }
        if (!config.dump_matrices.empty()) {
          const CRSpace space(std::make_shared<const Mesh>(mesh));
          const PencilProblem p = make_pencil(space, Coefficient(config.n), config.k);
          auto fa = open_output(config.dump_matrices + "_A.txt");
          write_coordinate(fa, p.a);
          auto fb = open_output(config.dump_matrices + "_B.txt");
          write_coordinate(fb, p.b);
        }
      });
  write_eigen_csv(out, study);
  if (!config.errors_out.empty()) {
    const std::vector<cplx> reference = error_reference(study);
    if (reference.empty()) {
      log << "no reference values for the error table (need 3 levels)\n";
    } else {
      auto file = open_output(config.errors_out);
      write_error_csv(file, study, reference);
    }
  }
  return 0;
}

int cmd_source_rates(const RunConfig& config, std::ostream& out, std::ostream& log) {
  const SmoothFunction phi = cosine_product();
  const Coefficient n(config.n);
  const ManufacturedLoads loads = manufactured_loads(phi, config.k, n);
  std::vector<double> h, e_h1, e_bd;
  out << "dof,h,h1_error,boundary_error,consistency\n";
  for (int resolution : default_resolutions(config.domain, config.levels)) {
    auto mesh = std::make_shared<const Mesh>(build_level(config.domain, resolution));
    const CRSpace space(mesh);
    const SparseOperator a = assemble_helmholtz(space, n, config.k);
    const CVector load = assemble_boundary_load(space, loads.f, 4) +
                         assemble_volume_load(space, loads.zeta, conical_rule(4));
    const CVector x = solve_source(a, load);
    h.push_back(mesh->max_diameter());
    e_h1.push_back(broken_h1_error(space, x, phi));
    e_bd.push_back(boundary_l2_error(space, x, phi));
    const double consistency = consistency_dual_norm(space, phi, loads, config.k, n);
    out << space.n_dof() << ',' << format_sci(h.back(), 6) << ',' << format_sci(e_h1.back(), 6)
        << ',' << format_sci(e_bd.back(), 6) << ',' << format_sci(consistency, 6) << '\n';
    log << "level " << resolution << ": " << space.n_dof() << " dofs\n";
  }
  if (h.size() >= 3) {
    log << "broken H1 order " << format_fixed(observed_order(h, e_h1), 3)
        << ", boundary L2 order " << format_fixed(observed_order(h, e_bd), 3) << '\n';
  }
  return 0;
}

int cmd_adapt(const RunConfig& config, std::ostream& out, std::ostream& log) {
  AdaptConfig ac;
  ac.domain = config.domain;
  ac.n = config.n;
  ac.k = config.k;
  ac.j = config.j;
  ac.theta = config.theta;
  ac.max_dof = config.max_dof;
  ac.eigen.shift = config.sigma;
  log << "adapt: " << to_string(config.domain) << ", j = " << config.j << ", theta = "
      << config.theta << ", bulk marking, newest vertex bisection\n";
  AdaptRun run;
  try {
    run = adapt_loop(ac, [&](const AdaptRecord& r, const Mesh&) {
      log << "level " << r.level << ": " << r.dof << " dofs, eta^2 " << format_sci(r.eta2, 3)
          << ", " << format_fixed(r.seconds, 2) << " s\n";
    });
  } catch (const AdaptError& e) {
    // Keep the completed levels before reporting the failure.
    write_adapt_csv(out, e.partial());
    throw;
  }
  write_adapt_csv(out, run);
  if (!config.mesh_out.empty() && run.final_mesh) {
    auto file = open_output(config.mesh_out);
    write_mesh(file, *run.final_mesh);
  }
  return 0;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& log) {
  AcceptanceOptions options;
  options.quick = config.quick;
  options.log = &log;
  options.theta = config.theta;
  AcceptanceSuite suite(options);
  const std::vector<CheckResult> results = suite.run_all();
  bool all = true;
  for (const auto& r : results) {
    log << (r.pass ? "PASS " : "FAIL ") << r.criterion << "  " << r.name << ": " << r.observed
        << " (expected " << r.expected << ")\n";
    all = all && r.pass;
  }
  out << report_json(results) << '\n';
  return all ? 0 : 1;
}

}  // namespace

int run_command(const RunConfig& config, std::ostream& out, std::ostream& log) {
  validate(config);
  switch (config.command) {
    case Command::Eig: return cmd_eig(config, out, log);
    case Command::SourceRates: return cmd_source_rates(config, out, log);
    case Command::Adapt: return cmd_adapt(config, out, log);
    case Command::Verify: return cmd_verify(config, out, log);
  }
  return 2;
}

}  // namespace steklov
