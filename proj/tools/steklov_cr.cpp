// steklov-cr: uniform eigenvalue studies, manufactured source rates, adaptive
// runs and the acceptance report.
//
//   steklov-cr eig --domain lshape --n-re 4 --levels 4 --out lshape.csv
//   steklov-cr adapt --config slit_complex.json --max-dof 100000
//   steklov-cr verify --quick
//
// Flags override the values of a --config JSON file.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "steklov/cli.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> domain;
  std::optional<double> n_re, n_im, k, theta, sigma_re, sigma_im;
  std::optional<int> levels, j, max_dof, count;
  std::optional<std::string> out, errors_out, mesh_out, dump_matrices;
  bool quick = false;
};

void add_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON run configuration");
  cmd->add_option("--domain", o.domain, "square, lshape, slit or disk");
  cmd->add_option("--n-re", o.n_re, "real part of the index of refraction");
  cmd->add_option("--n-im", o.n_im, "imaginary part of the index of refraction");
  cmd->add_option("--k", o.k, "wave number");
  cmd->add_option("--levels", o.levels, "number of uniform levels");
  cmd->add_option("--theta", o.theta, "bulk marking fraction");
  cmd->add_option("--j", o.j, "tracked eigenvalue (1-based)");
  cmd->add_option("--max-dof", o.max_dof, "adaptive stopping size");
  cmd->add_option("--count", o.count, "number of eigenvalues");
  cmd->add_option("--sigma-re", o.sigma_re, "shift, real part");
  cmd->add_option("--sigma-im", o.sigma_im, "shift, imaginary part");
  cmd->add_option("--out", o.out, "output table or report (default: stdout)");
  cmd->add_option("--errors-out", o.errors_out, "eig: error table against references");
  cmd->add_option("--mesh-out", o.mesh_out, "finest or final mesh");
  cmd->add_option("--dump-matrices", o.dump_matrices, "eig: prefix for A and B of the finest level");
  cmd->add_flag("--quick", o.quick, "verify: square-only subset");
}

steklov::RunConfig build_config(steklov::Command command, const Overrides& o) {
  using namespace steklov;
  RunConfig c;
  if (!o.config.empty()) {
    std::ifstream file(o.config);
    if (!file) throw UsageError("cannot read config '" + o.config + "'");
    std::stringstream text;
    text << file.rdbuf();
    apply_config_json(c, text.str());
    if (c.command != command) {
      throw UsageError("config command '" + std::string(to_string(c.command)) +
                       "' does not match '" + std::string(to_string(command)) + "'");
    }
  }
  c.command = command;
  try {
    if (o.domain) c.domain = domain_kind_from_string(*o.domain);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (o.n_re) c.n.real(*o.n_re);
  if (o.n_im) c.n.imag(*o.n_im);
  if (o.k) c.k = *o.k;
  if (o.levels) c.levels = *o.levels;
  if (o.theta) c.theta = *o.theta;
  if (o.j) c.j = *o.j;
  if (o.max_dof) c.max_dof = *o.max_dof;
  if (o.count) c.count = *o.count;
  if (o.sigma_re || o.sigma_im) {
    const cplx base = c.sigma.value_or(0.0);
    c.sigma = cplx(o.sigma_re.value_or(base.real()), o.sigma_im.value_or(base.imag()));
  }
  if (o.out) c.out = *o.out;
  if (o.errors_out) c.errors_out = *o.errors_out;
  if (o.mesh_out) c.mesh_out = *o.mesh_out;
  if (o.dump_matrices) c.dump_matrices = *o.dump_matrices;
  if (o.quick) c.quick = true;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crouzeix-Raviart solver for the Steklov eigenvalue problem"};
  app.require_subcommand(1);
  Overrides o;
  const std::pair<const char*, steklov::Command> commands[] = {
      {"eig", steklov::Command::Eig},
      {"source-rates", steklov::Command::SourceRates},
      {"adapt", steklov::Command::Adapt},
      {"verify", steklov::Command::Verify}};
  const char* help[] = {"eigenvalues on uniform refinements (CSV)",
                        "manufactured source problem errors (CSV)",
                        "adaptive refinement for one eigenvalue (CSV)",
                        "acceptance checks (JSON report)"};
  for (int i = 0; i < 4; ++i) add_options(app.add_subcommand(commands[i].first, help[i]), o);
  CLI11_PARSE(app, argc, argv);

  steklov::Command command = steklov::Command::Eig;
  for (const auto& [name, c] : commands) {
    if (app.got_subcommand(name)) command = c;
  }
  try {
    const steklov::RunConfig config = build_config(command, o);
    steklov::validate(config);
    if (config.out.empty()) return steklov::run_command(config, std::cout, std::cerr);
    std::ofstream file(config.out);
    if (!file) {
      std::cerr << "error: cannot open '" << config.out << "' for writing\n";
      return 1;
    }
    return steklov::run_command(config, file, std::cerr);
  } catch (const steklov::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
