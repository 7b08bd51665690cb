#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "steklov/mesh.hpp"
#include "steklov/types.hpp"

namespace steklov {

enum class Command { Eig, SourceRates, Adapt, Verify };

std::string_view to_string(Command command);
Command command_from_string(std::string_view name);

/// Bad configuration or arguments; the front-end maps it to exit code 2.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Command command = Command::Eig;
  DomainKind domain = DomainKind::Square;
  cplx n = 4.0;
  double k = 1.0;
  int levels = 4;
  double theta = 0.5;
  int j = 2;                 // 1-based target eigenvalue for adapt
  int max_dof = 200000;
  int count = 0;             // 0: 6 eigenvalues, 4 for the disk with complex n
  std::optional<cplx> sigma;
  bool quick = false;
  std::string out;           // empty: standard output
  std::string errors_out;    // eig: log-log error table
  std::string mesh_out;      // finest or final mesh
  std::string dump_matrices; // prefix for "<prefix>_A.txt" and "<prefix>_B.txt"
};

/// Applies the keys of a JSON object to `config`. Keys: command, domain, n_re,
/// n_im, k, levels, theta, j, max_dof, count, sigma_re, sigma_im, quick, out,
/// errors_out, mesh_out, dump_matrices. An empty document, an empty object,
/// invalid JSON or an unknown key is a UsageError.
void apply_config_json(RunConfig& config, const std::string& text);

/// Checks k > 0, levels >= 1, 0 < theta < 1, j >= 1, max_dof >= 1 and
/// count >= 0. Throws UsageError.
void validate(const RunConfig& config);

/// Number of eigenvalues the eig command reports.
int eigen_count(const RunConfig& config);

/// Runs one command, writing its table or report to `out` and progress to
/// `log`. Returns the process exit code: 0 on success, 1 when verify has a
/// failing check. Solver errors propagate.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& log);

}  // namespace steklov
