#include "steklov/studies.hpp"

#include <chrono>
#include <stdexcept>

#include "steklov/cr_space.hpp"

namespace steklov {

std::vector<cplx> UniformStudy::column(int j) const {
  std::vector<cplx> out;
  for (const auto& level : levels) out.push_back(level.lambdas.at(j));
  return out;
}

std::vector<double> UniformStudy::mesh_sizes() const {
  std::vector<double> out;
  for (const auto& level : levels) out.push_back(level.h);
  return out;
}

std::vector<double> UniformStudy::dofs() const {
  std::vector<double> out;
  for (const auto& level : levels) out.push_back(level.dof);
  return out;
}

std::vector<int> default_resolutions(DomainKind kind, int levels) {
  if (levels < 1) throw std::invalid_argument("default_resolutions: levels must be >= 1");
  std::vector<int> out;
  for (int i = 0; i < levels; ++i) {
    switch (kind) {
      case DomainKind::Square:
      case DomainKind::SlitSquare: out.push_back(32 << i); break;
      case DomainKind::LShape: out.push_back(16 << i); break;
      case DomainKind::Disk: out.push_back(4 + i); break;
    }
  }
  return out;
}

SortRule sort_rule_for(const cplx& n) {
  return n.imag() == 0.0 ? SortRule::DescendingReal : SortRule::DescendingImag;
}

UniformStudy run_uniform(DomainKind kind, const cplx& n, double k, int count,
                         const std::vector<int>& resolutions, const EigenOptions& options,
                         const UniformCallback& on_level) {
  UniformStudy study;
  study.domain = kind;
  study.n = n;
  study.k = k;
  study.count = count;
  for (int resolution : resolutions) {
    const auto start = std::chrono::steady_clock::now();
    auto mesh = std::make_shared<const Mesh>(build_level(kind, resolution));
    const CRSpace space(mesh);
    const PencilProblem problem = make_pencil(space, Coefficient(n), k);
    const std::vector<EigenPair> pairs = solve_eigs(problem, count, sort_rule_for(n), options);
    UniformLevel level;
    level.resolution = resolution;
    level.dof = space.n_dof();
    level.h = mesh->max_diameter();
    for (const auto& p : pairs) {
      level.lambdas.push_back(p.lambda);
      level.residuals.push_back(p.residual);
    }
    level.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    study.levels.push_back(level);
    if (on_level) on_level(level, *mesh);
  }
  return study;
}

}  // namespace steklov
