#include "ftlab/numerics/nelder_mead.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ftlab/error.hpp"

namespace ftlab::numerics {
namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

struct Vertex {
  Eigen::VectorXd x;
  double f;
};

}  // namespace

NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> x0, const NelderMeadOptions& options) {
  const auto n = static_cast<Eigen::Index>(x0.size());
  if (n < 1) throw DomainError("nelder_mead: empty parameter vector");
  if (!options.initial_steps.empty() && options.initial_steps.size() != x0.size()) {
    throw DomainError("nelder_mead: initial_steps size does not match x0");
  }

  NelderMeadResult result;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++result.evaluations;
    const double f = objective(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
    return std::isfinite(f) ? f : std::numeric_limits<double>::infinity();
  };

  const Eigen::VectorXd start = Eigen::Map<const Eigen::VectorXd>(x0.data(), n);
  const double f0 = objective(std::span<const double>(x0.data(), x0.size()));
  ++result.evaluations;
  if (!std::isfinite(f0)) throw NumericError("nelder_mead: objective is not finite at the initial point");

  std::vector<Vertex> simplex;
  simplex.reserve(static_cast<std::size_t>(n) + 1);
  simplex.push_back({start, f0});
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd x = start;
    x[i] += options.initial_steps.empty() ? options.simplex_init_scale
                                          : options.initial_steps[static_cast<std::size_t>(i)];
    simplex.push_back({x, eval(x)});
  }

  auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  std::stable_sort(simplex.begin(), simplex.end(), by_value);

  const auto worst = static_cast<std::size_t>(n);
  int iter = 0;
  for (; iter < options.max_iters; ++iter) {
    const double spread = simplex[worst].f - simplex[0].f;
    double diameter = 0.0;
    for (std::size_t i = 1; i <= worst; ++i) {
      diameter = std::max(diameter, (simplex[i].x - simplex[0].x).cwiseAbs().maxCoeff());
    }
    if (spread < options.tol_f && diameter < options.tol_x) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < worst; ++i) centroid += simplex[i].x;
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd xr = centroid + kReflect * (centroid - simplex[worst].x);
    const double fr = eval(xr);
    bool shrink = false;

    if (fr < simplex[0].f) {
      const Eigen::VectorXd xe = centroid + kExpand * (xr - centroid);
      const double fe = eval(xe);
      simplex[worst] = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
    } else if (fr < simplex[worst - 1].f) {
      simplex[worst] = {xr, fr};
    } else if (fr < simplex[worst].f) {
      const Eigen::VectorXd xc = centroid + kContract * (xr - centroid);
      const double fc = eval(xc);
      if (fc <= fr) {
        simplex[worst] = {xc, fc};
      } else {
        shrink = true;
      }
    } else {
      const Eigen::VectorXd xc = centroid + kContract * (simplex[worst].x - centroid);
      const double fc = eval(xc);
      if (fc < simplex[worst].f) {
        simplex[worst] = {xc, fc};
      } else {
        shrink = true;
      }
    }

    if (shrink) {
      for (std::size_t i = 1; i <= worst; ++i) {
        simplex[i].x = simplex[0].x + kShrink * (simplex[i].x - simplex[0].x);
        simplex[i].f = eval(simplex[i].x);
      }
    }
    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    if (options.on_iteration) options.on_iteration(iter + 1, simplex[0].f);
  }

  result.iterations = iter;
  result.f_best = simplex[0].f;
  result.x_best.assign(simplex[0].x.data(), simplex[0].x.data() + n);
  return result;
}

}  // namespace ftlab::numerics
