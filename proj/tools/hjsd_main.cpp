#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "hjsd/runner.hpp"

namespace {

// Exit codes: 0 success, 1 usage/parse error, 2 stratification error,
// 3 non-convergence.
constexpr int kExitParse = 1;
constexpr int kExitStratification = 2;
constexpr int kExitNotConverged = 3;

Eigen::Vector3d parse_trace_point(const std::string& s, int dim) {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  std::istringstream ss(s);
  char comma;
  if (!(ss >> p.x() >> comma >> p.y()) || comma != ',')
    throw CLI::ValidationError("--trace", "expected x,y[,z]");
  if (dim == 3 && !(ss >> comma >> p.z()))
    throw CLI::ValidationError("--trace", "expected x,y,z in 3D");
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-Lagrangian solver for optimal control problems on "
               "stratified domains"};

  std::string input, output;
  std::vector<std::string> trace_specs;
  hjsd::RunOptions opts;
  opts.config.threads = 0;
  opts.config.max_iterations = 0;

  app.add_option("--input", input, "problem file (.hjsd)")->required();
  app.add_option("--h", opts.config.h, "discretization time step")->required();
  app.add_option("--tau", opts.config.tolerance,
                 "convergence tolerance (default 1e-6)");
  app.add_option("--max-iters", opts.config.max_iterations,
                 "iteration cap (default 10*(Nx+Ny+Nz)*ceil(1/h))");
  app.add_option("--threads", opts.config.threads,
                 "worker threads (default: all cores)");
  app.add_option("--penalty", opts.config.penalty,
                 "penalty value for out-of-domain controls (default auto)");
  app.add_option("--trace", trace_specs,
                 "trajectory start point x,y[,z] (repeatable)");
  app.add_option("--output", output, "output VTK path (default input stem + .vtk)");

  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream in(input);
    if (!in) {
      std::cerr << "error: cannot open '" << input << "'\n";
      return kExitParse;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    hjsd::ProblemFile problem = hjsd::parse_hjsd(buf.str());

    if (opts.config.threads <= 0)
      opts.config.threads =
          std::max(1u, std::thread::hardware_concurrency());
    if (opts.config.max_iterations <= 0) {
      int n_sum = problem.counts.x() + problem.counts.y() +
                  (problem.dim == 3 ? problem.counts.z() : 0);
      opts.config.max_iterations =
          10 * n_sum * static_cast<int>(std::ceil(1.0 / opts.config.h));
    }
    if (output.empty()) {
      output = input;
      if (auto dot = output.rfind(".hjsd"); dot != std::string::npos)
        output.resize(dot);
      output += ".vtk";
    }
    opts.output_path = output;
    for (const std::string& s : trace_specs)
      opts.trace_starts.push_back(parse_trace_point(s, problem.dim));

    hjsd::RunSummary summary = hjsd::run(problem, opts, std::cout);
    if (!summary.converged) return kExitNotConverged;
    std::cout << "wrote " << output << '\n';
    return 0;
  } catch (const hjsd::FileError& e) {
    std::cerr << "error: " << input << ": " << e.what() << '\n';
    return kExitParse;
  } catch (const hjsd::StratificationError& e) {
    std::cerr << "stratification error: " << e.what() << '\n';
    return kExitStratification;
  } catch (const hjsd::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitParse;
  } catch (const hjsd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitStratification;
  }
}
