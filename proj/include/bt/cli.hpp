#pragma once

// Command-line front end. run() never throws; failures map to exit codes.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bt::cli {

enum ExitCode : int { kSuccess = 0, kVerificationFailure = 1, kUsageError = 2, kModelError = 3 };

struct RunConfig {
  std::string command;
  // interval | disk | counterexample, or a path to a JSON model description.
  std::string model = "interval";
  int modes = 16;      // disk Fourier cutoff; counterexample truncation N
  int quad = 512;      // interval Gram quadrature
  int degree = 0;      // 0 keeps the model default
  double eta = -1.0;   // base point of the regularized triple
  // dirichlet | neumann | robin:ALPHA | kvn:ETA | relation:FILE
  std::string theta = "dirichlet";
  double range_lo = 0.0;
  double range_hi = 50.0;
  int grid = 2000;
  double tol = 1e-13;
  std::uint64_t seed = 0;
  std::string out;  // empty writes to stdout
  std::string format = "json";
  std::vector<int> n_list{4, 8, 12, 16};
  std::optional<int> mode;  // single boundary mode for dtn-export
  bool pole_skip = true;
  std::string inject_fault;  // "gamma1-sign" flips the sign of G1
};

std::string to_json(const RunConfig& c);
RunConfig config_from_json(const std::string& text);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bt::cli
