// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Sparse>

#include <limits>
#include <vector>

namespace v2g::qp {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// min 0.5 x'Qx + c'x  s.t.  Ax = b,  Gx <= h,  lower <= x <= upper.
/// Q must be symmetric positive semidefinite (both triangles stored).
struct Problem {
  SpMat Q;
  Vec c;
  SpMat A;
  Vec b;
  SpMat G;
  Vec h;
  Vec lower;
  Vec upper;
};

struct Options {
  int max_iterations = 200;
  double tolerance = 1e-9;  // relative primal, dual and gap tolerance
  double loose_tolerance = 1e-6; // accepted when the iteration stalls
  double regularization = 1e-9; // initial diagonal shift
};

enum class Status {
  Optimal,
  Inaccurate, // stalled, but within the loose tolerance
  MaxIterations,
  NumericalError
};

struct Result {
  Status status = Status::NumericalError;
  Vec x;
  Vec y; // equality multipliers
  Vec z; // inequality multipliers
  double objective = 0.0;
  int iterations = 0;
};

/// Mehrotra predictor-corrector interior-point method. Each iteration
/// factors the quasi-definite reduced KKT system with a sparse LDL'.
Result solve(const Problem &p, const Options &opt = {});

} // namespace v2g::qp
