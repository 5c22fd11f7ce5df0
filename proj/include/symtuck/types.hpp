#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace symtuck {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Thrown on dimension / order mismatches between operands.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct OrderError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Explicit dense path refused because n^d exceeds the entry budget.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularCovarianceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RetractionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StreamUnderrunError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UndefinedMetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateLabelsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace symtuck
