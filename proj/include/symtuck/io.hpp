#pragma once

#include <iosfwd>
#include <string>

#include "symtuck/explicit_solver.hpp"
#include "symtuck/manifold.hpp"
#include "symtuck/types.hpp"

namespace symtuck {

// Sample files hold one observation per row (p rows, n columns); in memory
// observations are columns (n x p). CSV loading skips an optional header.
void save_samples_csv(const std::string& path, const Matrix& samples);
Matrix load_samples_csv(const std::string& path);

// Raw binary samples: header of two little-endian uint64 (n, p), then the
// n x p column-major float64 payload.
void save_samples_binary(const std::string& path, const Matrix& samples);
Matrix load_samples_binary(const std::string& path);

// Dispatch on extension: ".bin" -> binary, anything else -> CSV.
void save_samples(const std::string& path, const Matrix& samples);
Matrix load_samples(const std::string& path);

// Plain matrix CSV (rows x cols as laid out), used for bases and cores.
// Values are written with enough digits to round-trip doubles exactly.
void save_matrix_csv(const std::string& path, const Matrix& m);
Matrix load_matrix_csv(const std::string& path);

// JSON-lines trace, one record per line.
void write_trace(std::ostream& out, const SolverTrace& trace);
void save_trace(const std::string& path, const SolverTrace& trace);

std::string criticality_report_json(const CriticalityReport& report);

}  // namespace symtuck
