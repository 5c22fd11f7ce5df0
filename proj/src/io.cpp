#include "symtuck/io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace symtuck {

namespace {

void append_double(std::string& line, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  line.append(buf, ptr);
}

Matrix parse_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open CSV file: " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used == 0) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (first) {  // header
        first = false;
        continue;
      }
      throw IoError("non-numeric CSV row in " + path);
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw IoError("ragged CSV rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("empty CSV file: " + path);

  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

void write_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  std::string line;
  for (Index i = 0; i < m.rows(); ++i) {
    line.clear();
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) line.push_back(',');
      append_double(line, m(i, j));
    }
    line.push_back('\n');
    out << line;
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

void save_samples_csv(const std::string& path, const Matrix& samples) {
  write_csv(path, samples.transpose());
}

Matrix load_samples_csv(const std::string& path) { return parse_csv(path).transpose(); }

void save_samples_binary(const std::string& path, const Matrix& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  const std::uint64_t header[2] = {static_cast<std::uint64_t>(samples.rows()),
                                   static_cast<std::uint64_t>(samples.cols())};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  out.write(reinterpret_cast<const char*>(samples.data()),
            static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(samples.size())));
  if (!out) throw IoError("write failed: " + path);
}

Matrix load_samples_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::uint64_t header[2];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!in) throw IoError("truncated binary header: " + path);
  Matrix m(static_cast<Index>(header[0]), static_cast<Index>(header[1]));
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(m.size())));
  if (!in) throw IoError("truncated binary payload: " + path);
  return m;
}

namespace {

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void save_samples(const std::string& path, const Matrix& samples) {
  if (has_suffix(path, ".bin"))
    save_samples_binary(path, samples);
  else
    save_samples_csv(path, samples);
}

Matrix load_samples(const std::string& path) {
  if (has_suffix(path, ".bin")) return load_samples_binary(path);
  return load_samples_csv(path);
}

void save_matrix_csv(const std::string& path, const Matrix& m) { write_csv(path, m); }

Matrix load_matrix_csv(const std::string& path) { return parse_csv(path); }

void write_trace(std::ostream& out, const SolverTrace& trace) {
  for (const TraceRecord& rec : trace.records) {
    nlohmann::json j;
    j["iter"] = rec.iter;
    j["phase"] = rec.phase;
    if (rec.objective) j["objective"] = *rec.objective;
    if (rec.rel_grad) j["relgrad"] = *rec.rel_grad;
    if (rec.subspace_error) j["subspace_error"] = *rec.subspace_error;
    j["elapsed_s"] = rec.elapsed_s;
    out << j.dump() << '\n';
  }
}

void save_trace(const std::string& path, const SolverTrace& trace) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trace: " + path);
  write_trace(out, trace);
  if (!out) throw IoError("trace write failed: " + path);
}

std::string criticality_report_json(const CriticalityReport& report) {
  nlohmann::json j;
  j["first_order"] = report.first_order;
  j["grad_norm"] = report.grad_norm;
  j["max_rayleigh"] = report.max_rayleigh;
  j["tol"] = report.tol;
  return j.dump();
}

}  // namespace symtuck
