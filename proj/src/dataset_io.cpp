#include "trls/dataset_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace trls {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

void write_dataset_csv(const SampleSet& samples, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_dataset_csv: cannot open " + path);
  const Index d = samples.dim();
  for (Index j = 0; j < d; ++j) out << "x" << (j + 1) << ",";
  out << "y\n";
  for (Index i = 0; i < samples.n_samples(); ++i) {
    for (Index j = 0; j < d; ++j) out << format_double(samples.design(i, j)) << ",";
    out << format_double(samples.response[i]) << "\n";
  }
  if (!out) throw std::runtime_error("write_dataset_csv: write failed for " + path);
}

SampleSet read_dataset_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_dataset_csv: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_dataset_csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_line(line);
  if (header.size() < 2 || header.back() != "y")
    throw std::runtime_error("read_dataset_csv: malformed header");
  const Index d = static_cast<Index>(header.size()) - 1;
  for (Index j = 0; j < d; ++j) {
    if (header[j] != "x" + std::to_string(j + 1))
      throw std::runtime_error("read_dataset_csv: malformed header column " + header[j]);
  }

  std::vector<double> values;
  Index rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (static_cast<Index>(fields.size()) != d + 1)
      throw std::runtime_error("read_dataset_csv: wrong field count on data row");
    for (const auto& f : fields) {
      size_t pos = 0;
      const double v = std::stod(f, &pos);
      if (pos != f.size()) throw std::runtime_error("read_dataset_csv: bad number '" + f + "'");
      values.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw std::runtime_error("read_dataset_csv: no data rows");

  Matrix x(rows, d);
  Vector y(rows);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < d; ++j) x(i, j) = values[static_cast<size_t>(i * (d + 1) + j)];
    y[i] = values[static_cast<size_t>(i * (d + 1) + d)];
  }
  return SampleSet(std::move(x), std::move(y));
}

}  // namespace trls
