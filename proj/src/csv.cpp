#include "hmmwave/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hmmwave::csv {

std::string format_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

namespace {
std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // LF endings everywhere
  if (!out) throw std::runtime_error("cannot write file: " + path);
  return out;
}
}  // namespace

void write_convergence(const std::string& path,
                       const std::vector<rates::ConvergenceRecord>& recs,
                       const rates::RateFit* fit) {
  auto out = open_out(path);
  out << "sweep_var,error";
  if (!recs.empty())
    for (const auto& [k, _] : recs.front().meta) out << ',' << k;
  out << '\n';
  for (const auto& r : recs) {
    out << format_sci(r.sweep_var) << ',' << format_sci(r.error);
    for (const auto& [_, v] : r.meta) out << ',' << v;
    out << '\n';
  }
  if (fit) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "# fitted_slope=%.6f residual=%.6f points=%d\n",
                  fit->slope, fit->max_residual, fit->points_used);
    out << buf;
  }
}

void write_table(const std::string& path, const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& data,
                 const std::vector<std::string>& footer) {
  if (columns.size() != data.size())
    throw std::invalid_argument("write_table: column/name count mismatch");
  auto out = open_out(path);
  for (std::size_t c = 0; c < columns.size(); ++c)
    out << (c ? "," : "") << columns[c];
  out << '\n';
  const std::size_t rows = data.empty() ? 0 : data.front().size();
  for (const auto& col : data)
    if (col.size() != rows)
      throw std::invalid_argument("write_table: ragged columns");
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < data.size(); ++c)
      out << (c ? "," : "") << format_sci(data[c][r]);
    out << '\n';
  }
  for (const auto& line : footer) out << "# " << line << '\n';
}

void write_field_1d(const std::string& path, const std::string& name, double lo,
                    double dx, const std::vector<double>& v) {
  auto out = open_out(path);
  out << "x," << name << '\n';
  for (std::size_t i = 0; i < v.size(); ++i)
    out << format_sci(lo + double(i) * dx) << ',' << format_sci(v[i]) << '\n';
}

void write_field_2d(const std::string& path, const std::string& name, double lo,
                    double dx, int n, const std::vector<double>& v) {
  if (int(v.size()) != n * n)
    throw std::invalid_argument("write_field_2d: size mismatch");
  auto out = open_out(path);
  out << "x,y," << name << '\n';
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out << format_sci(lo + i * dx) << ',' << format_sci(lo + j * dx) << ','
          << format_sci(v[i * n + j]) << '\n';
}

}  // namespace hmmwave::csv
