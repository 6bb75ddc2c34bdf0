#pragma once

#include <string>
#include <vector>

#include "hmmwave/rates.hpp"

namespace hmmwave::csv {

/// Deterministic convergence CSV: header `sweep_var,error,<meta...>`, rows
/// with %.12e formatting, LF line endings, and an optional footer comment
/// `# fitted_slope=... residual=...`. Identical inputs produce
/// byte-identical files.
void write_convergence(const std::string& path,
                       const std::vector<rates::ConvergenceRecord>& recs,
                       const rates::RateFit* fit);

/// Plain numeric table with named columns (all the same length).
void write_table(const std::string& path,
                 const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& data,
                 const std::vector<std::string>& footer = {});

/// Grid field dump: `x[,y],<name>` rows over an n (or n x n) periodic grid.
void write_field_1d(const std::string& path, const std::string& name, double lo,
                    double dx, const std::vector<double>& v);
void write_field_2d(const std::string& path, const std::string& name, double lo,
                    double dx, int n, const std::vector<double>& v);

std::string format_sci(double v);

}  // namespace hmmwave::csv
