#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "stochopt/problems.hpp"

namespace stochopt {

// Shortest decimal that round-trips the double ("inf", "nan" for the rest).
std::string format_double(double value);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
};

// Unquoted comma-separated values with a header row. Throws IoError.
CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

double parse_double(const std::string& text);

// instance.meta.csv, instance.data.csv (b, a_0..a_{d-1} per row) and
// x_star.csv inside dir.
std::vector<std::filesystem::path> write_instance(const PhaseRetrievalInstance& inst,
                                                  const std::filesystem::path& dir);
PhaseRetrievalInstance read_instance(const std::filesystem::path& dir);

// Rebuilds summary rows (experiment_id, method, pass, median_gap, q10_gap,
// q90_gap) from a traces.csv table.
CsvTable summarize_traces_table(const CsvTable& traces);

}  // namespace stochopt
