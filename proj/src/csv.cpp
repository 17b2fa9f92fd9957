#include "stochopt/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "stochopt/errors.hpp"
#include "stochopt/quantiles.hpp"

namespace stochopt {
namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::uint64_t parse_u64(const std::string& text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ValidationError("cannot parse integer from '" + text + "'");
  return value;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ptr);
}

double parse_double(const std::string& text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ValidationError("cannot parse number from '" + text + "'");
  return value;
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ValidationError("missing CSV column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path.string() + ": empty CSV");
  table.header = split_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (fields.size() != table.header.size())
      throw ValidationError(path.string() + ": row has " + std::to_string(fields.size()) +
                            " fields, header has " + std::to_string(table.header.size()));
    table.rows.push_back(std::move(fields));
  }
  return table;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  auto write_row = [&out](const std::vector<std::string>& fields) {
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (j > 0) out << ',';
      out << fields[j];
    }
    out << '\n';
  };
  write_row(table.header);
  for (const auto& row : table.rows) write_row(row);
  out.flush();
  if (!out) throw IoError(path.string(), "write failed");
}

std::vector<std::filesystem::path> write_instance(const PhaseRetrievalInstance& inst,
                                                  const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(dir.string(), ec.message());

  std::string noise_kind = "none";
  std::string noise_param = "0";
  if (inst.noise.kind == NoiseSpec::Kind::laplace) {
    noise_kind = "laplace";
    noise_param = format_double(inst.noise.sigma);
  } else if (inst.noise.kind == NoiseSpec::Kind::corrupted) {
    noise_kind = "corrupt";
    noise_param = format_double(inst.noise.fraction) + ":" + format_double(inst.noise.variance);
  }
  CsvTable meta{{"n", "d", "design", "kappa", "noise_kind", "noise_param", "seed"},
                {{std::to_string(inst.n()), std::to_string(inst.d()), inst.design.kind_name(),
                  format_double(inst.design.kappa), noise_kind, noise_param,
                  std::to_string(inst.seed)}}};

  CsvTable data;
  data.header.push_back("b");
  for (std::size_t j = 0; j < inst.d(); ++j) data.header.push_back("a_" + std::to_string(j));
  for (std::size_t i = 0; i < inst.n(); ++i) {
    std::vector<std::string> row{format_double(inst.b[static_cast<Eigen::Index>(i)])};
    for (std::size_t j = 0; j < inst.d(); ++j)
      row.push_back(format_double(inst.A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
    data.rows.push_back(std::move(row));
  }

  CsvTable signal{{"x_star"}, {}};
  for (Eigen::Index j = 0; j < inst.x_star.size(); ++j)
    signal.rows.push_back({format_double(inst.x_star[j])});

  std::vector<std::filesystem::path> paths{dir / "instance.meta.csv", dir / "instance.data.csv",
                                           dir / "x_star.csv"};
  write_csv(paths[0], meta);
  write_csv(paths[1], data);
  write_csv(paths[2], signal);
  return paths;
}

PhaseRetrievalInstance read_instance(const std::filesystem::path& dir) {
  const CsvTable meta = read_csv(dir / "instance.meta.csv");
  if (meta.rows.size() != 1) throw ValidationError("instance.meta.csv must have one data row");
  const auto& m = meta.rows.front();

  PhaseRetrievalInstance inst;
  const std::size_t n = parse_u64(m[meta.column("n")]);
  const std::size_t d = parse_u64(m[meta.column("d")]);
  inst.design.kind = DesignSpec::parse_kind(m[meta.column("design")]);
  inst.design.kappa = parse_double(m[meta.column("kappa")]);
  const std::string kind = m[meta.column("noise_kind")];
  const std::string param = m[meta.column("noise_param")];
  inst.noise = NoiseSpec::parse(kind == "none" ? kind : kind + ":" + param);
  inst.seed = parse_u64(m[meta.column("seed")]);

  const CsvTable data = read_csv(dir / "instance.data.csv");
  if (data.rows.size() != n || data.header.size() != d + 1)
    throw ValidationError("instance.data.csv shape does not match instance.meta.csv");
  inst.A.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  inst.b.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    inst.b[row] = parse_double(data.rows[i][0]);
    for (std::size_t j = 0; j < d; ++j)
      inst.A(row, static_cast<Eigen::Index>(j)) = parse_double(data.rows[i][j + 1]);
  }

  const auto signal_path = dir / "x_star.csv";
  inst.x_star = Vector::Zero(static_cast<Eigen::Index>(d));
  if (std::filesystem::exists(signal_path)) {
    const CsvTable signal = read_csv(signal_path);
    if (signal.rows.size() != d) throw ValidationError("x_star.csv has the wrong length");
    for (std::size_t j = 0; j < d; ++j)
      inst.x_star[static_cast<Eigen::Index>(j)] = parse_double(signal.rows[j][0]);
  }
  return inst;
}

CsvTable summarize_traces_table(const CsvTable& traces) {
  const std::size_t c_id = traces.column("experiment_id");
  const std::size_t c_method = traces.column("method");
  const std::size_t c_rep = traces.column("rep");
  const std::size_t c_pass = traces.column("pass");
  const std::size_t c_gap = traces.column("gap");

  // (experiment, method) -> rep -> checkpoints, in first-appearance order.
  using Key = std::pair<std::string, std::string>;
  std::vector<Key> order;
  std::map<Key, std::map<std::uint64_t, RunTrace>> groups;
  for (const auto& row : traces.rows) {
    const Key key{row[c_id], row[c_method]};
    if (!groups.count(key)) order.push_back(key);
    auto& trace = groups[key][parse_u64(row[c_rep])];
    trace.checkpoints.push_back({parse_double(row[c_pass]), parse_double(row[c_gap]), 0.0});
  }

  CsvTable summary{{"experiment_id", "method", "pass", "median_gap", "q10_gap", "q90_gap"}, {}};
  for (const auto& key : order) {
    std::vector<RunTrace> runs;
    std::size_t longest = 0;
    for (auto& [rep, trace] : groups[key]) {
      std::sort(trace.checkpoints.begin(), trace.checkpoints.end(),
                [](const Checkpoint& a, const Checkpoint& b) { return a.pass < b.pass; });
      longest = std::max(longest, trace.checkpoints.size());
      runs.push_back(trace);
    }
    const RunTrace* full = nullptr;
    for (const auto& r : runs)
      if (r.checkpoints.size() == longest) full = &r;
    const auto passes = full->checkpoints;
    for (auto& r : runs)
      for (std::size_t c = r.checkpoints.size(); c < longest; ++c)
        r.checkpoints.push_back({passes[c].pass, std::numeric_limits<double>::infinity(), 0.0});

    const QuantileSummary s = summarize_quantiles(runs);
    for (std::size_t c = 0; c < s.pass.size(); ++c)
      summary.rows.push_back({key.first, key.second, format_double(s.pass[c]),
                              format_double(s.median[c]), format_double(s.q10[c]),
                              format_double(s.q90[c])});
  }
  return summary;
}

}  // namespace stochopt
