// SPDX-License-Identifier: Apache-2.0
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "uno/error.hpp"
#include "uno/harness.hpp"

namespace uno::harness {

namespace {

constexpr const char* kHeader =
    "row,cell,variant,lambda,sup,m,sigma2,n,dt,h,N,i_max,trial,seed,nmse_db,nmse_raw_db,mean_db,std_db";

std::string num(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip form
  return std::string(buf, p);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(ec == std::errc() && p == s.data() + s.size(), ErrorKind::io, "bad number '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void cell_prefix(std::ostream& os, const char* row, std::size_t idx, const Cell& c) {
  os << row << ',' << idx << ',' << c.variant << ',' << num(c.lambda) << ',' << num(c.sup) << ',' << c.m << ','
     << num(c.sigma2) << ',' << c.n << ',' << num(c.dt) << ',' << c.h << ',' << c.diff_order << ',' << c.i_max;
}

}  // namespace

void emit_csv(std::ostream& os, const ExperimentResult& r) {
  os << "# config=" << r.config_echo.dump() << '\n' << kHeader << '\n';
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    const Cell& c = r.cells[i];
    for (std::size_t t = 0; t < c.nmse_db.size(); ++t) {
      cell_prefix(os, "trial", i, c);
      os << ',' << t << ',' << c.seeds[t] << ',' << num(c.nmse_db[t]) << ',' << num(c.nmse_raw_db[t]) << ",,\n";
    }
  }
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    cell_prefix(os, "summary", i, r.cells[i]);
    os << ",,,,," << num(r.cells[i].mean_db) << ',' << num(r.cells[i].std_db) << '\n';
  }
  require(static_cast<bool>(os), ErrorKind::io, "failed to write CSV");
}

void emit_json(std::ostream& os, const ExperimentResult& r) {
  nlohmann::json cells = nlohmann::json::array();
  for (const Cell& c : r.cells)
    cells.push_back({{"variant", c.variant}, {"lambda", c.lambda}, {"sup", c.sup}, {"m", c.m}, {"sigma2", c.sigma2},
                     {"n", c.n}, {"dt", c.dt}, {"h", c.h}, {"N", c.diff_order}, {"i_max", c.i_max},
                     {"seeds", c.seeds}, {"nmse_db", c.nmse_db}, {"nmse_raw_db", c.nmse_raw_db},
                     {"mean_db", c.mean_db}, {"std_db", c.std_db}});
  nlohmann::json j{{"version", r.version},
                   {"experiment", r.config.experiment},
                   {"config", r.config_echo},
                   {"wall_clock_s", r.wall_clock_s},
                   {"cells", cells}};
  os << j.dump(2) << '\n';
  require(static_cast<bool>(os), ErrorKind::io, "failed to write JSON");
}

ExperimentResult parse_csv(std::istream& is) {
  ExperimentResult r;
  std::string line;
  require(static_cast<bool>(std::getline(is, line)) && line.rfind("# config=", 0) == 0, ErrorKind::io,
          "missing config line");
  r.config_echo = nlohmann::json::parse(line.substr(9));
  r.config = ExperimentConfig::from_json(r.config_echo);
  require(static_cast<bool>(std::getline(is, line)) && line == kHeader, ErrorKind::io, "unexpected CSV header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line);
    require(f.size() == 18, ErrorKind::io, "wrong field count: " + line);
    const auto idx = std::stoul(f[1]);
    if (idx >= r.cells.size()) r.cells.resize(idx + 1);
    Cell& c = r.cells[idx];
    c.variant = f[2];
    c.lambda = parse_double(f[3]);
    c.sup = parse_double(f[4]);
    c.m = std::stoul(f[5]);
    c.sigma2 = parse_double(f[6]);
    c.n = std::stoul(f[7]);
    c.dt = parse_double(f[8]);
    c.h = std::stoi(f[9]);
    c.diff_order = std::stoi(f[10]);
    c.i_max = std::stoull(f[11]);
    if (f[0] == "trial") {
      c.seeds.push_back(std::stoull(f[13]));
      c.nmse_db.push_back(parse_double(f[14]));
      c.nmse_raw_db.push_back(parse_double(f[15]));
    } else {
      require(f[0] == "summary", ErrorKind::io, "unknown row kind '" + f[0] + "'");
      c.mean_db = parse_double(f[16]);
      c.std_db = parse_double(f[17]);
    }
  }
  return r;
}

}  // namespace uno::harness
