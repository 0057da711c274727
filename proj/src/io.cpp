#include "durable/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

namespace durable {

namespace {

std::vector<std::string> splitComma(const std::string& line) {
  std::vector<std::string> cells;
  size_t at = 0;
  while (true) {
    size_t comma = line.find(',', at);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(at));
      return cells;
    }
    cells.push_back(line.substr(at, comma - at));
    at = comma + 1;
  }
}

double parseDouble(const std::string& cell, size_t lineNo, const char* what) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
    throw ParseError(lineNo, "invalid " + std::string(what) + " value '" + cell + "'");
  }
  return v;
}

int64_t parseId(const std::string& cell, size_t lineNo) {
  int64_t v = 0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ParseError(lineNo, "invalid id value '" + cell + "'");
  }
  return v;
}

std::string expectedHeader(int dim) {
  std::string h = "id";
  for (int a = 1; a <= dim; ++a) h += ",x" + std::to_string(a);
  h += ",t_start,t_end";
  return h;
}

void appendDouble(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

Dataset loadCsv(std::istream& in, Metric metric) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "empty input, expected a header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  // Header fixes the dimension: id,x1,...,xd,t_start,t_end.
  auto cells = splitComma(line);
  if (cells.size() < 4 || cells.front() != "id" || cells[cells.size() - 2] != "t_start" ||
      cells.back() != "t_end") {
    throw ParseError(1, "header must be id,x1,...,xd,t_start,t_end");
  }
  int dim = static_cast<int>(cells.size()) - 3;
  if (line != expectedHeader(dim)) {
    throw ParseError(1, "header must be id,x1,...,xd,t_start,t_end");
  }
  std::vector<TemporalPoint> pts;
  size_t lineNo = 1;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    cells = splitComma(line);
    if (cells.size() != static_cast<size_t>(dim) + 3) {
      throw ParseError(lineNo, "expected " + std::to_string(dim + 3) + " columns, got " +
                                   std::to_string(cells.size()));
    }
    TemporalPoint pt;
    int64_t id = parseId(cells[0], lineNo);
    if (id < 0 || id > INT32_MAX) throw ParseError(lineNo, "id out of range");
    pt.id = static_cast<int32_t>(id);
    pt.coords.resize(static_cast<size_t>(dim));
    for (int a = 0; a < dim; ++a) {
      pt.coords[static_cast<size_t>(a)] = parseDouble(cells[static_cast<size_t>(a) + 1],
                                                      lineNo, "coordinate");
    }
    pt.lifespan.start = parseDouble(cells[static_cast<size_t>(dim) + 1], lineNo, "t_start");
    pt.lifespan.end = parseDouble(cells[static_cast<size_t>(dim) + 2], lineNo, "t_end");
    if (pt.lifespan.end < pt.lifespan.start) {
      throw ParseError(lineNo, "t_end before t_start");
    }
    pts.push_back(std::move(pt));
  }
  try {
    Dataset ds = makeDataset(std::move(pts), std::move(metric));
    ds.dim = dim;  // header fixes d even when there are no rows
    return ds;
  } catch (const InputError& e) {
    throw ParseError(lineNo, e.what());
  }
}

Dataset loadCsvFile(const std::string& path, Metric metric) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "' for reading");
  return loadCsv(in, std::move(metric));
}

void saveCsv(const Dataset& ds, std::ostream& out) {
  std::string buf = expectedHeader(ds.dim);
  buf += '\n';
  for (const TemporalPoint& pt : ds.points) {
    buf += std::to_string(pt.id);
    for (double c : pt.coords) {
      buf += ',';
      appendDouble(buf, c);
    }
    buf += ',';
    appendDouble(buf, pt.lifespan.start);
    buf += ',';
    appendDouble(buf, pt.lifespan.end);
    buf += '\n';
    out << buf;
    buf.clear();
  }
  if (ds.points.empty()) out << buf;
}

void saveCsvFile(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(0, "cannot open '" + path + "' for writing");
  saveCsv(ds, out);
}

Dataset generateClustered(const GenerateParams& params, Metric metric) {
  if (params.n < 1) throw InputError("n must be positive");
  if (params.dim < 1) throw InputError("dim must be at least 1");
  if (params.clusters < 1) throw InputError("clusters must be at least 1");
  if (!(params.clusterStd >= 0.0) || !(params.meanLength > 0.0)) {
    throw InputError("clusterStd must be >= 0 and meanLength > 0");
  }
  std::mt19937_64 rng(params.seed);
  // Hand-rolled uniform/normal/exponential transforms: the distributions in
  // <random> are not bit-stable across standard libraries.
  auto uniform = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  auto normalPair = [&](double& a, double& b) {
    double u = 0.0;
    do {
      u = uniform();
    } while (u == 0.0);
    double r = std::sqrt(-2.0 * std::log(u));
    double t = 2.0 * std::acos(-1.0) * uniform();
    a = r * std::cos(t);
    b = r * std::sin(t);
  };
  std::vector<std::vector<double>> centers(static_cast<size_t>(params.clusters));
  for (auto& c : centers) {
    c.resize(static_cast<size_t>(params.dim));
    for (double& v : c) v = uniform();
  }
  std::vector<TemporalPoint> pts;
  pts.reserve(static_cast<size_t>(params.n));
  double spare = 0.0;
  bool haveSpare = false;
  auto normal = [&]() {
    if (haveSpare) {
      haveSpare = false;
      return spare;
    }
    double a = 0.0, b = 0.0;
    normalPair(a, b);
    spare = b;
    haveSpare = true;
    return a;
  };
  for (int i = 0; i < params.n; ++i) {
    TemporalPoint pt;
    pt.id = i;
    const auto& c = centers[static_cast<size_t>(i % params.clusters)];
    pt.coords.resize(static_cast<size_t>(params.dim));
    for (int a = 0; a < params.dim; ++a) {
      double v = c[static_cast<size_t>(a)] + params.clusterStd * normal();
      pt.coords[static_cast<size_t>(a)] = std::clamp(v, -4.0, 5.0);
    }
    double start = uniform();
    double u = 0.0;
    do {
      u = uniform();
    } while (u == 0.0);
    double len = -params.meanLength * std::log(u);
    pt.lifespan = {start, start + std::min(len, 64.0)};
    pts.push_back(std::move(pt));
  }
  return makeDataset(std::move(pts), std::move(metric));
}

}  // namespace durable
