#pragma once

// CSV loading/saving of temporal point sets and the clustered synthetic
// generator. CSV layout: header `id,x1,...,xd,t_start,t_end`, one point per
// row, ids forming a dense 0..n-1 range.

#include <cstdint>
#include <iosfwd>
#include <string>

#include "durable/core.hpp"

namespace durable {

Dataset loadCsv(std::istream& in, Metric metric);
Dataset loadCsvFile(const std::string& path, Metric metric);
void saveCsv(const Dataset& ds, std::ostream& out);
void saveCsvFile(const Dataset& ds, const std::string& path);

struct GenerateParams {
  int n = 100;
  int dim = 2;
  int clusters = 5;
  double clusterStd = 0.05;   // per-axis std dev of a cluster
  double meanLength = 0.2;    // mean lifespan length
  uint64_t seed = 0;
};

// Gaussian clusters with centers uniform in [0,1]^d; lifespans start uniform
// in [0,1] with exponential lengths. Deterministic for a fixed seed across
// platforms (hand-rolled transforms over mt19937_64 output).
Dataset generateClustered(const GenerateParams& params, Metric metric);

}  // namespace durable
