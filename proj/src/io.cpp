#include "gmmv/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gmmv {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix(const fs::path& path, const Matrix& A) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << A.rows() << ' ' << A.cols() << '\n';
  for (Index r = 0; r < A.rows(); ++r) {
    for (Index c = 0; c < A.cols(); ++c) {
      if (c > 0) out << ' ';
      out << format_double(A(r, c));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Matrix read_matrix(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  Index m = 0, n = 0;
  if (!(in >> m >> n) || m < 1 || n < 1)
    throw std::runtime_error("bad matrix header in " + path.string());
  Matrix A(m, n);
  for (Index r = 0; r < m; ++r)
    for (Index c = 0; c < n; ++c)
      if (!(in >> A(r, c)))
        throw std::runtime_error("truncated matrix data in " + path.string());
  return A;
}

namespace {

std::string matrix_filename(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "A_%03d.txt", i);
  return buf;
}

}  // namespace

void write_ensemble(const fs::path& dir, const MeasurementEnsemble& ensemble) {
  fs::create_directories(dir);
  for (int i = 0; i < ensemble.count(); ++i)
    write_matrix(dir / matrix_filename(i), ensemble.matrix(i));

  json manifest;
  manifest["m"] = ensemble.rows();
  manifest["n"] = ensemble.cols();
  manifest["d"] = ensemble.count();
  manifest["unit_columns"] = ensemble.unit_columns();
  if (ensemble.seed) manifest["seed"] = *ensemble.seed;
  if (ensemble.permutations) manifest["permutations"] = *ensemble.permutations;
  std::ofstream out(dir / "manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
  out << manifest.dump(2) << '\n';
}

MeasurementEnsemble read_ensemble(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw std::runtime_error("cannot read manifest in " + dir.string());
  json manifest = json::parse(in);
  const int d = manifest.at("d").get<int>();
  std::vector<Matrix> matrices;
  matrices.reserve(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) matrices.push_back(read_matrix(dir / matrix_filename(i)));
  MeasurementEnsemble ensemble(std::move(matrices));
  if (ensemble.rows() != manifest.at("m").get<int>() ||
      ensemble.cols() != manifest.at("n").get<int>())
    throw std::runtime_error("manifest shape disagrees with matrix files in " + dir.string());
  if (manifest.contains("seed")) ensemble.seed = manifest["seed"].get<std::uint64_t>();
  if (manifest.contains("permutations"))
    ensemble.permutations = manifest["permutations"].get<std::vector<std::vector<int>>>();
  return ensemble;
}

void write_observations(const fs::path& path, const Observations& obs) {
  Matrix Y(obs.rows(), obs.count());
  for (int i = 0; i < obs.count(); ++i) Y.col(i) = obs.vectors[static_cast<size_t>(i)];
  write_matrix(path, Y);
}

Observations read_observations(const fs::path& path, double noise_budget) {
  Matrix Y = read_matrix(path);
  Observations obs;
  obs.noise_budget = noise_budget;
  obs.vectors.reserve(static_cast<size_t>(Y.cols()));
  for (Index i = 0; i < Y.cols(); ++i) obs.vectors.push_back(Y.col(i));
  return obs;
}

}  // namespace gmmv
