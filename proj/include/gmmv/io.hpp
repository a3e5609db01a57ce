#ifndef GMMV_IO_HPP
#define GMMV_IO_HPP

#include "gmmv/types.hpp"

#include <filesystem>
#include <string>

// Text-first formats. Matrices are stored as "m n" on the first line followed
// by m whitespace-separated rows; values use 17 significant digits so doubles
// round-trip bit-exactly. An ensemble is a directory of numbered matrix files
// (A_000.txt, ...) plus a manifest.json with {m, n, d, unit_columns, seed?,
// permutations?}.
namespace gmmv {

std::string format_double(double v);  // 17 significant digits

void write_matrix(const std::filesystem::path& path, const Matrix& A);
Matrix read_matrix(const std::filesystem::path& path);

void write_ensemble(const std::filesystem::path& dir, const MeasurementEnsemble& ensemble);
MeasurementEnsemble read_ensemble(const std::filesystem::path& dir);

// Observations are stored as an m x d matrix (column i = y^(i)); the noise
// budget travels separately (solver flag / spec field).
void write_observations(const std::filesystem::path& path, const Observations& obs);
Observations read_observations(const std::filesystem::path& path, double noise_budget = 0.0);

}  // namespace gmmv

#endif  // GMMV_IO_HPP
