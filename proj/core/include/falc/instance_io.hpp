#pragma once

#include <filesystem>

#include "falc/problems.hpp"

namespace falc {

/// Writes D.fmat, X0.fmat, S0.fmat, Y0.fmat and meta.json (n, r, support
/// size, rho_noise, seed, support as column-major linear indices).
void write_instance(const std::filesystem::path& dir, const Instance& inst);

/// Reads a directory written by write_instance. Throws MatrixFormatError on
/// missing or inconsistent files.
Instance read_instance(const std::filesystem::path& dir);

}  // namespace falc
