#pragma once

#include <filesystem>
#include <string>

#include "lgsim/crosstalk.hpp"
#include "lgsim/modes.hpp"
#include "lgsim/tomography.hpp"

namespace lgsim {

/// Shortest round-trip decimal form (std::to_chars), locale-independent.
std::string format_double(double v);

/// Crosstalk CSV schema (also the ingestion schema for external matrices):
///   input\detector,<label_0>,...,<label_{d-1}>
///   <label_i>,C_i0,...,C_i{d-1}
void write_crosstalk_csv(const std::filesystem::path& path, const CrosstalkMatrix& m);
CrosstalkMatrix read_crosstalk_csv(const std::filesystem::path& path);

/// JSON sidecar: labels, method, beta, grid, waist, visibility, mean efficiency.
void write_crosstalk_sidecar(const std::filesystem::path& path, const CrosstalkMatrix& m);

/// State file: {"support": ["l0p0", ...], "coeffs": [[re, im], ...], "waist": w}.
/// Coefficients are normalized on load.
SpatialState load_state_json(const std::filesystem::path& path);
void save_state_json(const std::filesystem::path& path, const SpatialState& state);

/// Density matrix as JSON (complex entries as [re, im]) and |rho_ij| CSV.
void write_density_json(const std::filesystem::path& path, const DensityMatrix& rho,
                        const std::vector<ModeIndex>& support);
void write_density_abs_csv(const std::filesystem::path& path, const DensityMatrix& rho);

} // namespace lgsim
