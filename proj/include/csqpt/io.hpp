#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "csqpt/homodyne.hpp"
#include "csqpt/process_mle.hpp"

namespace csqpt::io {

// JSON {n_max, re: [[..]], im: [[..]]}, row-major.
std::string density_matrix_to_json(const DensityMatrix& rho);
DensityMatrix density_matrix_from_json(const std::string& text);

// JSON {n_max, elements: [[re, im], ...]} flattened row-major over [k][l][m][n].
std::string process_tensor_to_json(const ProcessTensor& t);
ProcessTensor process_tensor_from_json(const std::string& text);

// CSV with header pulse_id,phase_rad,quadrature.
std::string records_to_csv(const std::vector<QuadratureRecord>& records);
std::vector<QuadratureRecord> records_from_csv(const std::string& text);

// JSON {phase_edges, quad_edges, counts, rejected}.
std::string histogram_to_json(const BinnedHistogram& hist);
BinnedHistogram histogram_from_json(const std::string& text);

std::string signal_power_map_to_json(const SignalPowerMap& map);
SignalPowerMap signal_power_map_from_json(const std::string& text);

std::string wigner_to_json(const WignerGrid& grid);

// CSV columns m,n,value,defined.
std::string phase_slice_to_csv(const PhaseSlice& slice);

// ProbeSet manifest JSON {probes: [{alpha_re, alpha_im, input_hist_path,
// output_hist_path}], eta, edges_path}; paths resolved relative to base_dir.
ProbeSet probe_set_from_manifest(const std::string& text,
                                 const std::filesystem::path& base_dir);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

std::string sha256_hex(const std::string& data);

}  // namespace csqpt::io
