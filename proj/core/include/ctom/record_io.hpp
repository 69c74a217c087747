#pragma once

#include <filesystem>
#include <vector>

#include "ctom/dynamics.hpp"

namespace ctom {

/// Binary record file, little-endian:
///   magic "CTOM1", u32 record count, then per record
///   { u32 n_steps, f64 dt, f64 tau, u8 num_qubits,
///     f64 theta1, phi1, omega1, theta2, phi2, omega2, g, u64 seed }
///   followed by n_steps f64 readouts.
void write_records(const std::filesystem::path& path,
                   const std::vector<MeasurementRecord>& records);

std::vector<MeasurementRecord> read_records(const std::filesystem::path& path);

/// One record per row: index, seed, then the readouts.
void write_records_csv(const std::filesystem::path& path,
                       const std::vector<MeasurementRecord>& records);

}  // namespace ctom
