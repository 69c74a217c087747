#include "ctom/record_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

static_assert(std::endian::native == std::endian::little,
              "record files are little-endian; big-endian hosts need byte swaps");

namespace ctom {

namespace {

constexpr char kMagic[5] = {'C', 'T', 'O', 'M', '1'};

template <typename T>
void put(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw DataError("record file truncated");
  return value;
}

}  // namespace

void write_records(const std::filesystem::path& path,
                   const std::vector<MeasurementRecord>& records) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open '" + path.string() + "' for writing");
  os.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(records.size()));
  for (const auto& rec : records) {
    put<std::uint32_t>(os, static_cast<std::uint32_t>(rec.readouts.size()));
    put<double>(os, rec.config.dt);
    put<double>(os, rec.config.tau);
    put<std::uint8_t>(os, static_cast<std::uint8_t>(rec.control.num_qubits));
    put<double>(os, rec.control.theta1);
    put<double>(os, rec.control.phi1);
    put<double>(os, rec.control.omega1);
    put<double>(os, rec.control.theta2);
    put<double>(os, rec.control.phi2);
    put<double>(os, rec.control.omega2);
    put<double>(os, rec.control.g);
    put<std::uint64_t>(os, rec.seed);
    os.write(reinterpret_cast<const char*>(rec.readouts.data()),
             static_cast<std::streamsize>(rec.readouts.size() * sizeof(double)));
  }
  if (!os) throw DataError("failed writing record file '" + path.string() + "'");
}

std::vector<MeasurementRecord> read_records(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open record file '" + path.string() + "'");
  char magic[5];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataError("'" + path.string() + "' is not a CTOM1 record file");
  }
  const auto count = get<std::uint32_t>(is);
  std::vector<MeasurementRecord> records;
  records.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    MeasurementRecord rec;
    const auto n_steps = get<std::uint32_t>(is);
    rec.config.dt = get<double>(is);
    rec.config.tau = get<double>(is);
    rec.config.n_steps = static_cast<int>(n_steps);
    rec.control.num_qubits = get<std::uint8_t>(is);
    rec.control.theta1 = get<double>(is);
    rec.control.phi1 = get<double>(is);
    rec.control.omega1 = get<double>(is);
    rec.control.theta2 = get<double>(is);
    rec.control.phi2 = get<double>(is);
    rec.control.omega2 = get<double>(is);
    rec.control.g = get<double>(is);
    rec.seed = get<std::uint64_t>(is);
    validate_control(rec.control);
    validate_config(rec.config);
    rec.readouts.resize(n_steps);
    is.read(reinterpret_cast<char*>(rec.readouts.data()),
            static_cast<std::streamsize>(n_steps * sizeof(double)));
    if (!is) throw DataError("record file truncated");
    records.push_back(std::move(rec));
  }
  return records;
}

void write_records_csv(const std::filesystem::path& path,
                       const std::vector<MeasurementRecord>& records) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open '" + path.string() + "' for writing");
  os.precision(17);
  os << "record,seed";
  const std::size_t n = records.empty() ? 0 : records.front().readouts.size();
  for (std::size_t k = 1; k <= n; ++k) os << ",r_" << k;
  os << "\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    os << i << "," << records[i].seed;
    for (double r : records[i].readouts) os << "," << r;
    os << "\n";
  }
  if (!os) throw DataError("failed writing CSV '" + path.string() + "'");
}

}  // namespace ctom
