#include "tinsim/record_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace tinsim {

static_assert(std::endian::native == std::endian::little, "record format assumes little-endian");

namespace {

constexpr char kMagic[8] = {'T', 'I', 'N', 'S', 'I', 'M', 'R', '1'};
constexpr int kSchemaVersion = 1;

using nlohmann::json;

json mode_to_json(const MechanicalMode& m) {
  return {{"mass", m.mass},
          {"omega_m", m.omega_m},
          {"gamma_m", m.gamma_m},
          {"coupling_G", m.coupling_G},
          {"temperature", m.temperature},
          {"damping", m.damping == DampingModel::viscous ? "viscous" : "structural"}};
}

MechanicalMode mode_from_json(const json& j) {
  MechanicalMode m;
  m.mass = j.at("mass").get<double>();
  m.omega_m = j.at("omega_m").get<double>();
  m.gamma_m = j.at("gamma_m").get<double>();
  m.coupling_G = j.at("coupling_G").get<double>();
  m.temperature = j.at("temperature").get<double>();
  const auto d = j.at("damping").get<std::string>();
  if (d == "viscous") {
    m.damping = DampingModel::viscous;
  } else if (d == "structural") {
    m.damping = DampingModel::structural;
  } else {
    throw std::runtime_error("record header: unknown damping model '" + d + "'");
  }
  return m;
}

json header_for(const TimeSeriesRecord& r) {
  json modes = json::array();
  for (const auto& m : r.system.modes) modes.push_back(mode_to_json(m));
  const auto& c = r.system.cavity;
  json channels = json::array();
  for (std::size_t i = 0; i < r.displacement.size(); ++i) channels.push_back("x" + std::to_string(i));
  if (!r.detuning.empty()) channels.push_back("detuning");
  if (!r.intensity.empty()) channels.push_back("intensity");
  if (!r.phase.empty()) channels.push_back("phase");
  return {{"schema_version", kSchemaVersion},
          {"fs", r.fs},
          {"n_samples", r.n_samples},
          {"seed", r.seed},
          {"shot_rin", r.shot_rin},
          {"phase_imprecision", r.phase_imprecision},
          {"radiation_pressure", r.radiation_pressure},
          {"force_coupling_scale", r.force_coupling_scale},
          {"system",
           {{"modes", modes},
            {"probe_index", r.system.probe_index},
            {"cavity",
             {{"kappa", c.kappa},
              {"detuning_nu", c.detuning_nu},
              {"n_cav", c.n_cav},
              {"omega_laser", c.omega_laser},
              {"eta", c.eta}}}}},
          {"channels", channels}};
}

void write_column(std::ostream& out, const std::vector<double>& v) {
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void read_column(std::istream& in, std::vector<double>& v, std::size_t n, const std::string& name) {
  v.resize(n);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw std::runtime_error("record: truncated channel '" + name + "'");
}

}  // namespace

void write_record_binary(std::ostream& out, const TimeSeriesRecord& record) {
  record.validate();
  const std::string header = header_for(record).dump();
  out.write(kMagic, sizeof kMagic);
  const std::uint64_t len = header.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof len);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (const auto& d : record.displacement) write_column(out, d);
  if (!record.detuning.empty()) write_column(out, record.detuning);
  if (!record.intensity.empty()) write_column(out, record.intensity);
  if (!record.phase.empty()) write_column(out, record.phase);
  if (!out) throw std::runtime_error("record: write failed");
}

void write_record_binary(const std::filesystem::path& path, const TimeSeriesRecord& record) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("record: cannot open " + path.string() + " for writing");
  write_record_binary(out, record);
}

TimeSeriesRecord read_record_binary(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw std::runtime_error("record: bad magic");
  }
  std::uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof len);
  if (!in || len > (std::uint64_t{1} << 30)) throw std::runtime_error("record: bad header length");
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  if (!in) throw std::runtime_error("record: truncated header");

  TimeSeriesRecord r;
  try {
    const json h = json::parse(text);
    if (h.at("schema_version").get<int>() != kSchemaVersion) {
      throw std::runtime_error("record: unsupported schema version");
    }
    r.fs = h.at("fs").get<double>();
    r.n_samples = h.at("n_samples").get<std::size_t>();
    r.seed = h.at("seed").get<std::uint64_t>();
    r.shot_rin = h.at("shot_rin").get<double>();
    r.phase_imprecision = h.at("phase_imprecision").get<double>();
    r.radiation_pressure = h.at("radiation_pressure").get<bool>();
    r.force_coupling_scale = h.at("force_coupling_scale").get<std::vector<double>>();
    const json& s = h.at("system");
    for (const auto& m : s.at("modes")) r.system.modes.push_back(mode_from_json(m));
    r.system.probe_index = s.at("probe_index").get<std::size_t>();
    const json& c = s.at("cavity");
    r.system.cavity.kappa = c.at("kappa").get<double>();
    r.system.cavity.detuning_nu = c.at("detuning_nu").get<double>();
    r.system.cavity.n_cav = c.at("n_cav").get<double>();
    r.system.cavity.omega_laser = c.at("omega_laser").get<double>();
    r.system.cavity.eta = c.at("eta").get<double>();

    for (const auto& ch : h.at("channels")) {
      const auto name = ch.get<std::string>();
      if (name == "detuning") {
        read_column(in, r.detuning, r.n_samples, name);
      } else if (name == "intensity") {
        read_column(in, r.intensity, r.n_samples, name);
      } else if (name == "phase") {
        read_column(in, r.phase, r.n_samples, name);
      } else if (name.size() > 1 && name[0] == 'x') {
        r.displacement.emplace_back();
        read_column(in, r.displacement.back(), r.n_samples, name);
      } else {
        throw std::runtime_error("record: unknown channel '" + name + "'");
      }
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("record: malformed header: ") + e.what());
  }
  r.validate();
  return r;
}

TimeSeriesRecord read_record_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("record: cannot open " + path.string());
  return read_record_binary(in);
}

void write_record_csv(std::ostream& out, const TimeSeriesRecord& record) {
  record.validate();
  out << "time_s";
  for (std::size_t i = 0; i < record.displacement.size(); ++i) out << ",x" << i << "_m";
  if (!record.detuning.empty()) out << ",detuning";
  if (!record.intensity.empty()) out << ",intensity";
  if (!record.phase.empty()) out << ",phase_m";
  out << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < record.n_samples; ++k) {
    out << record.time(k);
    for (const auto& d : record.displacement) out << ',' << d[k];
    if (!record.detuning.empty()) out << ',' << record.detuning[k];
    if (!record.intensity.empty()) out << ',' << record.intensity[k];
    if (!record.phase.empty()) out << ',' << record.phase[k];
    out << '\n';
  }
}

void write_record_csv(const std::filesystem::path& path, const TimeSeriesRecord& record) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("record: cannot open " + path.string() + " for writing");
  write_record_csv(out, record);
}

}  // namespace tinsim
