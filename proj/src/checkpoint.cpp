#include "mhd/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <iterator>

#include <json.hpp>

namespace mhd {

namespace {

using nlohmann::json;

void put_le(double v, unsigned char* out) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) out[b] = static_cast<unsigned char>(bits >> (8 * b));
}

double get_le(const unsigned char* in) {
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(in[b]) << (8 * b);
  return std::bit_cast<double>(bits);
}

json params_json(const PhysParams& p) {
  return {{"mu", p.mu},
          {"lambda", p.lambda},
          {"nu", p.nu},
          {"pressure_A", p.pressure_A},
          {"pressure_gamma", p.pressure_gamma},
          {"rho_bar", p.rho_bar},
          {"c0_floor", p.c0_floor}};
}

PhysParams params_from(const json& j) {
  PhysParams p;
  p.mu = j.at("mu").get<double>();
  p.lambda = j.at("lambda").get<double>();
  p.nu = j.at("nu").get<double>();
  p.pressure_A = j.at("pressure_A").get<double>();
  p.pressure_gamma = j.at("pressure_gamma").get<double>();
  p.rho_bar = j.at("rho_bar").get<double>();
  p.c0_floor = j.at("c0_floor").get<double>();
  return p;
}

}  // namespace

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<unsigned char> encode_checkpoint(const State& s, const PhysParams& params) {
  validate_state(s);
  const Grid& g = s.grid();
  const RealField* parts[] = {&s.rho, &s.u, &s.B};
  std::size_t count = 0;
  for (const RealField* f : parts) count += f->values().size();
  std::vector<unsigned char> body(8 * count);
  std::size_t pos = 0;
  for (const RealField* f : parts) {
    for (double v : f->values()) {
      put_le(v, body.data() + pos);
      pos += 8;
    }
  }

  json h = {{"schema_version", kCheckpointVersion},
            {"dim", g.dim()},
            {"points_per_axis", g.points_per_axis()},
            {"period", g.period()},
            {"t", s.t},
            {"params", params_json(params)},
            {"fields", json::array({json{{"name", "rho"}, {"components", 1}},
                                    json{{"name", "u"}, {"components", g.dim()}},
                                    json{{"name", "B"}, {"components", g.dim()}}})},
            {"body_bytes", body.size()},
            {"checksum", fnv1a64(body)},
            {"header_bytes", 0}};
  // The declared length includes the newline; iterate until the digit count settles.
  std::string line;
  for (std::size_t declared = 0;;) {
    h["header_bytes"] = declared;
    line = h.dump() + "\n";
    if (line.size() == declared) break;
    declared = line.size();
  }
  std::vector<unsigned char> out(line.begin(), line.end());
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

Checkpoint decode_checkpoint(std::span<const unsigned char> bytes) {
  const auto nl = std::find(bytes.begin(), bytes.end(), static_cast<unsigned char>('\n'));
  require(nl != bytes.end(), ErrorCode::MalformedHeader, "checkpoint: no header line");
  const std::size_t header_len = static_cast<std::size_t>(nl - bytes.begin()) + 1;
  json h;
  try {
    h = json::parse(bytes.begin(), nl);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedHeader, std::string("checkpoint header is not valid JSON: ") + e.what());
  }
  Checkpoint cp;
  CheckpointHeader& hd = cp.header;
  try {
    hd.version = h.at("schema_version").get<int>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::MalformedHeader, "checkpoint header lacks schema_version");
  }
  if (hd.version != kCheckpointVersion) {
    throw Error(ErrorCode::VersionMismatch, "checkpoint schema version " + std::to_string(hd.version) +
                                                " is not supported (expected " +
                                                std::to_string(kCheckpointVersion) + ")");
  }
  try {
    hd.dim = h.at("dim").get<int>();
    hd.points_per_axis = h.at("points_per_axis").get<int>();
    hd.period = h.at("period").get<double>();
    hd.t = h.at("t").get<double>();
    hd.params = params_from(h.at("params"));
    for (const auto& f : h.at("fields")) hd.fields.push_back(f.at("name").get<std::string>());
    hd.header_bytes = h.at("header_bytes").get<std::uint64_t>();
    hd.body_bytes = h.at("body_bytes").get<std::uint64_t>();
    hd.checksum = h.at("checksum").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedHeader, std::string("checkpoint header: ") + e.what());
  }
  require(hd.header_bytes == header_len, ErrorCode::MalformedHeader,
          "checkpoint header length does not match its declaration");
  require(hd.fields == std::vector<std::string>{"rho", "u", "B"}, ErrorCode::MalformedHeader,
          "checkpoint field order must be rho, u, B");
  require(hd.dim >= 1 && hd.dim <= 3 && hd.points_per_axis >= 4 && hd.period > 0.0, ErrorCode::MalformedHeader,
          "checkpoint grid description is invalid");

  const Grid g = make_grid(hd.dim, hd.points_per_axis, hd.period);
  const std::uint64_t expected = 8ULL * (1 + 2 * hd.dim) * g.num_points();
  require(hd.body_bytes == expected, ErrorCode::MalformedHeader, "checkpoint body length declaration is inconsistent");
  const std::size_t available = bytes.size() - header_len;
  require(available >= expected, ErrorCode::TruncatedBody,
          "checkpoint body holds " + std::to_string(available) + " bytes, expected " + std::to_string(expected));
  require(available == expected, ErrorCode::TruncatedBody, "checkpoint has trailing bytes after the body");
  const auto body = bytes.subspan(header_len);
  require(fnv1a64(body) == hd.checksum, ErrorCode::ChecksumMismatch, "checkpoint body checksum mismatch");

  cp.state.t = hd.t;
  cp.state.rho = RealField(g, 1);
  cp.state.u = RealField(g, hd.dim);
  cp.state.B = RealField(g, hd.dim);
  std::size_t pos = 0;
  for (RealField* f : {&cp.state.rho, &cp.state.u, &cp.state.B}) {
    for (double& v : f->values()) {
      v = get_le(body.data() + pos);
      pos += 8;
    }
  }
  return cp;
}

void write_checkpoint(const std::filesystem::path& path, const State& s, const PhysParams& params) {
  const auto bytes = encode_checkpoint(s, params);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  require(static_cast<bool>(out), ErrorCode::IoError, "write failed for " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot open checkpoint " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace mhd
