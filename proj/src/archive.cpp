#include "movingflow/archive.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "movingflow/errors.hpp"

namespace mf {

namespace {

constexpr char kMagic[8] = {'M', 'F', 'L', 'O', 'W', 'B', 'I', 'N'};
constexpr std::uint32_t kVersion = 1;

template <class U>
void put_le(std::vector<unsigned char>& out, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::vector<unsigned char>& out, double x) { put_le(out, std::bit_cast<std::uint64_t>(x)); }

class ByteReader {
 public:
  explicit ByteReader(const std::vector<unsigned char>& b) : b_(b) {}
  template <class U>
  U le() {
    if (pos_ + sizeof(U) > b_.size()) throw ConfigError("fields.bin: truncated payload");
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(b_[pos_ + i]) << (8 * i);
    pos_ += sizeof(U);
    return v;
  }
  double f64() { return std::bit_cast<double>(le<std::uint64_t>()); }

 private:
  const std::vector<unsigned char>& b_;
  std::size_t pos_ = 0;
};

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("fields.csv: bad number '" + std::string(s) + "'");
  return v;
}

Mesh mesh_from_nodes(const std::vector<double>& xs) {
  Mesh m;
  m.nodes = Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  m.h = xs.size() > 1 ? (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1) : 0.0;
  return m;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path.string() + ": cannot open for writing");
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fields_csv(const SpaceTimeField& field) {
  std::string out = "slice,step,time,node_x,value\n";
  for (std::size_t j = 0; j < field.slices.size(); ++j) {
    const Slice& s = field.slices[j];
    for (std::size_t k = 0; k < s.steps.size(); ++k) {
      const Field& f = s.steps[k];
      const std::string prefix = std::to_string(j) + "," + std::to_string(k) + "," + format_double(f.time) + ",";
      for (Eigen::Index i = 0; i < f.values.size(); ++i)
        out += prefix + format_double(s.mesh.nodes[i]) + "," + format_double(f.values[i]) + "\n";
    }
  }
  return out;
}

SpaceTimeField parse_fields_csv(const std::string& text) {
  struct Row {
    long slice, step;
    double t, x, u;
  };
  std::vector<Row> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (line != "slice,step,time,node_x,value") throw ConfigError("fields.csv: unexpected header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> cols;
    std::string_view sv(line);
    for (std::size_t pos = 0;;) {
      const std::size_t comma = sv.find(',', pos);
      cols.push_back(sv.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (cols.size() != 5) throw ConfigError("fields.csv: expected 5 columns");
    rows.push_back({std::lround(parse_double(cols[0])), std::lround(parse_double(cols[1])), parse_double(cols[2]),
                    parse_double(cols[3]), parse_double(cols[4])});
  }
  SpaceTimeField field;
  std::size_t i = 0;
  while (i < rows.size()) {
    const long j = rows[i].slice;
    std::vector<double> xs;
    std::vector<std::pair<double, std::vector<double>>> levels;
    while (i < rows.size() && rows[i].slice == j) {
      const long k = rows[i].step;
      std::vector<double> us;
      const double t = rows[i].t;
      while (i < rows.size() && rows[i].slice == j && rows[i].step == k) {
        if (levels.empty()) xs.push_back(rows[i].x);
        us.push_back(rows[i].u);
        ++i;
      }
      levels.emplace_back(t, std::move(us));
    }
    Slice s;
    s.mesh = mesh_from_nodes(xs);
    for (auto& [t, us] : levels) {
      if (us.size() != xs.size()) throw ConfigError("fields.csv: ragged slice");
      s.steps.push_back(Field{s.mesh, Eigen::Map<const Eigen::VectorXd>(us.data(), us.size()), t});
    }
    s.t_begin = s.steps.front().time;
    s.t_end = s.steps.back().time;
    field.slices.push_back(std::move(s));
  }
  return field;
}

std::vector<unsigned char> fields_bin(const SpaceTimeField& field) {
  std::vector<unsigned char> out(kMagic, kMagic + 8);
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint32_t>(out, 0);
  put_le<std::uint64_t>(out, field.slices.size());
  for (const Slice& s : field.slices) {
    put_f64(out, s.t_begin);
    put_f64(out, s.t_end);
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(s.mesh.nodes.size()));
    put_le<std::uint64_t>(out, s.steps.size());
    for (Eigen::Index i = 0; i < s.mesh.nodes.size(); ++i) put_f64(out, s.mesh.nodes[i]);
    for (const Field& f : s.steps) {
      put_f64(out, f.time);
      for (Eigen::Index i = 0; i < f.values.size(); ++i) put_f64(out, f.values[i]);
    }
  }
  return out;
}

SpaceTimeField parse_fields_bin(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 8) != 0) throw ConfigError("fields.bin: bad magic");
  ByteReader r(bytes);
  for (int i = 0; i < 8; ++i) r.le<std::uint8_t>();
  if (r.le<std::uint32_t>() != kVersion) throw ConfigError("fields.bin: unsupported version");
  r.le<std::uint32_t>();
  SpaceTimeField field;
  const auto slices = r.le<std::uint64_t>();
  for (std::uint64_t j = 0; j < slices; ++j) {
    Slice s;
    s.t_begin = r.f64();
    s.t_end = r.f64();
    const auto nodes = r.le<std::uint64_t>(), steps = r.le<std::uint64_t>();
    std::vector<double> xs(nodes);
    for (auto& x : xs) x = r.f64();
    s.mesh = mesh_from_nodes(xs);
    for (std::uint64_t k = 0; k < steps; ++k) {
      Field f{s.mesh, Eigen::VectorXd(static_cast<Eigen::Index>(nodes)), r.f64()};
      for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values[i] = r.f64();
      s.steps.push_back(std::move(f));
    }
    field.slices.push_back(std::move(s));
  }
  return field;
}

nlohmann::json report_to_json(const EstimateReport& rep) {
  nlohmann::json j;
  j["name"] = rep.name;
  j["lhs"] = rep.lhs;
  j["rhs"] = rep.rhs;
  j["constants"] = rep.constants;
  j["pass"] = rep.pass;
  j["context"] = rep.context;
  return j;
}

EstimateReport report_from_json(const nlohmann::json& j) {
  auto num = [](const nlohmann::json& v) {
    return v.is_number() ? v.get<double>() : std::numeric_limits<double>::quiet_NaN();
  };
  EstimateReport rep;
  rep.name = j.at("name").get<std::string>();
  rep.lhs = num(j.at("lhs"));
  rep.rhs = num(j.at("rhs"));
  for (auto it = j.at("constants").begin(); it != j.at("constants").end(); ++it) rep.constants[it.key()] = num(*it);
  rep.pass = j.at("pass").get<bool>();
  if (j.contains("context")) rep.context = j.at("context").get<std::map<std::string, std::string>>();
  return rep;
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace mf
