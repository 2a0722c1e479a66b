#pragma once

// Parameter files, run manifests and output serialization for the batch tool.

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qesboson/models.hpp"
#include "qesboson/spectrum.hpp"

namespace qesboson {

inline constexpr std::string_view kVersion = "0.1.0";

namespace io {

using nlohmann::json;

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
}

inline std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::InvalidArgument, "SHA-256 digest failed");
  std::ostringstream ss;
  for (unsigned int i = 0; i < len; ++i) ss << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return ss.str();
}

/// A complex number written as 1.5, {"re": 1, "im": 2} or [1, 2].
inline Complex parse_complex(const json& j, const std::string& key) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_object() && j.contains("re") && j["re"].is_number()) {
    for (const auto& [k, v] : j.items())
      if (k != "re" && k != "im") throw Error(ErrorKind::ParseError, key + ": unexpected field '" + k + "'");
    double im = 0.0;
    if (j.contains("im")) {
      if (!j["im"].is_number()) throw Error(ErrorKind::ParseError, key + ".im must be a number");
      im = j["im"].get<double>();
    }
    return {j["re"].get<double>(), im};
  }
  throw Error(ErrorKind::ParseError, key + " must be a number, {re, im} or [re, im]");
}

namespace detail {

class Reader {
 public:
  Reader(const json& j, std::string model) : j_(j), model_(std::move(model)) {
    if (!j.is_object()) throw Error(ErrorKind::ParseError, model_ + " parameters must be a JSON object");
  }

  double number(const std::string& key, double fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) return fallback;
    if (!j_[key].is_number()) throw Error(ErrorKind::ParseError, model_ + "." + key + " must be a number");
    const double x = j_[key].get<double>();
    if (!std::isfinite(x)) throw Error(ErrorKind::ParseError, model_ + "." + key + " must be finite");
    return x;
  }

  int integer(const std::string& key, int fallback) {
    seen_.insert(key);
    if (!j_.contains(key)) return fallback;
    if (!j_[key].is_number_integer()) throw Error(ErrorKind::ParseError, model_ + "." + key + " must be an integer");
    return j_[key].get<int>();
  }

  std::optional<Complex> complex(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) return std::nullopt;
    return parse_complex(j_[key], model_ + "." + key);
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k) && k != "model") throw Error(ErrorKind::ParseError, model_ + ": unknown parameter '" + k + "'");
  }

 private:
  const json& j_;
  std::string model_;
  std::set<std::string> seen_;
};

}  // namespace detail

/// kappaBar defaults to conj(kappa).
inline KKParams parse_kk(const json& j) {
  detail::Reader r(j, "kk");
  KKParams p;
  p.s = r.integer("s", p.s);
  p.r = r.integer("r", p.r);
  p.omega1 = r.number("omega1", p.omega1);
  p.omega2 = r.number("omega2", p.omega2);
  p.kappa = r.complex("kappa").value_or(p.kappa);
  p.kappa_bar = r.complex("kappaBar").value_or(std::conj(p.kappa));
  r.finish();
  validate(p);
  return p;
}

struct ThermalInput {
  ThermalParams params;
  int two_j = 0;
};

inline ThermalInput parse_thermal(const json& j) {
  detail::Reader r(j, "thermal");
  ThermalInput in;
  in.params.omega = r.number("omega", in.params.omega);
  in.params.gamma = r.number("gamma", in.params.gamma);
  in.two_j = r.integer("twoJ", in.two_j);
  r.finish();
  return in;
}

inline AnharmonicParams parse_anharmonic(const json& j) {
  detail::Reader r(j, "anharmonic");
  AnharmonicParams p;
  p.omega1 = r.number("omega1", p.omega1);
  p.omega2 = r.number("omega2", p.omega2);
  p.alpha1 = r.complex("alpha1").value_or(p.alpha1);
  p.alpha2 = r.complex("alpha2").value_or(p.alpha2);
  p.k = r.integer("k", p.k);
  r.finish();
  if (p.k < 0) throw Error(ErrorKind::ParseError, "anharmonic.k must be non-negative");
  return p;
}

inline SexticParams parse_sextic(const json& j) {
  detail::Reader r(j, "sextic");
  SexticParams p;
  p.omega1 = r.number("omega1", p.omega1);
  p.alpha1 = r.number("alpha1", p.alpha1);
  p.alpha_plus = r.number("alphaPlus", p.alpha_plus);
  p.alpha_minus = r.number("alphaMinus", p.alpha_minus);
  p.k = r.integer("k", p.k);
  r.finish();
  if (p.k < 0) throw Error(ErrorKind::ParseError, "sextic.k must be non-negative");
  return p;
}

inline json to_json(const KKParams& p) {
  return {{"s", p.s}, {"r", p.r}, {"omega1", p.omega1}, {"omega2", p.omega2}, {"kappa", complex_json(p.kappa)}, {"kappaBar", complex_json(p.kappa_bar)}};
}

// ---------------------------------------------------------------------------
// Manifest

struct RunManifest {
  std::string command;
  json params = json::object();
  std::string version{kVersion};
  std::string timestamp;
  std::vector<std::pair<std::string, std::string>> input_hashes;  ///< (path, sha256)
};

/// UTC ISO-8601; SOURCE_DATE_EPOCH wins over the clock so outputs can be reproduced.
inline std::string timestamp_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end && *end == '\0' && end != env) t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline RunManifest make_manifest(std::string command, json params, const std::vector<std::string>& inputs) {
  RunManifest m;
  m.command = std::move(command);
  m.params = std::move(params);
  m.timestamp = timestamp_now();
  for (const auto& path : inputs) m.input_hashes.emplace_back(path, sha256_hex(read_file_bytes(path)));
  return m;
}

inline json to_json(const RunManifest& m) {
  json hashes = json::array();
  for (const auto& [path, h] : m.input_hashes) hashes.push_back({{"path", path}, {"sha256", h}});
  return {{"command", m.command}, {"params", m.params}, {"version", m.version}, {"timestamp", m.timestamp}, {"inputs", hashes}};
}

/// JSON documents are written with shortest round-trip float formatting; CSV
/// uses %.17g.
inline void write_json(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << doc.dump(2) << '\n';
}

inline std::string manifest_comment(const RunManifest& m) { return "# manifest: " + to_json(m).dump() + "\n"; }

inline std::string eigenvalue_csv(const SpectrumResult& s, const RunManifest& m) {
  std::string out = manifest_comment(m) + "index,re,im\n";
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
    out += std::to_string(i) + "," + qesboson::detail::format_double(s.eigenvalues[i].real()) + "," +
           qesboson::detail::format_double(s.eigenvalues[i].imag()) + "\n";
  return out;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << text;
}

}  // namespace io
}  // namespace qesboson
