#pragma once
// On-disk result cache for plane-model reports.
//
// A model of X_0(N) can take minutes to compute, so reports are persisted
// as JSON files, one per (coordinate triple, format version).  Entries are
// content-addressed: the file name is a 64-bit FNV-1a hash of the level,
// the canonical eta-quotient expressions of the three coordinate forms,
// and the format version, so any two ways of requesting the same triple
// (e.g. a named family and its explicit expression form) share one entry.
//
// Loads never trust a file blindly.  The stored key must match the request,
// cheap profile quantities (index, minimum divisor sum, pole-degree
// certificate) are recomputed and compared, and the closure identity
//   map_degree * curve_degree + min_divisor_sum = index
// must hold, along with structural polynomial checks (homogeneity, degree,
// primitive-positive normalization).  Any mismatch, parse error, or missing
// file makes the load return nothing and the caller recomputes; corruption
// is never an error.  What a load does NOT redo is the modular kernel
// verification of the relation itself - caching exists to avoid exactly
// that cost.
//
// Writes create the cache directory on demand, write a temporary file
// beside the final name, and rename it into place, so a crash can strand a
// *.tmp file but never a half-written entry under a valid name.  True I/O
// failures (unwritable directory, failed rename) throw CacheError.

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include <json.hpp>

#include "etaq/planemodel.hpp"

namespace etaq {

inline constexpr std::string_view kCacheFormatVersion = "etaq-model-1";

struct CacheError : std::runtime_error {
  explicit CacheError(const std::string& msg) : std::runtime_error(msg) {}
};

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// The hashed key material; newline-separated so no field can bleed into
// the next, with the canonical (sorted, zero-free) expression text serving
// as the normalized triple encoding.
inline std::string cache_key_material(const FormTriple& t) {
  std::ostringstream os;
  os << kCacheFormatVersion << '\n'
     << t.level() << '\n'
     << t.f().expression() << '\n'
     << t.g().expression() << '\n'
     << t.h().expression() << '\n';
  return os.str();
}

inline std::string cache_entry_name(const FormTriple& t) {
  static const char* hex = "0123456789abcdef";
  const std::uint64_t h = fnv1a64(cache_key_material(t));
  std::string name = "model-";
  for (int i = 15; i >= 0; --i) name += hex[(h >> (4 * i)) & 0xf];
  return name + ".json";
}

inline std::filesystem::path cache_entry_path(const std::filesystem::path& dir,
                                              const FormTriple& t) {
  return dir / cache_entry_name(t);
}

// ---------------------------------------------------------------------------
// JSON serialization.  Coefficients are decimal strings (they routinely
// exceed 64 bits); everything else is native JSON.

inline nlohmann::json plane_polynomial_to_json(const PlanePolynomial& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const PlaneTerm& t : p.terms)
    terms.push_back({{"exps", {t.a, t.b, t.c}}, {"coeff", t.coeff.str()}});
  return {{"degree", p.degree}, {"terms", std::move(terms)}};
}

inline Int int_from_decimal(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  std::size_t i = (s[0] == '-') ? 1 : 0;
  if (i == s.size()) throw std::invalid_argument("bare sign is not an integer");
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9')
      throw std::invalid_argument("malformed integer literal: " + s);
  return Int(s);
}

inline PlanePolynomial plane_polynomial_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("degree") || !j.contains("terms") ||
      !j["degree"].is_number_integer() || !j["terms"].is_array())
    throw std::invalid_argument("malformed polynomial object");
  PlanePolynomial p;
  p.degree = j["degree"].get<i64>();
  for (const nlohmann::json& tj : j["terms"]) {
    if (!tj.is_object() || !tj.contains("exps") || !tj.contains("coeff") ||
        !tj["exps"].is_array() || tj["exps"].size() != 3 ||
        !tj["coeff"].is_string())
      throw std::invalid_argument("malformed polynomial term");
    for (int k = 0; k < 3; ++k)
      if (!tj["exps"][k].is_number_integer())
        throw std::invalid_argument("malformed term exponents");
    PlaneTerm t;
    t.a = tj["exps"][0].get<i64>();
    t.b = tj["exps"][1].get<i64>();
    t.c = tj["exps"][2].get<i64>();
    t.coeff = int_from_decimal(tj["coeff"].get<std::string>());
    p.terms.push_back(std::move(t));
  }
  return p;
}

inline nlohmann::json model_report_to_json(const ModelReport& r) {
  return {{"level", r.level},
          {"kind", r.kind},
          {"f", r.f_expr},
          {"g", r.g_expr},
          {"h", r.h_expr},
          {"index", r.psi},
          {"minDivisorSum", r.min_divisor_sum},
          {"targetDegree", r.t_degree},
          {"certificate",
           {{"poleGOverF", r.certificate.pole_g_over_f},
            {"poleHOverF", r.certificate.pole_h_over_f},
            {"gcd", r.certificate.gcd},
            {"birational", r.certificate.birational}}},
          {"curve", plane_polynomial_to_json(r.curve)},
          {"curveDegree", r.curve_degree},
          {"mapDegree", r.map_degree},
          {"birational", r.birational},
          {"engine", r.engine},
          {"reconstructionPrimes", r.reconstruction_primes},
          {"verificationPrimes", r.verification_primes}};
}

inline ModelReport model_report_from_json(const nlohmann::json& j) {
  auto need = [&](const char* k) -> const nlohmann::json& {
    if (!j.is_object() || !j.contains(k))
      throw std::invalid_argument(std::string("missing report field: ") + k);
    return j[k];
  };
  auto geti = [&](const char* k) -> i64 {
    const nlohmann::json& v = need(k);
    if (!v.is_number_integer())
      throw std::invalid_argument(std::string("non-integer field: ") + k);
    return v.get<i64>();
  };
  auto gets = [&](const char* k) -> std::string {
    const nlohmann::json& v = need(k);
    if (!v.is_string())
      throw std::invalid_argument(std::string("non-string field: ") + k);
    return v.get<std::string>();
  };
  auto getb = [&](const char* k) -> bool {
    const nlohmann::json& v = need(k);
    if (!v.is_boolean())
      throw std::invalid_argument(std::string("non-boolean field: ") + k);
    return v.get<bool>();
  };
  ModelReport r;
  r.level = geti("level");
  r.kind = gets("kind");
  r.f_expr = gets("f");
  r.g_expr = gets("g");
  r.h_expr = gets("h");
  r.psi = geti("index");
  r.min_divisor_sum = geti("minDivisorSum");
  r.t_degree = geti("targetDegree");
  const nlohmann::json& c = need("certificate");
  if (!c.is_object() || !c.contains("poleGOverF") || !c.contains("poleHOverF") ||
      !c.contains("gcd") || !c.contains("birational") ||
      !c["poleGOverF"].is_number_integer() ||
      !c["poleHOverF"].is_number_integer() || !c["gcd"].is_number_integer() ||
      !c["birational"].is_boolean())
    throw std::invalid_argument("malformed certificate object");
  r.certificate.pole_g_over_f = c["poleGOverF"].get<i64>();
  r.certificate.pole_h_over_f = c["poleHOverF"].get<i64>();
  r.certificate.gcd = c["gcd"].get<i64>();
  r.certificate.birational = c["birational"].get<bool>();
  r.curve = plane_polynomial_from_json(need("curve"));
  r.curve_degree = geti("curveDegree");
  r.map_degree = geti("mapDegree");
  r.birational = getb("birational");
  r.engine = gets("engine");
  r.reconstruction_primes = int(geti("reconstructionPrimes"));
  r.verification_primes = int(geti("verificationPrimes"));
  return r;
}

// ---------------------------------------------------------------------------
// Validation gate for loaded reports.  Returns false on the first failed
// check; everything here is arithmetic on cheap quantities.

inline bool cached_report_consistent(const ModelReport& r, const FormTriple& t) {
  if (r.level != t.level()) return false;
  // r.kind is not compared: a named family and its spelled-out equivalent
  // share an entry by design, and may differ in construction kind
  if (r.f_expr != t.f().expression() || r.g_expr != t.g().expression() ||
      r.h_expr != t.h().expression())
    return false;
  if (r.psi != psi(r.level)) return false;
  if (r.min_divisor_sum != min_divisor_sum(t)) return false;
  if (r.t_degree != r.psi - r.min_divisor_sum) return false;
  const GcdCertificate cert = gcd_birationality_check(t);
  if (r.certificate.pole_g_over_f != cert.pole_g_over_f ||
      r.certificate.pole_h_over_f != cert.pole_h_over_f ||
      r.certificate.gcd != cert.gcd ||
      r.certificate.birational != cert.birational)
    return false;
  // closure identity and degree bookkeeping
  if (r.curve_degree <= 0 || r.map_degree <= 0) return false;
  if (r.map_degree * r.curve_degree != r.t_degree) return false;
  if (r.map_degree * r.curve_degree + r.min_divisor_sum != r.psi) return false;
  if (r.birational != (r.map_degree == 1)) return false;
  if (r.certificate.birational && r.map_degree != 1) return false;
  // polynomial shape: homogeneous of the stated degree, strictly sorted by
  // (a, b) descending, nonzero coefficients, leading coefficient positive
  if (r.curve.degree != r.curve_degree || r.curve.terms.empty()) return false;
  for (std::size_t i = 0; i < r.curve.terms.size(); ++i) {
    const PlaneTerm& term = r.curve.terms[i];
    if (term.a < 0 || term.b < 0 || term.c < 0) return false;
    if (term.a + term.b + term.c != r.curve_degree) return false;
    if (term.coeff == 0) return false;
    if (i > 0) {
      const PlaneTerm& prev = r.curve.terms[i - 1];
      if (std::pair(prev.a, prev.b) <= std::pair(term.a, term.b)) return false;
    }
  }
  if (r.curve.terms.front().coeff < 0) return false;
  return true;
}

// ---------------------------------------------------------------------------

inline void cache_store(const std::filesystem::path& dir, const FormTriple& t,
                        const ModelReport& report) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw CacheError("cannot create cache directory " + dir.string() + ": " +
                     ec.message());

  nlohmann::json report_json = model_report_to_json(report);
  // dump() is deterministic (object keys are stored sorted), so a checksum
  // of the serialized report detects any edit, including coefficient edits
  // the closure identity cannot see
  std::ostringstream sum;
  sum << std::hex << fnv1a64(report_json.dump());
  nlohmann::json j = {{"format", std::string(kCacheFormatVersion)},
                      {"key",
                       {{"level", t.level()},
                        {"f", t.f().expression()},
                        {"g", t.g().expression()},
                        {"h", t.h().expression()}}},
                      {"checksum", sum.str()},
                      {"report", std::move(report_json)}};

  const std::filesystem::path final_path = cache_entry_path(dir, t);
  const std::filesystem::path tmp_path =
      final_path.string() + ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
    if (!out)
      throw CacheError("cannot open cache file for writing: " +
                       tmp_path.string());
    out << j.dump(1) << '\n';
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp_path, ec);
      throw CacheError("write failed for cache file: " + tmp_path.string());
    }
  }
  std::filesystem::rename(tmp_path, final_path, ec);
  if (ec) {
    std::filesystem::remove(tmp_path, ec);
    throw CacheError("cannot move cache file into place: " +
                     final_path.string());
  }
}

inline std::optional<ModelReport> cache_load(const std::filesystem::path& dir,
                                             const FormTriple& t) {
  const std::filesystem::path path = cache_entry_path(dir, t);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  try {
    if (!j.contains("format") || !j["format"].is_string() ||
        j["format"].get<std::string>() != kCacheFormatVersion)
      return std::nullopt;
    if (!j.contains("key") || !j["key"].is_object() ||
        !j.contains("report"))
      return std::nullopt;
    const nlohmann::json& k = j["key"];
    if (!k.contains("level") || !k["level"].is_number_integer() ||
        k["level"].get<i64>() != t.level())
      return std::nullopt;
    for (const char* field : {"f", "g", "h"})
      if (!k.contains(field) || !k[field].is_string()) return std::nullopt;
    if (k["f"].get<std::string>() != t.f().expression() ||
        k["g"].get<std::string>() != t.g().expression() ||
        k["h"].get<std::string>() != t.h().expression())
      return std::nullopt;
    if (!j.contains("checksum") || !j["checksum"].is_string())
      return std::nullopt;
    std::ostringstream sum;
    sum << std::hex << fnv1a64(j["report"].dump());
    if (j["checksum"].get<std::string>() != sum.str()) return std::nullopt;
    ModelReport r = model_report_from_json(j["report"]);
    if (!cached_report_consistent(r, t)) return std::nullopt;
    return r;
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

}  // namespace etaq
