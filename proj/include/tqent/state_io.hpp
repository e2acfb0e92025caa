#pragma once

// JSON state files.
//   pure:  {"dims": [d1, ...], "amplitudes": [[re, im], ...]}
//   mixed: {"dims": [d1, ...], "matrix": [[[re, im], ...], ...]}
// Norm or trace deviations up to 1e-6 are renormalized on load; larger ones
// are rejected.

#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include "json.hpp"
#include "tqent/format.hpp"
#include "tqent/qstate.hpp"

namespace tqent {

using AnyState = std::variant<PureState, DensityMatrix>;

inline constexpr double kFileNormTolerance = 1e-6;

namespace detail {

inline cplx parse_complex(const nlohmann::json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw FormatError(where + ": expected a complex number as [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline nlohmann::json complex_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline Dims parse_dims(const nlohmann::json& doc, const std::string& source) {
  if (!doc.contains("dims") || !doc["dims"].is_array() || doc["dims"].empty()) {
    throw FormatError(source + ": \"dims\" must be a nonempty array of integers");
  }
  Dims dims;
  for (const auto& d : doc["dims"]) {
    if (!d.is_number_integer() || d.get<long long>() < 2) {
      throw FormatError(source + ": every entry of \"dims\" must be an integer >= 2");
    }
    dims.push_back(d.get<std::size_t>());
  }
  return dims;
}

}  // namespace detail

inline AnyState parse_state(const std::string& text, const std::string& source = "<input>") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(source + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw FormatError(source + ": top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "dims" && key != "amplitudes" && key != "matrix") throw FormatError(source + ": unknown key \"" + key + "\"");
  }
  const Dims dims = detail::parse_dims(doc, source);
  const std::size_t total = total_dimension(dims);
  const bool has_amps = doc.contains("amplitudes");
  const bool has_matrix = doc.contains("matrix");
  if (has_amps == has_matrix) throw FormatError(source + ": exactly one of \"amplitudes\" or \"matrix\" is required");

  if (has_amps) {
    const auto& arr = doc["amplitudes"];
    if (!arr.is_array()) throw FormatError(source + ": \"amplitudes\" must be an array");
    if (arr.size() != total) {
      throw FormatError(source + ": dims " + detail::dims_string(dims) + " require " + std::to_string(total) +
                        " amplitudes, got " + std::to_string(arr.size()));
    }
    std::vector<cplx> amps;
    for (std::size_t i = 0; i < arr.size(); ++i) amps.push_back(detail::parse_complex(arr[i], source + ": amplitudes[" + std::to_string(i) + "]"));
    const double norm = std::sqrt(PureState::norm_squared(amps));
    if (std::abs(norm - 1.0) > kFileNormTolerance) {
      throw FormatError(source + ": state norm is " + format_number(norm, 10) + ", expected 1 within 1e-6");
    }
    return PureState::normalized(dims, std::move(amps));
  }

  const auto& rows = doc["matrix"];
  if (!rows.is_array() || rows.size() != total) {
    throw FormatError(source + ": dims " + detail::dims_string(dims) + " require a " + std::to_string(total) + "x" +
                      std::to_string(total) + " \"matrix\"");
  }
  CMatrix m(total, total);
  for (std::size_t i = 0; i < total; ++i) {
    if (!rows[i].is_array() || rows[i].size() != total) {
      throw FormatError(source + ": matrix row " + std::to_string(i) + " must have " + std::to_string(total) + " entries");
    }
    for (std::size_t j = 0; j < total; ++j) {
      m(i, j) = detail::parse_complex(rows[i][j], source + ": matrix[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
  }
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > kFileNormTolerance) {
    throw FormatError(source + ": trace is " + format_number(tr, 10) + ", expected 1 within 1e-6");
  }
  m *= cplx(1.0 / tr);
  try {
    return DensityMatrix(dims, std::move(m));
  } catch (const std::exception& e) {
    throw FormatError(source + ": " + e.what());
  }
}

inline AnyState load_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open state file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_state(buf.str(), path);
}

inline std::string dump_state(const PureState& psi) {
  nlohmann::json doc;
  doc["dims"] = psi.dims();
  doc["amplitudes"] = nlohmann::json::array();
  for (auto a : psi.amplitudes()) doc["amplitudes"].push_back(detail::complex_json(a));
  return doc.dump() + "\n";
}

inline std::string dump_state(const DensityMatrix& rho) {
  nlohmann::json doc;
  doc["dims"] = rho.dims();
  doc["matrix"] = nlohmann::json::array();
  for (std::size_t i = 0; i < rho.dimension(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < rho.dimension(); ++j) row.push_back(detail::complex_json(rho.matrix()(i, j)));
    doc["matrix"].push_back(std::move(row));
  }
  return doc.dump() + "\n";
}

inline std::string dump_state(const AnyState& s) {
  return std::visit([](const auto& v) { return dump_state(v); }, s);
}

inline void save_state(const std::string& path, const AnyState& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write state file '" + path + "'");
  out << dump_state(s);
  if (!out) throw FormatError("failed writing state file '" + path + "'");
}

}  // namespace tqent
