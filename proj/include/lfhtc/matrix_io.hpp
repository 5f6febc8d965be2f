#pragma once

#include <string>

#include <json.hpp>

#include "lfhtc/error.hpp"
#include "lfhtc/model.hpp"
#include "lfhtc/rational.hpp"

namespace lfhtc {

// Matrix files: JSON array of rows; entries are integers or "p/q" strings.
inline RMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("matrix must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j[0].size() : 0;
  RMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || row.size() != cols)
      throw ParseError("matrix row " + std::to_string(i) + " is not an array of length " + std::to_string(cols));
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& x = row[c];
      const std::string where = "matrix entry [" + std::to_string(i) + "][" + std::to_string(c) + "]";
      if (x.is_number_integer())
        m(i, c) = Rational(std::to_string(x.get<long long>()));
      else if (x.is_string())
        try {
          m(i, c) = parse_rational(x.get<std::string>());
        } catch (const ParseError& e) {
          throw ParseError(where + ": " + e.what());
        }
      else
        throw ParseError(where + " must be an integer or a \"p/q\" string");
    }
  }
  return m;
}

inline RMatrix parse_matrix(const std::string& text) {
  try {
    return matrix_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

inline nlohmann::json to_json(const RMatrix& m) {
  nlohmann::json j = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(format_rational(m(i, c)));
    j.push_back(std::move(row));
  }
  return j;
}

inline nlohmann::json to_json(const ParameterSet& p) {
  return {{"Lambda", to_json(p.lambda)}, {"Gamma", to_json(p.gamma)}, {"Omega_diag", to_json(p.omega_diag)}};
}

inline ParameterSet params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("parameter file must hold a JSON object");
  for (const char* key : {"Lambda", "Gamma", "Omega_diag"})
    if (!j.contains(key)) throw ParseError(std::string("parameter file lacks '") + key + "'");
  ParameterSet p{matrix_from_json(j.at("Lambda")), matrix_from_json(j.at("Gamma")),
                 matrix_from_json(j.at("Omega_diag"))};
  // No latent nodes: [] carries no column count.
  if (p.gamma.rows() == 0) p.gamma = RMatrix(0, p.lambda.cols());
  const std::size_t d = p.lambda.rows();
  if (!p.lambda.is_square() || p.omega_diag.rows() != d || !p.omega_diag.is_square() || p.gamma.cols() != d)
    throw ParseError("parameter matrices have inconsistent dimensions");
  return p;
}

}  // namespace lfhtc
