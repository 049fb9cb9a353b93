#pragma once

#include <lck/hopf.hpp>

#include <json.hpp>

#include <string>

namespace lck {

/// Malformed JSON input; the message names the offending field.
class ParseError : public Error {
  public:
    using Error::Error;
};

/// [re, im], or a bare number for a real value.
Complex complex_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json complex_to_json(Complex c);

/// {op, args?, value?, index?, weights?}. op is one of const, var, conj_var,
/// add, sub, mul, div, pow, exp, log, implicit_t. For pow the integer exponent
/// is "value"; implicit_t takes 2n args (w then wbar) or none (coordinates).
nlohmann::json to_json(const Expression& e);
Expression expression_from_json(const nlohmann::json& j, const std::string& where = "expression");

/// {dim, degree, terms: [{index: [basis ids], coeff: expression}]}.
nlohmann::json to_json(const ExteriorForm& a);
ExteriorForm form_from_json(const nlohmann::json& j, const std::string& where = "form");

/// {dim, components: [[{monomial: [...], coeff: [re, im]}]]}.
nlohmann::json to_json(const PolyAutomorphism& g);
PolyAutomorphism map_from_json(const nlohmann::json& j, const std::string& where = "map");

/// Rows of [re, im] pairs.
nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j, const std::string& where = "matrix");

/// A map object or a bare matrix (read as a linear map).
PolyAutomorphism map_or_matrix_from_json(const nlohmann::json& j, const std::string& where);

///
/// Custom catalog entry:
///   {name?, dim, forms: {key: form}, invariant_forms?, potential?,
///    group: {finite_part?: [matrix], generator: map or matrix}, tolerance?}
///
CatalogEntry entry_from_json(const nlohmann::json& j);

/// Throws ParseError naming the file.
nlohmann::json read_json_file(const std::string& path);

} // namespace lck
