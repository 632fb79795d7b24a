#pragma once

// JSON encoding of model objects. Complex numbers are [re, im]; matrices are
// row-major nested arrays. An operator is {"m", "p", "head", "tail"} and is
// written in normalized form.

#include <string>

#include <json.hpp>

#include "dpk/autos.hpp"
#include "dpk/eop.hpp"
#include "dpk/quotient.hpp"

namespace dpk::io {

using Json = nlohmann::ordered_json;

Json to_json(Complex z);
Json to_json(const Matrix& m);
Json to_json(const Vector& v);
Json to_json(const RealVector& v);
Json to_json(const EopOperator& t);
Json to_json(const Diagonal& d);
Json to_json(const PermutationSpec& s);
Json to_json(const AutomorphismWord& w);
Json to_json(const PositiveFunctional& f);

Complex complex_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);
Vector vector_from_json(const Json& j);
RealVector real_vector_from_json(const Json& j);
/// Validates shapes and the model invariants (Parse / Alignment errors).
EopOperator operator_from_json(const Json& j);
Diagonal diagonal_from_json(const Json& j);
PermutationSpec permutation_from_json(const Json& j);
PositiveFunctional functional_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace dpk::io
