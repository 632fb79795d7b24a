#include "dpk/io.hpp"

#include <fstream>
#include <sstream>

namespace dpk::io {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::Parse, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

Index index_from_json(const Json& j) {
  if (!j.is_number_integer()) parse_error("expected an integer");
  return j.get<Index>();
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

Json to_json(const RealVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const EopOperator& t) {
  const EopOperator n = normalize(t);
  Json j;
  j["m"] = n.head_size();
  j["p"] = n.period();
  j["head"] = to_json(n.head());
  j["tail"] = to_json(n.tail_block());
  return j;
}

Json to_json(const Diagonal& d) {
  const Diagonal n = normalize(d);
  Json j;
  j["head"] = to_json(n.head_entries());
  j["tail"] = to_json(n.tail_pattern());
  return j;
}

Json to_json(const PermutationSpec& s) {
  Json j;
  j["head"] = s.head_perm();
  j["tail"] = s.tail_residue_perm();
  return j;
}

Json to_json(const AutomorphismWord& w) {
  Json j;
  j["w"] = to_json(w.w);
  j["x"] = to_json(w.x);
  j["sigma"] = to_json(w.sigma);
  return j;
}

Json to_json(const PositiveFunctional& f) {
  Json j;
  j["A"] = to_json(f.a);
  j["w"] = to_json(f.w);
  return j;
}

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    parse_error("complex numbers are [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) parse_error("matrix must be an array of rows");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = rows ? static_cast<Index>(j[0].size()) : 0;
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) parse_error("ragged matrix");
    for (Index c = 0; c < cols; ++c) m(i, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) parse_error("vector must be an array");
  Vector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = complex_from_json(j[static_cast<std::size_t>(i)]);
  return v;
}

RealVector real_vector_from_json(const Json& j) {
  if (!j.is_array()) parse_error("vector must be an array");
  RealVector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) {
    if (!j[static_cast<std::size_t>(i)].is_number()) parse_error("expected a real number");
    v(i) = j[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

EopOperator operator_from_json(const Json& j) {
  const Index m = index_from_json(field(j, "m"));
  const Index p = index_from_json(field(j, "p"));
  Matrix head = matrix_from_json(field(j, "head"));
  Matrix tail = matrix_from_json(field(j, "tail"));
  if (head.rows() != m || tail.rows() != p) parse_error("declared sizes do not match the blocks");
  return EopOperator::make(std::move(head), std::move(tail));
}

Diagonal diagonal_from_json(const Json& j) {
  return Diagonal::make(vector_from_json(field(j, "head")), vector_from_json(field(j, "tail")));
}

PermutationSpec permutation_from_json(const Json& j) {
  std::vector<Index> head, tail;
  for (const Json& x : field(j, "head")) head.push_back(index_from_json(x));
  for (const Json& x : field(j, "tail")) tail.push_back(index_from_json(x));
  return PermutationSpec::make(std::move(head), std::move(tail));
}

PositiveFunctional functional_from_json(const Json& j) {
  return PositiveFunctional::make(matrix_from_json(field(j, "A")), real_vector_from_json(field(j, "w")));
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

}  // namespace dpk::io
