#include "regop/io.hpp"

#include <fstream>
#include <sstream>

namespace regop {

namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) throw ParseError(std::string("expected an object holding '") + name + "'");
  const auto it = j.find(name);
  if (it == j.end()) throw ParseError(std::string("missing field '") + name + "'");
  return *it;
}

Eigen::Index positive_int(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
    throw ParseError(std::string("field '") + name + "' must be a positive integer");
  }
  return static_cast<Eigen::Index>(v.get<std::int64_t>());
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError("field '" + where + "' must be a number");
  return j.get<double>();
}

Complex complex_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ParseError("field '" + where + "' must be [re, im]");
  return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

const Json& array_field(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_array()) throw ParseError(std::string("field '") + name + "' must be an array");
  return v;
}

}  // namespace

Json matrix_to_json(const Matrix& a) {
  Json entries = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) entries.push_back(complex_to_json(a(i, j)));
  Json out;
  out["rows"] = a.rows();
  out["cols"] = a.cols();
  out["entries"] = std::move(entries);
  return out;
}

Matrix matrix_from_json(const Json& j) {
  const Eigen::Index rows = positive_int(j, "rows");
  const Eigen::Index cols = positive_int(j, "cols");
  const Json& entries = array_field(j, "entries");
  if (static_cast<Eigen::Index>(entries.size()) != rows * cols) {
    throw StructuralError("entries has " + std::to_string(entries.size()) + " values but rows * cols = " +
                          std::to_string(rows * cols));
  }
  Matrix a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c)
      a(i, c) = complex_from_json(entries[static_cast<std::size_t>(i * cols + c)],
                                  "entries[" + std::to_string(i * cols + c) + "]");
  return a;
}

Json real_matrix_to_json(const RealMatrix& a) { return matrix_to_json(a.cast<Complex>()); }

RealMatrix real_matrix_from_json(const Json& j, const char* name) {
  const Matrix a = matrix_from_json(j);
  if (a.imag().cwiseAbs().maxCoeff() != 0.0) throw ParseError(std::string("field '") + name + "' must be real");
  return a.real();
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (const Complex& z : v) out.push_back(complex_to_json(z));
  return out;
}

Vector vector_from_json(const Json& j, const char* name) {
  if (!j.is_array()) throw ParseError(std::string("field '") + name + "' must be an array of [re, im]");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], std::string(name) + "[" + std::to_string(i) + "]");
  return v;
}

Json real_vector_to_json(const RealVector& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(x);
  return out;
}

Json exponent_to_json(ExponentSpec p) {
  if (p.is_infinity()) return "inf";
  return p.p();
}

ExponentSpec exponent_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return ExponentSpec::infinity();
    throw ParseError("field 'p' must be a number or \"inf\"");
  }
  return ExponentSpec::from_p(number(j, "p"));
}

Json problem_to_json(const ExtensionProblem& prob) {
  Json basis = Json::array(), images = Json::array();
  for (Eigen::Index c = 0; c < prob.dimension(); ++c) {
    basis.push_back(vector_to_json(prob.basis.col(c)));
    images.push_back(vector_to_json(prob.images.col(c)));
  }
  Json out;
  out["p"] = exponent_to_json(prob.p);
  out["ambient_n"] = prob.ambient_n();
  out["target_m"] = prob.target_m();
  out["basis"] = std::move(basis);
  out["images"] = std::move(images);
  return out;
}

ExtensionProblem problem_from_json(const Json& j) {
  ExtensionProblem prob;
  prob.p = exponent_from_json(field(j, "p"));
  const Eigen::Index n = positive_int(j, "ambient_n");
  const Eigen::Index m = positive_int(j, "target_m");
  const Json& basis = array_field(j, "basis");
  const Json& images = array_field(j, "images");
  if (basis.size() != images.size()) {
    throw StructuralError("basis has " + std::to_string(basis.size()) + " vectors but images has " +
                          std::to_string(images.size()));
  }
  if (basis.empty()) throw StructuralError("basis is empty");
  const auto k = static_cast<Eigen::Index>(basis.size());
  prob.basis.resize(n, k);
  prob.images.resize(m, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const Vector b = vector_from_json(basis[static_cast<std::size_t>(c)], "basis");
    const Vector t = vector_from_json(images[static_cast<std::size_t>(c)], "images");
    if (b.size() != n) throw StructuralError("basis[" + std::to_string(c) + "] does not have length ambient_n");
    if (t.size() != m) throw StructuralError("images[" + std::to_string(c) + "] does not have length target_m");
    prob.basis.col(c) = b;
    prob.images.col(c) = t;
  }
  return prob;
}

Json factorization_to_json(const Factorization& f) {
  Json out;
  out["theta"] = f.theta;
  out["f0"] = real_matrix_to_json(f.f0);
  out["f1"] = real_matrix_to_json(f.f1);
  out["bound"] = f.bound;
  return out;
}

Factorization factorization_from_json(const Json& j) {
  Factorization f;
  f.theta = number(field(j, "theta"), "theta");
  f.f0 = real_matrix_from_json(field(j, "f0"), "f0");
  f.f1 = real_matrix_from_json(field(j, "f1"), "f1");
  f.bound = number(field(j, "bound"), "bound");
  return f;
}

Json dual_witness_to_json(const DualWitness& w) {
  Json out;
  out["theta"] = w.theta;
  out["b"] = matrix_to_json(w.b);
  out["b0"] = real_matrix_to_json(w.b0);
  out["b1"] = real_matrix_to_json(w.b1);
  out["pairing"] = w.pairing;
  return out;
}

DualWitness dual_witness_from_json(const Json& j) {
  DualWitness w;
  w.theta = number(field(j, "theta"), "theta");
  w.b = matrix_from_json(field(j, "b"));
  w.b0 = real_matrix_from_json(field(j, "b0"), "b0");
  w.b1 = real_matrix_from_json(field(j, "b1"), "b1");
  w.pairing = number(field(j, "pairing"), "pairing");
  return w;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

Matrix read_matrix(const std::filesystem::path& path) { return matrix_from_json(parse_json(read_text(path))); }

void write_matrix(const std::filesystem::path& path, const Matrix& a) {
  write_text(path, matrix_to_json(a).dump() + "\n");
}

ExtensionProblem read_problem(const std::filesystem::path& path) {
  return problem_from_json(parse_json(read_text(path)));
}

void write_problem(const std::filesystem::path& path, const ExtensionProblem& prob) {
  write_text(path, problem_to_json(prob).dump() + "\n");
}

}  // namespace regop
