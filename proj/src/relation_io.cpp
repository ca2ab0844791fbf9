#include "bt/relation_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace bt {

std::string to_string(const RelationClass& c) {
  std::string out;
  auto add = [&out](bool flag, const char* name) {
    if (!flag) return;
    if (!out.empty()) out += ',';
    out += name;
  };
  add(c.symmetric, "symmetric");
  add(c.self_adjoint, "self_adjoint");
  add(c.dissipative, "dissipative");
  add(c.accumulative, "accumulative");
  add(c.maximal_dissipative, "maximal_dissipative");
  add(c.maximal_accumulative, "maximal_accumulative");
  return out.empty() ? "none" : out;
}

std::string to_string(PointClass c) {
  switch (c) {
    case PointClass::eigenvalue: return "eigenvalue";
    case PointClass::residual: return "residual";
    case PointClass::resolvent: return "resolvent";
  }
  return "unknown";
}

std::string relation_to_json(const Relation& r) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (Index i = 0; i < r.basis().rows(); ++i) {
    nlohmann::json row_re = nlohmann::json::array(), row_im = nlohmann::json::array();
    for (Index j = 0; j < r.basis().cols(); ++j) {
      row_re.push_back(r.basis()(i, j).real());
      row_im.push_back(r.basis()(i, j).imag());
    }
    re.push_back(row_re);
    im.push_back(row_im);
  }
  nlohmann::json doc{{"g", r.ambient_dim()}, {"basis_real", re}, {"basis_imag", im}};
  return doc.dump(2);
}

namespace {

RealMat read_block(const nlohmann::json& j, Index rows) {
  if (!j.is_array()) throw RelationError("relation json: basis must be an array");
  if (j.empty()) return RealMat(rows, 0);
  if (j.front().is_array()) {
    if (static_cast<Index>(j.size()) != rows) throw RelationError("relation json: expected 2g rows");
    const Index cols = static_cast<Index>(j.front().size());
    RealMat m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      if (static_cast<Index>(j[i].size()) != cols) throw RelationError("relation json: ragged rows");
      for (Index k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
    }
    return m;
  }
  const Index n = static_cast<Index>(j.size());
  if (rows == 0 || n % rows != 0) throw RelationError("relation json: flat basis length is not a multiple of 2g");
  const Index cols = n / rows;
  RealMat m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index k = 0; k < cols; ++k) m(i, k) = j[i * cols + k].get<double>();
  return m;
}

}  // namespace

Relation relation_from_json(const std::string& text, double tol) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw RelationError(std::string("relation json: ") + e.what());
  }
  if (!doc.contains("g") || !doc.contains("basis_real"))
    throw RelationError("relation json: fields g and basis_real are required");
  const Index g = doc["g"].get<Index>();
  if (g <= 0) throw RelationError("relation json: g must be positive");
  const RealMat re = read_block(doc["basis_real"], 2 * g);
  RealMat im = RealMat::Zero(re.rows(), re.cols());
  if (doc.contains("basis_imag")) im = read_block(doc["basis_imag"], 2 * g);
  if (im.cols() != re.cols()) throw RelationError("relation json: real and imaginary parts differ in shape");
  Mat v(2 * g, re.cols());
  v.real() = re;
  v.imag() = im;
  return make_relation<cplx>(v, g, tol);
}

Relation read_relation_file(const std::filesystem::path& path, double tol) {
  std::ifstream in(path);
  if (!in) throw RelationError("cannot open relation file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return relation_from_json(ss.str(), tol);
}

void write_relation_file(const std::filesystem::path& path, const Relation& r) {
  std::ofstream out(path);
  if (!out) throw RelationError("cannot write relation file " + path.string());
  out << relation_to_json(r) << '\n';
}

}  // namespace bt
