#include "tensorial/bodyfile.hpp"

#include "tensorial/oracles.hpp"

#include <fstream>
#include <sstream>

namespace tensorial {

using nlohmann::json;

namespace {

// matrices as lists of rows; generators and normals as lists of vectors
json rows(const Mat& m) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (int j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    out.push_back(std::move(r));
  }
  return out;
}

json columns(const Mat& m) { return rows(m.transpose()); }

Mat read_rows(const json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw InputError(std::string("body file: '") + what + "' must be a nonempty list of lists");
  const int n = static_cast<int>(j.size()), m = static_cast<int>(j[0].size());
  Mat out(n, m);
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != m) throw InputError(std::string("body file: ragged '") + what + "'");
    for (int k = 0; k < m; ++k) {
      if (!j[i][k].is_number()) throw InputError(std::string("body file: non-numeric entry in '") + what + "'");
      out(i, k) = j[i][k].get<double>();
    }
  }
  return out;
}

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string("body file: missing field '") + key + "'");
  return *it;
}

std::vector<Body> read_list(const json& j, const char* key) {
  std::vector<Body> out;
  const json& a = field(j, key);
  if (!a.is_array()) throw InputError(std::string("body file: '") + key + "' must be a list");
  for (const json& e : a) out.push_back(body_from_json(e));
  return out;
}

json write_list(const std::vector<Body>& bs) {
  json a = json::array();
  for (const Body& b : bs) a.push_back(body_to_json(b));
  return a;
}

json oracle_to_json(const Body& b) {
  json j;
  if (auto* o = oracle_as<SchattenOracle>(b)) {
    j["kind"] = "schatten";
    j["p"] = std::isinf(o->p()) ? json("inf") : json(o->p());
    j["d1"] = o->d1();
    j["d2"] = o->d2();
  } else if (auto* o = oracle_as<ImageOracle>(b)) {
    j["kind"] = "image";
    j["map"] = rows(o->map());
    j["inner"] = body_to_json(o->inner());
  } else if (auto* o = oracle_as<PolarOracle>(b)) {
    j["kind"] = "polar";
    j["inner"] = body_to_json(o->inner());
  } else if (auto* o = oracle_as<SumOracle>(b)) {
    j["kind"] = "sum";
    j["terms"] = write_list(o->terms());
  } else if (auto* o = oracle_as<UnionOracle>(b)) {
    j["kind"] = "union";
    j["parts"] = write_list(o->parts());
  } else if (auto* o = oracle_as<ProjectiveOracle>(b)) {
    j["kind"] = "projective";
    j["factors"] = write_list(o->factors());
  } else if (auto* o = oracle_as<SliceOracle>(b)) {
    j["kind"] = "slice";
    j["body"] = body_to_json(o->body());
    j["embed"] = rows(o->embed());
    j["s"] = o->s();
  } else {
    throw InputError("body file: oracle '" + b.oracle().name() + "' is not serializable");
  }
  return j;
}

}  // namespace

json body_to_json(const Body& b) {
  json j;
  switch (b.kind()) {
    case Kind::VPoly:
      j["kind"] = "vpoly";
      j["generators"] = columns(b.generators());
      break;
    case Kind::HPoly:
      j["kind"] = "hpoly";
      j["normals"] = columns(b.normals());
      break;
    case Kind::Ellipsoid:
      j["kind"] = "ellipsoid";
      j["shape_matrix"] = rows(b.shape_matrix());
      break;
    case Kind::Implicit:
      j = oracle_to_json(b);
      break;
  }
  j["dim"] = b.dim();
  if (b.shape()) j["tensor_shape"] = b.shape()->dims();
  return j;
}

Body body_from_json(const json& j) {
  if (!j.is_object()) throw InputError("body file: expected a JSON object");
  const std::string kind = field(j, "kind").get<std::string>();
  const int dim = field(j, "dim").get<int>();
  Body b;
  if (kind == "vpoly") {
    b = Body::vpoly(read_rows(field(j, "generators"), "generators").transpose(), false);
  } else if (kind == "hpoly") {
    b = Body::hpoly(read_rows(field(j, "normals"), "normals").transpose(), false);
  } else if (kind == "ellipsoid") {
    Mat m = read_rows(field(j, "shape_matrix"), "shape_matrix");
    if (m.rows() != m.cols()) throw InputError("body file: shape_matrix is not square");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))
      throw InputError("body file: shape_matrix is not symmetric");
    b = Body::ellipsoid(m);
  } else if (kind == "schatten") {
    const json& p = field(j, "p");
    double pv = p.is_string() && p.get<std::string>() == "inf" ? INFINITY : p.get<double>();
    if (pv != 1 && !std::isinf(pv)) throw InputError("body file: schatten p must be 1 or inf");
    b = Body::implicit(std::make_shared<SchattenOracle>(pv, field(j, "d1").get<int>(), field(j, "d2").get<int>()));
  } else if (kind == "image") {
    b = Body::implicit(std::make_shared<ImageOracle>(read_rows(field(j, "map"), "map"), body_from_json(field(j, "inner"))));
  } else if (kind == "polar") {
    b = Body::implicit(std::make_shared<PolarOracle>(body_from_json(field(j, "inner"))));
  } else if (kind == "sum") {
    b = Body::implicit(std::make_shared<SumOracle>(read_list(j, "terms")));
  } else if (kind == "union") {
    b = Body::implicit(std::make_shared<UnionOracle>(read_list(j, "parts")));
  } else if (kind == "projective") {
    std::vector<Body> f = read_list(j, "factors");
    std::vector<int> dims;
    for (const Body& x : f) dims.push_back(x.dim());
    b = Body::implicit(std::make_shared<ProjectiveOracle>(f, TensorShape(dims)));
  } else if (kind == "slice") {
    Body inner = body_from_json(field(j, "body"));
    Mat e = read_rows(field(j, "embed"), "embed");
    if (e.rows() != inner.dim()) throw InputError("body file: slice embedding has wrong size");
    b = Body::implicit(std::make_shared<SliceOracle>(inner, e, field(j, "s").get<double>()));
  } else {
    throw InputError("body file: unknown kind '" + kind + "'");
  }
  if (b.dim() != dim) throw InputError("body file: data does not match dim " + std::to_string(dim));
  if (auto it = j.find("tensor_shape"); it != j.end() && !it->is_null()) {
    TensorShape s(it->get<std::vector<int>>());
    if (s.total() != dim) throw InputError("body file: tensor_shape " + s.str() + " does not multiply to dim");
    b = b.with_shape(s);
  }
  return b;
}

std::string emit_body(const Body& b) { return body_to_json(b).dump(2); }

Body parse_body(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("body file: ") + e.what());
  }
  try {
    return body_from_json(j);
  } catch (const json::exception& e) {
    throw InputError(std::string("body file: ") + e.what());
  }
}

Body read_body_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_body(ss.str());
}

void write_body_file(const Body& b, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << emit_body(b) << "\n";
}

}  // namespace tensorial
