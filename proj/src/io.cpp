#include "condlp/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "condlp/errors.hpp"

namespace condlp {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

double entry(const json& v, const std::string& where) {
  if (!v.is_number()) throw InvalidInput("field '" + where + "': expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw InvalidInput("field '" + where + "': non-finite value");
  return x;
}

Vector parse_vector(const json& j, const std::string& name) {
  if (!j.is_array()) throw InvalidInput("field '" + name + "': expected an array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = entry(j[i], name + "[" + std::to_string(i) + "]");
  return v;
}

Matrix parse_matrix(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty()) throw InvalidInput("field '" + name + "': expected a nonempty array of rows");
  const size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw InvalidInput("field '" + name + "[0]': expected a nonempty row");
  Matrix m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string row = name + "[" + std::to_string(i) + "]";
    if (!j[i].is_array()) throw InvalidInput("field '" + row + "': expected an array");
    if (j[i].size() != cols) throw InvalidInput("field '" + row + "': ragged row");
    for (size_t k = 0; k < cols; ++k)
      m(static_cast<Index>(i), static_cast<Index>(k)) = entry(j[i][k], row + "[" + std::to_string(k) + "]");
  }
  return m;
}

ordered_json vector_json(const Vector& v) {
  ordered_json a = ordered_json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(json_number(v(i)));
  return a;
}

}  // namespace

CanonicalInstance parse_instance(const json& j) {
  if (!j.is_object()) throw InvalidInput("instance: expected a JSON object");
  CanonicalInstance inst;
  if (!j.contains("form")) throw InvalidInput("field 'form': missing");
  if (!j["form"].is_number_integer()) throw InvalidInput("field 'form': expected an integer");
  inst.form = j["form"].get<int>();
  if (inst.form < 1 || inst.form > 4) throw InvalidInput("field 'form': must be 1, 2, 3 or 4");
  if (!j.contains("A")) throw InvalidInput("field 'A': missing");
  inst.A = parse_matrix(j["A"], "A");
  for (const char* key : {"b", "c"}) {
    if (j.contains(key)) {
      (key[0] == 'b' ? inst.b : inst.c) = parse_vector(j[key], key);
    } else if (inst.form != 4) {
      throw InvalidInput(std::string("field '") + key + "': missing");
    }
  }
  if (inst.form != 4) {
    if (inst.b.size() != inst.A.rows()) throw InvalidInput("field 'b': length must equal the number of rows of A");
    if (inst.c.size() != inst.A.cols()) throw InvalidInput("field 'c': length must equal the number of columns of A");
  }
  inst.validate();
  return inst;
}

CanonicalInstance parse_instance_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("instance: malformed JSON: ") + e.what());
  }
  return parse_instance(j);
}

CanonicalInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open instance file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance_text(ss.str());
}

ordered_json instance_to_json(const CanonicalInstance& inst) {
  ordered_json j;
  j["form"] = inst.form;
  ordered_json rows = ordered_json::array();
  for (Index i = 0; i < inst.A.rows(); ++i) rows.push_back(vector_json(inst.A.row(i).transpose()));
  j["A"] = rows;
  j["b"] = vector_json(inst.b);
  j["c"] = vector_json(inst.c);
  return j;
}

ordered_json json_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

ordered_json to_json(const RhoInterval& rho) {
  ordered_json j;
  j["feasible"] = rho.feasible;
  j["lower"] = json_number(rho.lower);
  j["upper"] = json_number(rho.upper);
  j["certified"] = rho.certified;
  j["ill_posed"] = rho.ill_posed;
  if (rho.witness_perturbation) {
    ordered_json rows = ordered_json::array();
    for (Index i = 0; i < rho.witness_perturbation->rows(); ++i)
      rows.push_back(vector_json(rho.witness_perturbation->row(i).transpose()));
    j["witness_perturbation"] = rows;
  }
  return j;
}

ordered_json to_json(const ConditionPart& part) {
  ordered_json j;
  j["rho"] = to_json(part.rho);
  j["norm"] = json_number(part.norm);
  j["c_lower"] = json_number(part.c_lower);
  j["c_upper"] = json_number(part.c_upper);
  j["equality_form"] = part.equality_form;
  return j;
}

ordered_json to_json(const ConditionInterval& ci) {
  ordered_json j;
  j["form"] = ci.form;
  j["c_lower"] = json_number(ci.c_lower);
  j["c_upper"] = json_number(ci.c_upper);
  j["sum_lower"] = json_number(ci.sum_lower);
  j["sum_upper"] = json_number(ci.sum_upper);
  j["certified"] = ci.certified;
  j["ill_posed"] = ci.ill_posed;
  j["norm_Ab"] = ci.norm_Ab;
  j["norm_Ac"] = ci.norm_Ac;
  j["norm_Abc"] = ci.norm_Abc;
  j["primal"] = to_json(ci.primal);
  j["dual"] = to_json(ci.dual);
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text;
  if (!out) throw InvalidInput("failed writing " + path);
}

}  // namespace condlp
