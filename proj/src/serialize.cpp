#include "serialize.hpp"

#include <json.hpp>

#include "parser.hpp"

namespace pqn {

std::string tensorIndexKey(const std::vector<int>& idx) {
  std::string key;
  for (size_t i = 0; i < idx.size(); ++i) {
    if (i) key += ",";
    key += std::to_string(idx[i] + 1);
  }
  return key;
}

namespace {

std::pair<Valence, int> parseValence(const std::string& s) {
  if (s == "function") return {Valence::Function, 0};
  if (s == "vector") return {Valence::Vector, 1};
  if (s == "tensor11") return {Valence::Tensor11, 0};
  if (s == "tensor12") return {Valence::Tensor12, 0};
  auto colon = s.find(':');
  if (colon != std::string::npos) {
    std::string head = s.substr(0, colon);
    int deg = std::stoi(s.substr(colon + 1));
    if (head == "form") return {Valence::Form, deg};
    if (head == "multivector") return {Valence::Multivector, deg};
  }
  throw Error("schema", "unknown tensor valence '" + s + "'");
}

std::vector<int> parseIndexKey(const std::string& key, const Chart& chart,
                               Valence v, int degree) {
  std::vector<int> idx;
  size_t pos = 0;
  while (pos <= key.size()) {
    size_t comma = key.find(',', pos);
    std::string part = key.substr(pos, comma == std::string::npos ? std::string::npos
                                                                  : comma - pos);
    if (!part.empty()) {
      int one = std::stoi(part);
      if (one < 1 || one > chart.dim())
        throw Error("schema", "tensor index out of chart range: " + key);
      idx.push_back(one - 1);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  size_t arity = 0;
  switch (v) {
    case Valence::Function: arity = 0; break;
    case Valence::Vector: arity = 1; break;
    case Valence::Form:
    case Valence::Multivector: arity = static_cast<size_t>(degree); break;
    case Valence::Tensor11: arity = 2; break;
    case Valence::Tensor12: arity = 3; break;
  }
  if (idx.size() != arity)
    throw Error("schema", "tensor index arity mismatch: '" + key + "'");
  auto increasingFrom = [&](size_t start) {
    for (size_t i = start + 1; i < idx.size(); ++i)
      if (idx[i] <= idx[i - 1]) return false;
    return true;
  };
  if ((v == Valence::Form || v == Valence::Multivector) && !increasingFrom(0))
    throw Error("schema", "antisymmetric indices must be strictly increasing: " + key);
  if (v == Valence::Tensor12 && !increasingFrom(1))
    throw Error("schema", "lower index pair must be strictly increasing: " + key);
  return idx;
}

}  // namespace

std::string StructureFile::toJson() const {
  nlohmann::json j;
  j["schema_version"] = schemaVersion;
  j["model"] = model;
  if (!potential.empty()) j["potential"] = potential;
  j["chart"]["n"] = chart.n;
  j["chart"]["names"] = chart.names();
  nlohmann::json ts = nlohmann::json::object();
  for (const auto& [name, t] : tensors) {
    nlohmann::json tj;
    tj["valence"] = valenceName(t.valence, t.degree);
    nlohmann::json comps = nlohmann::json::object();
    for (const auto& [idx, v] : t.comp) comps[tensorIndexKey(idx)] = v.str();
    tj["components"] = comps;
    ts[name] = tj;
  }
  j["tensors"] = ts;
  return j.dump(2) + "\n";
}

StructureFile StructureFile::fromJson(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error("schema", std::string("invalid JSON: ") + e.what());
  }
  StructureFile f;
  try {
    f.schemaVersion = j.at("schema_version").get<int>();
    if (f.schemaVersion != 1)
      throw Error("schema", "unsupported schema version");
    f.model = j.value("model", std::string("custom"));
    f.potential = j.value("potential", std::string());
    f.chart = Chart(j.at("chart").at("n").get<int>());
    for (const auto& [name, tj] : j.at("tensors").items()) {
      auto [valence, degree] = parseValence(tj.at("valence").get<std::string>());
      TensorField t{f.chart, valence, degree, {}};
      for (const auto& [key, val] : tj.at("components").items()) {
        std::vector<int> idx =
            parseIndexKey(key, f.chart, valence, degree);
        Expr e = parseExpr(val.get<std::string>());
        if (!e.isZero()) t.set(idx, e);
      }
      f.tensors.emplace(name, std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("schema", std::string("malformed structure file: ") + e.what());
  }
  return f;
}

PqnStructure StructureFile::toStructure(int kmax) const {
  auto it = tensors.find("pi");
  if (it == tensors.end()) throw Error("schema", "structure file lacks tensor 'pi'");
  TensorField pi = it->second;
  it = tensors.find("N");
  if (it == tensors.end()) throw Error("schema", "structure file lacks tensor 'N'");
  TensorField n = it->second;
  TensorField phi = TensorField::form(chart, 3);
  it = tensors.find("phi");
  if (it != tensors.end()) phi = it->second;
  return PqnStructure::build(chart, pi, n, phi, kmax);
}

}  // namespace pqn
