#include "instance_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace lipsel::cli {

namespace {

std::string location(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

const nlohmann::json& require(const nlohmann::json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InstanceError(std::string("missing field \"") + key + "\"");
  return *it;
}

double parse_distance(const nlohmann::json& v, std::size_t i, std::size_t j) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && v.get<std::string>() == "inf") return kInfinity;
  throw InstanceError("dist[" + std::to_string(i) + "][" + std::to_string(j) +
                      "] (row " + std::to_string(i) + ", column " + std::to_string(j) +
                      "): expected a number or \"inf\"");
}

std::size_t parse_count(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw InstanceError(where + ": expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

double parse_real(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number()) throw InstanceError(where + ": expected a number");
  return v.get<double>();
}

}  // namespace

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Instance parse_instance(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw InstanceError("malformed JSON at " + location(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw InstanceError("instance must be a JSON object");

  Instance inst;
  inst.digest = fnv1a_hex(text);

  const auto& dist = require(doc, "dist");
  if (!dist.is_array()) throw InstanceError("dist: expected an array of rows");
  const std::size_t n = dist.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = dist[i];
    if (!row.is_array()) throw InstanceError("dist row " + std::to_string(i) + ": expected an array");
    if (row.size() != n) {
      throw InstanceError("dist row " + std::to_string(i) + " has " + std::to_string(row.size()) +
                          " entries, expected " + std::to_string(n));
    }
    std::vector<double> parsed;
    for (std::size_t j = 0; j < n; ++j) parsed.push_back(parse_distance(row[j], i, j));
    inst.dist.push_back(std::move(parsed));
  }

  if (auto it = doc.find("points"); it != doc.end()) {
    if (!it->is_array() || it->size() != n) {
      throw InstanceError("points: expected an array of " + std::to_string(n) + " labels");
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto& label = (*it)[i];
      if (label.is_string()) inst.labels.push_back(label.get<std::string>());
      else if (label.is_number_integer()) inst.labels.push_back(std::to_string(label.get<long long>()));
      else throw InstanceError("points[" + std::to_string(i) + "]: expected a string");
    }
  }

  if (auto it = doc.find("norm"); it != doc.end()) {
    if (!it->is_string()) throw InstanceError("norm: expected \"linf\", \"l1\" or \"l2\"");
    auto kind = parse_norm(it->get<std::string>());
    if (!kind) throw InstanceError("norm: unknown norm \"" + it->get<std::string>() + "\"");
    inst.norm = *kind;
  }
  if (auto it = doc.find("m"); it != doc.end()) inst.m = parse_count(*it, "m");

  const auto& values = require(doc, "values");
  if (!values.is_array() || values.size() != n) {
    throw InstanceError("values: expected an array of " + std::to_string(n) + " polytopes");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::string where = "values[" + std::to_string(i) + "]";
    if (!values[i].is_object()) throw InstanceError(where + ": expected {\"vertices\": [...]}");
    auto vit = values[i].find("vertices");
    if (vit == values[i].end() || !vit->is_array() || vit->empty()) {
      throw InstanceError(where + ".vertices: expected a nonempty array");
    }
    std::vector<Vector> verts;
    for (std::size_t k = 0; k < vit->size(); ++k) {
      const auto& v = (*vit)[k];
      const std::string vwhere = where + ".vertices[" + std::to_string(k) + "]";
      if (!v.is_array() || v.empty()) throw InstanceError(vwhere + ": expected a coordinate array");
      Vector coords;
      for (std::size_t c = 0; c < v.size(); ++c) {
        coords.push_back(parse_real(v[c], vwhere + "[" + std::to_string(c) + "]"));
      }
      verts.push_back(std::move(coords));
    }
    inst.values.push_back(std::move(verts));
  }

  if (auto it = doc.find("experiment"); it != doc.end()) {
    if (!it->is_object()) throw InstanceError("experiment: expected an object");
    const auto& e = *it;
    if (e.contains("N")) inst.experiment.N = parse_count(e["N"], "experiment.N");
    if (e.contains("L")) inst.experiment.L = parse_count(e["L"], "experiment.L");
    if (e.contains("hull_depth")) {
      inst.experiment.hull_depth = parse_count(e["hull_depth"], "experiment.hull_depth");
    }
    if (e.contains("cap")) inst.experiment.cap = parse_real(e["cap"], "experiment.cap");
    if (e.contains("node_cap")) inst.experiment.node_cap = parse_real(e["node_cap"], "experiment.node_cap");
    if (e.contains("tol")) inst.experiment.tol = parse_real(e["tol"], "experiment.tol");
    if (e.contains("seed")) inst.experiment.seed = parse_count(e["seed"], "experiment.seed");
  }
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

SetValuedMap to_map(const Instance& inst) {
  PseudometricSpace space = validate_pseudometric(inst.dist, inst.labels);
  std::vector<Polytope> values;
  values.reserve(inst.values.size());
  for (const auto& verts : inst.values) values.emplace_back(verts);
  const std::size_t d = values.empty() ? 1 : values.front().dimension();
  return SetValuedMap(std::move(space), std::move(values), inst.norm, inst.m.value_or(d));
}

Json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  double r = std::strtod(buf, nullptr);
  if (r == 0.0) r = 0.0;  // no negative zero
  return r;
}

Json vector_json(const Vector& v) {
  Json arr = Json::array();
  for (double x : v) arr.push_back(number(x));
  return arr;
}

Json instance_to_json(const Instance& inst) {
  Json doc;
  if (!inst.labels.empty()) doc["points"] = inst.labels;
  Json dist = Json::array();
  for (const auto& row : inst.dist) {
    Json r = Json::array();
    for (double v : row) {
      if (std::isinf(v)) r.push_back("inf");
      else r.push_back(v);
    }
    dist.push_back(std::move(r));
  }
  doc["dist"] = std::move(dist);
  doc["norm"] = to_string(inst.norm);
  if (inst.m) doc["m"] = *inst.m;
  Json values = Json::array();
  for (const auto& verts : inst.values) values.push_back(Json{{"vertices", verts}});
  doc["values"] = std::move(values);

  Json e = Json::object();
  if (inst.experiment.N) e["N"] = *inst.experiment.N;
  if (inst.experiment.L) e["L"] = *inst.experiment.L;
  if (inst.experiment.hull_depth) e["hull_depth"] = *inst.experiment.hull_depth;
  if (inst.experiment.cap) e["cap"] = *inst.experiment.cap;
  if (inst.experiment.node_cap) e["node_cap"] = *inst.experiment.node_cap;
  if (inst.experiment.tol) e["tol"] = *inst.experiment.tol;
  if (inst.experiment.seed) e["seed"] = *inst.experiment.seed;
  if (!e.empty()) doc["experiment"] = std::move(e);
  return doc;
}

void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InstanceError("cannot write " + path);
  out << text;
  if (!out) throw InstanceError("failed writing " + path);
}

}  // namespace lipsel::cli
