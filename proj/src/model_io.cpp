#include "fcfs/model_io.hpp"

#include <fstream>
#include <sstream>

namespace fcfs {

namespace {

const nlohmann::json& require(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("model file is missing key '") + key + "'");
  return doc.at(key);
}

double require_number(const nlohmann::json& value, const std::string& where) {
  if (!value.is_number()) throw ParseError(where + " must be a number");
  return value.get<double>();
}

std::string require_string(const nlohmann::json& value, const std::string& where) {
  if (!value.is_string()) throw ParseError(where + " must be a string");
  return value.get<std::string>();
}

}  // namespace

ModelSpec model_spec_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("model file must contain a JSON object");
  ModelSpec spec;

  const auto& agents = require(doc, "agents");
  if (!agents.is_array()) throw ParseError("'agents' must be an array");
  for (std::size_t k = 0; k < agents.size(); ++k) {
    const auto where = "agents[" + std::to_string(k) + "]";
    const auto& a = agents[k];
    if (!a.is_object()) throw ParseError(where + " must be an object");
    spec.agents.push_back({require_string(require(a, "name"), where + ".name"),
                           require_number(require(a, "alpha"), where + ".alpha")});
  }

  const auto& goods = require(doc, "goods");
  if (!goods.is_array()) throw ParseError("'goods' must be an array");
  for (std::size_t k = 0; k < goods.size(); ++k) {
    const auto where = "goods[" + std::to_string(k) + "]";
    const auto& g = goods[k];
    if (!g.is_object()) throw ParseError(where + " must be an object");
    spec.goods.push_back({require_string(require(g, "name"), where + ".name"),
                          require_number(require(g, "beta"), where + ".beta")});
  }

  const auto& edges = require(doc, "edges");
  if (!edges.is_array()) throw ParseError("'edges' must be an array");
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto where = "edges[" + std::to_string(k) + "]";
    const auto& e = edges[k];
    if (!e.is_array() || e.size() != 2) throw ParseError(where + " must be a [good, agent] pair");
    spec.edges.emplace_back(require_string(e[0], where + "[0]"), require_string(e[1], where + "[1]"));
  }

  spec.lambda_bar = require_number(require(doc, "lambda_bar"), "lambda_bar");
  spec.mu_bar = require_number(require(doc, "mu_bar"), "mu_bar");
  return spec;
}

ModelSpec parse_model_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return model_spec_from_json(doc);
}

ModelSpec load_model_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model_text(buf.str());
}

MatchingModel load_model(const std::filesystem::path& path) {
  return MatchingModel::build(load_model_spec(path));
}

nlohmann::json to_json(const ModelSpec& spec) {
  nlohmann::json doc;
  doc["agents"] = nlohmann::json::array();
  for (const auto& a : spec.agents) doc["agents"].push_back({{"name", a.name}, {"alpha", a.alpha}});
  doc["goods"] = nlohmann::json::array();
  for (const auto& g : spec.goods) doc["goods"].push_back({{"name", g.name}, {"beta", g.beta}});
  doc["edges"] = nlohmann::json::array();
  for (const auto& [good, agent] : spec.edges) doc["edges"].push_back({good, agent});
  doc["lambda_bar"] = spec.lambda_bar;
  doc["mu_bar"] = spec.mu_bar;
  return doc;
}

}  // namespace fcfs
