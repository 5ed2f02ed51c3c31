#include "aif/model_io.hpp"

#include <fstream>
#include <stdexcept>
#include <sstream>

#include "aif/errors.hpp"

namespace aif {

using nlohmann::json;

namespace {

const json& field(const json& doc, const char* name) {
  if (!doc.contains(name)) throw Error(ErrorKind::Parse, std::string("missing field '") + name + "'");
  return doc.at(name);
}

std::size_t count_field(const json& doc, const char* name) {
  const auto& v = field(doc, name);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw Error(ErrorKind::Parse, std::string("field '") + name + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::vector<double> number_list(const json& v, const std::string& what) {
  if (!v.is_array()) throw Error(ErrorKind::Parse, what + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_number()) throw Error(ErrorKind::Parse, what + " must contain only numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

// Accepts a list of rows. Rows of unequal length are a parse error; a
// shape that disagrees with the declared dimensions is left to validation.
Matrix matrix_from_rows(const json& v, const std::string& what) {
  if (!v.is_array()) throw Error(ErrorKind::Parse, what + " must be a list of rows");
  const std::size_t rows = v.size();
  const std::size_t cols = rows ? (v[0].is_array() ? v[0].size() : 0) : 0;
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = number_list(v[r], what + " row " + std::to_string(r));
    if (row.size() != cols) throw Error(ErrorKind::Parse, what + " has ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = row[c];
  }
  return m;
}

json matrix_to_rows(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

std::vector<std::string> string_list(const json& v, const std::string& what) {
  if (!v.is_array()) throw Error(ErrorKind::Parse, what + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) throw Error(ErrorKind::Parse, what + " must contain only strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

}  // namespace

GenerativeModel model_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::Parse, "model document must be an object");
  GenerativeModel m;
  m.n_states = count_field(doc, "n_states");
  m.n_obs = count_field(doc, "n_obs");
  m.n_actions = count_field(doc, "n_actions");
  m.horizon = count_field(doc, "horizon");
  m.likelihood = matrix_from_rows(field(doc, "likelihood"), "likelihood");
  const auto& b = field(doc, "transitions");
  if (!b.is_array()) throw Error(ErrorKind::Parse, "transitions must be a list of matrices");
  for (std::size_t a = 0; a < b.size(); ++a) {
    m.transitions.push_back(matrix_from_rows(b[a], "transitions[" + std::to_string(a) + "]"));
  }
  m.initial_belief = number_list(field(doc, "initial_belief"), "initial_belief");
  m.preferences.obs_log_pref = number_list(field(doc, "obs_log_pref"), "obs_log_pref");
  if (doc.contains("labels")) {
    const auto& l = doc.at("labels");
    if (!l.is_object()) throw Error(ErrorKind::Parse, "labels must be an object");
    if (l.contains("states")) m.labels.states = string_list(l.at("states"), "labels.states");
    if (l.contains("observations")) m.labels.observations = string_list(l.at("observations"), "labels.observations");
    if (l.contains("actions")) m.labels.actions = string_list(l.at("actions"), "labels.actions");
  }
  return m;
}

json model_to_json(const GenerativeModel& model) {
  json doc;
  doc["n_states"] = model.n_states;
  doc["n_obs"] = model.n_obs;
  doc["n_actions"] = model.n_actions;
  doc["horizon"] = model.horizon;
  doc["likelihood"] = matrix_to_rows(model.likelihood);
  json b = json::array();
  for (const auto& t : model.transitions) b.push_back(matrix_to_rows(t));
  doc["transitions"] = std::move(b);
  doc["initial_belief"] = model.initial_belief;
  doc["obs_log_pref"] = model.preferences.obs_log_pref;
  json labels = json::object();
  if (!model.labels.states.empty()) labels["states"] = model.labels.states;
  if (!model.labels.observations.empty()) labels["observations"] = model.labels.observations;
  if (!model.labels.actions.empty()) labels["actions"] = model.labels.actions;
  if (!labels.empty()) doc["labels"] = std::move(labels);
  return doc;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
  }
}

GenerativeModel load_model(const std::filesystem::path& path) {
  auto model = model_from_json(read_json_file(path));
  require_valid(model);
  pullback_preferences(model);
  return model;
}

void save_model(const GenerativeModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << model_to_json(model).dump(2) << "\n";
}

}  // namespace aif
