#include "nhskin/model_io.hpp"

#include <fstream>

#include "nhskin/error.hpp"

namespace nhskin {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InvalidArgument("model: " + where + what);
}

int require_int(const json& doc, const char* key, const std::string& where) {
  if (!doc.contains(key)) fail(where, std::string("missing \"") + key + "\"");
  const auto& v = doc.at(key);
  if (!v.is_number_integer()) fail(where, std::string("\"") + key + "\" must be an integer");
  return v.get<int>();
}

cplx parse_entry(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_object()) fail(where, "amplitude entry must be {\"re\":..,\"im\":..}");
  double re = 0.0, im = 0.0;
  if (v.contains("re")) {
    if (!v.at("re").is_number()) fail(where, "\"re\" must be a number");
    re = v.at("re").get<double>();
  }
  if (v.contains("im")) {
    if (!v.at("im").is_number()) fail(where, "\"im\" must be a number");
    im = v.at("im").get<double>();
  }
  return {re, im};
}

}  // namespace

LatticeModel model_from_json(const json& doc) {
  if (!doc.is_object()) fail("", "document must be a JSON object");
  const int dimension = require_int(doc, "dimension", "");
  const int bands = require_int(doc, "bands", "");
  if (dimension != 1 && dimension != 2) fail("", "dimension must be 1 or 2");
  if (bands < 1) fail("", "bands must be >= 1");
  if (!doc.contains("terms") || !doc.at("terms").is_array()) fail("", "\"terms\" must be an array");
  const auto& terms_doc = doc.at("terms");
  if (terms_doc.empty()) fail("", "\"terms\" is empty");

  std::vector<HoppingTerm> terms;
  for (std::size_t t = 0; t < terms_doc.size(); ++t) {
    const std::string where = "term " + std::to_string(t) + ": ";
    const auto& term = terms_doc[t];
    if (!term.is_object()) fail(where, "must be an object");
    if (!term.contains("offset") || !term.at("offset").is_array()) fail(where, "missing offset array");
    HoppingTerm out;
    for (const auto& o : term.at("offset")) {
      if (!o.is_number_integer()) fail(where, "offset entries must be integers");
      out.offset.push_back(o.get<int>());
    }
    if (static_cast<int>(out.offset.size()) != dimension)
      fail(where, "offset length " + std::to_string(out.offset.size()) + " != dimension " +
                      std::to_string(dimension));
    if (!term.contains("amplitude") || !term.at("amplitude").is_array())
      fail(where, "missing amplitude matrix");
    const auto& rows = term.at("amplitude");
    if (static_cast<int>(rows.size()) != bands)
      fail(where, "amplitude has " + std::to_string(rows.size()) + " rows, expected " +
                      std::to_string(bands));
    out.amplitude.resize(bands, bands);
    for (int i = 0; i < bands; ++i) {
      if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != bands)
        fail(where, "amplitude row " + std::to_string(i) + " must have " + std::to_string(bands) +
                        " entries");
      for (int j = 0; j < bands; ++j) out.amplitude(i, j) = parse_entry(rows[i][j], where);
    }
    terms.push_back(std::move(out));
  }
  std::string name;
  if (doc.contains("name")) {
    if (!doc.at("name").is_string()) fail("", "\"name\" must be a string");
    name = doc.at("name").get<std::string>();
  }
  return LatticeModel(dimension, bands, std::move(terms), std::move(name));
}

LatticeModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open model file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw InvalidArgument("model file " + path + " is not valid JSON: " + e.what());
  }
  return model_from_json(doc);
}

json model_to_json(const LatticeModel& model) {
  json doc;
  doc["dimension"] = model.dimension();
  doc["bands"] = model.bands();
  json terms = json::array();
  for (const auto& t : model.terms()) {
    json rows = json::array();
    for (int i = 0; i < model.bands(); ++i) {
      json row = json::array();
      for (int j = 0; j < model.bands(); ++j)
        row.push_back({{"re", t.amplitude(i, j).real()}, {"im", t.amplitude(i, j).imag()}});
      rows.push_back(row);
    }
    terms.push_back({{"offset", t.offset}, {"amplitude", rows}});
  }
  doc["terms"] = terms;
  if (!model.name().empty()) doc["name"] = model.name();
  return doc;
}

}  // namespace nhskin
