#pragma once

// JSON reading and writing of class-model files.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "apimine/error.hpp"
#include "apimine/model.hpp"

namespace apimine {

namespace detail {

using json = nlohmann::json;

inline void line_column(std::string_view text, std::size_t offset, std::size_t& line,
                        std::size_t& column) {
  line = 1;
  column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
}

class SchemaReader {
 public:
  static const json& field(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(path + "." + key, "missing required field");
    return *it;
  }

  static std::string string_at(const json& v, const std::string& path) {
    if (!v.is_string()) throw SchemaError(path, "expected a string");
    return v.get<std::string>();
  }

  static std::string required_string(const json& obj, const std::string& path, const char* key) {
    return string_at(field(obj, path, key), path + "." + key);
  }

  static std::string optional_string(const json& obj, const std::string& path, const char* key,
                                     std::string fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    return string_at(*it, path + "." + key);
  }

  /// Calls `each(element, element_path)` for every element of an optional list.
  template <class Fn>
  static void list(const json& obj, const std::string& path, const char* key, Fn&& each) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    const std::string list_path = path + "." + key;
    if (!it->is_array()) throw SchemaError(list_path, "expected a list");
    for (std::size_t i = 0; i < it->size(); ++i)
      each((*it)[i], list_path + "[" + std::to_string(i) + "]");
  }

  static void object(const json& v, const std::string& path) {
    if (!v.is_object()) throw SchemaError(path, "expected an object");
  }
};

inline Visibility parse_visibility(const std::string& s, const std::string& path) {
  if (s == "public") return Visibility::public_;
  if (s == "protected") return Visibility::protected_;
  if (s == "private") return Visibility::private_;
  if (s == "package") return Visibility::package;
  throw SchemaError(path, "unknown visibility '" + s + "'");
}

inline MethodDecl parse_method(const json& j, const std::string& path) {
  using R = SchemaReader;
  R::object(j, path);
  MethodDecl m;
  m.name = R::required_string(j, path, "name");
  m.visibility = parse_visibility(R::optional_string(j, path, "visibility", "public"),
                                  path + ".visibility");
  R::list(j, path, "params", [&](const json& p, const std::string& pp) {
    m.params.push_back(R::string_at(p, pp));
  });
  R::list(j, path, "calls", [&](const json& c, const std::string& cp) {
    R::object(c, cp);
    m.calls.push_back({R::required_string(c, cp, "class"), R::required_string(c, cp, "method")});
  });
  R::list(j, path, "accesses", [&](const json& a, const std::string& ap) {
    R::object(a, ap);
    m.accesses.push_back(
        {R::required_string(a, ap, "class"), R::required_string(a, ap, "attribute")});
  });
  R::list(j, path, "instantiates", [&](const json& t, const std::string& tp) {
    m.instantiates.push_back(R::string_at(t, tp));
  });
  return m;
}

inline ClassDecl parse_class(const json& j, const std::string& path) {
  using R = SchemaReader;
  R::object(j, path);
  ClassDecl c;
  c.id = R::required_string(j, path, "id");
  c.package = R::optional_string(j, path, "package", "");
  R::list(j, path, "attributes", [&](const json& a, const std::string& ap) {
    R::object(a, ap);
    c.attributes.push_back({R::required_string(a, ap, "name"), R::required_string(a, ap, "type")});
  });
  R::list(j, path, "methods", [&](const json& m, const std::string& mp) {
    c.methods.push_back(parse_method(m, mp));
  });
  R::list(j, path, "extends", [&](const json& e, const std::string& ep) {
    c.extends.push_back(R::string_at(e, ep));
  });
  R::list(j, path, "implements", [&](const json& e, const std::string& ep) {
    c.implements.push_back(R::string_at(e, ep));
  });
  return c;
}

}  // namespace detail

/// Parses a class-model file. Unknown fields are ignored and every list
/// field defaults to empty.
///
/// Throws ParseError (with line/column) on malformed JSON and SchemaError
/// (naming the field path, e.g. `$.classes[2].methods[0].name`) when the
/// document does not match the schema or repeats a class id.
inline ClassModel parse_model(std::string_view text) {
  using detail::json;
  using R = detail::SchemaReader;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 0, column = 0;
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    detail::line_column(text, offset, line, column);
    throw ParseError("parse error at line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + e.what(),
                     line, column, offset);
  }
  const std::string root = "$";
  R::object(doc, root);
  ClassModel model;
  model.name = R::required_string(doc, root, "name");
  const auto kind = R::required_string(doc, root, "kind");
  if (kind == "api")
    model.kind = ModelKind::api;
  else if (kind == "client")
    model.kind = ModelKind::client;
  else
    throw SchemaError("$.kind", "expected \"api\" or \"client\", got \"" + kind + "\"");

  ClassSet seen;
  R::list(doc, root, "classes", [&](const json& c, const std::string& cp) {
    auto decl = detail::parse_class(c, cp);
    if (!seen.insert(decl.id).second)
      throw SchemaError(cp + ".id", "duplicate class id '" + decl.id + "'");
    model.classes.push_back(std::move(decl));
  });
  return model;
}

inline ClassModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_model(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line(), e.column(), e.offset());
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.path(), e.detail());
  }
}

/// Canonical form: every field present, fixed key order, two-space indent.
inline std::string emit_model(const ClassModel& model) {
  using ojson = nlohmann::ordered_json;
  ojson doc;
  doc["name"] = model.name;
  doc["kind"] = to_string(model.kind);
  doc["classes"] = ojson::array();
  for (const auto& c : model.classes) {
    ojson jc;
    jc["id"] = c.id;
    jc["package"] = c.package;
    jc["attributes"] = ojson::array();
    for (const auto& a : c.attributes) jc["attributes"].push_back({{"name", a.name}, {"type", a.type}});
    jc["methods"] = ojson::array();
    for (const auto& m : c.methods) {
      ojson jm;
      jm["name"] = m.name;
      jm["visibility"] = to_string(m.visibility);
      jm["params"] = m.params;
      jm["calls"] = ojson::array();
      for (const auto& call : m.calls)
        jm["calls"].push_back({{"class", call.target}, {"method", call.method}});
      jm["accesses"] = ojson::array();
      for (const auto& acc : m.accesses)
        jm["accesses"].push_back({{"class", acc.target}, {"attribute", acc.attribute}});
      jm["instantiates"] = m.instantiates;
      jc["methods"].push_back(std::move(jm));
    }
    jc["extends"] = c.extends;
    jc["implements"] = c.implements;
    doc["classes"].push_back(std::move(jc));
  }
  return doc.dump(2) + "\n";
}

}  // namespace apimine
