// Finite two-relation models and their line-oriented text format.
//
//   worlds: w1 w2 w3
//   name 'i = w1
//   action a pos: (w1,w2) (w4,w3)
//   action a neg: (w1,w2)
//   prop p pos: w2 w4
//   prop p neg: w4
//
// Missing pos/neg lines mean empty sets. The writer is canonical, so
// write(parse(write(m))) == write(m).

#pragma once

#include <cstddef>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fourdl/relation.hpp"
#include "fourdl/syntax.hpp"

namespace fourdl {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Model {
 public:
  Model() = default;

  explicit Model(std::vector<std::string> world_names) : worlds_(std::move(world_names)) {
    if (worlds_.empty()) throw ModelError("a model needs at least one world");
    for (std::size_t i = 0; i < worlds_.size(); ++i)
      if (!index_.emplace(worlds_[i], i).second) throw ModelError("duplicate world '" + worlds_[i] + "'");
  }

  // Worlds w0..w(n-1).
  static Model with_worlds(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("w" + std::to_string(i));
    return Model(std::move(names));
  }

  std::size_t size() const { return worlds_.size(); }
  const std::vector<std::string>& worlds() const { return worlds_; }
  const std::string& world_name(std::size_t w) const { return worlds_.at(w); }

  bool has_world(const std::string& name) const { return index_.count(name) > 0; }
  std::size_t world(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ModelError("unknown world '" + name + "'");
    return it->second;
  }

  void declare_action(const std::string& a) {
    pos_rel_.try_emplace(a, size());
    neg_rel_.try_emplace(a, size());
  }
  void declare_prop(const std::string& p) {
    pos_val_.try_emplace(p, size());
    neg_val_.try_emplace(p, size());
  }

  void set_name(const std::string& nominal, std::size_t w) {
    check_world(w);
    naming_[nominal] = w;
  }
  void add_pos_pair(const std::string& a, std::size_t u, std::size_t v) { relation_for(pos_rel_, a, u, v).add(u, v); }
  void add_neg_pair(const std::string& a, std::size_t u, std::size_t v) { relation_for(neg_rel_, a, u, v).add(u, v); }
  void add_pos_val(const std::string& p, std::size_t w) { valuation_for(pos_val_, p, w).set(w); }
  void add_neg_val(const std::string& p, std::size_t w) { valuation_for(neg_val_, p, w).set(w); }

  void set_pos_relation(const std::string& a, Relation r) {
    declare_action(a);
    check_dim(r);
    pos_rel_[a] = std::move(r);
  }
  void set_neg_relation(const std::string& a, Relation r) {
    declare_action(a);
    check_dim(r);
    neg_rel_[a] = std::move(r);
  }
  void set_pos_valuation(const std::string& p, WorldSet s) {
    declare_prop(p);
    check_dim(s);
    pos_val_[p] = std::move(s);
  }
  void set_neg_valuation(const std::string& p, WorldSet s) {
    declare_prop(p);
    check_dim(s);
    neg_val_[p] = std::move(s);
  }

  bool has_action(const std::string& a) const { return pos_rel_.count(a) > 0; }
  bool has_prop(const std::string& p) const { return pos_val_.count(p) > 0; }
  bool has_nominal(const std::string& i) const { return naming_.count(i) > 0; }

  const Relation& pos_relation(const std::string& a) const { return lookup(pos_rel_, a, "action"); }
  const Relation& neg_relation(const std::string& a) const { return lookup(neg_rel_, a, "action"); }
  const WorldSet& pos_valuation(const std::string& p) const { return lookup(pos_val_, p, "proposition"); }
  const WorldSet& neg_valuation(const std::string& p) const { return lookup(neg_val_, p, "proposition"); }
  std::size_t named(const std::string& i) const { return lookup(naming_, i, "nominal"); }

  const std::map<std::string, std::size_t>& naming() const { return naming_; }
  const std::map<std::string, Relation>& pos_relations() const { return pos_rel_; }
  const std::map<std::string, Relation>& neg_relations() const { return neg_rel_; }
  const std::map<std::string, WorldSet>& pos_valuations() const { return pos_val_; }
  const std::map<std::string, WorldSet>& neg_valuations() const { return neg_val_; }

  Signature signature() const {
    Signature sig;
    for (const auto& [a, r] : pos_rel_) sig.actions.insert(a);
    for (const auto& [p, s] : pos_val_) sig.propositions.insert(p);
    for (const auto& [i, w] : naming_) sig.nominals.insert(i);
    return sig;
  }

  // True when every world carries at least one name.
  bool is_named() const {
    WorldSet seen(size());
    for (const auto& [i, w] : naming_) seen.set(w);
    return seen.all();
  }

  friend bool operator==(const Model& a, const Model& b) {
    return a.worlds_ == b.worlds_ && a.pos_rel_ == b.pos_rel_ && a.neg_rel_ == b.neg_rel_ &&
           a.naming_ == b.naming_ && a.pos_val_ == b.pos_val_ && a.neg_val_ == b.neg_val_;
  }
  friend bool operator!=(const Model& a, const Model& b) { return !(a == b); }

 private:
  void check_world(std::size_t w) const {
    if (w >= size()) throw ModelError("world index " + std::to_string(w) + " out of range");
  }
  void check_dim(const Relation& r) const {
    if (r.size() != size()) throw ModelError("relation dimension does not match the domain");
  }
  void check_dim(const WorldSet& s) const {
    if (s.size() != size()) throw ModelError("valuation dimension does not match the domain");
  }

  Relation& relation_for(std::map<std::string, Relation>& m, const std::string& a, std::size_t u, std::size_t v) {
    check_world(u);
    check_world(v);
    declare_action(a);
    return m[a];
  }
  WorldSet& valuation_for(std::map<std::string, WorldSet>& m, const std::string& p, std::size_t w) {
    check_world(w);
    declare_prop(p);
    return m[p];
  }

  template <typename T>
  static const T& lookup(const std::map<std::string, T>& m, const std::string& key, const char* what) {
    auto it = m.find(key);
    if (it == m.end()) throw ModelError(std::string("unknown ") + what + " '" + key + "'");
    return it->second;
  }

  std::vector<std::string> worlds_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, Relation> pos_rel_;
  std::map<std::string, Relation> neg_rel_;
  std::map<std::string, std::size_t> naming_;
  std::map<std::string, WorldSet> pos_val_;
  std::map<std::string, WorldSet> neg_val_;
};

// ---------------------------------------------------------------------------
// Text format

inline Model parse_model(const std::string& text) {
  static const std::regex worlds_re(R"(^worlds\s*:\s*(.*)$)");
  static const std::regex name_re(R"(^name\s+'([a-z_][a-z0-9_]*)\s*=\s*([A-Za-z0-9_]+)$)");
  static const std::regex action_re(R"(^action\s+([a-z][a-z0-9_]*)\s+(pos|neg)\s*:(.*)$)");
  static const std::regex prop_re(R"(^prop\s+([a-z][a-z0-9_]*)\s+(pos|neg)\s*:(.*)$)");
  static const std::regex pair_re(R"(^\s*\(\s*([A-Za-z0-9_]+)\s*,\s*([A-Za-z0-9_]+)\s*\))");
  static const std::regex id_re(R"(^\s*([A-Za-z0-9_]+))");

  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  Model m;
  bool have_worlds = false;

  auto fail = [&](const std::string& msg) -> ModelError {
    return ModelError("line " + std::to_string(line_no) + ": " + msg);
  };
  auto reserved = [](const std::string& s) { return s == "true" || s == "false"; };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);

    std::smatch mt;
    if (std::regex_match(line, mt, worlds_re)) {
      if (have_worlds) throw fail("second 'worlds:' line");
      std::vector<std::string> names;
      std::string rest = mt[1];
      std::smatch id;
      while (std::regex_search(rest, id, id_re)) {
        names.push_back(id[1]);
        rest = id.suffix();
      }
      if (rest.find_first_not_of(" \t") != std::string::npos) throw fail("bad world identifier");
      try {
        m = Model(std::move(names));
      } catch (const ModelError& e) {
        throw fail(e.what());
      }
      have_worlds = true;
      continue;
    }
    if (!have_worlds) throw fail("expected 'worlds:' before any other line");

    try {
      if (std::regex_match(line, mt, name_re)) {
        if (m.has_nominal(mt[1])) throw ModelError("nominal '" + std::string(mt[1]) + "' named twice");
        m.set_name(mt[1], m.world(mt[2]));
      } else if (std::regex_match(line, mt, action_re)) {
        const std::string a = mt[1];
        const bool pos = mt[2] == "pos";
        m.declare_action(a);
        std::string rest = mt[3];
        std::smatch pr;
        while (std::regex_search(rest, pr, pair_re)) {
          std::size_t u = m.world(pr[1]), v = m.world(pr[2]);
          pos ? m.add_pos_pair(a, u, v) : m.add_neg_pair(a, u, v);
          rest = pr.suffix();
        }
        if (rest.find_first_not_of(" \t") != std::string::npos) throw ModelError("malformed pair list");
      } else if (std::regex_match(line, mt, prop_re)) {
        const std::string p = mt[1];
        if (reserved(p)) throw ModelError("'" + p + "' is reserved");
        const bool pos = mt[2] == "pos";
        m.declare_prop(p);
        std::string rest = mt[3];
        std::smatch id;
        while (std::regex_search(rest, id, id_re)) {
          std::size_t w = m.world(id[1]);
          pos ? m.add_pos_val(p, w) : m.add_neg_val(p, w);
          rest = id.suffix();
        }
        if (rest.find_first_not_of(" \t") != std::string::npos) throw ModelError("malformed world list");
      } else {
        throw ModelError("unrecognised line '" + line + "'");
      }
    } catch (const ModelError& e) {
      throw fail(e.what());
    }
  }
  if (!have_worlds) throw ModelError("missing 'worlds:' line");
  return m;
}

inline std::string write_model(const Model& m) {
  std::string out = "worlds:";
  for (const auto& w : m.worlds()) out += " " + w;
  out += '\n';
  for (const auto& [i, w] : m.naming()) out += "name '" + i + " = " + m.world_name(w) + "\n";
  auto pairs = [&](const Relation& r) {
    std::string s;
    for (auto [u, v] : r.pairs()) s += " (" + m.world_name(u) + "," + m.world_name(v) + ")";
    return s;
  };
  auto members = [&](const WorldSet& ws) {
    std::string s;
    for (auto w = ws.find_first(); w != WorldSet::npos; w = ws.find_next(w)) s += " " + m.world_name(w);
    return s;
  };
  for (const auto& [a, r] : m.pos_relations()) {
    out += "action " + a + " pos:" + pairs(r) + "\n";
    out += "action " + a + " neg:" + pairs(m.neg_relation(a)) + "\n";
  }
  for (const auto& [p, s] : m.pos_valuations()) {
    out += "prop " + p + " pos:" + members(s) + "\n";
    out += "prop " + p + " neg:" + members(m.neg_valuation(p)) + "\n";
  }
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Model load_model_file(const std::string& path) { return parse_model(read_text_file(path)); }

}  // namespace fourdl
