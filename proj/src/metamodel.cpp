#include "umt/metamodel.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "umt/lexer.hpp"

namespace umt {

const Entity* Metamodel::find(std::string_view entity) const {
  for (const auto& e : entities) {
    if (e.name == entity) return &e;
  }
  return nullptr;
}

namespace {

Entity parse_entity(TokenStream& ts) {
  Entity entity;
  entity.pos = ts.peek().pos;
  if (ts.accept_keyword("abstract")) entity.is_abstract = true;
  ts.expect_keyword("entity");
  entity.name = ts.expect(TokenKind::Ident, "entity name").text;
  if (ts.accept_keyword("extends")) {
    entity.parent = ts.expect(TokenKind::Ident, "parent entity name").text;
    if (ts.at(TokenKind::Comma)) {
      ts.fail("multiple inheritance is not supported (entity " + entity.name + ")");
    }
  }
  ts.expect(TokenKind::LBrace, "'{'");
  while (!ts.at(TokenKind::RBrace)) {
    const std::string name = ts.expect(TokenKind::Ident, "feature name").text;
    ts.expect(TokenKind::Colon, "':'");
    const Token& type = ts.expect(TokenKind::Ident, "feature type");
    if (type.text == "String" || type.text == "Int") {
      Attribute attr{name, type.text == "String" ? ValueType::String : ValueType::Int,
                     false};
      if (ts.accept(TokenKind::LParen)) {
        ts.expect_keyword("key");
        ts.expect(TokenKind::RParen, "')'");
        attr.is_key = true;
      }
      entity.attributes.push_back(std::move(attr));
    } else if (type.text == "set" || type.text == "opt" || type.text == "seq") {
      ts.expect(TokenKind::LParen, "'('");
      AssociationEnd end;
      end.name = name;
      end.target = ts.expect(TokenKind::Ident, "target entity").text;
      end.multiplicity =
          type.text == "opt" ? Multiplicity::Optional : Multiplicity::Many;
      end.ordered = type.text == "seq";
      ts.expect(TokenKind::RParen, "')'");
      entity.ends.push_back(std::move(end));
    } else {
      throw ParseError(type.pos, "unknown feature type '" + type.text + "'");
    }
    ts.expect(TokenKind::Semicolon, "';'");
  }
  ts.expect(TokenKind::RBrace, "'}'");
  return entity;
}

// Walks entity -> parent -> ... within one metamodel, stopping on cycles or
// unresolved parents.
std::vector<const Entity*> chain(const Metamodel& mm, const Entity* e) {
  std::vector<const Entity*> out;
  std::set<std::string> seen;
  while (e && seen.insert(e->name).second) {
    out.push_back(e);
    e = e->parent ? mm.find(*e->parent) : nullptr;
  }
  return out;
}

const Entity& require(const Metamodel& mm, std::string_view entity) {
  const Entity* e = mm.find(entity);
  if (!e) throw ModelError("unknown entity '" + std::string(entity) + "'");
  return *e;
}

std::optional<Feature> find_in_chain(const std::vector<const Entity*>& entities,
                                     std::string_view feature) {
  for (const Entity* e : entities) {
    for (const auto& a : e->attributes) {
      if (a.name == feature) return Feature{e, &a, nullptr};
    }
    for (const auto& end : e->ends) {
      if (end.name == feature) return Feature{e, nullptr, &end};
    }
  }
  return std::nullopt;
}

void validate_into(const Metamodel& mm,
                   const std::function<bool(const std::string&)>& target_exists,
                   std::vector<Diagnostic>& out) {
  std::map<std::string, int> counts;
  for (const auto& e : mm.entities) ++counts[e.name];
  for (const auto& [name, n] : counts) {
    if (n > 1) out.push_back({"duplicate-entity", name, "duplicate entity name"});
  }

  std::set<std::string> has_child;
  for (const auto& e : mm.entities) {
    if (!e.parent) continue;
    if (!mm.find(*e.parent)) {
      out.push_back({"unresolved-parent", e.name,
                     "parent entity '" + *e.parent + "' is not declared"});
      continue;
    }
    has_child.insert(*e.parent);
  }

  for (const auto& e : mm.entities) {
    // Cycle: walking the chain revisits an entity.
    std::set<std::string> seen;
    const Entity* cur = &e;
    while (cur && cur->parent && seen.insert(cur->name).second) {
      cur = mm.find(*cur->parent);
      if (cur && cur->name == e.name) {
        out.push_back({"inheritance-cycle", e.name, "inheritance cycle"});
        break;
      }
    }

    if (has_child.count(e.name) && !e.is_abstract) {
      out.push_back({"non-leaf-concrete", e.name, "non-leaf entity must be abstract"});
    }

    const auto entities = chain(mm, &e);
    std::map<std::string, int> feature_counts;
    int keys = 0;
    for (const Entity* owner : entities) {
      for (const auto& a : owner->attributes) {
        ++feature_counts[a.name];
        if (a.is_key) ++keys;
      }
      for (const auto& end : owner->ends) ++feature_counts[end.name];
    }
    std::set<std::string> own;
    bool declares_key = false;
    for (const auto& a : e.attributes) {
      own.insert(a.name);
      declares_key = declares_key || a.is_key;
    }
    for (const auto& end : e.ends) own.insert(end.name);
    for (const auto& [name, n] : feature_counts) {
      if (n > 1 && own.count(name)) {
        out.push_back({"duplicate-feature", e.name + "." + name,
                       "feature declared more than once in the inherited feature set"});
      }
    }
    if (keys > 1 && declares_key) {
      out.push_back({"multiple-keys", e.name, "more than one key attribute"});
    }
    for (const auto& a : e.attributes) {
      if (a.is_key && a.type != ValueType::String) {
        out.push_back({"key-not-string", e.name + "." + a.name,
                       "key attribute must have type String"});
      }
    }
    for (const auto& end : e.ends) {
      if (!target_exists(end.target)) {
        out.push_back({"unresolved-target", e.name + "." + end.name,
                       "target entity '" + end.target + "' is not declared"});
      }
    }
  }
}

void sort_unique(std::vector<Diagnostic>& d) {
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
}

}  // namespace

Metamodel parse_metamodel(std::string_view text, std::string name) {
  TokenStream ts(tokenize(text));
  Metamodel mm;
  mm.name = std::move(name);
  while (!ts.done()) {
    Entity e = parse_entity(ts);
    if (mm.find(e.name)) {
      throw ParseError(e.pos, "duplicate entity name '" + e.name + "'");
    }
    mm.entities.push_back(std::move(e));
  }
  return mm;
}

std::string print_metamodel(const Metamodel& mm) {
  std::ostringstream out;
  bool first = true;
  for (const auto& e : mm.entities) {
    if (!first) out << '\n';
    first = false;
    if (e.is_abstract) out << "abstract ";
    out << "entity " << e.name;
    if (e.parent) out << " extends " << *e.parent;
    out << " {\n";
    for (const auto& a : e.attributes) {
      out << "  " << a.name << " : " << (a.type == ValueType::String ? "String" : "Int");
      if (a.is_key) out << " (key)";
      out << ";\n";
    }
    for (const auto& end : e.ends) {
      const char* kind = end.ordered ? "seq"
                         : end.multiplicity == Multiplicity::Optional ? "opt"
                                                                      : "set";
      out << "  " << end.name << " : " << kind << '(' << end.target << ");\n";
    }
    out << "}\n";
  }
  return out.str();
}

std::vector<Diagnostic> validate(const Metamodel& mm) {
  std::vector<Diagnostic> out;
  validate_into(mm, [&](const std::string& t) { return mm.find(t) != nullptr; }, out);
  sort_unique(out);
  return out;
}

std::optional<Feature> lookup_feature(const Metamodel& mm, std::string_view entity,
                                      std::string_view feature) {
  return find_in_chain(chain(mm, &require(mm, entity)), feature);
}

const Attribute* key_attribute(const Metamodel& mm, std::string_view entity) {
  for (const Entity* e : chain(mm, &require(mm, entity))) {
    for (const auto& a : e->attributes) {
      if (a.is_key) return &a;
    }
  }
  return nullptr;
}

// --- Schema -----------------------------------------------------------------

Schema::Schema(std::vector<Metamodel> metamodels) : metamodels_(std::move(metamodels)) {}

const Entity* Schema::find_entity(std::string_view name) const {
  for (const auto& mm : metamodels_) {
    if (const Entity* e = mm.find(name)) return e;
  }
  return nullptr;
}

const Entity& Schema::entity(std::string_view name) const {
  const Entity* e = find_entity(name);
  if (!e) throw ModelError("unknown entity '" + std::string(name) + "'");
  return *e;
}

std::vector<std::string> Schema::ancestors(std::string_view entity) const {
  std::vector<std::string> out;
  for (const auto& mm : metamodels_) {
    if (const Entity* e = mm.find(entity)) {
      for (const Entity* a : chain(mm, e)) out.push_back(a->name);
      return out;
    }
  }
  throw ModelError("unknown entity '" + std::string(entity) + "'");
}

std::optional<Feature> Schema::lookup_feature(std::string_view entity,
                                              std::string_view feature) const {
  for (const auto& mm : metamodels_) {
    if (mm.find(entity)) return umt::lookup_feature(mm, entity, feature);
  }
  throw ModelError("unknown entity '" + std::string(entity) + "'");
}

const Attribute* Schema::key_attribute(std::string_view entity) const {
  for (const auto& mm : metamodels_) {
    if (mm.find(entity)) return umt::key_attribute(mm, entity);
  }
  throw ModelError("unknown entity '" + std::string(entity) + "'");
}

std::vector<Feature> Schema::all_features(std::string_view entity) const {
  std::vector<Feature> out;
  const auto names = ancestors(entity);
  for (auto it = names.rbegin(); it != names.rend(); ++it) {
    const Entity& e = this->entity(*it);
    for (const auto& a : e.attributes) out.push_back({&e, &a, nullptr});
    for (const auto& end : e.ends) out.push_back({&e, nullptr, &end});
  }
  return out;
}

bool Schema::is_subtype(std::string_view sub, std::string_view super) const {
  if (sub == super) return true;
  if (!find_entity(sub)) return false;
  for (const auto& a : ancestors(sub)) {
    if (a == super) return true;
  }
  return false;
}

std::optional<std::string> Schema::common_supertype(std::string_view a,
                                                    std::string_view b) const {
  if (a == b) return std::string(a);
  if (!find_entity(a) || !find_entity(b)) return std::nullopt;
  for (const auto& candidate : ancestors(a)) {
    if (is_subtype(b, candidate)) return candidate;
  }
  return std::nullopt;
}

std::vector<std::string> Schema::entity_names() const {
  std::vector<std::string> out;
  for (const auto& mm : metamodels_) {
    for (const auto& e : mm.entities) out.push_back(e.name);
  }
  return out;
}

std::vector<Diagnostic> validate(const Schema& schema) {
  std::vector<Diagnostic> out;
  std::map<std::string, int> counts;
  for (const auto& mm : schema.metamodels()) {
    validate_into(mm,
                  [&](const std::string& t) { return schema.has_entity(t); }, out);
    std::set<std::string> local;
    for (const auto& e : mm.entities) {
      if (local.insert(e.name).second) ++counts[e.name];
    }
  }
  for (const auto& [name, n] : counts) {
    if (n > 1) {
      out.push_back({"duplicate-entity", name,
                     "entity name declared in more than one metamodel"});
    }
  }
  sort_unique(out);
  return out;
}

}  // namespace umt
