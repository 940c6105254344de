#include <cctype>
#include <charconv>
#include <sstream>

#include "umt/model.hpp"

namespace umt {

namespace {

// Scanner over one statement line of the model format.
class LineScanner {
 public:
  LineScanner(std::string_view line, int line_no) : line_(line), line_no_(line_no) {}

  void skip_space() {
    while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) {
      ++pos_;
    }
  }

  bool done() {
    skip_space();
    return pos_ >= line_.size();
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < line_.size() && line_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  std::string ident() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < line_.size() &&
           (std::isalnum(static_cast<unsigned char>(line_[pos_])) || line_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_ || std::isdigit(static_cast<unsigned char>(line_[start]))) {
      pos_ = start;
      fail("expected identifier");
    }
    return std::string(line_.substr(start, pos_ - start));
  }

  Value literal() {
    skip_space();
    if (accept('"')) {
      const std::size_t start = pos_;
      while (pos_ < line_.size() && line_[pos_] != '"') ++pos_;
      if (pos_ >= line_.size()) fail("unterminated string literal");
      std::string s(line_.substr(start, pos_ - start));
      ++pos_;
      return Value::string(std::move(s));
    }
    const std::size_t start = pos_;
    if (pos_ < line_.size() && line_[pos_] == '-') ++pos_;
    while (pos_ < line_.size() && std::isdigit(static_cast<unsigned char>(line_[pos_]))) {
      ++pos_;
    }
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(line_.data() + start, line_.data() + pos_, v);
    if (ec != std::errc() || ptr != line_.data() + pos_ || start == pos_) {
      pos_ = start;
      fail("expected string or integer literal");
    }
    return Value::integer(v);
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError({line_no_, static_cast<int>(pos_) + 1}, message);
  }

  SourcePos pos() const { return {line_no_, static_cast<int>(pos_) + 1}; }

 private:
  std::string_view line_;
  int line_no_;
  std::size_t pos_ = 0;
};

}  // namespace

ModelState parse_model(std::string_view text, std::shared_ptr<const Schema> schema,
                       const ModelState* align) {
  ModelState state(std::move(schema));
  std::uint64_t next_fresh = 1;
  if (align) {
    for (ObjectId id : align->objects()) next_fresh = std::max(next_fresh, id.value + 1);
  }

  auto object = [&](const std::string& label, const LineScanner& sc) {
    auto id = state.find_label(label);
    if (!id) sc.fail("object '" + label + "' is not declared before use");
    return *id;
  };

  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    LineScanner sc(line, line_no);
    if (sc.done()) {
      if (end == text.size()) break;
      continue;
    }
    try {
      const std::string first = sc.ident();
      if (sc.accept('.')) {
        const std::string attr = sc.ident();
        sc.expect('=');
        const SourcePos value_pos = sc.pos();
        const Value value = sc.literal();
        if (!sc.done()) sc.fail("unexpected text after value");
        const ObjectId id = object(first, sc);
        auto feature = state.schema().lookup_feature(state.entity_of(id), attr);
        if (feature && !feature->is_attribute()) {
          throw ParseError(value_pos, "end '" + attr +
                                          "' must be filled with the membership form 'x : " +
                                          first + "." + attr + "'");
        }
        state.set(id, attr, value);
      } else {
        sc.expect(':');
        const std::string second = sc.ident();
        if (sc.accept('.')) {
          const std::string role = sc.ident();
          if (!sc.done()) sc.fail("unexpected text after membership");
          const ObjectId member = object(first, sc);
          const ObjectId owner = object(second, sc);
          state.insert(owner, role, member);
        } else {
          if (!sc.done()) sc.fail("unexpected text after declaration");
          std::optional<ObjectId> id;
          if (align) {
            auto existing = align->find_label(first);
            if (existing && align->entity_of(*existing) == second) {
              id = *existing;
            } else {
              id = ObjectId{next_fresh++};
            }
          }
          state.declare(second, first, id);
        }
      }
    } catch (const ModelError& e) {
      throw ParseError({line_no, 1}, e.what());
    }
    if (end == text.size()) break;
  }
  return state;
}

std::string serialize_model(const ModelState& state) {
  std::ostringstream out;
  for (ObjectId id : state.objects()) {
    const std::string& label = state.label_of(id);
    out << label << " : " << state.entity_of(id) << '\n';
    for (const auto& [name, value] : state.slots(id)) {
      if (value.is_int()) {
        out << label << '.' << name << " = " << value.as_int() << '\n';
      } else if (value.is_string()) {
        out << label << '.' << name << " = \"" << value.as_string() << "\"\n";
      }
    }
  }
  for (ObjectId id : state.objects()) {
    const std::string& label = state.label_of(id);
    for (const auto& [name, value] : state.slots(id)) {
      if (!value.is_collection()) continue;
      for (const auto& item : value.as_collection().items) {
        out << state.label_of(item.as_ref()) << " : " << label << '.' << name << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace umt
