// Copyright 2026 The CSKB Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cctype>

#include "cskb/error.h"
#include "cskb/query.h"
#include "cskb/text.h"

namespace cskb {
namespace {

[[noreturn]] void Fail(std::size_t column, const std::string& message) {
  throw Error(ErrorCode::kMalformedQuery,
              "column " + std::to_string(column + 1) + ": " + message);
}

bool IsVarChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Recognizes "?name" at `pos`; returns the end position or npos.
std::size_t VariableEnd(std::string_view text, std::size_t pos) {
  if (pos >= text.size() || text[pos] != '?') return std::string_view::npos;
  std::size_t end = pos + 1;
  while (end < text.size() && IsVarChar(text[end])) ++end;
  return end == pos + 1 ? std::string_view::npos : end;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

// Parses one pattern field. `allow_template` is true for objects only.
Term ParseField(std::string_view raw, std::size_t column, bool allow_template) {
  std::string_view field = Trim(raw);
  if (field.empty()) Fail(column, "empty pattern field");
  std::size_t q = field.find('?');
  if (q == std::string_view::npos) return Term::Constant(field);
  std::size_t end = VariableEnd(field, q);
  if (end == std::string_view::npos) Fail(column + q, "bad variable name");
  if (field.find('?', end) != std::string_view::npos) {
    Fail(column, "a field may hold at most one variable");
  }
  std::string name(field.substr(q + 1, end - q - 1));
  if (q == 0 && end == field.size()) return Term::Variable(std::move(name));
  if (!allow_template) Fail(column, "templates are only allowed as objects");
  // Normalize around a sentinel so the affixes keep their inner spacing.
  std::string marked =
      std::string(field.substr(0, q)) + '\x01' + std::string(field.substr(end));
  std::string normalized = NormalizeText(marked);
  std::size_t s = normalized.find('\x01');
  return Term::Template(normalized.substr(0, s), std::move(name),
                        normalized.substr(s + 1));
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ConjunctiveQuery Parse() {
    ConjunctiveQuery query;
    SkipSpace();
    bool explicit_projection = false;
    if (ConsumeKeyword("SELECT") ||
        (query.aggregate = ConsumeKeyword("COUNT"))) {
      SkipSpace();
      std::size_t end = VariableEnd(text_, pos_);
      if (end == std::string_view::npos) Fail(pos_, "expected ?variable");
      query.projection = std::string(text_.substr(pos_ + 1, end - pos_ - 1));
      explicit_projection = true;
      pos_ = end;
      SkipSpace();
      if (Peek() == ':') ++pos_;
      SkipSpace();
    }
    query.patterns.push_back(ParsePattern());
    SkipSpace();
    while (Peek() == '.' || Peek() == '&' || Peek() == ',') {
      ++pos_;
      SkipSpace();
      if (pos_ == text_.size()) break;
      query.patterns.push_back(ParsePattern());
      SkipSpace();
    }
    if (pos_ != text_.size()) Fail(pos_, "unexpected trailing input");
    if (!explicit_projection) {
      for (const Pattern& p : query.patterns) {
        for (const Term* t : {&p.subject, &p.object}) {
          if (query.projection.empty() && t->has_variable()) {
            query.projection = t->value;
          }
        }
      }
    }
    query.Validate();
    return query;
  }

 private:
  Pattern ParsePattern() {
    if (Peek() != '(') Fail(pos_, "expected '('");
    std::size_t close = text_.find(')', pos_);
    if (close == std::string_view::npos) Fail(pos_, "missing ')'");
    std::size_t start = pos_ + 1;
    std::string_view body = text_.substr(start, close - start);
    auto fields = SplitFields(body, ',');
    if (fields.size() != 3) {
      Fail(pos_, "a pattern needs exactly 3 comma-separated fields");
    }
    std::size_t col1 = start + fields[0].size() + 1;
    std::size_t col2 = col1 + fields[1].size() + 1;
    Pattern p;
    p.subject = ParseField(fields[0], start, /*allow_template=*/false);
    auto predicate = TryParsePredicate(Trim(fields[1]));
    if (!predicate) {
      Fail(col1, "unknown predicate '" + std::string(Trim(fields[1])) + "'");
    }
    p.predicate = *predicate;
    p.object = ParseField(fields[2], col2, /*allow_template=*/true);
    pos_ = close + 1;
    return p;
  }

  bool ConsumeKeyword(std::string_view keyword) {
    if (text_.size() - pos_ < keyword.size()) return false;
    for (std::size_t i = 0; i < keyword.size(); ++i) {
      if (std::toupper(static_cast<unsigned char>(text_[pos_ + i])) !=
          keyword[i]) {
        return false;
      }
    }
    std::size_t after = pos_ + keyword.size();
    if (after < text_.size() && IsVarChar(text_[after])) return false;
    pos_ = after;
    return true;
  }

  void SkipSpace() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  char Peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Term Term::Constant(std::string_view text) {
  Term t;
  t.kind = Kind::kConstant;
  t.value = NormalizeText(text);
  return t;
}

Term Term::Variable(std::string name) {
  Term t;
  t.kind = Kind::kVariable;
  t.value = std::move(name);
  return t;
}

Term Term::Template(std::string prefix, std::string name, std::string suffix) {
  Term t;
  t.kind = Kind::kTemplate;
  t.value = std::move(name);
  t.prefix = std::move(prefix);
  t.suffix = std::move(suffix);
  return t;
}

std::string Term::ToString() const {
  switch (kind) {
    case Kind::kConstant:
      return value;
    case Kind::kVariable:
      return "?" + value;
    case Kind::kTemplate:
      return prefix + "?" + value + suffix;
  }
  return value;
}

std::string Pattern::ToString() const {
  return "(" + subject.ToString() + ", " +
         std::string(PredicateName(predicate)) + ", " + object.ToString() + ")";
}

std::string ConjunctiveQuery::ToString() const {
  std::string out = (aggregate ? "COUNT ?" : "SELECT ?") + projection + " :";
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    out += (i == 0 ? " " : " . ") + patterns[i].ToString();
  }
  return out;
}

void ConjunctiveQuery::Validate() const {
  auto fail = [](const std::string& m) {
    throw Error(ErrorCode::kMalformedQuery, m);
  };
  if (patterns.empty() || patterns.size() > 2) {
    fail("a query needs 1 or 2 patterns, got " +
         std::to_string(patterns.size()));
  }
  for (const Pattern& p : patterns) {
    if (!p.subject.has_variable() && !p.object.has_variable()) {
      fail("pattern " + p.ToString() + " has no variable");
    }
    if (p.subject.kind == Term::Kind::kTemplate) {
      fail("templates are only allowed as objects");
    }
    for (const Term* t : {&p.subject, &p.object}) {
      if (t->has_variable() && t->value.empty()) fail("empty variable name");
      if (t->kind == Term::Kind::kConstant && t->value.empty()) {
        fail("empty constant in " + p.ToString());
      }
    }
    if (p.object.kind == Term::Kind::kTemplate && p.object.prefix.empty() &&
        p.object.suffix.empty()) {
      fail("template without constant text");
    }
  }
  auto mentions = [](const Pattern& p, const std::string& v) {
    return (p.subject.has_variable() && p.subject.value == v) ||
           (p.object.has_variable() && p.object.value == v);
  };
  bool bound = false;
  for (const Pattern& p : patterns) bound = bound || mentions(p, projection);
  if (projection.empty() || !bound) {
    fail("projection ?" + projection + " is not bound by any pattern");
  }
  if (patterns.size() == 2) {
    bool shared = false;
    for (const Term* t : {&patterns[0].subject, &patterns[0].object}) {
      if (t->has_variable() && mentions(patterns[1], t->value)) shared = true;
    }
    if (!shared) fail("the two patterns share no variable");
  }
}

Term ParseTerm(std::string_view text, bool allow_template) {
  return ParseField(text, 0, allow_template);
}

ConjunctiveQuery ParseQuery(std::string_view text) {
  return Parser(text).Parse();
}

}  // namespace cskb
