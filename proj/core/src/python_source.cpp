// Copyright 2026 The AutoSafe Authors.
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

#include "autosafe/python_source.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <regex>
#include <sstream>

namespace autosafe::python {
namespace {

enum class TokenType { kName, kOp, kString, kNumber };

struct Token {
  TokenType type = TokenType::kOp;
  std::string text;
  std::size_t line = 0;
  // Identifiers referenced from f-string replacement fields.
  std::vector<std::string> fstring_names;
};

struct LogicalLine {
  std::size_t first_line = 0;
  std::size_t last_line = 0;
  std::size_t indent = 0;
  std::vector<Token> tokens;
};

constexpr std::array<std::string_view, 35> kKeywords = {
    "False",  "None",     "True",    "and",    "as",       "assert", "async",
    "await",  "break",    "class",   "continue", "def",    "del",    "elif",
    "else",   "except",   "finally", "for",    "from",     "global", "if",
    "import", "in",       "is",      "lambda", "nonlocal", "not",    "or",
    "pass",   "raise",    "return",  "try",    "while",    "with",   "yield"};

constexpr std::array<std::string_view, 24> kMultiCharOps = {
    "**=", "//=", ">>=", "<<=", "...", "->", ":=", "==", "!=", "<=", ">=", "+=",
    "-=",  "*=",  "/=",  "%=",  "&=",  "|=", "^=", "@=", "**", "//", "<<", ">>"};

bool is_ident_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c >= 0x80;
}

bool is_ident_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;
}

bool is_string_prefix(std::string_view word) {
  if (word.size() > 2) return false;
  std::string lower;
  for (char c : word) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  static constexpr std::array<std::string_view, 10> kPrefixes = {
      "r", "u", "b", "f", "br", "rb", "fr", "rf", "ur", "ru"};
  return std::find(kPrefixes.begin(), kPrefixes.end(), lower) != kPrefixes.end();
}

bool is_augmented_assign(std::string_view op) {
  return op.size() >= 2 && op.back() == '=' && op != "==" && op != "!=" &&
         op != "<=" && op != ">=" && op != ":=";
}

// Identifiers inside {...} replacement fields of an f-string body.
std::vector<std::string> fstring_references(std::string_view body) {
  std::vector<std::string> names;
  std::size_t i = 0;
  int depth = 0;
  char prev_sig = 0;
  while (i < body.size()) {
    const char c = body[i];
    if (depth == 0) {
      if (c == '{' && i + 1 < body.size() && body[i + 1] == '{') {
        i += 2;
        continue;
      }
      if (c == '{') {
        depth = 1;
        prev_sig = 0;
      }
      ++i;
      continue;
    }
    if (c == '{') ++depth;
    if (c == '}') --depth;
    if (c == '\'' || c == '"') {
      const char q = c;
      ++i;
      while (i < body.size() && body[i] != q) ++i;
      ++i;
      prev_sig = q;
      continue;
    }
    if (is_ident_start(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < body.size() && is_ident_char(static_cast<unsigned char>(body[j]))) ++j;
      std::string word(body.substr(i, j - i));
      if (prev_sig != '.' && !is_keyword(word)) names.push_back(word);
      i = j;
      prev_sig = 'a';
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < body.size() && is_ident_char(static_cast<unsigned char>(body[i]))) ++i;
      prev_sig = '0';
      continue;
    }
    if (!std::isspace(static_cast<unsigned char>(c))) prev_sig = c;
    ++i;
  }
  return names;
}

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view src) : src_(src) {}

  std::vector<LogicalLine> run() {
    while (pos_ < src_.size()) {
      if (at_line_start_) {
        if (!begin_physical_line()) continue;
      }
      scan_token();
    }
    if (!brackets_.empty()) {
      throw SyntaxUnparseable(brackets_.back().second, "unclosed bracket");
    }
    finish_line();
    return std::move(lines_);
  }

 private:
  // Handles indentation at the start of a physical line. Returns false when
  // the line was blank or comment-only and has been consumed.
  bool begin_physical_line() {
    std::size_t col = 0;
    std::size_t i = pos_;
    while (i < src_.size() && (src_[i] == ' ' || src_[i] == '\t' || src_[i] == '\f')) {
      col = src_[i] == '\t' ? (col / 8 + 1) * 8 : col + 1;
      ++i;
    }
    if (i >= src_.size()) {
      pos_ = i;
      return false;
    }
    if (src_[i] == '#' || src_[i] == '\n' || src_[i] == '\r') {
      while (i < src_.size() && src_[i] != '\n') ++i;
      if (i < src_.size()) {
        ++i;
        ++line_;
      }
      pos_ = i;
      return false;
    }
    pos_ = i;
    at_line_start_ = false;
    current_ = LogicalLine{line_, line_, col, {}};
    in_line_ = true;
    return true;
  }

  void finish_line() {
    if (in_line_ && !current_.tokens.empty()) {
      current_.last_line = last_end_line_;
      lines_.push_back(std::move(current_));
    }
    in_line_ = false;
    current_ = LogicalLine{};
  }

  void push(TokenType type, std::string text, std::size_t line) {
    current_.tokens.push_back(Token{type, std::move(text), line, {}});
    last_end_line_ = line;
  }

  void scan_token() {
    const char c = src_[pos_];
    const auto uc = static_cast<unsigned char>(c);
    if (c == ' ' || c == '\t' || c == '\f' || c == '\r') {
      ++pos_;
      return;
    }
    if (c == '#') {
      while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      return;
    }
    if (c == '\\') {
      std::size_t j = pos_ + 1;
      if (j < src_.size() && src_[j] == '\r') ++j;
      if (j < src_.size() && src_[j] == '\n') {
        pos_ = j + 1;
        ++line_;
        return;
      }
      throw SyntaxUnparseable(line_, "stray backslash");
    }
    if (c == '\n') {
      ++pos_;
      ++line_;
      if (brackets_.empty()) {
        finish_line();
        at_line_start_ = true;
      }
      return;
    }
    if (c == '"' || c == '\'') {
      scan_string(pos_, false);
      return;
    }
    if (is_ident_start(uc)) {
      std::size_t j = pos_;
      while (j < src_.size() && is_ident_char(static_cast<unsigned char>(src_[j]))) ++j;
      std::string_view word = src_.substr(pos_, j - pos_);
      if (j < src_.size() && (src_[j] == '"' || src_[j] == '\'') &&
          is_string_prefix(word)) {
        const bool fstring = word.find_first_of("fF") != std::string_view::npos;
        scan_string(j, fstring);
        return;
      }
      push(TokenType::kName, std::string(word), line_);
      pos_ = j;
      return;
    }
    if (std::isdigit(uc) ||
        (c == '.' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      std::size_t j = pos_;
      while (j < src_.size() &&
             (is_ident_char(static_cast<unsigned char>(src_[j])) || src_[j] == '.')) {
        ++j;
      }
      push(TokenType::kNumber, std::string(src_.substr(pos_, j - pos_)), line_);
      pos_ = j;
      return;
    }
    if (c == '(' || c == '[' || c == '{') {
      brackets_.emplace_back(c, line_);
      push(TokenType::kOp, std::string(1, c), line_);
      ++pos_;
      return;
    }
    if (c == ')' || c == ']' || c == '}') {
      const char open = c == ')' ? '(' : c == ']' ? '[' : '{';
      if (brackets_.empty() || brackets_.back().first != open) {
        throw SyntaxUnparseable(line_, std::string("unbalanced '") + c + "'");
      }
      brackets_.pop_back();
      push(TokenType::kOp, std::string(1, c), line_);
      ++pos_;
      return;
    }
    for (std::string_view op : kMultiCharOps) {
      if (src_.substr(pos_, op.size()) == op) {
        push(TokenType::kOp, std::string(op), line_);
        pos_ += op.size();
        return;
      }
    }
    push(TokenType::kOp, std::string(1, c), line_);
    ++pos_;
  }

  // `quote_pos` points at the opening quote; any prefix has been skipped.
  void scan_string(std::size_t quote_pos, bool fstring) {
    const std::size_t start_line = line_;
    const char q = src_[quote_pos];
    const bool triple = src_.substr(quote_pos, 3) == std::string(3, q);
    std::size_t i = quote_pos + (triple ? 3 : 1);
    const std::size_t body_start = i;
    std::size_t body_end = std::string_view::npos;
    while (i < src_.size()) {
      const char c = src_[i];
      if (c == '\\') {
        if (i + 1 < src_.size() && src_[i + 1] == '\n') ++line_;
        i += 2;
        continue;
      }
      if (c == '\n') {
        if (!triple) throw SyntaxUnparseable(start_line, "unterminated string literal");
        ++line_;
        ++i;
        continue;
      }
      if (c == q) {
        if (!triple) {
          body_end = i;
          i += 1;
          break;
        }
        if (src_.substr(i, 3) == std::string(3, q)) {
          body_end = i;
          i += 3;
          break;
        }
      }
      ++i;
    }
    if (body_end == std::string_view::npos) {
      throw SyntaxUnparseable(start_line, "unterminated string literal");
    }
    Token tok{TokenType::kString, "<str>", start_line, {}};
    if (fstring) {
      tok.fstring_names = fstring_references(src_.substr(body_start, body_end - body_start));
    }
    current_.tokens.push_back(std::move(tok));
    last_end_line_ = line_;
    pos_ = i;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t last_end_line_ = 1;
  bool at_line_start_ = true;
  bool in_line_ = false;
  LogicalLine current_;
  std::vector<LogicalLine> lines_;
  std::vector<std::pair<char, std::size_t>> brackets_;
};

std::vector<LogicalLine> tokenize(std::string_view src) {
  return Tokenizer(src).run();
}

bool starts_with_word(const LogicalLine& ll, std::string_view word) {
  return !ll.tokens.empty() && ll.tokens.front().type == TokenType::kName &&
         ll.tokens.front().text == word;
}

bool is_clause_continuation(const LogicalLine& ll) {
  return starts_with_word(ll, "else") || starts_with_word(ll, "elif") ||
         starts_with_word(ll, "except") || starts_with_word(ll, "finally");
}

// Index of the `def`/`class` keyword in the head line, skipping `async`.
std::size_t head_keyword_index(const LogicalLine& ll) {
  if (ll.tokens.size() > 1 && ll.tokens[0].text == "async" &&
      ll.tokens[1].type == TokenType::kName) {
    return 1;
  }
  return 0;
}

// Names bound by an assignment statement (including augmented and annotated
// assignments). Subscript and attribute targets bind their base name.
std::vector<std::string> assignment_targets(const LogicalLine& ll) {
  const auto& t = ll.tokens;
  std::size_t depth = 0;
  std::vector<std::size_t> eq_positions;
  std::size_t aug_pos = std::string::npos;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (depth == 0 && t[i].type == TokenType::kName && t[i].text == "lambda") break;
    if (t[i].type != TokenType::kOp) continue;
    const auto& op = t[i].text;
    if (op == "(" || op == "[" || op == "{") ++depth;
    if ((op == ")" || op == "]" || op == "}") && depth > 0) --depth;
    if (depth != 0) continue;
    if (op == "=") eq_positions.push_back(i);
    if (is_augmented_assign(op) && aug_pos == std::string::npos) aug_pos = i;
  }
  std::size_t end = 0;
  if (!eq_positions.empty()) {
    end = eq_positions.back();
  } else if (aug_pos != std::string::npos) {
    end = aug_pos;
  } else if (t.size() > 1 && t[0].type == TokenType::kName && t[1].text == ":") {
    // Bare annotation `x: int`.
    return {t[0].text};
  } else {
    return {};
  }
  std::vector<std::string> names;
  std::vector<bool> grouping;  // per open bracket: tuple/list grouping vs subscript/call
  bool after_colon = false;
  for (std::size_t i = 0; i < end; ++i) {
    const Token& tok = t[i];
    if (tok.type == TokenType::kOp) {
      const auto& op = tok.text;
      if (op == "(" || op == "[" || op == "{") {
        const bool follows_operand =
            i > 0 && (t[i - 1].type == TokenType::kName ||
                      t[i - 1].type == TokenType::kString ||
                      t[i - 1].text == ")" || t[i - 1].text == "]");
        grouping.push_back(!follows_operand && !(grouping.size() > 0 && !grouping.back()));
      } else if ((op == ")" || op == "]" || op == "}") && !grouping.empty()) {
        grouping.pop_back();
      } else if (op == ":" && grouping.empty()) {
        after_colon = true;
      } else if (op == "=" && grouping.empty()) {
        after_colon = false;
      }
      continue;
    }
    if (tok.type != TokenType::kName || after_colon || is_keyword(tok.text)) continue;
    const bool attr = i > 0 && t[i - 1].text == ".";
    const bool inside_subscript = !grouping.empty() && !grouping.back();
    if (!attr && !inside_subscript) names.push_back(tok.text);
  }
  return names;
}

struct ImportInfo {
  std::vector<std::string> binds;
  bool star = false;
  bool future = false;
};

ImportInfo import_bindings(const LogicalLine& ll) {
  ImportInfo info;
  const auto& t = ll.tokens;
  if (t.empty()) return info;
  std::size_t i = 0;
  if (t[0].text == "from") {
    std::string module;
    i = 1;
    while (i < t.size() && t[i].text != "import") module += t[i++].text;
    info.future = module == "__future__";
    ++i;  // skip `import`
    while (i < t.size()) {
      const auto& tok = t[i];
      if (tok.text == "*") {
        info.star = true;
        ++i;
        continue;
      }
      if (tok.type == TokenType::kName) {
        std::string bound = tok.text;
        if (i + 2 < t.size() && t[i + 1].text == "as") {
          bound = t[i + 2].text;
          i += 2;
        }
        info.binds.push_back(bound);
      }
      ++i;
    }
    return info;
  }
  if (t[0].text == "import") {
    i = 1;
    bool expect_name = true;
    while (i < t.size()) {
      const auto& tok = t[i];
      if (tok.text == ",") {
        expect_name = true;
        ++i;
        continue;
      }
      if (expect_name && tok.type == TokenType::kName) {
        std::string bound = tok.text;  // first component of a dotted name
        std::size_t j = i + 1;
        while (j + 1 < t.size() && t[j].text == ".") j += 2;
        if (j + 1 < t.size() && t[j].text == "as") {
          bound = t[j + 1].text;
          j += 2;
        }
        info.binds.push_back(bound);
        i = j;
        expect_name = false;
        continue;
      }
      ++i;
    }
  }
  return info;
}

std::vector<std::string_view> split_lines(std::string_view src) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= src.size()) {
    const auto nl = src.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < src.size()) lines.push_back(src.substr(start));
      break;
    }
    lines.push_back(src.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

void add_unique(std::vector<std::string>& v, const std::string& s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

void classify(TopLevelUnit& unit, const std::vector<const LogicalLine*>& lls) {
  // Skip decorators to find the head statement.
  std::size_t head = 0;
  while (head < lls.size() && !lls[head]->tokens.empty() &&
         lls[head]->tokens.front().text == "@" && lls[head]->indent == 0) {
    ++head;
  }
  for (const auto* ll : lls) {
    for (std::size_t i = 0; i < ll->tokens.size(); ++i) {
      const Token& tok = ll->tokens[i];
      for (const auto& n : tok.fstring_names) unit.references.insert(n);
      if (tok.type != TokenType::kName || is_keyword(tok.text)) continue;
      if (i > 0 && ll->tokens[i - 1].text == ".") continue;
      unit.references.insert(tok.text);
    }
  }
  if (head >= lls.size()) {
    throw SyntaxUnparseable(unit.first_line, "decorator without a definition");
  }
  const LogicalLine& h = *lls[head];
  const std::size_t k = head_keyword_index(h);
  const std::string& kw = h.tokens[k].text;
  if (kw == "def" || kw == "class") {
    if (k + 1 >= h.tokens.size() || h.tokens[k + 1].type != TokenType::kName) {
      throw SyntaxUnparseable(h.first_line, "malformed " + kw + " header");
    }
    if (kw == "def" && (k + 2 >= h.tokens.size() || h.tokens[k + 2].text != "(")) {
      throw SyntaxUnparseable(h.first_line, "malformed def header");
    }
    const bool has_colon = std::any_of(h.tokens.begin(), h.tokens.end(),
                                       [](const Token& t) { return t.text == ":"; });
    if (!has_colon) throw SyntaxUnparseable(h.first_line, "missing ':' after " + kw);
    unit.kind = kw == "def" ? UnitKind::kFunction : UnitKind::kClass;
    unit.binds.push_back(h.tokens[k + 1].text);
    return;
  }
  if (kw == "import" || kw == "from") {
    const auto info = import_bindings(h);
    unit.kind = UnitKind::kImport;
    unit.binds = info.binds;
    unit.star_import = info.star;
    unit.future_import = info.future;
    return;
  }
  static constexpr std::array<std::string_view, 7> kCompound = {
      "if", "try", "for", "while", "with", "async", "match"};
  const bool compound =
      std::find(kCompound.begin(), kCompound.end(), kw) != kCompound.end() &&
      (kw != "match" || (!h.tokens.empty() && h.tokens.back().text == ":"));
  if (compound) {
    unit.kind = UnitKind::kCompound;
    for (const auto* ll : lls) {
      if (ll->tokens.empty()) continue;
      const std::size_t kk = head_keyword_index(*ll);
      const auto& first = ll->tokens[kk].text;
      if (first == "import" || first == "from") {
        const auto info = import_bindings(*ll);
        for (const auto& b : info.binds) add_unique(unit.binds, b);
        unit.star_import = unit.star_import || info.star;
      } else if ((first == "def" || first == "class") && kk + 1 < ll->tokens.size()) {
        add_unique(unit.binds, ll->tokens[kk + 1].text);
      } else {
        for (const auto& b : assignment_targets(*ll)) add_unique(unit.binds, b);
      }
    }
    return;
  }
  auto targets = assignment_targets(h);
  if (!targets.empty()) {
    unit.kind = UnitKind::kAssignment;
    for (const auto& b : targets) add_unique(unit.binds, b);
    return;
  }
  unit.kind = UnitKind::kOther;
}

}  // namespace

bool is_keyword(std::string_view name) {
  return std::find(kKeywords.begin(), kKeywords.end(), name) != kKeywords.end();
}

bool is_identifier(std::string_view name) {
  if (name.empty() || !is_ident_start(static_cast<unsigned char>(name[0]))) return false;
  for (char c : name) {
    if (!is_ident_char(static_cast<unsigned char>(c))) return false;
  }
  return !is_keyword(name);
}

std::vector<TopLevelUnit> split_top_level(std::string_view source) {
  const auto lls = tokenize(source);
  const auto lines = split_lines(source);

  std::vector<TopLevelUnit> units;
  std::vector<std::vector<const LogicalLine*>> unit_lines;
  bool pending_decorator = false;
  for (const auto& ll : lls) {
    if (ll.indent == 0) {
      const bool continues =
          !units.empty() && (pending_decorator || is_clause_continuation(ll));
      if (!continues) {
        units.push_back(TopLevelUnit{});
        units.back().first_line = ll.first_line;
        unit_lines.emplace_back();
      }
      const bool decorator = !ll.tokens.empty() && ll.tokens.front().text == "@";
      pending_decorator = decorator;
    } else if (units.empty()) {
      throw SyntaxUnparseable(ll.first_line, "unexpected indent");
    }
    units.back().last_line = ll.last_line;
    unit_lines.back().push_back(&ll);
  }
  if (pending_decorator) {
    throw SyntaxUnparseable(units.back().first_line, "decorator without a definition");
  }
  for (std::size_t u = 0; u < units.size(); ++u) {
    auto& unit = units[u];
    classify(unit, unit_lines[u]);
    std::ostringstream text;
    for (std::size_t l = unit.first_line; l <= unit.last_line && l <= lines.size(); ++l) {
      text << lines[l - 1] << '\n';
    }
    unit.text = text.str();
  }
  return units;
}

FunctionSlice extract_function(std::string_view source,
                               std::string_view entry_point) {
  const auto units = split_top_level(source);
  const std::string entry(entry_point);

  std::optional<std::size_t> entry_idx;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (units[i].kind == UnitKind::kFunction && units[i].binds.front() == entry) {
      entry_idx = i;
    }
  }
  if (!entry_idx) throw EntryPointNotFound(entry);

  std::map<std::string, std::vector<std::size_t>> binders;
  for (std::size_t i = 0; i < units.size(); ++i) {
    for (const auto& b : units[i].binds) binders[b].push_back(i);
  }

  std::vector<bool> selected(units.size(), false);
  selected[*entry_idx] = true;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (units[i].star_import || units[i].future_import) selected[i] = true;
  }

  std::vector<std::size_t> work = {*entry_idx};
  std::set<std::string> seen = {entry};
  while (!work.empty()) {
    const std::size_t u = work.back();
    work.pop_back();
    for (const auto& name : units[u].references) {
      if (!seen.insert(name).second) continue;
      auto it = binders.find(name);
      if (it == binders.end()) continue;
      // Everything from the last complete rebinding (def/class/import)
      // onwards contributes to the value seen at call time.
      const auto& idxs = it->second;
      std::size_t from = 0;
      for (std::size_t k = 0; k < idxs.size(); ++k) {
        const auto kind = units[idxs[k]].kind;
        if (kind == UnitKind::kFunction || kind == UnitKind::kClass ||
            kind == UnitKind::kImport) {
          from = k;
        }
      }
      for (std::size_t k = from; k < idxs.size(); ++k) {
        if (!selected[idxs[k]]) {
          selected[idxs[k]] = true;
          work.push_back(idxs[k]);
        }
      }
    }
  }

  FunctionSlice slice;
  slice.entry_point = entry;
  slice.entry_first_line = units[*entry_idx].first_line;
  std::string out;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (!selected[i]) continue;
    if (!out.empty()) out += '\n';
    out += units[i].text;
    slice.unit_first_lines.push_back(units[i].first_line);
  }
  slice.source = std::move(out);
  return slice;
}

std::optional<std::size_t> positional_arity(std::string_view source,
                                            std::string_view function) {
  std::vector<LogicalLine> lls;
  try {
    lls = tokenize(source);
  } catch (const SyntaxUnparseable&) {
    return std::nullopt;
  }
  const LogicalLine* def_line = nullptr;
  std::size_t def_k = 0;
  for (const auto& ll : lls) {
    const std::size_t k = head_keyword_index(ll);
    if (ll.tokens.size() > k + 2 && ll.tokens[k].text == "def" &&
        ll.tokens[k + 1].text == function && ll.tokens[k + 2].text == "(") {
      def_line = &ll;
      def_k = k;
    }
  }
  if (def_line == nullptr) return std::nullopt;
  const auto& t = def_line->tokens;
  std::size_t count = 0;
  int depth = 0;
  int open_lambdas = 0;  // commas between `lambda` and its colon are not separators
  std::vector<const Token*> param;
  auto flush = [&]() -> bool {  // returns false once positional params end
    if (param.empty()) return true;
    const std::string& first = param.front()->text;
    if (first == "*" || first == "**") return false;
    if (first != "/") ++count;
    param.clear();
    return true;
  };
  for (std::size_t i = def_k + 3; i < t.size(); ++i) {
    const auto& tok = t[i];
    if (tok.type == TokenType::kOp) {
      if (tok.text == "(" || tok.text == "[" || tok.text == "{") ++depth;
      if (tok.text == ")" || tok.text == "]" || tok.text == "}") {
        if (depth == 0) {
          flush();
          return count;
        }
        --depth;
      }
      if (depth == 0 && open_lambdas > 0 && (tok.text == "," || tok.text == ":")) {
        if (tok.text == ":") --open_lambdas;
        param.push_back(&tok);
        continue;
      }
      if (depth == 0 && tok.text == ",") {
        if (!flush()) return count;
        continue;
      }
    }
    if (depth == 0 && tok.type == TokenType::kName && tok.text == "lambda") ++open_lambdas;
    param.push_back(&tok);
  }
  return count;
}

std::optional<std::string> last_function_name(std::string_view source) {
  static const std::regex kDef(R"(^([ \t]*)(?:async[ \t]+)?def[ \t]+([A-Za-z_][A-Za-z0-9_]*)[ \t]*\()");
  std::optional<std::string> top_level;
  std::optional<std::string> any_level;
  for (auto line : split_lines(source)) {
    std::match_results<std::string_view::const_iterator> m;
    if (std::regex_search(line.begin(), line.end(), m, kDef)) {
      any_level = m[2].str();
      if (m[1].length() == 0) top_level = m[2].str();
    }
  }
  return top_level ? top_level : any_level;
}

}  // namespace autosafe::python
