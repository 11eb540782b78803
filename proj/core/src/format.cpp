#include "polyterm/format.hpp"

#include <algorithm>
#include <cctype>

namespace polyterm {

Polygraph PolyFile::polygraph() const { return Polygraph{signature, rules}; }

namespace {

struct Token {
  enum class Kind {
    Ident,
    Number,
    Symbol,  // one of : ; * ( ) { } , + < > =
    Arrow,   // ->
    Rewrite, // =>
    Tag,     // [ ... ]
    End,
  };
  Kind kind = Kind::End;
  std::string text;
  Nat number = 0;
  unsigned line = 1;
  unsigned column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, current_.line, current_.column);
  }

 private:
  void advance() {
    skip_space();
    current_.line = line_;
    current_.column = column_;
    if (pos_ >= text_.size()) {
      current_.kind = Token::Kind::End;
      current_.text = "<end of file>";
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string ident;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        ident += bump();
      }
      current_.kind = Token::Kind::Ident;
      current_.text = std::move(ident);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Nat value = 0;
      std::string digits;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        char d = bump();
        digits += d;
        value = value * 10 + static_cast<Nat>(d - '0');
      }
      current_.kind = Token::Kind::Number;
      current_.text = std::move(digits);
      current_.number = value;
      return;
    }
    if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      bump();
      bump();
      current_.kind = Token::Kind::Arrow;
      current_.text = "->";
      return;
    }
    if (c == '=' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      bump();
      bump();
      current_.kind = Token::Kind::Rewrite;
      current_.text = "=>";
      return;
    }
    if (c == '[') {
      bump();
      std::string body;
      while (pos_ < text_.size() && text_[pos_] != ']' && text_[pos_] != '\n') {
        body += bump();
      }
      if (pos_ >= text_.size() || text_[pos_] != ']') {
        throw ParseError("unterminated tag", current_.line, current_.column);
      }
      bump();
      current_.kind = Token::Kind::Tag;
      current_.text = std::move(body);
      return;
    }
    static const std::string symbols = ":;*(){},+<>=";
    if (symbols.find(c) != std::string::npos) {
      current_.kind = Token::Kind::Symbol;
      current_.text = std::string(1, bump());
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_,
                     column_);
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  char bump() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  unsigned line_ = 1;
  unsigned column_ = 1;
  Token current_;
};

bool is_symbol(const Token& t, char c) {
  return t.kind == Token::Kind::Symbol && t.text.size() == 1 && t.text[0] == c;
}

bool is_ident(const Token& t, std::string_view word) {
  return t.kind == Token::Kind::Ident && t.text == word;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  // The signature is collected in a pre-scan so declarations may appear in
  // any order; here we only check the other statements against it.
  PolyFile parse_file(Signature prescanned) {
    file_.signature = std::move(prescanned);
    file_.generator_tags.assign(file_.signature.size(), "");
    sig_ = &file_.signature;
    while (lex_.peek().kind != Token::Kind::End) {
      const Token head = lex_.peek();
      if (is_ident(head, "gen")) {
        parse_gen();
      } else if (is_ident(head, "rule")) {
        parse_rule();
      } else if (is_ident(head, "interp")) {
        parse_interp();
      } else if (is_ident(head, "currents")) {
        parse_currents();
      } else {
        lex_.fail("expected 'gen', 'rule', 'interp' or 'currents', got '" +
                  head.text + "'");
      }
    }
    finish();
    return std::move(file_);
  }

  Circuit parse_complete_term(const Signature& sig) {
    sig_ = &sig;
    Circuit c = parse_term_expr();
    if (lex_.peek().kind != Token::Kind::End) {
      lex_.fail("trailing input after term");
    }
    return c;
  }

 private:
  [[noreturn]] void fail_at(const Token& t, const std::string& message) {
    throw ParseError(message, t.line, t.column);
  }

  Token expect_symbol(char c) {
    Token t = lex_.take();
    if (!is_symbol(t, c)) {
      fail_at(t, std::string("expected '") + c + "', got '" + t.text + "'");
    }
    return t;
  }

  Token expect_ident() {
    Token t = lex_.take();
    if (t.kind != Token::Kind::Ident) {
      fail_at(t, "expected a name, got '" + t.text + "'");
    }
    return t;
  }

  Nat expect_number() {
    Token t = lex_.take();
    if (t.kind != Token::Kind::Number) {
      fail_at(t, "expected a number, got '" + t.text + "'");
    }
    return t.number;
  }

  std::string take_tag() {
    if (lex_.peek().kind == Token::Kind::Tag) return lex_.take().text;
    return "";
  }

  void parse_gen() {
    lex_.take();  // gen
    Token name = expect_ident();
    expect_symbol(':');
    Nat in = expect_number();
    Token arrow = lex_.take();
    if (arrow.kind != Token::Kind::Arrow) {
      fail_at(arrow, "expected '->' in generator declaration");
    }
    Nat out = expect_number();
    std::string tag = take_tag();
    auto id = file_.signature.find(name.text);
    if (!id) fail_at(name, "generator lost between passes: " + name.text);
    file_.generator_tags[*id] = tag;
    if (in == 0 && out == 0) {
      file_.warnings.push_back("generator " + name.text +
                               " has arity 0 -> 0; its position is only "
                               "meaningful up to isotopy");
    }
  }

  void parse_rule() {
    Token kw = lex_.take();  // rule
    Token name = expect_ident();
    expect_symbol(':');
    Circuit lhs = parse_term_expr();
    Token arrow = lex_.take();
    if (arrow.kind != Token::Kind::Rewrite) {
      fail_at(arrow, "expected '=>' between rule sides");
    }
    Circuit rhs = parse_term_expr();
    std::string tag = take_tag();
    for (const Rule& r : file_.rules) {
      if (r.name == name.text) fail_at(name, "duplicate rule name " + name.text);
    }
    Rule rule{name.text, std::move(lhs), std::move(rhs)};
    if (interface_of(rule.lhs) != interface_of(rule.rhs)) {
      fail_at(kw, "rule sides not parallel: " +
                      std::to_string(rule.lhs.inputs) + "->" +
                      std::to_string(rule.lhs.outputs) + " vs " +
                      std::to_string(rule.rhs.inputs) + "->" +
                      std::to_string(rule.rhs.outputs));
    }
    if (rule.lhs.is_identity()) {
      fail_at(kw, "rule left-hand side is an identity circuit");
    }
    file_.rules.push_back(std::move(rule));
    file_.rule_tags.push_back(tag);
  }

  void parse_currents() {
    Token kw = lex_.take();  // currents
    Token min = lex_.take();
    if (!is_ident(min, "min")) fail_at(min, "expected 'min'");
    Nat value = expect_number();
    if (value > 1) fail_at(kw, "minimum current must be 0 or 1");
    if (file_.currents_min) fail_at(kw, "duplicate currents directive");
    file_.currents_min = value;
    file_.currents_tag = take_tag();
  }

  void parse_interp() {
    lex_.take();  // interp
    Token name = expect_ident();
    auto id = file_.signature.find(name.text);
    if (!id) fail_at(name, "unknown generator: " + name.text);
    for (GenId seen : file_.interpreted) {
      if (seen == *id) fail_at(name, "duplicate interpretation for " + name.text);
    }
    const GeneratorDecl& g = file_.signature.at(*id);
    expect_symbol('{');
    expect_keyword("down");
    expect_symbol(':');
    std::vector<CurrentExpr> down = parse_expr_tuple();
    expect_symbol(';');
    expect_keyword("up");
    expect_symbol(':');
    std::vector<CurrentExpr> up = parse_expr_tuple();
    expect_symbol(';');
    expect_keyword("heat");
    expect_symbol(':');
    HeatExpr heat = parse_heat();
    expect_symbol('}');
    std::string tag = take_tag();

    GeneratorInterpretation gi{std::move(down), std::move(up), std::move(heat)};
    if (gi.down.size() != g.arity_out) {
      fail_at(name, "interpretation of " + g.name + " needs " +
                        std::to_string(g.arity_out) +
                        " descending expressions, got " +
                        std::to_string(gi.down.size()));
    }
    if (gi.up.size() != g.arity_in) {
      fail_at(name, "interpretation of " + g.name + " needs " +
                        std::to_string(g.arity_in) +
                        " ascending expressions, got " +
                        std::to_string(gi.up.size()));
    }
    file_.interpretation.set(*id, std::move(gi));
    file_.interpreted.push_back(*id);
    file_.interp_tags.push_back(tag);
    try {
      file_.interpretation.validate(file_.signature);
    } catch (const InterpError& e) {
      fail_at(name, e.what());
    }
  }

  void expect_keyword(std::string_view word) {
    Token t = lex_.take();
    if (!is_ident(t, word)) {
      fail_at(t, "expected '" + std::string(word) + "', got '" + t.text + "'");
    }
  }

  void finish() {
    if (file_.currents_min) {
      file_.interpretation.set_minimum(*file_.currents_min);
    }
    if (file_.has_interpretation() &&
        !file_.interpretation.total_on(file_.signature)) {
      for (GenId id = 0; id < file_.signature.size(); ++id) {
        bool found = std::find(file_.interpreted.begin(),
                               file_.interpreted.end(),
                               id) != file_.interpreted.end();
        if (!found) {
          throw ParseError("missing interpretation for generator " +
                               file_.signature.at(id).name,
                           1, 1);
        }
      }
    }
  }

  // term := par (';' par)*
  Circuit parse_term_expr() {
    Circuit acc = parse_par();
    while (is_symbol(lex_.peek(), ';')) {
      Token semi = lex_.take();
      Circuit next = parse_par();
      try {
        acc = vcomp(*sig_, acc, next);
      } catch (const CircuitError& e) {
        fail_at(semi, e.what());
      }
    }
    return acc;
  }

  // par := atom ('*' atom)*
  Circuit parse_par() {
    Circuit acc = parse_atom();
    while (is_symbol(lex_.peek(), '*')) {
      lex_.take();
      Circuit next = parse_atom();
      acc = hcomp(*sig_, acc, next);
    }
    return acc;
  }

  Circuit parse_atom() {
    Token t = lex_.take();
    if (is_symbol(t, '(')) {
      Circuit inner = parse_term_expr();
      expect_symbol(')');
      return inner;
    }
    if (t.kind == Token::Kind::Ident) {
      if (t.text == "id") {
        expect_symbol(':');
        Nat n = expect_number();
        return identity(static_cast<unsigned>(n));
      }
      auto id = sig_->find(t.text);
      if (!id) fail_at(t, "unknown generator: " + t.text);
      return from_generator(*sig_, *id);
    }
    fail_at(t, "expected a generator, 'id:N' or '(', got '" + t.text + "'");
  }

  // expr_tuple := '(' ')' | '(' expr (',' expr)* ')' | expr
  std::vector<CurrentExpr> parse_expr_tuple() {
    std::vector<CurrentExpr> out;
    if (is_symbol(lex_.peek(), '(')) {
      lex_.take();
      if (is_symbol(lex_.peek(), ')')) {
        lex_.take();
        return out;
      }
      out.push_back(parse_expr());
      while (is_symbol(lex_.peek(), ',')) {
        lex_.take();
        out.push_back(parse_expr());
      }
      expect_symbol(')');
      return out;
    }
    out.push_back(parse_expr());
    return out;
  }

  // expr := addend ('+' addend)*
  CurrentExpr parse_expr() {
    CurrentExpr acc = parse_addend();
    while (is_symbol(lex_.peek(), '+')) {
      lex_.take();
      acc = CurrentExpr::add(std::move(acc), parse_addend());
    }
    return acc;
  }

  // addend := NAT '*' factor | NAT | factor
  CurrentExpr parse_addend() {
    if (lex_.peek().kind == Token::Kind::Number) {
      Nat value = lex_.take().number;
      if (is_symbol(lex_.peek(), '*')) {
        lex_.take();
        return CurrentExpr::scale(value, parse_factor());
      }
      return CurrentExpr::constant(value);
    }
    return parse_factor();
  }

  CurrentExpr parse_factor() {
    Token t = lex_.take();
    if (is_symbol(t, '(')) {
      CurrentExpr inner = parse_expr();
      expect_symbol(')');
      return inner;
    }
    if (t.kind == Token::Kind::Number) {
      return CurrentExpr::constant(t.number);
    }
    if (t.kind == Token::Kind::Ident) {
      if (t.text == "max") {
        expect_symbol('(');
        CurrentExpr l = parse_expr();
        expect_symbol(',');
        CurrentExpr r = parse_expr();
        expect_symbol(')');
        return CurrentExpr::max(std::move(l), std::move(r));
      }
      if ((t.text[0] == 'x' || t.text[0] == 'y') && t.text.size() > 1 &&
          std::all_of(t.text.begin() + 1, t.text.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c));
          })) {
        unsigned index = static_cast<unsigned>(std::stoul(t.text.substr(1)));
        if (index == 0) fail_at(t, "variable indices start at 1");
        return t.text[0] == 'x' ? CurrentExpr::xvar(index)
                                : CurrentExpr::yvar(index);
      }
    }
    fail_at(t, "expected a variable, number, max(...) or '(', got '" + t.text +
                   "'");
  }

  // heat := '0' | '<'expr'>' ('+' '<'expr'>')*
  HeatExpr parse_heat() {
    HeatExpr heat;
    if (lex_.peek().kind == Token::Kind::Number && lex_.peek().number == 0) {
      lex_.take();
      return heat;
    }
    heat.atoms.push_back(parse_heat_atom());
    while (is_symbol(lex_.peek(), '+')) {
      lex_.take();
      heat.atoms.push_back(parse_heat_atom());
    }
    return heat;
  }

  CurrentExpr parse_heat_atom() {
    expect_symbol('<');
    CurrentExpr e = parse_expr();
    Token t = lex_.take();
    if (!is_symbol(t, '>')) fail_at(t, "expected '>' closing a heat atom");
    return e;
  }

  Lexer lex_;
  PolyFile file_;
  const Signature* sig_ = nullptr;
};

bool reserved_name(const std::string& s) {
  return s == "gen" || s == "rule" || s == "interp" || s == "currents" ||
         s == "id" || s == "min" || s == "max" || s == "down" || s == "up" ||
         s == "heat";
}

// Pre-scan pass: collect every generator declaration so the other statements
// may reference generators declared later in the file.
Signature prescan_signature(const std::string& text) {
  Signature sig;
  Lexer lex(text);
  while (lex.peek().kind != Token::Kind::End) {
    Token t = lex.take();
    if (t.kind != Token::Kind::Ident || t.text != "gen") continue;
    Token name = lex.take();
    if (name.kind != Token::Kind::Ident) {
      throw ParseError("expected a name after 'gen'", name.line, name.column);
    }
    if (reserved_name(name.text)) {
      throw ParseError("'" + name.text + "' is a reserved word", name.line,
                       name.column);
    }
    Token colon = lex.take();
    if (!is_symbol(colon, ':')) {
      throw ParseError("expected ':' in generator declaration", colon.line,
                       colon.column);
    }
    Token in = lex.take();
    Token arrow = lex.take();
    Token out = lex.take();
    if (in.kind != Token::Kind::Number || arrow.kind != Token::Kind::Arrow ||
        out.kind != Token::Kind::Number) {
      throw ParseError("malformed generator declaration", t.line, t.column);
    }
    try {
      sig.add(GeneratorDecl{name.text, static_cast<unsigned>(in.number),
                            static_cast<unsigned>(out.number)});
    } catch (const CircuitError& e) {
      throw ParseError(e.what(), name.line, name.column);
    }
  }
  return sig;
}

}  // namespace

PolyFile parse_poly(const std::string& text) {
  Signature sig = prescan_signature(text);
  Parser parser(text);
  return parser.parse_file(std::move(sig));
}

Circuit parse_term(const Signature& sig, const std::string& text) {
  Parser parser(text);
  return parser.parse_complete_term(sig);
}

namespace {

std::string render_slice_term(const Signature& sig, unsigned width,
                              const Slice& s) {
  const GeneratorDecl& g = sig.at(s.gen);
  unsigned right = width - s.pad - g.arity_in;
  std::vector<std::string> parts;
  if (s.pad > 0) parts.push_back("id:" + std::to_string(s.pad));
  parts.push_back(g.name);
  if (right > 0) parts.push_back("id:" + std::to_string(right));
  std::string joined;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) joined += " * ";
    joined += parts[i];
  }
  if (parts.size() > 1) return "(" + joined + ")";
  return joined;
}

}  // namespace

std::string render_term(const Signature& sig, const Circuit& c) {
  if (c.slices.empty()) return "id:" + std::to_string(c.inputs);
  std::vector<unsigned> widths = level_widths(sig, c.inputs, c.slices);
  std::string out;
  for (std::size_t k = 0; k < c.slices.size(); ++k) {
    if (k) out += " ; ";
    out += render_slice_term(sig, widths[k], c.slices[k]);
  }
  return out;
}

std::string render_poly(const PolyFile& file) {
  std::string out;
  auto tag_suffix = [](const std::string& tag) {
    return tag.empty() ? std::string() : "  [" + tag + "]";
  };
  for (GenId id = 0; id < file.signature.size(); ++id) {
    const GeneratorDecl& g = file.signature.at(id);
    out += "gen " + g.name + " : " + std::to_string(g.arity_in) + " -> " +
           std::to_string(g.arity_out) + tag_suffix(file.generator_tags[id]) +
           "\n";
  }
  if (file.currents_min) {
    out += "currents min " + std::to_string(*file.currents_min) +
           tag_suffix(file.currents_tag) + "\n";
  }
  for (std::size_t i = 0; i < file.interpreted.size(); ++i) {
    GenId id = file.interpreted[i];
    const GeneratorDecl& g = file.signature.at(id);
    const GeneratorInterpretation& gi = file.interpretation.at(id);
    auto tuple = [](const std::vector<CurrentExpr>& exprs) {
      std::string s = "(";
      for (std::size_t j = 0; j < exprs.size(); ++j) {
        if (j) s += ", ";
        s += exprs[j].str();
      }
      s += ")";
      return s;
    };
    out += "interp " + g.name + " { down: " + tuple(gi.down) +
           "; up: " + tuple(gi.up) + "; heat: " + gi.heat.str() + " }" +
           tag_suffix(file.interp_tags[i]) + "\n";
  }
  for (std::size_t i = 0; i < file.rules.size(); ++i) {
    const Rule& r = file.rules[i];
    out += "rule " + r.name + " : " + render_term(file.signature, r.lhs) +
           " => " + render_term(file.signature, r.rhs) +
           tag_suffix(file.rule_tags[i]) + "\n";
  }
  return out;
}

bool poly_equal(const PolyFile& a, const PolyFile& b) {
  if (a.signature.size() != b.signature.size()) return false;
  for (GenId id = 0; id < a.signature.size(); ++id) {
    const GeneratorDecl& x = a.signature.at(id);
    const GeneratorDecl& y = b.signature.at(id);
    if (x.name != y.name || x.arity_in != y.arity_in ||
        x.arity_out != y.arity_out) {
      return false;
    }
  }
  if (a.generator_tags != b.generator_tags) return false;
  if (a.rules.size() != b.rules.size()) return false;
  for (std::size_t i = 0; i < a.rules.size(); ++i) {
    if (a.rules[i].name != b.rules[i].name) return false;
    if (!(a.rules[i].lhs == b.rules[i].lhs)) return false;
    if (!(a.rules[i].rhs == b.rules[i].rhs)) return false;
  }
  if (a.rule_tags != b.rule_tags) return false;
  if (a.currents_min != b.currents_min) return false;
  if (a.currents_tag != b.currents_tag) return false;
  if (a.interpreted != b.interpreted) return false;
  if (a.interp_tags != b.interp_tags) return false;
  for (GenId id : a.interpreted) {
    const GeneratorInterpretation& x = a.interpretation.at(id);
    const GeneratorInterpretation& y = b.interpretation.at(id);
    auto exprs_equal = [](const std::vector<CurrentExpr>& l,
                          const std::vector<CurrentExpr>& r) {
      if (l.size() != r.size()) return false;
      for (std::size_t i = 0; i < l.size(); ++i) {
        if (l[i].str() != r[i].str()) return false;
      }
      return true;
    };
    if (!exprs_equal(x.down, y.down) || !exprs_equal(x.up, y.up) ||
        !exprs_equal(x.heat.atoms, y.heat.atoms)) {
      return false;
    }
  }
  return a.interpretation.x_min() == b.interpretation.x_min() &&
         a.interpretation.y_min() == b.interpretation.y_min();
}

std::string render_dot(const Signature& sig, const Circuit& c) {
  std::string out = "digraph circuit {\n  rankdir=TB;\n";
  // Wire segments connect boundary points and generator nodes.
  std::vector<std::string> seg_source;
  std::vector<int> level;
  int next_seg = 0;
  for (unsigned i = 0; i < c.inputs; ++i) {
    std::string node = "in" + std::to_string(i);
    out += "  " + node + " [shape=point];\n";
    seg_source.push_back(node);
    level.push_back(next_seg++);
  }
  for (std::size_t k = 0; k < c.slices.size(); ++k) {
    const Slice& s = c.slices[k];
    const GeneratorDecl& g = sig.at(s.gen);
    std::string node = "s" + std::to_string(k);
    out += "  " + node + " [label=\"" + g.name + "\" shape=box];\n";
    for (unsigned j = 0; j < g.arity_in; ++j) {
      out += "  " + seg_source[level[s.pad + j]] + " -> " + node + ";\n";
    }
    level.erase(level.begin() + s.pad, level.begin() + s.pad + g.arity_in);
    std::vector<int> created;
    for (unsigned j = 0; j < g.arity_out; ++j) {
      seg_source.push_back(node);
      created.push_back(next_seg++);
    }
    level.insert(level.begin() + s.pad, created.begin(), created.end());
  }
  for (unsigned i = 0; i < c.outputs; ++i) {
    std::string node = "out" + std::to_string(i);
    out += "  " + node + " [shape=point];\n";
    out += "  " + seg_source[level[i]] + " -> " + node + ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace polyterm
