#include "probcomb/dsl.hpp"

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "probcomb/combinators.hpp"
#include "probcomb/diagnostics.hpp"

namespace probcomb::dsl {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_part(char c) { return is_ident_start(c) || is_digit(c); }

}  // namespace

const char* token_kind_name(TokenKind kind) noexcept {
  switch (kind) {
    case TokenKind::Number: return "Number";
    case TokenKind::CmpeOp: return "CmpeOp";
    case TokenKind::DpeOp: return "DpeOp";
    case TokenKind::Star: return "Star";
    case TokenKind::Tilde: return "Tilde";
    case TokenKind::LParen: return "LParen";
    case TokenKind::RParen: return "RParen";
    case TokenKind::Comma: return "Comma";
    case TokenKind::Ident: return "Ident";
  }
  return "Unknown";
}

std::vector<Token> tokenize(std::string_view input) {
  std::vector<Token> out;
  const std::size_t n = input.size();
  std::size_t i = 0;
  const auto push = [&](TokenKind kind, std::size_t begin, std::size_t end) {
    out.push_back(
        {kind, std::string(input.substr(begin, end - begin)), {begin, end}});
  };
  while (i < n) {
    const char c = input[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (c == '(') {
      if (i + 1 < n && (input[i + 1] == '+' || input[i + 1] == '-')) {
        if (i + 2 < n && input[i + 2] == ')') {
          push(input[i + 1] == '+' ? TokenKind::CmpeOp : TokenKind::DpeOp,
               start, start + 3);
          i += 3;
          continue;
        }
        throw LexError("malformed operator; write \"(+)\" or \"(-)\" in full",
                       {start, std::min(start + 2, n)});
      }
      push(TokenKind::LParen, start, start + 1);
      ++i;
      continue;
    }
    if (c == ')') { push(TokenKind::RParen, start, start + 1); ++i; continue; }
    if (c == '*') { push(TokenKind::Star, start, start + 1); ++i; continue; }
    if (c == '~') { push(TokenKind::Tilde, start, start + 1); ++i; continue; }
    if (c == ',') { push(TokenKind::Comma, start, start + 1); ++i; continue; }
    if (c == '+' || c == '-') {
      throw LexError(std::string("plain '") + c +
                         "' is not an operator here; probabilities do not "
                         "combine linearly. Use \"(" +
                         c + ")\" for the non-linear form",
                     {start, start + 1});
    }
    if (is_digit(c) || c == '.') {
      std::size_t j = i;
      bool any_digit = false;
      while (j < n && is_digit(input[j])) { ++j; any_digit = true; }
      if (j < n && input[j] == '.') {
        ++j;
        while (j < n && is_digit(input[j])) { ++j; any_digit = true; }
      }
      if (!any_digit) {
        throw LexError("'.' is not a number by itself", {start, j});
      }
      if (j < n && (input[j] == 'e' || input[j] == 'E')) {
        // Only treat "e" as an exponent when digits follow; otherwise leave
        // it for the identifier rule so the parser can complain coherently.
        std::size_t k = j + 1;
        if (k < n && (input[k] == '+' || input[k] == '-')) ++k;
        if (k < n && is_digit(input[k])) {
          while (k < n && is_digit(input[k])) ++k;
          j = k;
        }
      }
      push(TokenKind::Number, start, j);
      i = j;
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t j = i + 1;
      while (j < n && is_ident_part(input[j])) ++j;
      push(TokenKind::Ident, start, j);
      i = j;
      continue;
    }
    throw LexError(std::string("unrecognized character '") + c + "'",
                   {start, start + 1});
  }
  return out;
}

NodePtr literal(std::string lexeme) {
  LiteralNode lit;
  lit.exact = parse_decimal_rational(lexeme);
  // strtod saturates on extreme exponents instead of throwing; the range
  // check against the exact value is what accepts or rejects the literal.
  lit.value = std::strtod(lexeme.c_str(), nullptr);
  lit.lexeme = std::move(lexeme);
  auto node = std::make_unique<ExpressionNode>();
  node->node = std::move(lit);
  return node;
}

NodePtr complement_of(NodePtr child) {
  auto node = std::make_unique<ExpressionNode>();
  node->node = ComplementNode{std::move(child)};
  return node;
}

NodePtr product_of(std::vector<NodePtr> children) {
  auto node = std::make_unique<ExpressionNode>();
  node->node = ProductNode{std::move(children)};
  return node;
}

NodePtr cmpe_of(std::vector<NodePtr> children) {
  auto node = std::make_unique<ExpressionNode>();
  node->node = CmpeAddNode{std::move(children)};
  return node;
}

NodePtr dpe_of(NodePtr minuend, std::vector<NodePtr> subtrahends) {
  auto node = std::make_unique<ExpressionNode>();
  node->node = DpeSubNode{std::move(minuend), std::move(subtrahends)};
  return node;
}

NodePtr call_of(std::string name, std::vector<NodePtr> args) {
  auto node = std::make_unique<ExpressionNode>();
  node->node = CallNode{std::move(name), std::move(args)};
  return node;
}

namespace {

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {}

  NodePtr run() {
    if (toks_.empty()) {
      throw ParseError("empty expression", {0, 0});
    }
    NodePtr root = parse_expr(false);
    if (pos_ < toks_.size()) {
      throw ParseError("unexpected '" + toks_[pos_].lexeme +
                           "' after a complete expression",
                       toks_[pos_].span);
    }
    return root;
  }

 private:
  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;

  const Token* peek() const {
    return pos_ < toks_.size() ? &toks_[pos_] : nullptr;
  }

  SourceSpan end_span() const {
    const std::size_t at = toks_.empty() ? 0 : toks_.back().span.end;
    return {at, at};
  }

  const Token& expect(TokenKind kind, const std::string& what) {
    const Token* t = peek();
    if (t == nullptr) {
      throw ParseError("unexpected end of input; expected " + what,
                       end_span());
    }
    if (t->kind != kind) {
      throw ParseError("expected " + what + ", found '" + t->lexeme + "'",
                       t->span);
    }
    return toks_[pos_++];
  }

  // counts_ok lifts the [0, 1] literal range check inside laplace(), whose
  // arguments are trial counts rather than probabilities.
  NodePtr parse_expr(bool counts_ok) {
    NodePtr node = parse_term(counts_ok);
    enum class Fold { none, cmpe, dpe } fold = Fold::none;
    while (const Token* t = peek()) {
      if (t->kind != TokenKind::CmpeOp && t->kind != TokenKind::DpeOp) break;
      const TokenKind op = t->kind;
      ++pos_;
      NodePtr rhs = parse_term(counts_ok);
      const std::size_t begin = node->span.begin;
      const std::size_t end = rhs->span.end;
      if (op == TokenKind::CmpeOp) {
        if (fold == Fold::cmpe) {
          std::get<CmpeAddNode>(node->node).children.push_back(std::move(rhs));
        } else {
          std::vector<NodePtr> children;
          children.push_back(std::move(node));
          children.push_back(std::move(rhs));
          node = cmpe_of(std::move(children));
          fold = Fold::cmpe;
        }
      } else {
        if (fold == Fold::dpe) {
          std::get<DpeSubNode>(node->node).subtrahends.push_back(
              std::move(rhs));
        } else {
          std::vector<NodePtr> subs;
          subs.push_back(std::move(rhs));
          node = dpe_of(std::move(node), std::move(subs));
          fold = Fold::dpe;
        }
      }
      node->span = {begin, end};
    }
    return node;
  }

  NodePtr parse_term(bool counts_ok) {
    NodePtr node = parse_factor(counts_ok);
    bool folded = false;
    while (peek() != nullptr && peek()->kind == TokenKind::Star) {
      ++pos_;
      NodePtr rhs = parse_factor(counts_ok);
      const std::size_t begin = node->span.begin;
      const std::size_t end = rhs->span.end;
      if (folded) {
        std::get<ProductNode>(node->node).children.push_back(std::move(rhs));
      } else {
        std::vector<NodePtr> children;
        children.push_back(std::move(node));
        children.push_back(std::move(rhs));
        node = product_of(std::move(children));
        folded = true;
      }
      node->span = {begin, end};
    }
    return node;
  }

  NodePtr parse_factor(bool counts_ok) {
    const Token* t = peek();
    if (t == nullptr) {
      throw ParseError(
          "unexpected end of input; expected a number, '~', '(', or a "
          "function name",
          end_span());
    }
    switch (t->kind) {
      case TokenKind::Tilde: {
        const Token tilde = toks_[pos_++];
        NodePtr child = parse_factor(counts_ok);
        const SourceSpan span{tilde.span.begin, child->span.end};
        NodePtr node = complement_of(std::move(child));
        node->span = span;
        return node;
      }
      case TokenKind::Number: {
        const Token num = toks_[pos_++];
        NodePtr node;
        try {
          node = literal(num.lexeme);
        } catch (const Error&) {
          throw ParseError("malformed number '" + num.lexeme + "'", num.span);
        }
        const auto& lit = std::get<LiteralNode>(node->node);
        if (!counts_ok && (lit.exact < 0 || lit.exact > 1)) {
          throw ParseError(
              "probability literal '" + num.lexeme + "' is outside [0, 1]",
              num.span);
        }
        node->span = num.span;
        return node;
      }
      case TokenKind::Ident:
        return parse_call();
      case TokenKind::LParen: {
        ++pos_;
        NodePtr inner = parse_expr(counts_ok);
        expect(TokenKind::RParen, "')'");
        return inner;
      }
      default:
        throw ParseError("expected a number, '~', '(', or a function name, "
                         "found '" + t->lexeme + "'",
                         t->span);
    }
  }

  NodePtr parse_call() {
    const Token name = toks_[pos_++];
    if (name.lexeme != "bayes" && name.lexeme != "laplace" &&
        name.lexeme != "broad") {
      throw ParseError("unknown function '" + name.lexeme +
                           "'; available: bayes, laplace, broad",
                       name.span);
    }
    expect(TokenKind::LParen, "'(' after '" + name.lexeme + "'");
    const bool counts_ok = name.lexeme == "laplace";
    std::vector<NodePtr> args;
    args.push_back(parse_expr(counts_ok));
    while (peek() != nullptr && peek()->kind == TokenKind::Comma) {
      ++pos_;
      args.push_back(parse_expr(counts_ok));
    }
    const Token& close = expect(TokenKind::RParen, "')' or ','");
    const SourceSpan span{name.span.begin, close.span.end};
    if (name.lexeme == "bayes" && args.size() != 3) {
      throw ParseError(
          "bayes expects 3 arguments: prior, likelihood, alt_likelihood",
          span);
    }
    if (name.lexeme == "broad" && args.size() < 2) {
      throw ParseError(
          "broad expects a prior followed by at least one consequence", span);
    }
    if (name.lexeme == "laplace") {
      if (args.size() != 2) {
        throw ParseError("laplace expects 2 arguments: successes, trials",
                         span);
      }
      for (const NodePtr& arg : args) {
        const auto* lit = std::get_if<LiteralNode>(&arg->node);
        if (lit == nullptr || denominator(lit->exact) != 1) {
          throw ParseError("laplace arguments must be whole-number counts",
                           arg->span);
        }
      }
    }
    NodePtr node = call_of(name.lexeme, std::move(args));
    node->span = span;
    return node;
  }
};

}  // namespace

NodePtr parse(const std::vector<Token>& tokens) {
  return Parser(tokens).run();
}

NodePtr parse(std::string_view input) { return parse(tokenize(input)); }

namespace {

// Binding strength used for parenthesization: additive < multiplicative <
// prefix < atom. A child printed at a position demanding strictly tighter
// binding gets wrapped so the reparse rebuilds the same tree.
int binding_level(const ExpressionNode& n) {
  struct Visitor {
    int operator()(const LiteralNode&) const { return 3; }
    int operator()(const CallNode&) const { return 3; }
    int operator()(const ComplementNode&) const { return 2; }
    int operator()(const ProductNode&) const { return 1; }
    int operator()(const CmpeAddNode&) const { return 0; }
    int operator()(const DpeSubNode&) const { return 0; }
  };
  return std::visit(Visitor{}, n.node);
}

void print_node(const ExpressionNode& n, std::string& out);

void print_child(const ExpressionNode& child, int min_level,
                 std::string& out) {
  const bool wrap = binding_level(child) < min_level;
  if (wrap) out.push_back('(');
  print_node(child, out);
  if (wrap) out.push_back(')');
}

void print_node(const ExpressionNode& n, std::string& out) {
  struct Visitor {
    std::string& out;
    void operator()(const LiteralNode& lit) const { out += lit.lexeme; }
    void operator()(const ComplementNode& c) const {
      out.push_back('~');
      print_child(*c.child, 2, out);
    }
    void operator()(const ProductNode& p) const {
      for (std::size_t i = 0; i < p.children.size(); ++i) {
        if (i > 0) out += " * ";
        // Nested products are wrapped too, or the reparse would flatten them.
        print_child(*p.children[i], 2, out);
      }
    }
    void operator()(const CmpeAddNode& a) const {
      for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (i > 0) out += " (+) ";
        print_child(*a.children[i], 1, out);
      }
    }
    void operator()(const DpeSubNode& s) const {
      print_child(*s.minuend, 1, out);
      for (const NodePtr& sub : s.subtrahends) {
        out += " (-) ";
        print_child(*sub, 1, out);
      }
    }
    void operator()(const CallNode& call) const {
      out += call.name;
      out.push_back('(');
      for (std::size_t i = 0; i < call.args.size(); ++i) {
        if (i > 0) out += ", ";
        print_node(*call.args[i], out);
      }
      out.push_back(')');
    }
  };
  std::visit(Visitor{out}, n.node);
}

}  // namespace

std::string print(const ExpressionNode& node) {
  std::string out;
  print_node(node, out);
  return out;
}

bool ast_equal(const ExpressionNode& a, const ExpressionNode& b) {
  if (a.node.index() != b.node.index()) return false;
  struct Visitor {
    const ExpressionNode& other;
    bool operator()(const LiteralNode& lit) const {
      return lit.exact == std::get<LiteralNode>(other.node).exact;
    }
    bool operator()(const ComplementNode& c) const {
      return ast_equal(*c.child, *std::get<ComplementNode>(other.node).child);
    }
    bool operator()(const ProductNode& p) const {
      return children_equal(p.children,
                            std::get<ProductNode>(other.node).children);
    }
    bool operator()(const CmpeAddNode& a2) const {
      return children_equal(a2.children,
                            std::get<CmpeAddNode>(other.node).children);
    }
    bool operator()(const DpeSubNode& s) const {
      const auto& o = std::get<DpeSubNode>(other.node);
      return ast_equal(*s.minuend, *o.minuend) &&
             children_equal(s.subtrahends, o.subtrahends);
    }
    bool operator()(const CallNode& call) const {
      const auto& o = std::get<CallNode>(other.node);
      return call.name == o.name && children_equal(call.args, o.args);
    }
    static bool children_equal(const std::vector<NodePtr>& x,
                               const std::vector<NodePtr>& y) {
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (!ast_equal(*x[i], *y[i])) return false;
      }
      return true;
    }
  };
  return std::visit(Visitor{b}, a.node);
}

namespace {

std::string message_without_prefix(const Error& e) {
  const std::string what = e.what();
  const std::string prefix = std::string(errc_name(e.code())) + ": ";
  return what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
}

class Evaluator {
 public:
  explicit Evaluator(Mode mode) : mode_(mode) {}

  Probability eval(const ExpressionNode& n) {
    try {
      struct Visitor {
        Evaluator& self;
        const ExpressionNode& n;
        Probability operator()(const LiteralNode& lit) const {
          switch (self.mode_) {
            case Mode::Floating:
              return Probability::floating(lit.value);
            case Mode::LogComplement:
              return Probability::floating(lit.value)
                  .to_mode(Mode::LogComplement);
            case Mode::ExactRational:
              return Probability::exact(lit.exact);
          }
          return Probability::floating(lit.value);
        }
        Probability operator()(const ComplementNode& c) const {
          return complement(self.eval(*c.child));
        }
        Probability operator()(const ProductNode& p) const {
          return product(self.eval_all(p.children));
        }
        Probability operator()(const CmpeAddNode& a) const {
          return cmpe_add(self.eval_all(a.children));
        }
        Probability operator()(const DpeSubNode& s) const {
          const Probability minuend = self.eval(*s.minuend);
          return dpe_sub(minuend, self.eval_all(s.subtrahends));
        }
        Probability operator()(const CallNode& call) const {
          return self.eval_call(call, n.span);
        }
      };
      return std::visit(Visitor{*this, n}, n.node);
    } catch (const EvalError&) {
      throw;  // already carries the innermost span
    } catch (const Error& e) {
      throw EvalError(e.code(), message_without_prefix(e), n.span);
    }
  }

 private:
  Mode mode_;

  std::vector<Probability> eval_all(const std::vector<NodePtr>& nodes) {
    std::vector<Probability> values;
    values.reserve(nodes.size());
    for (const NodePtr& n : nodes) values.push_back(eval(*n));
    return values;
  }

  Probability eval_call(const CallNode& call, SourceSpan span) {
    if (call.name == "bayes") {
      if (call.args.size() != 3) {
        throw EvalError(errc::invalid_argument,
                        "bayes expects 3 arguments", span);
      }
      return bayes_posterior(eval(*call.args[0]), eval(*call.args[1]),
                             eval(*call.args[2]));
    }
    if (call.name == "laplace") {
      if (call.args.size() != 2) {
        throw EvalError(errc::invalid_argument,
                        "laplace expects 2 arguments", span);
      }
      return laplace_succession(count_of(*call.args[0]),
                                count_of(*call.args[1]));
    }
    if (call.name == "broad") {
      if (call.args.size() < 2) {
        throw EvalError(errc::invalid_argument,
                        "broad expects a prior and consequences", span);
      }
      const Probability prior = eval(*call.args[0]);
      std::vector<Probability> consequences;
      consequences.reserve(call.args.size() - 1);
      for (std::size_t i = 1; i < call.args.size(); ++i) {
        consequences.push_back(eval(*call.args[i]));
      }
      const diagnostics::DiagnosticReport report =
          diagnostics::broad_chain(prior, consequences);
      if (!report.valid) {
        throw EvalError(errc::chain_overflow,
                        "chain quotient " + format_decimal(report.raw_value, 6) +
                            " exceeds 1 at consequence " +
                            std::to_string(*report.overflow_index),
                        span);
      }
      if (mode_ == Mode::ExactRational) {
        Rational q = prior.exact_value();
        for (const Probability& c : consequences) {
          q /= c.exact_value();
        }
        return Probability::exact(q);
      }
      return Probability::floating(report.raw_value).to_mode(mode_);
    }
    throw EvalError(errc::invalid_argument,
                    "unknown function '" + call.name + "'", span);
  }

  static std::uint64_t count_of(const ExpressionNode& n) {
    const auto* lit = std::get_if<LiteralNode>(&n.node);
    if (lit == nullptr || denominator(lit->exact) != 1 || lit->exact < 0 ||
        numerator(lit->exact) > std::numeric_limits<std::uint64_t>::max()) {
      throw EvalError(errc::invalid_argument,
                      "laplace arguments must be whole-number counts", n.span);
    }
    return numerator(lit->exact).convert_to<std::uint64_t>();
  }
};

}  // namespace

Probability evaluate(const ExpressionNode& node, Mode mode) {
  return Evaluator(mode).eval(node);
}

Probability evaluate_text(std::string_view input, Mode mode) {
  const NodePtr root = parse(input);
  return evaluate(*root, mode);
}

}  // namespace probcomb::dsl
