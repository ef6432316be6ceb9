#ifndef PROBCOMB_DSL_HPP
#define PROBCOMB_DSL_HPP

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "probcomb/errors.hpp"
#include "probcomb/probability.hpp"

namespace probcomb::dsl {

/// Half-open byte range [begin, end) into the source text.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

class LexError : public Error {
 public:
  LexError(const std::string& message, SourceSpan span)
      : Error(errc::lex_error, message), span_(span) {}

  SourceSpan span() const noexcept { return span_; }

 private:
  SourceSpan span_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, SourceSpan span)
      : Error(errc::parse_error, message), span_(span) {}

  SourceSpan span() const noexcept { return span_; }

 private:
  SourceSpan span_;
};

/// Wraps a combinator failure with the span of the expression that raised it.
/// code() is the underlying combinator category, not a dsl-specific one.
class EvalError : public Error {
 public:
  EvalError(errc code, const std::string& message, SourceSpan span)
      : Error(code, message), span_(span) {}

  SourceSpan span() const noexcept { return span_; }

 private:
  SourceSpan span_;
};

enum class TokenKind {
  Number,
  CmpeOp,  // "(+)"
  DpeOp,   // "(-)"
  Star,
  Tilde,
  LParen,
  RParen,
  Comma,
  Ident,
};

const char* token_kind_name(TokenKind kind) noexcept;

struct Token {
  TokenKind kind;
  std::string lexeme;
  SourceSpan span;
};

/// Splits the input into tokens. Plain "+" and "-" are rejected on purpose:
/// probabilities do not add or subtract linearly, so the symbols that would
/// invite that mistake are not part of the language.
std::vector<Token> tokenize(std::string_view input);

struct ExpressionNode;
using NodePtr = std::unique_ptr<ExpressionNode>;

/// A number literal keeps its source text so printing reproduces it exactly
/// and so exact mode can read the decimal digits instead of a double.
struct LiteralNode {
  std::string lexeme;
  double value = 0.0;
  Rational exact;
};

struct ComplementNode {
  NodePtr child;
};

struct ProductNode {
  std::vector<NodePtr> children;  // >= 2
};

struct CmpeAddNode {
  std::vector<NodePtr> children;  // >= 2
};

struct DpeSubNode {
  NodePtr minuend;
  std::vector<NodePtr> subtrahends;  // >= 1
};

struct CallNode {
  std::string name;  // "bayes", "laplace", or "broad"
  std::vector<NodePtr> args;
};

struct ExpressionNode {
  std::variant<LiteralNode, ComplementNode, ProductNode, CmpeAddNode,
               DpeSubNode, CallNode>
      node;
  SourceSpan span;
};

// Builders for assembling ASTs in code (tests, programmatic use). Spans are
// left at {0, 0}; the parser is the only producer of meaningful spans.
NodePtr literal(std::string lexeme);
NodePtr complement_of(NodePtr child);
NodePtr product_of(std::vector<NodePtr> children);
NodePtr cmpe_of(std::vector<NodePtr> children);
NodePtr dpe_of(NodePtr minuend, std::vector<NodePtr> subtrahends);
NodePtr call_of(std::string name, std::vector<NodePtr> args);

/// Grammar, tightest binding first: "~" prefix, then "*", then "(+)" and
/// "(-)" at one shared level, left-associative. Same-operator runs fold into
/// a single n-ary node, so "a (-) b (-) c" is one subtraction with two
/// subtrahends. Number literals must lie in [0, 1] except inside laplace(),
/// whose arguments are whole-number counts.
NodePtr parse(const std::vector<Token>& tokens);
NodePtr parse(std::string_view input);

/// Renders the AST as parseable text; parse(print(n)) reproduces n.
std::string print(const ExpressionNode& node);

bool ast_equal(const ExpressionNode& a, const ExpressionNode& b);

/// Computes the expression in the requested representation. Calls map to the
/// combinators: bayes(prior, likelihood, alt_likelihood), laplace(m, n), and
/// broad(prior, c1, ...) which divides the prior by the consequence
/// probabilities and fails with ChainOverflow when the quotient passes 1.
Probability evaluate(const ExpressionNode& node, Mode mode = Mode::Floating);

Probability evaluate_text(std::string_view input, Mode mode = Mode::Floating);

}  // namespace probcomb::dsl

#endif
