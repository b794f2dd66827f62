#pragma once

#include <memory>
#include <string>
#include <vector>

#include "varlab/errors.hpp"
#include "varlab/linalg.hpp"

namespace varlab {

// Arithmetic expressions over the variables x, y, z, w, used for boundary
// data and user-defined integrands.
//
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := '-' factor | power
//   power   := primary ('^' factor)?        // right-associative
//   primary := number | var | 'pi' | call '(' args ')' | '(' expr ')'
//
// Unary minus binds looser than '^' (so "-x^2" is -(x^2)); calls are
// sin cos exp log sqrt abs min max atan2. Whitespace is insignificant.

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected,
             const std::string& message)
      : Error(ErrorKind::parse_error,
              message + " at offset " + std::to_string(offset)),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class Expression {
 public:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  /// Evaluate with the first size(point) variables bound, in x,y,z,w order.
  /// Domain faults (log of a non-positive value, sqrt of a negative one,
  /// division by zero, fractional power of a negative base) raise
  /// ErrorKind::evaluation_error; no silent NaN escapes.
  double eval(const Vec& point) const;
  double eval2(double x, double y) const { return eval(Vec{x, y}); }

  /// Highest variable index used plus one (0 when constant).
  int arity() const;

  /// Canonical fully parenthesized form; parsing it back yields an
  /// identical tree.
  std::string to_string() const;

  bool identical(const Expression& other) const;

  friend Expression parse(const std::string& src);

 private:
  explicit Expression(NodePtr root) : root_(std::move(root)) {}
  NodePtr root_;
};

Expression parse(const std::string& src);

}  // namespace varlab
