#pragma once

#include <memory>
#include <string>

namespace rte::io {

/// Variables available to expressions.
struct Variables {
    double x1 = 0.0, x2 = 0.0, x3 = 0.0;
    double t = 0.0;
    double theta = 0.0, phi = 0.0;
};

/// Arithmetic expression over x1 x2 x3 t theta phi and the constant pi.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | primary
///   primary := number | name | func '(' expr ')' | '(' expr ')'
///   func    := exp | sin | cos
///
/// Parsed once into an immutable tree; evaluation is thread-safe.
class Expression {
public:
    struct Node;

    static Expression parse(const std::string& text);

    double operator()(const Variables& v) const;
    const std::string& text() const { return text_; }
    /// True if the expression mentions the named variable.
    bool uses(const std::string& name) const;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

}  // namespace rte::io
