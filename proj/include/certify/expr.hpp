#pragma once

#include <memory>
#include <string>
#include <vector>

namespace certify {

/// Variables an expression may reference. Coefficient fields use (x, y),
/// boundary curves use theta.
struct ExprEnv {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
};

/// A parsed closed-form expression over x, y, theta, constants and the
/// functions sin, cos, tan, exp, log, sqrt, abs. Supports + - * / ^ and
/// unary minus. Immutable after parsing; evaluation is thread-safe.
class Expr {
  public:
    static Expr parse(const std::string& text);

    double eval(const ExprEnv& env) const;
    const std::string& text() const { return text_; }
    bool empty() const { return root_ == nullptr; }

    struct Node;

  private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

} // namespace certify
