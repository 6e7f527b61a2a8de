#pragma once
// Target functions as small parsed expressions in one variable (x or z).
//
// Grammar: sums, products, quotients, unary minus, '^' powers, numbers, the constants
// pi, e and i, and the functions sin cos tan exp log sqrt abs sinh cosh.

#include "uslab/polynomial.hpp"

#include <memory>
#include <optional>
#include <string>

namespace uslab {

class Expression {
public:
    Expression();  // the constant 0
    static Expression parse(const std::string& text);
    static Expression from_polynomial(const RatPoly& p);

    const std::string& text() const { return text_; }
    Complex operator()(Complex z) const;
    double real(double x) const { return (*this)(Complex(x, 0.0)).real(); }
    // Exact value when the expression is rational in z with rational constants.
    std::optional<Rational> exact(const Rational& z) const;
    // Expanded polynomial (about 0) when the expression is a polynomial with rational coefficients.
    std::optional<RatPoly> polynomial() const;

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

}  // namespace uslab
