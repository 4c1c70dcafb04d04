#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace psfront {

// One-variable scalar function: either a parsed expression tree, a uniform
// sample table (cubic interpolation, exact at the nodes), or an algebraic
// combination of those. Immutable and cheap to copy.
class ScalarFunction {
public:
    struct Node;

    ScalarFunction();  // constant 0
    double operator()(double t) const;

    bool is_zero() const;  // structurally zero (constant 0)

    static ScalarFunction constant(double c);
    static ScalarFunction table(double t0, double h, std::vector<double> values);

    ScalarFunction plus(const ScalarFunction& other) const;
    ScalarFunction scaled(double s) const;
    // f(a*t + b)
    ScalarFunction pre_affine(double a, double b) const;

private:
    explicit ScalarFunction(std::shared_ptr<const Node> root);
    std::shared_ptr<const Node> root_;
    friend ScalarFunction parse_scalar(const std::string&, const std::string&,
                                       const std::map<std::string, double>&);
};

// Parse an infix expression over one free variable. Operators + - * / ^,
// functions sin cos tan exp log sqrt sign abs, numeric literals, the variable
// name, bound constants (pi, e, and the entries of `params`). Throws
// SyntaxError with a byte offset; domain failures (log of a negative, division
// by zero) are deferred to evaluation and throw DomainError.
ScalarFunction parse_scalar(const std::string& src, const std::string& var = "t",
                            const std::map<std::string, double>& params = {});

}  // namespace psfront
