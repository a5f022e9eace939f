#pragma once

#include <map>
#include <memory>
#include <string>

namespace mmcf {

/// Arithmetic expression over named variables: numbers, + - * / ^, unary minus, parentheses,
/// constants pi and e, and the functions sin cos tan exp log sqrt abs sinh cosh tanh asin acos atan.
class Expression {
public:
    explicit Expression(const std::string& text);
    ~Expression();
    Expression(Expression&&) noexcept;
    Expression& operator=(Expression&&) noexcept;

    double evaluate(const std::map<std::string, double>& vars) const;
    const std::string& text() const { return text_; }

    struct Node;

private:
    std::string text_;
    std::unique_ptr<Node> root_;
};

}  // namespace mmcf
