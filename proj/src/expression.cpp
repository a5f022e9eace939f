#include "mmcf/expression.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <vector>

#include "mmcf/types.hpp"

namespace mmcf {

struct Expression::Node {
    enum class Kind { number, variable, unary_minus, binary, call } kind = Kind::number;
    double value = 0.0;
    std::string name;
    char op = 0;
    std::vector<std::unique_ptr<Node>> args;
};

namespace {

using Node = Expression::Node;

const std::map<std::string, std::function<double(double)>>& functions() {
    static const std::map<std::string, std::function<double(double)>> table{
        {"sin", [](double v) { return std::sin(v); }},   {"cos", [](double v) { return std::cos(v); }},
        {"tan", [](double v) { return std::tan(v); }},   {"exp", [](double v) { return std::exp(v); }},
        {"log", [](double v) { return std::log(v); }},   {"sqrt", [](double v) { return std::sqrt(v); }},
        {"abs", [](double v) { return std::abs(v); }},   {"sinh", [](double v) { return std::sinh(v); }},
        {"cosh", [](double v) { return std::cosh(v); }}, {"tanh", [](double v) { return std::tanh(v); }},
        {"asin", [](double v) { return std::asin(v); }}, {"acos", [](double v) { return std::acos(v); }},
        {"atan", [](double v) { return std::atan(v); }},
    };
    return table;
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    std::unique_ptr<Node> parse() {
        auto n = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return n;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw InvalidArgument("expression '" + s_ + "': " + what + " at position " + std::to_string(pos_));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    static std::unique_ptr<Node> binary(char op, std::unique_ptr<Node> a, std::unique_ptr<Node> b) {
        auto n = std::make_unique<Node>();
        n->kind = Node::Kind::binary;
        n->op = op;
        n->args.push_back(std::move(a));
        n->args.push_back(std::move(b));
        return n;
    }
    std::unique_ptr<Node> sum() {
        auto n = product();
        for (;;) {
            if (accept('+')) n = binary('+', std::move(n), product());
            else if (accept('-')) n = binary('-', std::move(n), product());
            else return n;
        }
    }
    std::unique_ptr<Node> product() {
        auto n = unary();
        for (;;) {
            if (accept('*')) n = binary('*', std::move(n), unary());
            else if (accept('/')) n = binary('/', std::move(n), unary());
            else return n;
        }
    }
    std::unique_ptr<Node> unary() {
        if (accept('-')) {
            auto n = std::make_unique<Node>();
            n->kind = Node::Kind::unary_minus;
            n->args.push_back(unary());
            return n;
        }
        if (accept('+')) return unary();
        return power();
    }
    std::unique_ptr<Node> power() {
        auto base = atom();
        if (accept('^')) return binary('^', std::move(base), unary());
        return base;
    }
    std::unique_ptr<Node> atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        const char c = s_[pos_];
        if (accept('(')) {
            auto n = sum();
            if (!accept(')')) fail("missing ')'");
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(s_.substr(pos_), &used);
            } catch (const std::exception&) {
                fail("bad number");
            }
            pos_ += used;
            auto n = std::make_unique<Node>();
            n->value = v;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            auto n = std::make_unique<Node>();
            n->name = s_.substr(start, pos_ - start);
            if (accept('(')) {
                if (!functions().count(n->name)) fail("unknown function '" + n->name + "'");
                n->kind = Node::Kind::call;
                n->args.push_back(sum());
                if (!accept(')')) fail("missing ')'");
            } else {
                n->kind = Node::Kind::variable;
            }
            return n;
        }
        fail("unexpected character");
    }
};

double eval(const Node& n, const std::map<std::string, double>& vars) {
    switch (n.kind) {
        case Node::Kind::number: return n.value;
        case Node::Kind::variable: {
            const auto it = vars.find(n.name);
            if (it != vars.end()) return it->second;
            if (n.name == "pi") return M_PI;
            if (n.name == "e") return M_E;
            throw InvalidArgument("unknown variable '" + n.name + "'");
        }
        case Node::Kind::unary_minus: return -eval(*n.args[0], vars);
        case Node::Kind::call: return functions().at(n.name)(eval(*n.args[0], vars));
        case Node::Kind::binary: {
            const double a = eval(*n.args[0], vars);
            const double b = eval(*n.args[1], vars);
            switch (n.op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/': return a / b;
                default: return std::pow(a, b);
            }
        }
    }
    return 0.0;
}

}  // namespace

Expression::Expression(const std::string& text) : text_(text), root_(Parser(text_).parse()) {}
Expression::~Expression() = default;
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;

double Expression::evaluate(const std::map<std::string, double>& vars) const { return eval(*root_, vars); }

}  // namespace mmcf
