#include "psfront/scalar_function.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "psfront/errors.hpp"

namespace psfront {

namespace {

enum class Op { Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Tan, Exp, Log, Sqrt, Sign, Abs };

bool is_unary(Op op) { return op >= Op::Neg; }

}  // namespace

struct ScalarFunction::Node {
    enum class Kind { Constant, Variable, Unary, Binary, Table, Affine } kind;

    double value = 0.0;  // Constant
    Op op = Op::Add;
    std::shared_ptr<const Node> lhs, rhs;
    std::size_t offset = 0;  // source offset, for DomainError messages

    // Table
    double t0 = 0.0, h = 1.0;
    std::vector<double> samples;

    // Affine pre-composition lhs(a*t + b)
    double a = 1.0, b = 0.0;
};

namespace {

using Node = ScalarFunction::Node;
using NodePtr = std::shared_ptr<const Node>;

double eval_table(const Node& n, double t) {
    // Cubic Hermite with centered-difference slopes; exact at the nodes.
    const auto& v = n.samples;
    const int count = static_cast<int>(v.size());
    if (count == 1) return v[0];
    double x = (t - n.t0) / n.h;
    const double snapped = std::round(x);
    if (std::abs(x - snapped) < 1e-9 && snapped >= 0 && snapped < count) {
        return v[static_cast<std::size_t>(snapped)];
    }
    int i = static_cast<int>(std::floor(x));
    if (i < 0) i = 0;
    if (i > count - 2) i = count - 2;
    const double u = x - i;
    const double y0 = v[i], y1 = v[i + 1];
    const double m0 = (i > 0) ? 0.5 * (v[i + 1] - v[i - 1]) : (v[1] - v[0]);
    const double m1 =
        (i + 2 < count) ? 0.5 * (v[i + 2] - v[i]) : (v[count - 1] - v[count - 2]);
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * m0 + (-2 * u3 + 3 * u2) * y1 +
           (u3 - u2) * m1;
}

double eval_node(const Node& n, double t);

double eval_unary(const Node& n, double t) {
    const double x = eval_node(*n.lhs, t);
    switch (n.op) {
        case Op::Neg: return -x;
        case Op::Sin: return std::sin(x);
        case Op::Cos: return std::cos(x);
        case Op::Tan: return std::tan(x);
        case Op::Exp: return std::exp(x);
        case Op::Log:
            if (x <= 0.0) {
                std::ostringstream os;
                os << "log of non-positive value " << x << " at offset " << n.offset;
                throw DomainError(os.str());
            }
            return std::log(x);
        case Op::Sqrt:
            if (x < 0.0) {
                std::ostringstream os;
                os << "sqrt of negative value " << x << " at offset " << n.offset;
                throw DomainError(os.str());
            }
            return std::sqrt(x);
        case Op::Sign: return (x > 0.0) ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
        case Op::Abs: return std::abs(x);
        default: break;
    }
    throw DomainError("bad unary operator");
}

double eval_node(const Node& n, double t) {
    switch (n.kind) {
        case Node::Kind::Constant: return n.value;
        case Node::Kind::Variable: return t;
        case Node::Kind::Table: return eval_table(n, t);
        case Node::Kind::Affine: return eval_node(*n.lhs, n.a * t + n.b);
        case Node::Kind::Unary: return eval_unary(n, t);
        case Node::Kind::Binary: {
            const double x = eval_node(*n.lhs, t);
            const double y = eval_node(*n.rhs, t);
            switch (n.op) {
                case Op::Add: return x + y;
                case Op::Sub: return x - y;
                case Op::Mul: return x * y;
                case Op::Div:
                    if (y == 0.0) {
                        std::ostringstream os;
                        os << "division by zero at offset " << n.offset;
                        throw DomainError(os.str());
                    }
                    return x / y;
                case Op::Pow: {
                    const double r = std::pow(x, y);
                    if (!std::isfinite(r)) {
                        std::ostringstream os;
                        os << "pow(" << x << ", " << y << ") not finite at offset " << n.offset;
                        throw DomainError(os.str());
                    }
                    return r;
                }
                default: break;
            }
            break;
        }
    }
    throw DomainError("bad expression node");
}

NodePtr make_const(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Constant;
    n->value = v;
    return n;
}

NodePtr make_binary(Op op, NodePtr l, NodePtr r, std::size_t off) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    n->offset = off;
    return n;
}

NodePtr make_unary(Op op, NodePtr l, std::size_t off) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Unary;
    n->op = op;
    n->lhs = std::move(l);
    n->offset = off;
    return n;
}

// Recursive-descent parser.
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('+'|'-')* power
//   power  := atom ('^' factor)?
//   atom   := number | name | name '(' expr ')' | '(' expr ')'
class Parser {
public:
    Parser(const std::string& src, const std::string& var,
           const std::map<std::string, double>& params)
        : src_(src), var_(var), params_(params) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != src_.size()) fail("end of input");
        return e;
    }

private:
    const std::string& src_;
    const std::string& var_;
    const std::map<std::string, double>& params_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& expected) {
        throw SyntaxError(pos_, expected, src_);
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < src_.size() && src_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr e = term();
        for (;;) {
            const std::size_t off = pos_;
            if (accept('+')) {
                e = make_binary(Op::Add, e, term(), off);
            } else if (accept('-')) {
                e = make_binary(Op::Sub, e, term(), off);
            } else {
                return e;
            }
        }
    }

    NodePtr term() {
        NodePtr e = factor();
        for (;;) {
            const std::size_t off = pos_;
            if (accept('*')) {
                e = make_binary(Op::Mul, e, factor(), off);
            } else if (accept('/')) {
                e = make_binary(Op::Div, e, factor(), off);
            } else {
                return e;
            }
        }
    }

    NodePtr factor() {
        skip_ws();
        const std::size_t off = pos_;
        if (accept('-')) return make_unary(Op::Neg, factor(), off);
        if (accept('+')) return factor();
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        skip_ws();
        const std::size_t off = pos_;
        if (accept('^')) return make_binary(Op::Pow, base, factor(), off);
        return base;
    }

    NodePtr atom() {
        skip_ws();
        if (pos_ >= src_.size()) fail("a number, name, or '('");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!accept(')')) fail("')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
        fail("a number, name, or '('");
    }

    NodePtr number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                ++pos_;
            } else if ((c == 'e' || c == 'E') && pos_ + 1 < src_.size() &&
                       (std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])) ||
                        ((src_[pos_ + 1] == '+' || src_[pos_ + 1] == '-') &&
                         pos_ + 2 < src_.size() &&
                         std::isdigit(static_cast<unsigned char>(src_[pos_ + 2]))))) {
                pos_ += 2;
            } else {
                break;
            }
        }
        const std::string tok = src_.substr(start, pos_ - start);
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) {
                pos_ = start;
                fail("a numeric literal");
            }
            return make_const(v);
        } catch (const std::logic_error&) {
            pos_ = start;
            fail("a numeric literal");
        }
    }

    NodePtr name() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                      src_[pos_] == '_')) {
            ++pos_;
        }
        const std::string id = src_.substr(start, pos_ - start);
        static const std::map<std::string, Op> kFunctions = {
            {"sin", Op::Sin}, {"cos", Op::Cos},   {"tan", Op::Tan},
            {"exp", Op::Exp}, {"log", Op::Log},   {"sqrt", Op::Sqrt},
            {"sign", Op::Sign}, {"abs", Op::Abs}};
        const auto fit = kFunctions.find(id);
        if (fit != kFunctions.end()) {
            if (!accept('(')) fail("'(' after function name");
            NodePtr arg = expr();
            if (!accept(')')) fail("')'");
            return make_unary(fit->second, arg, start);
        }
        if (id == var_) {
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Variable;
            return n;
        }
        if (id == "pi") return make_const(M_PI);
        if (id == "e") return make_const(M_E);
        const auto pit = params_.find(id);
        if (pit != params_.end()) return make_const(pit->second);
        pos_ = start;
        fail("the variable '" + var_ + "', a function, or a bound constant");
    }
};

}  // namespace

ScalarFunction::ScalarFunction() : root_(make_const(0.0)) {}

ScalarFunction::ScalarFunction(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

double ScalarFunction::operator()(double t) const { return eval_node(*root_, t); }

bool ScalarFunction::is_zero() const {
    return root_->kind == Node::Kind::Constant && root_->value == 0.0;
}

ScalarFunction ScalarFunction::constant(double c) { return ScalarFunction(make_const(c)); }

ScalarFunction ScalarFunction::table(double t0, double h, std::vector<double> values) {
    if (values.empty()) throw ConfigError("sample table must be non-empty");
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Table;
    n->t0 = t0;
    n->h = h;
    n->samples = std::move(values);
    return ScalarFunction(n);
}

ScalarFunction ScalarFunction::plus(const ScalarFunction& other) const {
    if (is_zero()) return other;
    if (other.is_zero()) return *this;
    return ScalarFunction(make_binary(Op::Add, root_, other.root_, 0));
}

ScalarFunction ScalarFunction::scaled(double s) const {
    if (s == 1.0) return *this;
    if (is_zero()) return *this;
    return ScalarFunction(make_binary(Op::Mul, make_const(s), root_, 0));
}

ScalarFunction ScalarFunction::pre_affine(double a, double b) const {
    if (a == 1.0 && b == 0.0) return *this;
    if (is_zero()) return *this;
    if (root_->kind == Node::Kind::Constant) return *this;
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Affine;
    n->lhs = root_;
    n->a = a;
    n->b = b;
    return ScalarFunction(n);
}

ScalarFunction parse_scalar(const std::string& src, const std::string& var,
                            const std::map<std::string, double>& params) {
    if (src.empty()) throw SyntaxError(0, "a non-empty expression", src);
    Parser p(src, var, params);
    return ScalarFunction(p.parse());
}

}  // namespace psfront
