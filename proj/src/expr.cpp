#include "stoplab/expr.hpp"

#include "stoplab/error.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

namespace stoplab {

int arity(Op op) noexcept {
    switch (op) {
    case Op::number:
    case Op::variable:
        return 0;
    case Op::neg:
    case Op::fn_exp:
    case Op::fn_log:
    case Op::fn_sqrt:
    case Op::fn_abs:
        return 1;
    default:
        return 2;
    }
}

std::string_view to_string(Var v) noexcept {
    switch (v) {
    case Var::t: return "t";
    case Var::x: return "x";
    case Var::T: return "T";
    }
    return "?";
}

std::string_view to_string(Op op) noexcept {
    switch (op) {
    case Op::number: return "number";
    case Op::variable: return "variable";
    case Op::neg: return "-";
    case Op::add: return "+";
    case Op::sub: return "-";
    case Op::mul: return "*";
    case Op::div: return "/";
    case Op::pow: return "^";
    case Op::fn_exp: return "exp";
    case Op::fn_log: return "log";
    case Op::fn_sqrt: return "sqrt";
    case Op::fn_abs: return "abs";
    case Op::fn_max: return "max";
    case Op::fn_min: return "min";
    case Op::fn_pow: return "pow";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Builder

std::int32_t ExprBuilder::push(ExprNode node) {
    nodes_.push_back(node);
    return static_cast<std::int32_t>(nodes_.size() - 1);
}

std::int32_t ExprBuilder::number(double value, std::size_t offset) {
    if (!std::isfinite(value) || value < 0.0 || std::signbit(value))
        throw std::invalid_argument("expression literals must be finite and non-negative");
    ExprNode n;
    n.op = Op::number;
    n.value = value;
    n.offset = offset;
    return push(n);
}

std::int32_t ExprBuilder::variable(Var v, std::size_t offset) {
    ExprNode n;
    n.op = Op::variable;
    n.var = v;
    n.offset = offset;
    return push(n);
}

std::int32_t ExprBuilder::unary(Op op, std::int32_t operand, std::size_t offset) {
    if (arity(op) != 1) throw std::invalid_argument("not a unary operator");
    if (operand < 0 || operand >= static_cast<std::int32_t>(nodes_.size()))
        throw std::invalid_argument("bad operand index");
    ExprNode n;
    n.op = op;
    n.lhs = operand;
    n.offset = offset;
    return push(n);
}

std::int32_t ExprBuilder::binary(Op op, std::int32_t lhs, std::int32_t rhs, std::size_t offset) {
    if (arity(op) != 2) throw std::invalid_argument("not a binary operator");
    const auto n_nodes = static_cast<std::int32_t>(nodes_.size());
    if (lhs < 0 || lhs >= n_nodes || rhs < 0 || rhs >= n_nodes)
        throw std::invalid_argument("bad operand index");
    ExprNode n;
    n.op = op;
    n.lhs = lhs;
    n.rhs = rhs;
    n.offset = offset;
    return push(n);
}

Expr ExprBuilder::finish(std::int32_t root, std::string source) && {
    if (root < 0 || root >= static_cast<std::int32_t>(nodes_.size()))
        throw std::invalid_argument("bad root index");
    Expr e;
    e.nodes_ = std::move(nodes_);
    e.root_ = root;
    e.source_ = std::move(source);
    e.compile();
    return e;
}

// ---------------------------------------------------------------------------
// Expr

Expr::Expr() {
    ExprNode zero;
    nodes_.push_back(zero);
    root_ = 0;
    source_ = "0";
    compile();
}

void Expr::compile() {
    program_.clear();
    std::size_t depth = 0;
    max_stack_ = 0;
    // Explicit stack so that deep trees cannot overflow the call stack.
    struct Frame {
        std::int32_t node;
        bool expanded;
    };
    std::vector<Frame> work{{root_, false}};
    while (!work.empty()) {
        Frame f = work.back();
        work.pop_back();
        const ExprNode& n = nodes_[static_cast<std::size_t>(f.node)];
        if (!f.expanded && arity(n.op) > 0) {
            work.push_back({f.node, true});
            if (n.rhs >= 0) work.push_back({n.rhs, false});
            work.push_back({n.lhs, false});
            continue;
        }
        program_.push_back({n.op, n.var, n.value, n.offset});
        const int a = arity(n.op);
        depth = depth + 1 - static_cast<std::size_t>(a);
        if (depth > max_stack_) max_stack_ = depth;
    }
}

namespace {

[[noreturn]] void domain_error(double t, double x, std::size_t offset, const char* what) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s at (t=%.17g, x=%.17g), expression offset %zu", what, t, x,
                  offset);
    throw EvalError(t, x, offset, buf);
}

double apply(Op op, double a, double b, double t, double x, std::size_t offset) {
    double r = 0.0;
    switch (op) {
    case Op::neg: r = -a; break;
    case Op::add: r = a + b; break;
    case Op::sub: r = a - b; break;
    case Op::mul: r = a * b; break;
    case Op::div:
        if (b == 0.0) domain_error(t, x, offset, "division by zero");
        r = a / b;
        break;
    case Op::pow:
    case Op::fn_pow:
        if (a == 0.0 && b < 0.0) domain_error(t, x, offset, "zero raised to a negative power");
        r = std::pow(a, b);
        if (std::isnan(r)) domain_error(t, x, offset, "negative base with non-integer exponent");
        break;
    case Op::fn_exp: r = std::exp(a); break;
    case Op::fn_log:
        if (!(a > 0.0)) domain_error(t, x, offset, "log of non-positive value");
        r = std::log(a);
        break;
    case Op::fn_sqrt:
        if (a < 0.0) domain_error(t, x, offset, "sqrt of negative value");
        r = std::sqrt(a);
        break;
    case Op::fn_abs: r = std::fabs(a); break;
    case Op::fn_max: r = std::fmax(a, b); break;
    case Op::fn_min: r = std::fmin(a, b); break;
    default: break;
    }
    if (!std::isfinite(r)) domain_error(t, x, offset, "non-finite result");
    return r;
}

}  // namespace

double Expr::eval(double t, double x, double horizon) const {
    constexpr std::size_t inline_depth = 32;
    std::array<double, inline_depth> inline_stack;
    std::vector<double> heap_stack;
    double* stack = inline_stack.data();
    if (max_stack_ > inline_depth) {
        heap_stack.resize(max_stack_);
        stack = heap_stack.data();
    }
    std::size_t top = 0;
    for (const Instr& in : program_) {
        switch (in.op) {
        case Op::number:
            stack[top++] = in.value;
            break;
        case Op::variable:
            stack[top++] = in.var == Var::t ? t : (in.var == Var::x ? x : horizon);
            break;
        default:
            if (arity(in.op) == 1) {
                stack[top - 1] = apply(in.op, stack[top - 1], 0.0, t, x, in.offset);
            } else {
                const double b = stack[--top];
                stack[top - 1] = apply(in.op, stack[top - 1], b, t, x, in.offset);
            }
        }
    }
    return stack[0];
}

std::set<std::string> Expr::free_variables() const {
    std::set<std::string> out;
    for (const Instr& in : program_)
        if (in.op == Op::variable) out.emplace(to_string(in.var));
    return out;
}

bool Expr::depends_on(Var v) const {
    for (const Instr& in : program_)
        if (in.op == Op::variable && in.var == v) return true;
    return false;
}

namespace {

void print_node(const std::vector<ExprNode>& nodes, std::int32_t i, std::string& out) {
    const ExprNode& n = nodes[static_cast<std::size_t>(i)];
    switch (n.op) {
    case Op::number: {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", n.value);
        out += buf;
        return;
    }
    case Op::variable:
        out += to_string(n.var);
        return;
    case Op::neg:
        out += "(-";
        print_node(nodes, n.lhs, out);
        out += ')';
        return;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
    case Op::pow:
        out += '(';
        print_node(nodes, n.lhs, out);
        out += ' ';
        out += to_string(n.op);
        out += ' ';
        print_node(nodes, n.rhs, out);
        out += ')';
        return;
    default:
        out += to_string(n.op);
        out += '(';
        print_node(nodes, n.lhs, out);
        if (n.rhs >= 0) {
            out += ", ";
            print_node(nodes, n.rhs, out);
        }
        out += ')';
    }
}

bool equal_nodes(const Expr& a, std::int32_t i, const Expr& b, std::int32_t j) {
    const ExprNode& p = a.nodes()[static_cast<std::size_t>(i)];
    const ExprNode& q = b.nodes()[static_cast<std::size_t>(j)];
    if (p.op != q.op) return false;
    switch (p.op) {
    case Op::number: return p.value == q.value;
    case Op::variable: return p.var == q.var;
    default: break;
    }
    if (!equal_nodes(a, p.lhs, b, q.lhs)) return false;
    return arity(p.op) == 1 || equal_nodes(a, p.rhs, b, q.rhs);
}

}  // namespace

std::string Expr::print() const {
    std::string out;
    print_node(nodes_, root_, out);
    return out;
}

bool Expr::structurally_equal(const Expr& other) const {
    return equal_nodes(*this, root_, other, other.root_);
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr run() {
        const std::int32_t root = expr();
        skip_space();
        if (pos_ != text_.size()) fail_syntax(pos_, "unexpected '" + std::string(1, text_[pos_]) + "'");
        return std::move(builder_).finish(root, std::string(text_));
    }

private:
    [[noreturn]] void fail_syntax(std::size_t at, const std::string& msg) const {
        throw ParseError(ParseError::Kind::syntax, at,
                         "syntax error at offset " + std::to_string(at) + ": " + msg);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        skip_space();
        if (pos_ >= text_.size()) fail_syntax(pos_, std::string("expected '") + c + "' before end of input");
        if (text_[pos_] != c) fail_syntax(pos_, std::string("expected '") + c + "'");
        ++pos_;
    }

    std::int32_t expr() {
        std::int32_t lhs = term();
        for (;;) {
            skip_space();
            const std::size_t at = pos_;
            if (accept('+')) {
                lhs = builder_.binary(Op::add, lhs, term(), at);
            } else if (accept('-')) {
                lhs = builder_.binary(Op::sub, lhs, term(), at);
            } else {
                return lhs;
            }
        }
    }

    std::int32_t term() {
        std::int32_t lhs = unary();
        for (;;) {
            skip_space();
            const std::size_t at = pos_;
            if (accept('*')) {
                lhs = builder_.binary(Op::mul, lhs, unary(), at);
            } else if (accept('/')) {
                lhs = builder_.binary(Op::div, lhs, unary(), at);
            } else {
                return lhs;
            }
        }
    }

    std::int32_t unary() {
        skip_space();
        const std::size_t at = pos_;
        if (accept('-')) return builder_.unary(Op::neg, unary(), at);
        return power();
    }

    std::int32_t power() {
        const std::int32_t base = primary();
        skip_space();
        const std::size_t at = pos_;
        if (accept('^')) return builder_.binary(Op::pow, base, unary(), at);
        return base;
    }

    std::int32_t primary() {
        skip_space();
        const std::size_t at = pos_;
        if (pos_ >= text_.size()) fail_syntax(pos_, "expected operand before end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            const std::int32_t inner = expr();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail_syntax(at, "unexpected '" + std::string(1, c) + "'");
    }

    std::int32_t number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t mantissa = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0) fail_syntax(start, "malformed number");
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (digits() == 0) fail_syntax(pos_, "malformed exponent");
        }
        double value = 0.0;
        const char* first = text_.data() + start;
        const char* last = text_.data() + pos_;
        const auto res = std::from_chars(first, last, value);
        if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(value))
            fail_syntax(start, "number out of range");
        return builder_.number(value, start);
    }

    std::int32_t identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "t") return builder_.variable(Var::t, start);
        if (name == "x") return builder_.variable(Var::x, start);
        if (name == "T") return builder_.variable(Var::T, start);

        static constexpr std::pair<std::string_view, Op> functions[] = {
            {"exp", Op::fn_exp}, {"log", Op::fn_log}, {"sqrt", Op::fn_sqrt}, {"abs", Op::fn_abs},
            {"max", Op::fn_max}, {"min", Op::fn_min}, {"pow", Op::fn_pow},
        };
        for (const auto& [fname, op] : functions) {
            if (name != fname) continue;
            expect('(');
            const std::int32_t a = expr();
            if (arity(op) == 1) {
                expect(')');
                return builder_.unary(op, a, start);
            }
            expect(',');
            const std::int32_t b = expr();
            expect(')');
            return builder_.binary(op, a, b, start);
        }
        throw ParseError(ParseError::Kind::unknown_identifier, start,
                         "unknown identifier '" + std::string(name) + "' at offset " +
                             std::to_string(start));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    ExprBuilder builder_;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

}  // namespace stoplab
