#pragma once

// Arithmetic expressions over the variables t, x and T (the horizon).
//
// Grammar, loosest binding first:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | 't' | 'x' | 'T' | func '(' args ')' | '(' expr ')'
//   func    := exp | log | sqrt | abs | max | min | pow
//
// So "-x^2" is -(x^2) and "2^3^2" is 2^(3^2).

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace stoplab {

enum class Var : std::uint8_t { t, x, T };

enum class Op : std::uint8_t {
    number,
    variable,
    neg,
    add,
    sub,
    mul,
    div,
    pow,
    fn_exp,
    fn_log,
    fn_sqrt,
    fn_abs,
    fn_max,
    fn_min,
    fn_pow,
};

/// Number of operands taken by an operator (0, 1 or 2).
int arity(Op op) noexcept;

struct ExprNode {
    Op op = Op::number;
    double value = 0.0;      // Op::number
    Var var = Var::x;        // Op::variable
    std::int32_t lhs = -1;   // first operand
    std::int32_t rhs = -1;   // second operand
    std::size_t offset = 0;  // byte offset in the source text
};

class Expr;

/// Incremental construction of expression trees. Node indices returned by
/// the add_* calls are only meaningful for the builder that produced them.
class ExprBuilder {
public:
    /// Literals must be finite and non-negative; negation is a node of its own.
    std::int32_t number(double value, std::size_t offset = 0);
    std::int32_t variable(Var v, std::size_t offset = 0);
    std::int32_t unary(Op op, std::int32_t operand, std::size_t offset = 0);
    std::int32_t binary(Op op, std::int32_t lhs, std::int32_t rhs, std::size_t offset = 0);

    Expr finish(std::int32_t root, std::string source = {}) &&;

private:
    std::int32_t push(ExprNode node);
    std::vector<ExprNode> nodes_;
};

/// Immutable parsed expression. Evaluation is allocation-free for
/// expressions whose operand stack fits the inline buffer.
class Expr {
public:
    Expr();  // the literal 0

    double eval(double t, double x, double horizon) const;

    std::set<std::string> free_variables() const;
    bool depends_on(Var v) const;

    /// Fully parenthesised text that parses back to the same tree.
    std::string print() const;

    const std::vector<ExprNode>& nodes() const noexcept { return nodes_; }
    std::int32_t root() const noexcept { return root_; }
    const std::string& source() const noexcept { return source_; }

    /// Same shape, operators, variables and literal values; offsets ignored.
    bool structurally_equal(const Expr& other) const;

private:
    friend class ExprBuilder;

    struct Instr {
        Op op;
        Var var;
        double value;
        std::size_t offset;
    };

    void compile();

    std::vector<ExprNode> nodes_;
    std::int32_t root_ = 0;
    std::string source_;
    std::vector<Instr> program_;  // postfix order
    std::size_t max_stack_ = 0;
};

/// Parse expression text. Throws ParseError with the byte offset of the
/// offending token.
Expr parse(std::string_view text);

std::string_view to_string(Var v) noexcept;
std::string_view to_string(Op op) noexcept;

}  // namespace stoplab
