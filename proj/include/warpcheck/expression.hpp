#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "warpcheck/errors.hpp"
#include "warpcheck/fields.hpp"
#include "warpcheck/jet.hpp"

namespace warpcheck {

// ---------------------------------------------------------------------------
// Restricted arithmetic over chart coordinates x1 .. xn (1-indexed): the
// binary operators + - * /, integer powers via ^, sqrt(), numeric literals
// and parentheses. Exactly the jet-supported operations, nothing more.
// Parsed once into a small tree, then evaluated over jets as often as needed.
// ---------------------------------------------------------------------------

class Expression {
public:
    static Expression parse(const std::string& text, int arity);

    Jet2 evaluate(std::span<const Jet2> coords) const {
        if (static_cast<int>(coords.size()) < arity_) {
            throw ArityError("expression over " + std::to_string(arity_) +
                             " variables evaluated on " + std::to_string(coords.size()) +
                             " coordinates");
        }
        return eval_node(root_, coords);
    }

    int arity() const { return arity_; }
    const std::string& text() const { return text_; }

private:
    enum class Op { literal, coordinate, add, sub, mul, div, neg, int_pow, sqrt_fn };
    struct Node {
        Op op = Op::literal;
        double value = 0.0;  // literal payload
        int index = 0;       // coordinate index (0-based) or integer exponent
        int left = -1;
        int right = -1;
    };

    friend class ExpressionParser;

    int add_node(const Node& node) {
        nodes_.push_back(node);
        return static_cast<int>(nodes_.size()) - 1;
    }

    Jet2 eval_node(int id, std::span<const Jet2> coords) const {
        const Node& node = nodes_[static_cast<std::size_t>(id)];
        switch (node.op) {
            case Op::literal:
                return Jet2::constant(node.value, coords[0].arity());
            case Op::coordinate:
                return coords[static_cast<std::size_t>(node.index)];
            case Op::add:
                return eval_node(node.left, coords) + eval_node(node.right, coords);
            case Op::sub:
                return eval_node(node.left, coords) - eval_node(node.right, coords);
            case Op::mul:
                return eval_node(node.left, coords) * eval_node(node.right, coords);
            case Op::div:
                return eval_node(node.left, coords) / eval_node(node.right, coords);
            case Op::neg:
                return -eval_node(node.left, coords);
            case Op::int_pow:
                return pow(eval_node(node.left, coords), node.index);
            case Op::sqrt_fn:
                return sqrt(eval_node(node.left, coords));
        }
        throw Error("corrupt expression tree");
    }

    std::string text_;
    int arity_ = 0;
    std::vector<Node> nodes_;
    int root_ = -1;
};

class ExpressionParser {
public:
    ExpressionParser(const std::string& text, int arity) : expr_() {
        expr_.text_ = text;
        expr_.arity_ = arity;
        tokenize(text);
    }

    Expression run() {
        expr_.root_ = parse_sum();
        expect(TokenKind::end, "end of expression");
        return std::move(expr_);
    }

private:
    enum class TokenKind { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };
    struct Token {
        TokenKind kind = TokenKind::end;
        double number = 0.0;
        std::string ident;
        int column = 0;  // 1-based position in the source text
    };

    void tokenize(const std::string& text) {
        std::size_t pos = 0;
        while (pos < text.size()) {
            const unsigned char ch = static_cast<unsigned char>(text[pos]);
            const int column = static_cast<int>(pos) + 1;
            if (std::isspace(ch)) {
                ++pos;
                continue;
            }
            if (std::isdigit(ch) || ch == '.') {
                tokens_.push_back(scan_number(text, pos, column));
                continue;
            }
            if (std::isalpha(ch) || ch == '_') {
                Token token;
                token.kind = TokenKind::ident;
                token.column = column;
                while (pos < text.size() &&
                       (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
                    token.ident.push_back(text[pos]);
                    ++pos;
                }
                tokens_.push_back(token);
                continue;
            }
            TokenKind kind;
            switch (ch) {
                case '+': kind = TokenKind::plus; break;
                case '-': kind = TokenKind::minus; break;
                case '*': kind = TokenKind::star; break;
                case '/': kind = TokenKind::slash; break;
                case '^': kind = TokenKind::caret; break;
                case '(': kind = TokenKind::lparen; break;
                case ')': kind = TokenKind::rparen; break;
                default:
                    throw ParseError(std::string("unexpected character '") +
                                     static_cast<char>(ch) + "' in expression", 1, column);
            }
            tokens_.push_back(Token{kind, 0.0, {}, column});
            ++pos;
        }
        tokens_.push_back(Token{TokenKind::end, 0.0, {}, static_cast<int>(text.size()) + 1});
    }

    static Token scan_number(const std::string& text, std::size_t& pos, int column) {
        const std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos < text.size() && text[pos] == '.') {
            ++pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        }
        if (pos == start + (text[start] == '.' ? 1u : 0u) && text[start] == '.') {
            throw ParseError("lone '.' is not a number", 1, column);
        }
        if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
            std::size_t mark = pos + 1;
            if (mark < text.size() && (text[mark] == '+' || text[mark] == '-')) ++mark;
            if (mark < text.size() && std::isdigit(static_cast<unsigned char>(text[mark]))) {
                pos = mark;
                while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            }
        }
        Token token;
        token.kind = TokenKind::number;
        token.column = column;
        try {
            token.number = std::stod(text.substr(start, pos - start));
        } catch (const std::exception&) {
            throw ParseError("malformed number", 1, column);
        }
        return token;
    }

    const Token& peek() const { return tokens_[index_]; }
    Token take() { return tokens_[index_++]; }

    bool accept(TokenKind kind) {
        if (peek().kind != kind) return false;
        ++index_;
        return true;
    }

    void expect(TokenKind kind, const std::string& what) {
        if (!accept(kind)) {
            throw ParseError("expected " + what, 1, peek().column);
        }
    }

    int parse_sum() {
        int left = parse_product();
        for (;;) {
            if (accept(TokenKind::plus)) {
                left = binary(Expression::Op::add, left, parse_product());
            } else if (accept(TokenKind::minus)) {
                left = binary(Expression::Op::sub, left, parse_product());
            } else {
                return left;
            }
        }
    }

    int parse_product() {
        int left = parse_unary();
        for (;;) {
            if (accept(TokenKind::star)) {
                left = binary(Expression::Op::mul, left, parse_unary());
            } else if (accept(TokenKind::slash)) {
                left = binary(Expression::Op::div, left, parse_unary());
            } else {
                return left;
            }
        }
    }

    int parse_unary() {
        if (accept(TokenKind::minus)) {
            Expression::Node node;
            node.op = Expression::Op::neg;
            node.left = parse_unary();
            return expr_.add_node(node);
        }
        if (accept(TokenKind::plus)) return parse_unary();
        return parse_power();
    }

    int parse_power() {
        int base = parse_atom();
        while (accept(TokenKind::caret)) {
            const bool negative = accept(TokenKind::minus);
            const Token exponent = take();
            if (exponent.kind != TokenKind::number || exponent.number != std::rint(exponent.number) ||
                std::fabs(exponent.number) > 64.0) {
                throw ParseError("exponent must be an integer literal in [-64, 64]", 1,
                                 exponent.column);
            }
            Expression::Node node;
            node.op = Expression::Op::int_pow;
            node.index = static_cast<int>(exponent.number) * (negative ? -1 : 1);
            node.left = base;
            base = expr_.add_node(node);
        }
        return base;
    }

    int parse_atom() {
        const Token token = take();
        switch (token.kind) {
            case TokenKind::number: {
                Expression::Node node;
                node.op = Expression::Op::literal;
                node.value = token.number;
                return expr_.add_node(node);
            }
            case TokenKind::ident: {
                if (token.ident == "sqrt") {
                    expect(TokenKind::lparen, "'(' after sqrt");
                    const int arg = parse_sum();
                    expect(TokenKind::rparen, "')'");
                    Expression::Node node;
                    node.op = Expression::Op::sqrt_fn;
                    node.left = arg;
                    return expr_.add_node(node);
                }
                return coordinate_node(token);
            }
            case TokenKind::lparen: {
                const int inner = parse_sum();
                expect(TokenKind::rparen, "')'");
                return inner;
            }
            default:
                throw ParseError("expected a number, variable, or '('", 1, token.column);
        }
    }

    // Variables are x1 .. xn, 1-indexed; anything else is a schema violation,
    // not a syntax error.
    int coordinate_node(const Token& token) {
        const std::string& name = token.ident;
        bool well_formed = name.size() >= 2 && name[0] == 'x';
        int index = 0;
        if (well_formed) {
            for (std::size_t i = 1; i < name.size(); ++i) {
                if (!std::isdigit(static_cast<unsigned char>(name[i]))) {
                    well_formed = false;
                    break;
                }
                index = index * 10 + (name[i] - '0');
                if (index > 1000) break;
            }
        }
        if (!well_formed || index < 1 || index > expr_.arity_) {
            throw ValidationError("warp.expression",
                                  "unknown variable '" + name + "'; variables are x1..x" +
                                      std::to_string(expr_.arity_));
        }
        Expression::Node node;
        node.op = Expression::Op::coordinate;
        node.index = index - 1;
        return expr_.add_node(node);
    }

    Expression expr_;
    std::vector<Token> tokens_;
    std::size_t index_ = 0;

    int binary(Expression::Op op, int left, int right) {
        Expression::Node node;
        node.op = op;
        node.left = left;
        node.right = right;
        return expr_.add_node(node);
    }
};

inline Expression Expression::parse(const std::string& text, int arity) {
    if (arity < 1) throw UsageError("expression arity must be >= 1");
    return ExpressionParser(text, arity).run();
}

// Wraps a parsed expression as a scalar field on the chart.
inline ScalarField expression_warp(const std::string& text, int dim) {
    const Expression expr = Expression::parse(text, dim);
    ScalarField field;
    field.dim = dim;
    field.label = text;
    field.eval = [expr](std::span<const Jet2> coords) { return expr.evaluate(coords); };
    return field;
}

} // namespace warpcheck
