#include "laprat/dsl.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "laprat/detail/cxterm.hpp"

namespace laprat {

namespace {

struct Token {
    enum Kind { Number, Ident, Sym, End } kind = End;
    std::string text;
    double value = 0.0;
    SourceSpan span;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : src_(text) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            bump();
        tok_ = Token{};
        tok_.span = {line_, col_, 1};
        if (pos_ >= src_.size()) {
            tok_.kind = Token::End;
            return;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                bump();
            if (pos_ < src_.size() && src_[pos_] == '.') {
                bump();
                while (pos_ < src_.size() &&
                       std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    bump();
            }
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                size_t look = pos_ + 1;
                if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
                if (look < src_.size() &&
                    std::isdigit(static_cast<unsigned char>(src_[look]))) {
                    while (pos_ < look) bump();
                    while (pos_ < src_.size() &&
                           std::isdigit(static_cast<unsigned char>(src_[pos_])))
                        bump();
                }
            }
            tok_.kind = Token::Number;
            tok_.text = src_.substr(start, pos_ - start);
            tok_.value = std::stod(tok_.text);
            tok_.span.length = static_cast<int>(tok_.text.size());
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                bump();
            tok_.kind = Token::Ident;
            tok_.text = src_.substr(start, pos_ - start);
            tok_.span.length = static_cast<int>(tok_.text.size());
            return;
        }
        tok_.kind = Token::Sym;
        tok_.text = std::string(1, c);
        bump();
    }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

// A parsed value: a normalized sum of basis terms. Constants are terms with
// tpow = 0, rate = 0, no trig (or the empty sum for zero).
using Terms = std::vector<ExpPolyTerm>;

[[noreturn]] void err(ParseErrorKind kind, SourceSpan span, const std::string& msg) {
    throw ParseError(kind, span, msg);
}

bool is_const(const Terms& v) {
    for (const auto& t : v)
        if (t.tpow != 0 || t.rate != 0.0 || t.trig != Trig::None) return false;
    return true;
}

double const_value(const Terms& v) {
    double s = 0.0;
    for (const auto& t : v) s += t.coeff;
    return s;
}

Terms make_const(double c) {
    if (c == 0.0) return {};
    return {{c, 0, 0.0, 0.0, Trig::None}};
}

Terms add(Terms a, const Terms& b) {
    a.insert(a.end(), b.begin(), b.end());
    return normalize_terms(std::move(a));
}

Terms mul(const Terms& a, const Terms& b) {
    if (is_const(a)) {
        double c = const_value(a);
        Terms out = b;
        for (auto& t : out) t.coeff *= c;
        return normalize_terms(std::move(out));
    }
    if (is_const(b)) return mul(b, a);
    return detail::from_complex(detail::mul(detail::to_complex(a), detail::to_complex(b)));
}

Terms neg(Terms v) {
    for (auto& t : v) t.coeff = -t.coeff;
    return v;
}

// True when v is affine a + b*t; reports a and b.
bool affine_parts(const Terms& v, double& a, double& b) {
    a = b = 0.0;
    for (const auto& t : v) {
        if (t.rate != 0.0 || t.trig != Trig::None || t.tpow > 1) return false;
        (t.tpow == 0 ? a : b) += t.coeff;
    }
    return true;
}

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) {}

    PiecewiseExpPoly run() {
        if (lex_.peek().kind == Token::Ident && lex_.peek().text == "piecewise")
            return parse_piecewise();
        Terms v = parse_expr();
        expect_end();
        return PiecewiseExpPoly({{0.0, std::move(v)}});
    }

private:
    Lexer lex_;

    [[noreturn]] void syntax(const Token& t, const std::string& what) {
        err(ParseErrorKind::Syntax, t.span,
            what + " (got '" + (t.kind == Token::End ? "<end>" : t.text) + "')");
    }

    Token expect_sym(const std::string& s) {
        Token t = lex_.take();
        if (t.kind != Token::Sym || t.text != s) syntax(t, "expected '" + s + "'");
        return t;
    }

    void expect_end() {
        if (lex_.peek().kind != Token::End) syntax(lex_.peek(), "unexpected trailing input");
    }

    PiecewiseExpPoly parse_piecewise() {
        lex_.take();  // "piecewise"
        expect_sym("{");
        std::vector<Piece> pieces;
        double prev_hi = 0.0;
        bool open_ended = false;
        while (!(lex_.peek().kind == Token::Sym && lex_.peek().text == "}")) {
            Token open = expect_sym("[");
            if (open_ended) err(ParseErrorKind::BadInterval, open.span,
                                "no piece may follow an unbounded one");
            double lo = parse_bound(false);
            expect_sym(",");
            Token hi_tok = lex_.peek();
            double hi = parse_bound(true);
            Token close = expect_sym(")");
            expect_sym(":");
            Terms v = parse_expr();
            expect_sym(";");
            if (pieces.empty()) {
                if (std::abs(lo) > kSignatureTol)
                    err(ParseErrorKind::BadInterval, open.span, "first piece must start at 0");
                lo = 0.0;
            } else {
                if (lo < prev_hi - kSignatureTol)
                    err(ParseErrorKind::Overlap, open.span, "piece overlaps the previous one");
                if (lo > prev_hi + kSignatureTol)
                    err(ParseErrorKind::BadInterval, open.span,
                        "gap before this piece; intervals must tile [0,inf)");
                lo = prev_hi;
            }
            if (!(hi > lo))
                err(ParseErrorKind::BadInterval, hi_tok.span,
                    "upper bound must exceed lower bound");
            pieces.push_back({lo, std::move(v)});
            prev_hi = hi;
            open_ended = std::isinf(hi);
            (void)close;
        }
        Token brace = lex_.take();  // "}"
        expect_end();
        if (pieces.empty()) err(ParseErrorKind::Syntax, brace.span, "empty piecewise block");
        if (!open_ended)
            err(ParseErrorKind::BadInterval, brace.span, "last piece must extend to inf");
        return PiecewiseExpPoly(std::move(pieces));
    }

    double parse_bound(bool allow_inf) {
        Token t = lex_.peek();
        if (t.kind == Token::Ident && t.text == "inf") {
            lex_.take();
            if (!allow_inf)
                err(ParseErrorKind::BadInterval, t.span, "'inf' allowed only as a right bound");
            return kInf;
        }
        Terms v = parse_expr();
        if (!is_const(v))
            err(ParseErrorKind::BadInterval, t.span, "interval bound must be constant");
        double c = const_value(v);
        if (c < 0.0) err(ParseErrorKind::BadInterval, t.span, "interval bound must be >= 0");
        return c;
    }

    Terms parse_expr() {
        Terms acc = parse_term();
        while (lex_.peek().kind == Token::Sym &&
               (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            bool minus = lex_.take().text == "-";
            Terms rhs = parse_term();
            acc = add(std::move(acc), minus ? neg(std::move(rhs)) : rhs);
        }
        return acc;
    }

    Terms parse_term() {
        Terms acc = parse_factor();
        while (lex_.peek().kind == Token::Sym &&
               (lex_.peek().text == "*" || lex_.peek().text == "/")) {
            Token op = lex_.take();
            Terms rhs = parse_factor();
            if (op.text == "*") {
                acc = mul(acc, rhs);
            } else {
                if (!is_const(rhs))
                    err(ParseErrorKind::NotRepresentable, op.span,
                        "division is only allowed by constants");
                double d = const_value(rhs);
                if (d == 0.0) err(ParseErrorKind::NotRepresentable, op.span, "division by zero");
                acc = mul(acc, make_const(1.0 / d));
            }
        }
        return acc;
    }

    Terms parse_factor() {
        if (lex_.peek().kind == Token::Sym && lex_.peek().text == "-") {
            lex_.take();
            return neg(parse_factor());
        }
        return parse_power();
    }

    Terms parse_power() {
        Terms base = parse_primary();
        if (!(lex_.peek().kind == Token::Sym && lex_.peek().text == "^")) return base;
        Token caret = lex_.take();
        bool negexp = false;
        if (lex_.peek().kind == Token::Sym && lex_.peek().text == "-") {
            lex_.take();
            negexp = true;
        }
        Token etok = lex_.peek();
        Terms expv = parse_primary();
        if (!is_const(expv))
            err(ParseErrorKind::NotRepresentable, etok.span, "exponent must be constant");
        double e = const_value(expv);
        if (std::abs(e - std::round(e)) > 1e-12)
            err(ParseErrorKind::NotRepresentable, etok.span, "exponent must be an integer");
        long k = std::lround(e) * (negexp ? -1 : 1);
        if (is_const(base)) return make_const(std::pow(const_value(base), static_cast<double>(k)));
        if (k < 0)
            err(ParseErrorKind::NotRepresentable, caret.span,
                "negative powers are only allowed for constants");
        return detail::from_complex(detail::pow(detail::to_complex(base), static_cast<int>(k)));
    }

    Terms parse_primary() {
        Token t = lex_.take();
        if (t.kind == Token::Number) return make_const(t.value);
        if (t.kind == Token::Sym && t.text == "(") {
            Terms v = parse_expr();
            expect_sym(")");
            return v;
        }
        if (t.kind == Token::Ident) {
            if (t.text == "t") return {{1.0, 1, 0.0, 0.0, Trig::None}};
            if (t.text == "pi") return make_const(std::acos(-1.0));
            if (t.text == "e") return make_const(std::exp(1.0));
            if (t.text == "exp" || t.text == "sin" || t.text == "cos" || t.text == "ln" ||
                t.text == "sqrt")
                return parse_call(t);
            syntax(t, "unknown symbol '" + t.text + "'");
        }
        syntax(t, "expected a number, 't', a constant, a function call or '('");
    }

    Terms parse_call(const Token& name) {
        expect_sym("(");
        Token arg_tok = lex_.peek();
        Terms arg = parse_expr();
        expect_sym(")");
        if (name.text == "ln") {
            if (!is_const(arg))
                err(ParseErrorKind::NotRepresentable, arg_tok.span,
                    "ln requires a constant argument");
            double c = const_value(arg);
            if (c <= 0.0)
                err(ParseErrorKind::NotRepresentable, arg_tok.span, "ln of a non-positive value");
            return make_const(std::log(c));
        }
        if (name.text == "sqrt") {
            if (!is_const(arg))
                err(ParseErrorKind::NotRepresentable, arg_tok.span,
                    "sqrt requires a constant argument");
            double c = const_value(arg);
            if (c < 0.0)
                err(ParseErrorKind::NotRepresentable, arg_tok.span, "sqrt of a negative value");
            return make_const(std::sqrt(c));
        }
        double a = 0.0, b = 0.0;
        if (!affine_parts(arg, a, b))
            err(ParseErrorKind::NotRepresentable, arg_tok.span,
                name.text + " requires an argument affine in t");
        if (name.text == "exp") {
            double c = std::exp(a);
            if (b == 0.0) return make_const(c);
            return {{c, 0, b, 0.0, Trig::None}};
        }
        double w = std::abs(b), s = b < 0.0 ? -1.0 : 1.0;
        if (name.text == "sin") {
            if (b == 0.0) return make_const(std::sin(a));
            return normalize_terms({{std::sin(a), 0, 0.0, w, Trig::Cos},
                                    {s * std::cos(a), 0, 0.0, w, Trig::Sin}});
        }
        // cos(a + b t) = cos(a)cos(bt) - sin(a)sin(bt)
        if (b == 0.0) return make_const(std::cos(a));
        return normalize_terms({{std::cos(a), 0, 0.0, w, Trig::Cos},
                                {-s * std::sin(a), 0, 0.0, w, Trig::Sin}});
    }
};

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_terms(const std::vector<ExpPolyTerm>& terms) {
    if (terms.empty()) return "0";
    std::string out;
    for (size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        double c = t.coeff;
        if (i == 0) {
            if (c < 0.0) {
                out += "-";
                c = -c;
            }
        } else {
            out += c < 0.0 ? " - " : " + ";
            if (c < 0.0) c = -c;
        }
        std::string part = fmt_num(c);
        if (t.tpow == 1)
            part += "*t";
        else if (t.tpow > 1)
            part += "*t^" + std::to_string(t.tpow);
        if (t.rate != 0.0) part += "*exp(" + fmt_num(t.rate) + "*t)";
        if (t.trig == Trig::Cos) part += "*cos(" + fmt_num(t.freq) + "*t)";
        if (t.trig == Trig::Sin) part += "*sin(" + fmt_num(t.freq) + "*t)";
        out += part;
    }
    return out;
}

}  // namespace

PiecewiseExpPoly parse(const std::string& text) { return Parser(text).run(); }

std::string format(const PiecewiseExpPoly& f) {
    if (f.pieces().size() == 1) return fmt_terms(f.pieces()[0].terms);
    std::string out = "piecewise {\n";
    for (size_t i = 0; i < f.pieces().size(); ++i) {
        double lo = f.pieces()[i].start;
        double hi = f.piece_end(i);
        out += "  [" + fmt_num(lo) + "," + (std::isinf(hi) ? "inf" : fmt_num(hi)) + "): " +
               fmt_terms(f.pieces()[i].terms) + ";\n";
    }
    out += "}";
    return out;
}

}  // namespace laprat
