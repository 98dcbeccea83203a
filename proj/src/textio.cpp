#include "jetform/textio.hpp"

#include <cctype>
#include <sstream>

namespace jetform {

namespace {

enum class Tok { Number, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

class Lexer {
  public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

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
        int line = line_, col = col_;
        if (pos_ >= src_.size()) {
            tok_ = {Tok::End, "", line, col};
            return;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string text;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                text += src_[pos_];
                bump();
            }
            tok_ = {Tok::Number, text, line, col};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string text;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                    src_[pos_] == '\'')) {
                text += src_[pos_];
                bump();
            }
            tok_ = {Tok::Name, text, line, col};
            return;
        }
        Tok k;
        switch (c) {
        case '+': k = Tok::Plus; break;
        case '-': k = Tok::Minus; break;
        case '*': k = Tok::Star; break;
        case '/': k = Tok::Slash; break;
        case '^': k = Tok::Caret; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        default:
            throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
        }
        bump();
        tok_ = {k, std::string(1, c), line, col};
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
    int line_ = 1;
    int col_ = 1;
    Token tok_{Tok::End, "", 1, 1};
};

class Parser {
  public:
    Parser(const std::string& src, ContextPtr ctx) : lex_(src), ctx_(std::move(ctx)) {}

    DiffPoly parse() {
        DiffPoly f = expr();
        const Token& t = lex_.peek();
        if (t.kind != Tok::End) throw SyntaxError("trailing input", t.line, t.column);
        return f;
    }

  private:
    [[noreturn]] void fail(const std::string& what, const Token& t) const {
        throw SyntaxError(what, t.line, t.column);
    }

    DiffPoly expr() {
        bool negate = false;
        if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            negate = true;
        } else if (lex_.peek().kind == Tok::Plus) {
            lex_.take();
        }
        DiffPoly f = term();
        if (negate) f = -f;
        while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
            bool minus = lex_.take().kind == Tok::Minus;
            DiffPoly g = term();
            if (minus)
                f -= g;
            else
                f += g;
        }
        return f;
    }

    DiffPoly term() {
        DiffPoly f = factor();
        while (lex_.peek().kind == Tok::Star || lex_.peek().kind == Tok::Slash) {
            Token op = lex_.take();
            DiffPoly g = factor();
            if (op.kind == Tok::Star) {
                f = f * g;
            } else {
                if (g.term_count() != 1 || !g.terms().begin()->first.empty())
                    fail("division requires a constant divisor", op);
                f = f.scaled(g.terms().begin()->second.inverse());
            }
        }
        return f;
    }

    DiffPoly factor() {
        DiffPoly f = atom();
        if (lex_.peek().kind == Tok::Caret) {
            Token op = lex_.take();
            Token e = lex_.take();
            if (e.kind != Tok::Number) fail("exponent must be a natural number", e);
            f = f.pow(std::stoi(e.text));
        }
        return f;
    }

    DiffPoly atom() {
        Token t = lex_.take();
        switch (t.kind) {
        case Tok::Number:
            return DiffPoly::constant(ctx_, GaussRat(mpq_class(t.text)));
        case Tok::LParen: {
            DiffPoly f = expr();
            Token close = lex_.take();
            if (close.kind != Tok::RParen) fail("expected ')'", close);
            return f;
        }
        case Tok::Name:
            return name_atom(t);
        default:
            fail("expected a number, name or '('", t);
        }
    }

    DiffPoly name_atom(const Token& t) {
        const std::string& s = t.text;
        if (s == "i") return DiffPoly::constant(ctx_, GaussRat::i());
        if (s == "sin" || s == "cos") return trig_atom(t);
        size_t underscore = s.find('_');
        std::string base = s.substr(0, underscore == std::string::npos ? s.size() : underscore);
        if (auto axis = ctx_->find_axis(base)) {
            if (underscore != std::string::npos) fail("coordinates take no subscript", t);
            return DiffPoly::coord(ctx_, *axis);
        }
        auto field = ctx_->find_field(base);
        if (!field) {
            // Distinguish an undeclared axis from an unknown name.
            if (base.size() > 1 && base[0] == 'x' &&
                std::isdigit(static_cast<unsigned char>(base[1])))
                fail("unknown axis '" + base + "'", t);
            fail("unknown name '" + base + "'", t);
        }
        MultiIndex j(ctx_->num_axes());
        if (underscore != std::string::npos) {
            std::string run = s.substr(underscore + 1);
            if (run.empty()) fail("empty subscript", t);
            size_t p = 0;
            while (p < run.size()) {
                if (run[p] != 'x') fail("malformed subscript '" + run + "'", t);
                size_t q = ++p;
                while (q < run.size() && std::isdigit(static_cast<unsigned char>(run[q]))) ++q;
                if (q == p) fail("malformed subscript '" + run + "'", t);
                int idx = std::stoi(run.substr(p, q - p));
                if (idx < 1 || idx > ctx_->num_axes())
                    fail("unknown axis 'x" + std::to_string(idx) + "'", t);
                j = j.incremented(Axis{idx});
                p = q;
            }
        }
        return DiffPoly::jet(ctx_, *field, j);
    }

    DiffPoly trig_atom(const Token& t) {
        bool sine = t.text == "sin";
        Token open = lex_.take();
        if (open.kind != Tok::LParen) fail("expected '(' after " + t.text, open);
        Token arg = lex_.take();
        if (arg.kind != Tok::Name) fail(t.text + " takes a bare field", arg);
        auto field = ctx_->find_field(arg.text);
        if (!field) fail("unknown name '" + arg.text + "'", arg);
        if (!ctx_->has_trig(*field))
            fail("field '" + arg.text + "' is not declared trigonometric", arg);
        Token close = lex_.take();
        if (close.kind != Tok::RParen) fail("expected ')'", close);
        return sine ? DiffPoly::sin_of(ctx_, *field) : DiffPoly::cos_of(ctx_, *field);
    }

    Lexer lex_;
    ContextPtr ctx_;
};

std::string rational_str(const mpq_class& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

// Renders |c|*monomial, returning whether c was negative. Pure-imaginary and
// mixed coefficients keep parseable forms ("i/2*...", "(1+2*i)*...").
std::pair<std::string, bool> render_term(const Context& ctx, const Monomial& m,
                                         const GaussRat& c) {
    std::ostringstream os;
    bool negative = false;
    bool need_star = false;
    if (c.is_real()) {
        mpq_class q = c.re();
        if (q < 0) {
            negative = true;
            q = -q;
        }
        if (q != 1 || m.empty()) {
            os << rational_str(q);
            need_star = true;
        }
    } else if (c.re() == 0) {
        mpq_class b = c.im();
        if (b < 0) {
            negative = true;
            b = -b;
        }
        if (b.get_num() == 1) {
            os << "i";
            if (b.get_den() != 1) os << "/" << b.get_den();
        } else {
            os << rational_str(b) << "*i";
        }
        need_star = true;
    } else {
        os << "(" << rational_str(c.re());
        mpq_class b = c.im();
        os << (b > 0 ? "+" : "-");
        b = abs(b);
        if (b == 1)
            os << "i";
        else
            os << rational_str(b) << "*i";
        os << ")";
        need_star = true;
    }
    for (auto& [g, e] : m.factors()) {
        if (need_star) os << "*";
        need_star = true;
        switch (g.kind) {
        case GenKind::Coord: os << ctx.axis_name(g.axis()); break;
        case GenKind::Sin: os << "sin(" << ctx.field_name(g.field()) << ")"; break;
        case GenKind::Cos: os << "cos(" << ctx.field_name(g.field()) << ")"; break;
        case GenKind::Jet: {
            os << ctx.field_name(g.field());
            if (!g.jet.is_zero()) {
                os << "_";
                for (int axis = 1; axis <= g.jet.num_axes(); ++axis)
                    for (int k = 0; k < g.jet[Axis{axis}]; ++k) os << "x" << axis;
            }
            break;
        }
        }
        if (e > 1) os << "^" << e;
    }
    return {os.str(), negative};
}

} // namespace

DiffPoly parse_expr(const std::string& src, const ContextPtr& ctx) {
    if (!ctx) throw ContextError("parse_expr requires a context");
    return Parser(src, ctx).parse();
}

std::string print_expr(const DiffPoly& f) {
    if (f.is_zero()) return "0";
    const Context& ctx = *f.context();
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : f.terms()) {
        auto [text, negative] = render_term(ctx, m, c);
        if (first) {
            if (negative) os << "-";
        } else {
            os << (negative ? " - " : " + ");
        }
        os << text;
        first = false;
    }
    return os.str();
}

std::string DiffPoly::str() const { return print_expr(*this); }

} // namespace jetform
