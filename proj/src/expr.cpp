#include "eqdeg/expr.hpp"

#include <cctype>
#include <sstream>

namespace eqdeg {

Poly Poly::constant(const Rat& c) {
    auto n = std::make_shared<Node>();
    n->op = Op::constant;
    n->c = c;
    n->cd = rat_to_double(c);
    return Poly(std::move(n));
}

Poly Poly::variable(int index) {
    auto n = std::make_shared<Node>();
    n->op = Op::variable;
    n->var = index;
    return Poly(std::move(n));
}

bool Poly::is_zero() const { return root_->op == Op::constant && root_->c == 0; }

// smart constructor with constant folding
Poly Poly::make(Op op, Poly a, Poly b) {
    const bool a_const = a.root_->op == Op::constant;
    const bool b_const = b.root_ && b.root_->op == Op::constant;
    switch (op) {
    case Op::add:
        if (a_const && a.root_->c == 0) return b;
        if (b_const && b.root_->c == 0) return a;
        if (a_const && b_const) return constant(a.root_->c + b.root_->c);
        break;
    case Op::sub:
        if (b_const && b.root_->c == 0) return a;
        if (a_const && b_const) return constant(a.root_->c - b.root_->c);
        break;
    case Op::mul:
        if (a_const) {
            if (a.root_->c == 0) return constant(Rat(0));
            if (a.root_->c == 1) return b;
        }
        if (b_const) {
            if (b.root_->c == 0) return constant(Rat(0));
            if (b.root_->c == 1) return a;
        }
        if (a_const && b_const) return constant(a.root_->c * b.root_->c);
        break;
    case Op::neg:
        if (a_const) return constant(-a.root_->c);
        break;
    default:
        break;
    }
    auto n = std::make_shared<Node>();
    n->op = op;
    n->a = a.root_;
    n->b = b.root_;
    return Poly(std::move(n));
}

Poly Poly::operator+(const Poly& o) const { return make(Op::add, *this, o); }
Poly Poly::operator-(const Poly& o) const { return make(Op::sub, *this, o); }
Poly Poly::operator*(const Poly& o) const { return make(Op::mul, *this, o); }
Poly Poly::operator-() const { return make(Op::neg, *this, Poly()); }

Poly Poly::pow(int exponent) const {
    if (exponent < 0) throw ConfigError("negative exponents are not polynomial");
    if (exponent == 0) return constant(Rat(1));
    if (exponent == 1) return *this;
    if (root_->op == Op::constant) {
        Rat r = 1;
        for (int i = 0; i < exponent; ++i) r *= root_->c;
        return constant(r);
    }
    auto n = std::make_shared<Node>();
    n->op = Op::pow;
    n->exponent = exponent;
    n->a = root_;
    return Poly(std::move(n));
}

template <class T>
T Poly::eval_node(const Node& n, const std::vector<T>& xs) {
    switch (n.op) {
    case Op::constant:
        if constexpr (std::is_same_v<T, double>)
            return n.cd;
        else
            return n.c;
    case Op::variable:
        if (n.var >= int(xs.size())) throw Error("polynomial variable out of range");
        return xs[size_t(n.var)];
    case Op::add: return eval_node(*n.a, xs) + eval_node(*n.b, xs);
    case Op::sub: return eval_node(*n.a, xs) - eval_node(*n.b, xs);
    case Op::mul: return eval_node(*n.a, xs) * eval_node(*n.b, xs);
    case Op::neg: return -eval_node(*n.a, xs);
    case Op::pow: {
        T base = eval_node(*n.a, xs);
        T r = base;
        for (int i = 1; i < n.exponent; ++i) r = r * base;
        return r;
    }
    }
    throw Error("corrupt polynomial node");
}

double Poly::eval(const std::vector<double>& xs) const { return eval_node(*root_, xs); }
Rat Poly::eval_exact(const std::vector<Rat>& xs) const { return eval_node(*root_, xs); }

Poly Poly::derivative(int var) const {
    const Node& n = *root_;
    switch (n.op) {
    case Op::constant: return constant(Rat(0));
    case Op::variable: return constant(Rat(n.var == var ? 1 : 0));
    case Op::add: return Poly(n.a).derivative(var) + Poly(n.b).derivative(var);
    case Op::sub: return Poly(n.a).derivative(var) - Poly(n.b).derivative(var);
    case Op::mul:
        return Poly(n.a).derivative(var) * Poly(n.b) + Poly(n.a) * Poly(n.b).derivative(var);
    case Op::neg: return -Poly(n.a).derivative(var);
    case Op::pow:
        return constant(Rat(n.exponent)) * Poly(n.a).pow(n.exponent - 1) *
               Poly(n.a).derivative(var);
    }
    throw Error("corrupt polynomial node");
}

Poly Poly::substitute(int var, const Poly& value) const {
    const Node& n = *root_;
    switch (n.op) {
    case Op::constant: return *this;
    case Op::variable: return n.var == var ? value : *this;
    case Op::add: return Poly(n.a).substitute(var, value) + Poly(n.b).substitute(var, value);
    case Op::sub: return Poly(n.a).substitute(var, value) - Poly(n.b).substitute(var, value);
    case Op::mul: return Poly(n.a).substitute(var, value) * Poly(n.b).substitute(var, value);
    case Op::neg: return -Poly(n.a).substitute(var, value);
    case Op::pow: return Poly(n.a).substitute(var, value).pow(n.exponent);
    }
    throw Error("corrupt polynomial node");
}

int Poly::max_var() const {
    const Node& n = *root_;
    switch (n.op) {
    case Op::constant: return -1;
    case Op::variable: return n.var;
    case Op::add:
    case Op::sub:
    case Op::mul: return std::max(Poly(n.a).max_var(), Poly(n.b).max_var());
    case Op::neg:
    case Op::pow: return Poly(n.a).max_var();
    }
    return -1;
}

std::string Poly::str() const {
    const Node& n = *root_;
    switch (n.op) {
    case Op::constant: return rat_to_string(n.c);
    case Op::variable: return "x" + std::to_string(n.var + 1);
    case Op::add: return "(" + Poly(n.a).str() + " + " + Poly(n.b).str() + ")";
    case Op::sub: return "(" + Poly(n.a).str() + " - " + Poly(n.b).str() + ")";
    case Op::mul: return "(" + Poly(n.a).str() + "*" + Poly(n.b).str() + ")";
    case Op::neg: return "(-" + Poly(n.a).str() + ")";
    case Op::pow: return Poly(n.a).str() + "^" + std::to_string(n.exponent);
    }
    return "?";
}

// ---------------------------------------------------------------------------
// parser

namespace {

struct Token {
    enum class Kind { number, ident, op, end } kind = Kind::end;
    std::string text;
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
    std::string src_;
    size_t pos_ = 0;
    Token tok_;

    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ >= src_.size()) {
            tok_ = {Token::Kind::end, ""};
            return;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
                ++pos_;
            // rational literal p/q: a slash immediately followed by digits
            if (pos_ < src_.size() && src_[pos_] == '/' && pos_ + 1 < src_.size() &&
                std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
                ++pos_;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            }
            tok_ = {Token::Kind::number, src_.substr(start, pos_ - start)};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_]))))
                ++pos_;
            tok_ = {Token::Kind::ident, src_.substr(start, pos_ - start)};
            return;
        }
        if (std::string("+-*^()").find(c) != std::string::npos) {
            ++pos_;
            tok_ = {Token::Kind::op, std::string(1, c)};
            return;
        }
        throw ConfigError(std::string("unexpected character '") + c + "' in expression");
    }
};

class Parser {
public:
    Parser(const std::string& src, int nvars, bool allow_t)
        : lex_(src), nvars_(nvars), allow_t_(allow_t) {}

    Poly parse() {
        Poly p = expr();
        if (lex_.peek().kind != Token::Kind::end)
            throw ConfigError("trailing input in expression: '" + lex_.peek().text + "'");
        return p;
    }

private:
    Lexer lex_;
    int nvars_;
    bool allow_t_;

    bool peek_op(const char* s) const {
        return lex_.peek().kind == Token::Kind::op && lex_.peek().text == s;
    }

    Poly expr() {
        bool negate = false;
        if (peek_op("-")) { lex_.take(); negate = true; }
        else if (peek_op("+")) lex_.take();
        Poly acc = term();
        if (negate) acc = -acc;
        while (peek_op("+") || peek_op("-")) {
            bool minus = lex_.take().text == "-";
            Poly t = term();
            acc = minus ? acc - t : acc + t;
        }
        return acc;
    }

    Poly term() {
        Poly acc = factor();
        while (peek_op("*")) {
            lex_.take();
            acc = acc * factor();
        }
        return acc;
    }

    Poly factor() {
        bool negate = false;
        while (peek_op("-")) { lex_.take(); negate = !negate; }
        Poly base = atom();
        if (peek_op("^")) {
            lex_.take();
            Token e = lex_.take();
            if (e.kind != Token::Kind::number || e.text.find_first_of("./") != std::string::npos)
                throw ConfigError("exponent must be a plain integer");
            base = base.pow(std::stoi(e.text));
        }
        return negate ? -base : base;
    }

    Poly atom() {
        Token t = lex_.take();
        if (t.kind == Token::Kind::number) return Poly::constant(rat_from_string(t.text));
        if (t.kind == Token::Kind::ident) {
            if (t.text == "t") {
                if (!allow_t_) throw ConfigError("variable t is not allowed here");
                return Poly::variable(nvars_);
            }
            if (t.text.size() >= 2 && t.text[0] == 'x') {
                int i = 0;
                try {
                    i = std::stoi(t.text.substr(1));
                } catch (const std::exception&) {
                    throw ConfigError("unknown identifier '" + t.text + "'");
                }
                if (i < 1 || i > nvars_)
                    throw ConfigError("variable " + t.text + " out of range (n = " +
                                      std::to_string(nvars_) + ")");
                return Poly::variable(i - 1);
            }
            throw ConfigError("unknown identifier '" + t.text + "'");
        }
        if (t.kind == Token::Kind::op && t.text == "(") {
            Poly p = expr();
            if (!peek_op(")")) throw ConfigError("missing closing parenthesis");
            lex_.take();
            return p;
        }
        throw ConfigError("unexpected token '" + t.text + "' in expression");
    }
};

} // namespace

Poly Poly::parse(const std::string& src, int nvars, bool allow_t) {
    return Parser(src, nvars, allow_t).parse();
}

// ---------------------------------------------------------------------------
// MapExpression

MapExpression MapExpression::parse(const std::vector<std::string>& exprs, int n, bool allow_t) {
    MapExpression m;
    m.inputs = n;
    m.outputs = int(exprs.size());
    m.has_t = false;
    for (const auto& src : exprs) {
        Poly p = Poly::parse(src, n, allow_t);
        if (p.max_var() >= n) m.has_t = true;
        m.out.push_back(std::move(p));
    }
    m.finalize();
    return m;
}

MapExpression MapExpression::from_polys(std::vector<Poly> polys, int n, bool has_t) {
    MapExpression m;
    m.inputs = n;
    m.outputs = int(polys.size());
    m.has_t = has_t;
    m.out = std::move(polys);
    m.finalize();
    return m;
}

void MapExpression::finalize() {
    jac.clear();
    for (const auto& p : out) {
        std::vector<Poly> row;
        for (int j = 0; j < inputs; ++j) row.push_back(p.derivative(j));
        jac.push_back(std::move(row));
    }
}

Vec MapExpression::eval(const Vec& x, double t) const {
    std::vector<double> xs(x.data(), x.data() + x.size());
    if (has_t) xs.push_back(t);
    Vec y(outputs);
    for (int i = 0; i < outputs; ++i) y(i) = out[size_t(i)].eval(xs);
    return y;
}

std::vector<Rat> MapExpression::eval_exact(const std::vector<Rat>& x, const Rat& t) const {
    std::vector<Rat> xs = x;
    if (has_t) xs.push_back(t);
    std::vector<Rat> y;
    y.reserve(size_t(outputs));
    for (int i = 0; i < outputs; ++i) y.push_back(out[size_t(i)].eval_exact(xs));
    return y;
}

Mat MapExpression::jacobian(const Vec& x, double t) const {
    std::vector<double> xs(x.data(), x.data() + x.size());
    if (has_t) xs.push_back(t);
    Mat j(outputs, inputs);
    for (int i = 0; i < outputs; ++i)
        for (int k = 0; k < inputs; ++k) j(i, k) = jac[size_t(i)][size_t(k)].eval(xs);
    return j;
}

MapExpression MapExpression::at_time(const Rat& t) const {
    std::vector<Poly> fixed;
    for (const auto& p : out) fixed.push_back(p.substitute(inputs, Poly::constant(t)));
    return from_polys(std::move(fixed), inputs, false);
}

MapExpression MapExpression::blend(const MapExpression& a, const MapExpression& b, const Rat& t) {
    if (a.inputs != b.inputs || a.outputs != b.outputs)
        throw Error("blend of maps with different shapes");
    std::vector<Poly> mix;
    for (int i = 0; i < a.outputs; ++i)
        mix.push_back(a.out[size_t(i)].scaled(Rat(1) - t) + b.out[size_t(i)].scaled(t));
    return from_polys(std::move(mix), a.inputs, false);
}

} // namespace eqdeg
