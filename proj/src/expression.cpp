#include "uslab/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

namespace uslab {

struct Expression::Node {
    enum class Op { number, var, constant_pi, constant_e, constant_i, add, sub, mul, div, pow, neg, call };
    Op op = Op::number;
    Rational value;
    std::string fn;
    std::vector<std::shared_ptr<const Node>> kids;
};

namespace {

using Node = Expression::Node;
using NodeP = std::shared_ptr<const Node>;

NodeP make(Node::Op op, std::vector<NodeP> kids = {}, Rational v = 0, std::string fn = {}) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->kids = std::move(kids);
    n->value = std::move(v);
    n->fn = std::move(fn);
    return n;
}

const char* const kFunctions[] = {"sin", "cos", "tan", "exp", "log", "sqrt", "abs", "sinh", "cosh"};

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodeP parse() {
        NodeP n = expr();
        skip();
        if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw DomainError("expression '" + s_ + "': " + msg + " at position " + std::to_string(i_));
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    NodeP expr() {
        NodeP n = term();
        for (;;) {
            if (eat('+'))
                n = make(Node::Op::add, {n, term()});
            else if (eat('-'))
                n = make(Node::Op::sub, {n, term()});
            else
                return n;
        }
    }
    NodeP term() {
        NodeP n = unary();
        for (;;) {
            if (eat('*'))
                n = make(Node::Op::mul, {n, unary()});
            else if (eat('/'))
                n = make(Node::Op::div, {n, unary()});
            else
                return n;
        }
    }
    NodeP unary() {
        if (eat('-')) return make(Node::Op::neg, {unary()});
        if (eat('+')) return unary();
        NodeP base = primary();
        if (eat('^')) return make(Node::Op::pow, {base, unary()});
        return base;
    }
    NodeP primary() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end");
        char c = s_[i_];
        if (eat('(')) {
            NodeP n = expr();
            if (!eat(')')) fail("missing ')'");
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string id;
            while (i_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[i_]))) id += s_[i_++];
            if (id == "x" || id == "z") return make(Node::Op::var);
            if (id == "pi") return make(Node::Op::constant_pi);
            if (id == "e") return make(Node::Op::constant_e);
            if (id == "i") return make(Node::Op::constant_i);
            for (const char* f : kFunctions)
                if (id == f) {
                    if (!eat('(')) fail("function " + id + " needs '('");
                    NodeP arg = expr();
                    if (!eat(')')) fail("missing ')'");
                    return make(Node::Op::call, {arg}, 0, id);
                }
            fail("unknown identifier '" + id + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
    NodeP number() {
        std::size_t start = i_;
        while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
        if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E') && i_ + 1 < s_.size() &&
            (std::isdigit(static_cast<unsigned char>(s_[i_ + 1])) ||
             ((s_[i_ + 1] == '-' || s_[i_ + 1] == '+') && i_ + 2 < s_.size() &&
              std::isdigit(static_cast<unsigned char>(s_[i_ + 2]))))) {
            i_ += 2;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        }
        return make(Node::Op::number, {}, parse_rational(s_.substr(start, i_ - start)));
    }

    const std::string& s_;
    std::size_t i_ = 0;
};

Complex eval(const Node& n, Complex z) {
    using Op = Node::Op;
    switch (n.op) {
        case Op::number: return {to_double(n.value), 0.0};
        case Op::var: return z;
        case Op::constant_pi: return {std::numbers::pi, 0.0};
        case Op::constant_e: return {std::numbers::e, 0.0};
        case Op::constant_i: return {0.0, 1.0};
        case Op::add: return eval(*n.kids[0], z) + eval(*n.kids[1], z);
        case Op::sub: return eval(*n.kids[0], z) - eval(*n.kids[1], z);
        case Op::mul: return eval(*n.kids[0], z) * eval(*n.kids[1], z);
        case Op::div: return eval(*n.kids[0], z) / eval(*n.kids[1], z);
        case Op::neg: return -eval(*n.kids[0], z);
        case Op::pow: {
            Complex b = eval(*n.kids[0], z);
            const Node& e = *n.kids[1];
            if (e.op == Op::number && e.value.get_den() == 1 && abs(e.value) <= 4096) {
                long k = e.value.get_num().get_si();
                Complex r = 1.0, p = b;
                for (unsigned long m = static_cast<unsigned long>(k < 0 ? -k : k); m; m >>= 1) {
                    if (m & 1) r *= p;
                    p *= p;
                }
                return k < 0 ? 1.0 / r : r;
            }
            return std::pow(b, eval(e, z));
        }
        case Op::call: {
            Complex a = eval(*n.kids[0], z);
            const std::string& f = n.fn;
            // Real arguments stay on the real branch so that real targets stay exactly real.
            if (a.imag() == 0.0) {
                double x = a.real();
                if (f == "sin") return std::sin(x);
                if (f == "cos") return std::cos(x);
                if (f == "tan") return std::tan(x);
                if (f == "exp") return std::exp(x);
                if (f == "sinh") return std::sinh(x);
                if (f == "cosh") return std::cosh(x);
                if (f == "abs") return std::fabs(x);
                if (f == "log" && x > 0) return std::log(x);
                if (f == "sqrt" && x >= 0) return std::sqrt(x);
            }
            if (f == "sin") return std::sin(a);
            if (f == "cos") return std::cos(a);
            if (f == "tan") return std::tan(a);
            if (f == "exp") return std::exp(a);
            if (f == "log") return std::log(a);
            if (f == "sqrt") return std::sqrt(a);
            if (f == "abs") return std::abs(a);
            if (f == "sinh") return std::sinh(a);
            if (f == "cosh") return std::cosh(a);
            return {NAN, NAN};
        }
    }
    return {NAN, NAN};
}

std::optional<Rational> exact(const Node& n, const Rational& z) {
    using Op = Node::Op;
    auto k0 = [&](std::size_t i) { return exact(*n.kids[i], z); };
    switch (n.op) {
        case Op::number: return n.value;
        case Op::var: return z;
        case Op::add: {
            auto a = k0(0), b = k0(1);
            if (!a || !b) return std::nullopt;
            return Rational(*a + *b);
        }
        case Op::sub: {
            auto a = k0(0), b = k0(1);
            if (!a || !b) return std::nullopt;
            return Rational(*a - *b);
        }
        case Op::mul: {
            auto a = k0(0), b = k0(1);
            if (!a || !b) return std::nullopt;
            return Rational(*a * *b);
        }
        case Op::div: {
            auto a = k0(0), b = k0(1);
            if (!a || !b || sgn(*b) == 0) return std::nullopt;
            return Rational(*a / *b);
        }
        case Op::neg: {
            auto a = k0(0);
            if (!a) return std::nullopt;
            return Rational(-*a);
        }
        case Op::pow: {
            auto a = k0(0);
            const Node& e = *n.kids[1];
            if (!a || e.op != Op::number || e.value.get_den() != 1 || abs(e.value) > 4096) return std::nullopt;
            long k = e.value.get_num().get_si();
            if (k < 0 && sgn(*a) == 0) return std::nullopt;
            mpz_class num, den;
            unsigned long m = static_cast<unsigned long>(k < 0 ? -k : k);
            mpz_pow_ui(num.get_mpz_t(), a->get_num_mpz_t(), m);
            mpz_pow_ui(den.get_mpz_t(), a->get_den_mpz_t(), m);
            return k < 0 ? ratio(den, num) : ratio(num, den);
        }
        default: return std::nullopt;
    }
}

std::optional<RatPoly> poly(const Node& n) {
    using Op = Node::Op;
    auto k = [&](std::size_t i) { return poly(*n.kids[i]); };
    switch (n.op) {
        case Op::number: return RatPoly::constant(n.value);
        case Op::var: return RatPoly({0, 1});
        case Op::add: {
            auto a = k(0), b = k(1);
            if (!a || !b) return std::nullopt;
            return *a + *b;
        }
        case Op::sub: {
            auto a = k(0), b = k(1);
            if (!a || !b) return std::nullopt;
            return *a - *b;
        }
        case Op::mul: {
            auto a = k(0), b = k(1);
            if (!a || !b) return std::nullopt;
            return *a * *b;
        }
        case Op::div: {
            auto a = k(0), b = k(1);
            if (!a || !b || b->degree() != 0) return std::nullopt;
            return a->scaled(Rational(1 / b->coeff(0)));
        }
        case Op::neg: {
            auto a = k(0);
            if (!a) return std::nullopt;
            return a->scaled(Rational(-1));
        }
        case Op::pow: {
            auto a = k(0);
            const Node& e = *n.kids[1];
            if (!a || e.op != Op::number || e.value.get_den() != 1 || sgn(e.value) < 0 || e.value > 4096)
                return std::nullopt;
            RatPoly r = RatPoly::constant(1);
            for (long m = e.value.get_num().get_si(); m > 0; --m) r = r * *a;
            return r;
        }
        default: return std::nullopt;
    }
}

}  // namespace

Expression::Expression() : root_(make(Node::Op::number)), text_("0") {}

Expression Expression::parse(const std::string& text) {
    Expression e;
    Parser p(text);
    e.root_ = p.parse();
    e.text_ = text;
    return e;
}

Expression Expression::from_polynomial(const RatPoly& p) {
    if (sgn(p.center()) != 0) return from_polynomial(p.recentered(Rational(0)));
    std::string s;
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
        if (sgn(p.coeffs()[k]) == 0) continue;
        if (!s.empty()) s += " + ";
        s += "(" + p.coeffs()[k].get_str() + ")";
        if (k > 0) s += "*z^" + std::to_string(k);
    }
    return parse(s.empty() ? "0" : s);
}

Complex Expression::operator()(Complex z) const { return eval(*root_, z); }

std::optional<Rational> Expression::exact(const Rational& z) const { return uslab::exact(*root_, z); }

std::optional<RatPoly> Expression::polynomial() const { return poly(*root_); }

}  // namespace uslab
