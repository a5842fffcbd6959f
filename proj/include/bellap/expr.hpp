#pragma once

#include <cctype>
#include <cmath>
#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bellap/rational.hpp"
#include "bellap/series.hpp"

namespace bellap {

// Expression tree over one variable.  Constants are exact rationals and
// always nonnegative (signs live in neg nodes), which keeps the canonical
// printer round-trippable.
struct ExprNode {
    enum class Kind { constant, variable, add, sub, mul, div, pow, neg, call };
    enum class Func { exp, sin, cos, sqrt, ln };

    Kind kind;
    Rational value;          // constant
    double value_d = 0.0;    // constant, cached as double
    int exponent = 0;        // pow
    Func func = Func::exp;   // call
    std::size_t offset = 0;  // byte offset in the source text
    std::shared_ptr<const ExprNode> a, b;
};

using ExprPtr = std::shared_ptr<const ExprNode>;

namespace expr_detail {

inline ExprPtr constant(Rational v, std::size_t off = 0) {
    auto n = std::make_shared<ExprNode>();
    n->kind = v < 0 ? ExprNode::Kind::neg : ExprNode::Kind::constant;
    if (v < 0) {
        n->offset = off;
        n->a = constant(-v, off);
        return n;
    }
    n->value = std::move(v);
    n->value_d = to_double(n->value);
    n->offset = off;
    return n;
}

inline ExprPtr variable(std::size_t off = 0) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::variable;
    n->offset = off;
    return n;
}

inline bool is_const(const ExprPtr& e, const Rational& v) {
    return e->kind == ExprNode::Kind::constant && e->value == v;
}

inline ExprPtr binary(ExprNode::Kind k, ExprPtr a, ExprPtr b, std::size_t off = 0) {
    // light algebraic cleanup so derivatives stay readable
    if (k == ExprNode::Kind::add) {
        if (is_const(a, 0)) return b;
        if (is_const(b, 0)) return a;
    }
    if (k == ExprNode::Kind::sub && is_const(b, 0)) return a;
    if (k == ExprNode::Kind::mul) {
        if (is_const(a, 0) || is_const(b, 0)) return constant(Rational(0), off);
        if (is_const(a, 1)) return b;
        if (is_const(b, 1)) return a;
    }
    if (k == ExprNode::Kind::div && is_const(b, 1)) return a;
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    n->offset = off;
    return n;
}

inline ExprPtr negate(ExprPtr a, std::size_t off = 0) {
    if (is_const(a, 0)) return a;
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::neg;
    n->a = std::move(a);
    n->offset = off;
    return n;
}

inline ExprPtr power(ExprPtr a, int e, std::size_t off = 0) {
    if (e == 1) return a;
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::pow;
    n->a = std::move(a);
    n->exponent = e;
    n->offset = off;
    return n;
}

inline ExprPtr call(ExprNode::Func f, ExprPtr a, std::size_t off = 0) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::call;
    n->func = f;
    n->a = std::move(a);
    n->offset = off;
    return n;
}

}  // namespace expr_detail

class FunctionExpr {
public:
    static FunctionExpr parse(std::string_view text, char var = 't');

    double eval(double t) const { return eval_impl<double>(root_, t); }
    double operator()(double t) const { return eval(t); }

    std::complex<double> eval_complex(std::complex<double> z) const {
        return eval_impl<std::complex<double>>(root_, z);
    }

    std::string str() const {
        std::string out;
        print(root_, 0, out);
        return out;
    }

    FunctionExpr derivative() const { return FunctionExpr(diff(root_), var_); }

    // Exact Taylor coefficients c_k with f = sum c_k t^k / k!, when the tree
    // supports exact series composition (exp/sin/cos need inner constant
    // term 0; ln/sqrt need inner constant term 1; division needs an
    // invertible denominator).  nullopt otherwise.
    std::optional<std::vector<Rational>> taylor_egf(int N) const {
        auto plain = series(root_, N);
        if (!plain) return std::nullopt;
        std::vector<Rational> c(N + 1);
        for (int k = 0; k <= N; ++k) c[k] = (*plain)[k] * factorial(k);
        return c;
    }

    const ExprPtr& root() const { return root_; }
    char variable_name() const { return var_; }

    // alpha*f + beta*g, built on the trees
    static FunctionExpr linear_combination(const Rational& alpha, const FunctionExpr& f,
                                           const Rational& beta, const FunctionExpr& g) {
        using namespace expr_detail;
        return FunctionExpr(binary(ExprNode::Kind::add,
                                   binary(ExprNode::Kind::mul, constant(alpha), f.root_),
                                   binary(ExprNode::Kind::mul, constant(beta), g.root_)),
                            f.var_);
    }

    // f(d*t): substitutes d*t for the variable
    FunctionExpr scale_argument(const Rational& d) const {
        return FunctionExpr(substitute(root_, d), var_);
    }

    explicit FunctionExpr(ExprPtr root, char var = 't')
        : root_(std::move(root)), var_(var) {}

private:
    ExprPtr root_;
    char var_;

    template <class V>
    static V eval_impl(const ExprPtr& e, const V& t) {
        using K = ExprNode::Kind;
        switch (e->kind) {
            case K::constant:
                return V(e->value_d);
            case K::variable:
                return t;
            case K::add:
                return eval_impl(e->a, t) + eval_impl(e->b, t);
            case K::sub:
                return eval_impl(e->a, t) - eval_impl(e->b, t);
            case K::mul:
                return eval_impl(e->a, t) * eval_impl(e->b, t);
            case K::div: {
                V den = eval_impl(e->b, t);
                if (std::abs(den) == 0.0)
                    throw domain_error("division by zero at offset " +
                                       std::to_string(e->offset));
                return eval_impl(e->a, t) / den;
            }
            case K::pow: {
                V base = eval_impl(e->a, t);
                if (e->exponent < 0 && std::abs(base) == 0.0)
                    throw domain_error("zero base with negative exponent at offset " +
                                       std::to_string(e->offset));
                V r = V(1.0);
                V b = e->exponent < 0 ? V(1.0) / base : base;
                for (int n = std::abs(e->exponent); n > 0; n >>= 1) {
                    if (n & 1) r *= b;
                    b *= b;
                }
                return r;
            }
            case K::neg:
                return -eval_impl(e->a, t);
            case K::call: {
                V u = eval_impl(e->a, t);
                switch (e->func) {
                    case ExprNode::Func::exp: return exp(u);
                    case ExprNode::Func::sin: return sin(u);
                    case ExprNode::Func::cos: return cos(u);
                    case ExprNode::Func::sqrt:
                        if constexpr (std::is_same_v<V, double>) {
                            if (u < 0)
                                throw domain_error("sqrt of negative value at offset " +
                                                   std::to_string(e->offset));
                        }
                        return sqrt(u);
                    case ExprNode::Func::ln:
                        if constexpr (std::is_same_v<V, double>) {
                            if (u <= 0)
                                throw domain_error("log of non-positive value at offset " +
                                                   std::to_string(e->offset));
                        }
                        return log(u);
                }
                throw domain_error("unknown function");
            }
        }
        throw domain_error("malformed expression tree");
    }

    // printing precedence: atoms/calls 5, pow 4, neg 3, mul/div 2, add/sub 1
    static int prec(const ExprPtr& e) {
        using K = ExprNode::Kind;
        switch (e->kind) {
            case K::add: case K::sub: return 1;
            case K::mul: case K::div: return 2;
            case K::neg: return 3;
            case K::pow: return 4;
            default: return 5;
        }
    }

    static void print(const ExprPtr& e, int parent_prec, std::string& out) {
        using K = ExprNode::Kind;
        const int p = prec(e);
        const bool parens = p < parent_prec;
        if (parens) out += '(';
        switch (e->kind) {
            case K::constant:
                out += to_fraction_string(e->value);
                break;
            case K::variable:
                out += 't';
                break;
            case K::add:
                print(e->a, p, out);
                out += " + ";
                print(e->b, p + 1, out);
                break;
            case K::sub:
                print(e->a, p, out);
                out += " - ";
                print(e->b, p + 1, out);
                break;
            case K::mul:
                print(e->a, p, out);
                out += '*';
                print(e->b, p + 1, out);
                break;
            case K::div:
                print(e->a, p, out);
                out += '/';
                print(e->b, p + 1, out);
                break;
            case K::neg:
                out += '-';
                print(e->a, p, out);
                break;
            case K::pow:
                print(e->a, p + 1, out);
                out += '^';
                if (e->exponent < 0) {
                    out += '(';
                    out += std::to_string(e->exponent);
                    out += ')';
                } else {
                    out += std::to_string(e->exponent);
                }
                break;
            case K::call:
                switch (e->func) {
                    case ExprNode::Func::exp: out += "exp"; break;
                    case ExprNode::Func::sin: out += "sin"; break;
                    case ExprNode::Func::cos: out += "cos"; break;
                    case ExprNode::Func::sqrt: out += "sqrt"; break;
                    case ExprNode::Func::ln: out += "ln"; break;
                }
                out += '(';
                print(e->a, 0, out);
                out += ')';
                break;
        }
        if (parens) out += ')';
    }

    static ExprPtr diff(const ExprPtr& e) {
        using namespace expr_detail;
        using K = ExprNode::Kind;
        switch (e->kind) {
            case K::constant:
                return constant(Rational(0));
            case K::variable:
                return constant(Rational(1));
            case K::add:
                return binary(K::add, diff(e->a), diff(e->b));
            case K::sub:
                return binary(K::sub, diff(e->a), diff(e->b));
            case K::mul:
                return binary(K::add, binary(K::mul, diff(e->a), e->b),
                              binary(K::mul, e->a, diff(e->b)));
            case K::div:
                return binary(K::div,
                              binary(K::sub, binary(K::mul, diff(e->a), e->b),
                                     binary(K::mul, e->a, diff(e->b))),
                              power(e->b, 2));
            case K::pow:
                if (e->exponent == 0) return constant(Rational(0));
                return binary(K::mul,
                              binary(K::mul, constant(Rational(e->exponent)),
                                     power(e->a, e->exponent - 1)),
                              diff(e->a));
            case K::neg:
                return negate(diff(e->a));
            case K::call: {
                ExprPtr du = diff(e->a);
                switch (e->func) {
                    case ExprNode::Func::exp:
                        return binary(K::mul, e, du);
                    case ExprNode::Func::sin:
                        return binary(K::mul, call(ExprNode::Func::cos, e->a), du);
                    case ExprNode::Func::cos:
                        return negate(binary(K::mul, call(ExprNode::Func::sin, e->a), du));
                    case ExprNode::Func::sqrt:
                        return binary(K::div, du,
                                      binary(K::mul, constant(Rational(2)), e));
                    case ExprNode::Func::ln:
                        return binary(K::div, du, e->a);
                }
                throw domain_error("unknown function");
            }
        }
        throw domain_error("malformed expression tree");
    }

    static ExprPtr substitute(const ExprPtr& e, const Rational& d) {
        using namespace expr_detail;
        using K = ExprNode::Kind;
        if (e->kind == K::variable)
            return binary(K::mul, constant(d), variable());
        auto n = std::make_shared<ExprNode>(*e);
        if (e->a) n->a = substitute(e->a, d);
        if (e->b) n->b = substitute(e->b, d);
        return n;
    }

    // --- exact plain Taylor series of the tree, truncated at order N ---

    static std::optional<FormalPowerSeries> series(const ExprPtr& e, int N) {
        using K = ExprNode::Kind;
        switch (e->kind) {
            case K::constant: {
                std::vector<Rational> c(N + 1, Rational(0));
                c[0] = e->value;
                return FormalPowerSeries(std::move(c));
            }
            case K::variable: {
                std::vector<Rational> c(N + 1, Rational(0));
                if (N >= 1) c[1] = 1;
                return FormalPowerSeries(std::move(c));
            }
            case K::add: {
                auto x = series(e->a, N), y = series(e->b, N);
                if (!x || !y) return std::nullopt;
                return *x + *y;
            }
            case K::sub: {
                auto x = series(e->a, N), y = series(e->b, N);
                if (!x || !y) return std::nullopt;
                return *x - *y;
            }
            case K::mul: {
                auto x = series(e->a, N), y = series(e->b, N);
                if (!x || !y) return std::nullopt;
                return *x * *y;
            }
            case K::div: {
                auto x = series(e->a, N), y = series(e->b, N);
                if (!x || !y || (*y)[0] == 0) return std::nullopt;
                return *x * y->reciprocal();
            }
            case K::pow: {
                auto x = series(e->a, N);
                if (!x) return std::nullopt;
                int n = e->exponent;
                if (n < 0) {
                    if ((*x)[0] == 0) return std::nullopt;
                    x = x->reciprocal();
                    n = -n;
                }
                FormalPowerSeries r = FormalPowerSeries::one(N);
                for (int i = 0; i < n; ++i) r = r * *x;
                return r;
            }
            case K::neg: {
                auto x = series(e->a, N);
                if (!x) return std::nullopt;
                std::vector<Rational> c(N + 1);
                for (int k = 0; k <= N; ++k) c[k] = -(*x)[k];
                return FormalPowerSeries(std::move(c));
            }
            case K::call: {
                auto xo = series(e->a, N);
                if (!xo) return std::nullopt;
                const FormalPowerSeries& u = *xo;
                switch (e->func) {
                    case ExprNode::Func::exp: return series_exp(u, N);
                    case ExprNode::Func::sin: return series_sincos(u, N, true);
                    case ExprNode::Func::cos: return series_sincos(u, N, false);
                    case ExprNode::Func::ln: return series_ln(u, N);
                    case ExprNode::Func::sqrt: return series_sqrt(u, N);
                }
                return std::nullopt;
            }
        }
        return std::nullopt;
    }

    // e_n = (1/n) sum_{j=1..n} j u_j e_{n-j}, e_0 = 1; needs u_0 = 0
    static std::optional<FormalPowerSeries> series_exp(const FormalPowerSeries& u, int N) {
        if (u[0] != 0) return std::nullopt;
        std::vector<Rational> e(N + 1, Rational(0));
        e[0] = 1;
        for (int n = 1; n <= N; ++n) {
            Rational acc = 0;
            for (int j = 1; j <= n; ++j) acc += Rational(j) * u[j] * e[n - j];
            e[n] = acc / n;
        }
        return FormalPowerSeries(std::move(e));
    }

    static std::optional<FormalPowerSeries> series_sincos(const FormalPowerSeries& u,
                                                          int N, bool want_sin) {
        if (u[0] != 0) return std::nullopt;
        std::vector<Rational> s(N + 1, Rational(0)), c(N + 1, Rational(0));
        c[0] = 1;
        for (int n = 1; n <= N; ++n) {
            Rational as = 0, ac = 0;
            for (int j = 1; j <= n; ++j) {
                as += Rational(j) * u[j] * c[n - j];
                ac += Rational(j) * u[j] * s[n - j];
            }
            s[n] = as / n;
            c[n] = -ac / n;
        }
        return FormalPowerSeries(want_sin ? std::move(s) : std::move(c));
    }

    // ln u = integral of u'/u; needs u_0 = 1
    static std::optional<FormalPowerSeries> series_ln(const FormalPowerSeries& u, int N) {
        if (u[0] != 1) return std::nullopt;
        std::vector<Rational> du(N + 1, Rational(0));
        for (int k = 0; k < N; ++k) du[k] = Rational(k + 1) * u[k + 1];
        FormalPowerSeries v = FormalPowerSeries(std::move(du)) * u.reciprocal();
        std::vector<Rational> l(N + 1, Rational(0));
        for (int k = 1; k <= N; ++k) l[k] = v[k - 1] / k;
        return FormalPowerSeries(std::move(l));
    }

    // sqrt(1 + v) by the binomial series; needs u_0 = 1
    static std::optional<FormalPowerSeries> series_sqrt(const FormalPowerSeries& u, int N) {
        if (u[0] != 1) return std::nullopt;
        FormalPowerSeries v = u - FormalPowerSeries::one(N);
        FormalPowerSeries acc = FormalPowerSeries::one(N);
        FormalPowerSeries vpow = FormalPowerSeries::one(N);
        Rational coef = 1;
        for (int j = 1; j <= N; ++j) {
            coef *= (Rational(1, 2) - (j - 1)) / j;  // C(1/2, j)
            vpow = vpow * v;
            std::vector<Rational> scaled(N + 1);
            for (int k = 0; k <= N; ++k) scaled[k] = coef * vpow[k];
            acc = acc + FormalPowerSeries(std::move(scaled));
        }
        return acc;
    }
};

// --- recursive-descent parser -------------------------------------------

namespace expr_detail {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;
    char var;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool consume(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    ExprPtr parse_expr() {
        ExprPtr lhs = parse_term();
        while (true) {
            std::size_t off = pos;
            if (consume('+'))
                lhs = binary(ExprNode::Kind::add, lhs, parse_term(), off);
            else if (consume('-'))
                lhs = binary(ExprNode::Kind::sub, lhs, parse_term(), off);
            else
                return lhs;
        }
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_unary();
        while (true) {
            std::size_t off = pos;
            if (consume('*'))
                lhs = binary(ExprNode::Kind::mul, lhs, parse_unary(), off);
            else if (consume('/'))
                lhs = make_div(lhs, parse_unary(), off);
            else
                return lhs;
        }
    }

    // integer/integer literals fold to one rational constant so the printer
    // can emit exact fractions that reparse to the same tree
    static ExprPtr make_div(ExprPtr a, ExprPtr b, std::size_t off) {
        if (a->kind == ExprNode::Kind::constant && b->kind == ExprNode::Kind::constant &&
            b->value != 0)
            return constant(a->value / b->value, off);
        return binary(ExprNode::Kind::div, std::move(a), std::move(b), off);
    }

    ExprPtr parse_unary() {
        std::size_t off = pos;
        if (consume('-')) return negate(parse_unary(), off);
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_primary();
        skip_ws();
        if (pos < text.size() && text[pos] == '^') {
            std::size_t off = ++pos;
            skip_ws();
            bool neg = false;
            bool wrapped = false;
            if (pos < text.size() && text[pos] == '(') {
                wrapped = true;
                ++pos;
                skip_ws();
            }
            if (pos < text.size() && text[pos] == '-') {
                neg = true;
                ++pos;
            }
            std::size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                ++pos;
            if (start == pos) throw parse_error(off, "integer exponent");
            long e = std::stol(std::string(text.substr(start, pos - start)));
            if (wrapped && !consume(')')) throw parse_error(pos, "')'");
            return power(base, static_cast<int>(neg ? -e : e), off);
        }
        return base;
    }

    ExprPtr parse_primary() {
        skip_ws();
        std::size_t off = pos;
        if (pos >= text.size()) throw parse_error(off, "a value");
        char c = text[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos;
            while (pos < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.'))
                ++pos;
            try {
                return constant(parse_rational(text.substr(start, pos - start)), off);
            } catch (const domain_error&) {
                throw parse_error(off, "a numeric literal");
            }
        }
        if (c == '(') {
            ++pos;
            ExprPtr inner = parse_expr();
            if (!consume(')')) throw parse_error(pos, "')'");
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos])))
                ++pos;
            std::string_view name = text.substr(start, pos - start);
            if (name.size() == 1 && name[0] == var) return variable(off);
            ExprNode::Func f;
            if (name == "exp") f = ExprNode::Func::exp;
            else if (name == "sin") f = ExprNode::Func::sin;
            else if (name == "cos") f = ExprNode::Func::cos;
            else if (name == "sqrt") f = ExprNode::Func::sqrt;
            else if (name == "ln" || name == "log") f = ExprNode::Func::ln;
            else throw parse_error(start, std::string("the variable '") + var +
                                              "' or a function name");
            if (!consume('(')) throw parse_error(pos, "'(' after function name");
            ExprPtr inner = parse_expr();
            if (!consume(')')) throw parse_error(pos, "')'");
            return call(f, inner, off);
        }
        throw parse_error(off, "a value");
    }
};

}  // namespace expr_detail

inline FunctionExpr FunctionExpr::parse(std::string_view text, char var) {
    expr_detail::Parser p{text, 0, var};
    ExprPtr root = p.parse_expr();
    if (!p.at_end()) throw parse_error(p.pos, "end of expression");
    return FunctionExpr(root, var);
}

}  // namespace bellap
