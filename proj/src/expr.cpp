#include "mva/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>

#include "mva/error.hpp"
#include "mva/numfmt.hpp"

namespace mva {

int arity(NodeKind kind) noexcept {
    switch (kind) {
        case NodeKind::Constant:
        case NodeKind::Variable: return 0;
        case NodeKind::Neg:
        case NodeKind::Sin:
        case NodeKind::Cos:
        case NodeKind::Exp:
        case NodeKind::Log:
        case NodeKind::Sqrt: return 1;
        default: return 2;
    }
}

bool structurally_equal(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == NodeKind::Constant) return a.value == b.value;
    if (a.lhs && !structurally_equal(*a.lhs, *b.lhs)) return false;
    if (a.rhs && !structurally_equal(*a.rhs, *b.rhs)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Compiled tape

namespace detail {

enum class Op { Const, Var, Neg, Sin, Cos, Exp, Log, Sqrt, Add, Sub, Mul, Div, PowInt, PowReal, PowOddRoot, PowGeneral };

struct Instr {
    Op op = Op::Const;
    int a = -1;
    int b = -1;
    double c = 0.0;       // constant value, or real exponent
    long ipow = 0;        // integer exponent
    double sign = 1.0;    // (-1)^p for odd-root powers of negative bases
    const ExprNode* node = nullptr;
};

struct Program {
    std::vector<Instr> code;
};

}  // namespace detail

namespace {

using detail::Instr;
using detail::Op;
using detail::Program;

bool depends_on_x(const ExprNode& n) {
    if (n.kind == NodeKind::Variable) return true;
    if (n.lhs && depends_on_x(*n.lhs)) return true;
    if (n.rhs && depends_on_x(*n.rhs)) return true;
    return false;
}

double eval_node(const ExprNode& n, double x);

int emit(const ExprNode& n, Program& p) {
    Instr ins;
    ins.node = &n;
    switch (n.kind) {
        case NodeKind::Constant: ins.op = Op::Const; ins.c = n.value; break;
        case NodeKind::Variable: ins.op = Op::Var; break;
        case NodeKind::Neg: ins.op = Op::Neg; break;
        case NodeKind::Sin: ins.op = Op::Sin; break;
        case NodeKind::Cos: ins.op = Op::Cos; break;
        case NodeKind::Exp: ins.op = Op::Exp; break;
        case NodeKind::Log: ins.op = Op::Log; break;
        case NodeKind::Sqrt: ins.op = Op::Sqrt; break;
        case NodeKind::Add: ins.op = Op::Add; break;
        case NodeKind::Sub: ins.op = Op::Sub; break;
        case NodeKind::Mul: ins.op = Op::Mul; break;
        case NodeKind::Div: ins.op = Op::Div; break;
        case NodeKind::Pow: {
            if (depends_on_x(*n.rhs)) {
                ins.op = Op::PowGeneral;
                break;
            }
            const double e = eval_node(*n.rhs, 0.0);
            if (!std::isfinite(e)) throw Error(ErrorKind::Domain, "exponent is not finite");
            if (std::nearbyint(e) == e && std::fabs(e) < 2147483648.0) {
                ins.op = Op::PowInt;
                ins.ipow = static_cast<long>(e);
            } else {
                ins.op = Op::PowReal;
                ins.c = e;
                for (long q = 3; q < 100; q += 2) {
                    const double pq = e * static_cast<double>(q);
                    const double rounded = std::nearbyint(pq);
                    if (std::fabs(pq - rounded) <= 1e-12 * static_cast<double>(q)) {
                        ins.op = Op::PowOddRoot;
                        ins.sign = (static_cast<long>(rounded) % 2 == 0) ? 1.0 : -1.0;
                        break;
                    }
                }
            }
            ins.a = emit(*n.lhs, p);
            p.code.push_back(ins);
            return static_cast<int>(p.code.size()) - 1;
        }
    }
    if (n.lhs) ins.a = emit(*n.lhs, p);
    if (n.rhs && ins.op != Op::PowInt) ins.b = emit(*n.rhs, p);
    p.code.push_back(ins);
    return static_cast<int>(p.code.size()) - 1;
}

std::shared_ptr<const Program> compile(const ExprNode& root) {
    auto p = std::make_shared<Program>();
    emit(root, *p);
    return p;
}

[[noreturn]] void domain_error(const Instr& ins, const std::string& what) {
    throw Error(ErrorKind::Domain, what + " in '" + print(*ins.node) + "'");
}

double checked(const Instr& ins, double v) {
    if (!std::isfinite(v)) domain_error(ins, "non-finite result");
    return v;
}

double real_power(const Instr& ins, double base) {
    if (ins.op == Op::PowOddRoot && base < 0.0) return ins.sign * std::pow(-base, ins.c);
    if (base < 0.0 || (base == 0.0 && ins.c < 0.0)) domain_error(ins, "non-integer power of a nonpositive base");
    return std::pow(base, ins.c);
}

double int_power(double base, long e) {
    double result = 1.0;
    double sq = base;
    unsigned long m = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    while (m != 0) {
        if (m & 1UL) result *= sq;
        m >>= 1;
        if (m != 0) sq *= sq;
    }
    return e < 0 ? 1.0 / result : result;
}

double run_scalar(const Program& p, double x, std::vector<double>& v) {
    v.resize(p.code.size());
    for (std::size_t i = 0; i < p.code.size(); ++i) {
        const Instr& ins = p.code[i];
        const double a = ins.a >= 0 ? v[static_cast<std::size_t>(ins.a)] : 0.0;
        const double b = ins.b >= 0 ? v[static_cast<std::size_t>(ins.b)] : 0.0;
        double r = 0.0;
        switch (ins.op) {
            case Op::Const: r = ins.c; break;
            case Op::Var: r = x; break;
            case Op::Neg: r = -a; break;
            case Op::Sin: r = std::sin(a); break;
            case Op::Cos: r = std::cos(a); break;
            case Op::Exp: r = std::exp(a); break;
            case Op::Log:
                if (!(a > 0.0)) domain_error(ins, "log of nonpositive value");
                r = std::log(a);
                break;
            case Op::Sqrt:
                if (a < 0.0) domain_error(ins, "sqrt of negative value");
                r = std::sqrt(a);
                break;
            case Op::Add: r = a + b; break;
            case Op::Sub: r = a - b; break;
            case Op::Mul: r = a * b; break;
            case Op::Div:
                if (b == 0.0) domain_error(ins, "division by zero");
                r = a / b;
                break;
            case Op::PowInt:
                if (a == 0.0 && ins.ipow < 0) domain_error(ins, "negative power of zero");
                r = int_power(a, ins.ipow);
                break;
            case Op::PowReal:
            case Op::PowOddRoot: r = real_power(ins, a); break;
            case Op::PowGeneral:
                if (!(a > 0.0)) domain_error(ins, "variable power of a nonpositive base");
                r = std::exp(b * std::log(a));
                break;
        }
        v[i] = checked(ins, r);
    }
    return v.back();
}

// Jet tape: slot i occupies coefficients [i*m, (i+1)*m) of `buf`.
void run_jet(const Program& p, double x0, std::size_t m, std::vector<double>& buf, std::vector<double>& scratch) {
    buf.assign(p.code.size() * m, 0.0);
    scratch.assign(3 * m, 0.0);
    auto slot = [&](int i) { return std::span<double>(buf.data() + static_cast<std::size_t>(i) * m, m); };
    auto tmp = std::span<double>(scratch.data(), m);
    auto pow_scratch = std::span<double>(scratch.data() + m, 2 * m);

    for (std::size_t i = 0; i < p.code.size(); ++i) {
        const Instr& ins = p.code[i];
        auto out = slot(static_cast<int>(i));
        std::span<const double> a = ins.a >= 0 ? slot(ins.a) : std::span<double>();
        std::span<const double> b = ins.b >= 0 ? slot(ins.b) : std::span<double>();
        switch (ins.op) {
            case Op::Const: out[0] = ins.c; break;
            case Op::Var:
                out[0] = x0;
                if (m > 1) out[1] = 1.0;
                break;
            case Op::Neg: series::neg(a, out); break;
            case Op::Sin: series::sin_cos(a, out, tmp); break;
            case Op::Cos: series::sin_cos(a, tmp, out); break;
            case Op::Exp: series::exp(a, out); break;
            case Op::Log:
                if (!(a[0] > 0.0)) domain_error(ins, "log of nonpositive value");
                series::log(a, out);
                break;
            case Op::Sqrt:
                if (a[0] < 0.0 || (a[0] == 0.0 && m > 1)) domain_error(ins, "sqrt outside its differentiable domain");
                series::sqrt(a, out);
                break;
            case Op::Add: series::add(a, b, out); break;
            case Op::Sub: series::sub(a, b, out); break;
            case Op::Mul: series::mul(a, b, out); break;
            case Op::Div:
                if (b[0] == 0.0) domain_error(ins, "division by zero");
                series::div(a, b, out);
                break;
            case Op::PowInt:
                if (a[0] == 0.0 && ins.ipow < 0) domain_error(ins, "negative power of zero");
                series::pow_int(a, ins.ipow, out, pow_scratch);
                break;
            case Op::PowReal:
            case Op::PowOddRoot: {
                if (m == 1) {
                    out[0] = real_power(ins, a[0]);
                    break;
                }
                double sign = 1.0;
                if (ins.op == Op::PowOddRoot && a[0] < 0.0) {
                    sign = ins.sign;
                    series::neg(a, out);
                    std::copy(out.begin(), out.end(), pow_scratch.begin());
                } else {
                    std::copy(a.begin(), a.end(), pow_scratch.begin());
                }
                if (!(pow_scratch[0] > 0.0)) domain_error(ins, "non-integer power of a nonpositive base");
                series::log(pow_scratch.first(m), tmp);
                for (auto& t : tmp) t *= ins.c;
                series::exp(tmp, out);
                if (sign < 0.0) for (auto& t : out) t = -t;
                break;
            }
            case Op::PowGeneral:
                if (!(a[0] > 0.0)) domain_error(ins, "variable power of a nonpositive base");
                series::log(a, tmp);
                series::mul(b, tmp, pow_scratch.first(m));
                series::exp(pow_scratch.first(m), out);
                break;
        }
        for (double t : out) {
            if (!std::isfinite(t)) domain_error(ins, "non-finite jet coefficient");
        }
    }
}

double eval_node(const ExprNode& n, double x) {
    Program p;
    emit(n, p);
    std::vector<double> v;
    return run_scalar(p, x, v);
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse_all() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError(ErrorKind::Syntax, pos_, "empty expression");
        Expr e = parse_expr();
        skip_ws();
        if (pos_ < text_.size()) {
            throw ParseError(ErrorKind::Syntax, pos_, std::string("unexpected '") + text_[pos_] + "'");
        }
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= text_.size()) {
                throw ParseError(ErrorKind::Syntax, pos_, std::string("expected '") + c + "' but input ended");
            }
            throw ParseError(ErrorKind::Syntax, pos_, std::string("expected '") + c + "'");
        }
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        for (;;) {
            if (accept('+')) lhs = lhs + parse_term();
            else if (accept('-')) lhs = lhs - parse_term();
            else return lhs;
        }
    }

    Expr parse_term() {
        Expr lhs = parse_factor();
        for (;;) {
            if (accept('*')) lhs = lhs * parse_factor();
            else if (accept('/')) lhs = lhs / parse_factor();
            else return lhs;
        }
    }

    Expr parse_factor() {
        if (accept('-')) return -parse_power();
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (accept('^')) {
            if (accept('-')) return pow(base, -parse_power());
            return pow(base, parse_power());
        }
        return base;
    }

    Expr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError(ErrorKind::Syntax, pos_, "unexpected end of input");
        const char ch = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return parse_number_literal();
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') return parse_identifier();
        if (ch == '(') {
            ++pos_;
            Expr inner = parse_expr();
            expect(')');
            return inner;
        }
        throw ParseError(ErrorKind::Syntax, pos_, std::string("unexpected '") + ch + "'");
    }

    Expr parse_number_literal() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t count = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++count;
            }
            return count;
        };
        std::size_t mantissa = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0) throw ParseError(ErrorKind::MalformedNumber, start, "number without digits");
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (digits() == 0) throw ParseError(ErrorKind::MalformedNumber, start, "exponent without digits");
        }
        if (pos_ < text_.size() && (text_[pos_] == '.' || std::isalnum(static_cast<unsigned char>(text_[pos_])))) {
            throw ParseError(ErrorKind::MalformedNumber, start, "malformed number");
        }
        const double v = parse_number(text_.substr(start, pos_ - start));
        if (!std::isfinite(v)) throw ParseError(ErrorKind::MalformedNumber, start, "number out of range");
        return Expr::constant(v);
    }

    Expr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "x") return Expr::variable();
        NodeKind kind;
        if (name == "sin") kind = NodeKind::Sin;
        else if (name == "cos") kind = NodeKind::Cos;
        else if (name == "exp") kind = NodeKind::Exp;
        else if (name == "log") kind = NodeKind::Log;
        else if (name == "sqrt") kind = NodeKind::Sqrt;
        else throw ParseError(ErrorKind::UnknownIdentifier, start, "unknown identifier '" + std::string(name) + "'");
        expect('(');
        Expr arg = parse_expr();
        expect(')');
        return Expr::unary(kind, arg);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Printer

int precedence(const ExprNode& n) {
    switch (n.kind) {
        case NodeKind::Add:
        case NodeKind::Sub: return 1;
        case NodeKind::Mul:
        case NodeKind::Div: return 2;
        case NodeKind::Neg: return 3;
        case NodeKind::Pow: return 4;
        case NodeKind::Constant: return 5;
        default: return 5;
    }
}

void print_into(const ExprNode& n, std::string& out);

void print_wrapped(const ExprNode& n, bool wrap, std::string& out) {
    if (wrap) out += '(';
    print_into(n, out);
    if (wrap) out += ')';
}

const char* func_name(NodeKind k) {
    switch (k) {
        case NodeKind::Sin: return "sin";
        case NodeKind::Cos: return "cos";
        case NodeKind::Exp: return "exp";
        case NodeKind::Log: return "log";
        case NodeKind::Sqrt: return "sqrt";
        default: return "";
    }
}

void print_into(const ExprNode& n, std::string& out) {
    switch (n.kind) {
        case NodeKind::Constant: {
            const std::string s = format_number(n.value);
            out += n.value < 0 ? "(" + s + ")" : s;
            return;
        }
        case NodeKind::Variable: out += 'x'; return;
        case NodeKind::Neg:
            out += '-';
            print_wrapped(*n.lhs, precedence(*n.lhs) < 4, out);
            return;
        case NodeKind::Sin:
        case NodeKind::Cos:
        case NodeKind::Exp:
        case NodeKind::Log:
        case NodeKind::Sqrt:
            out += func_name(n.kind);
            out += '(';
            print_into(*n.lhs, out);
            out += ')';
            return;
        case NodeKind::Add:
        case NodeKind::Sub:
            print_wrapped(*n.lhs, precedence(*n.lhs) < 1, out);
            out += n.kind == NodeKind::Add ? " + " : " - ";
            print_wrapped(*n.rhs, precedence(*n.rhs) <= 1, out);
            return;
        case NodeKind::Mul:
        case NodeKind::Div:
            print_wrapped(*n.lhs, precedence(*n.lhs) < 2, out);
            out += n.kind == NodeKind::Mul ? "*" : "/";
            print_wrapped(*n.rhs, precedence(*n.rhs) <= 2, out);
            return;
        case NodeKind::Pow:
            print_wrapped(*n.lhs, precedence(*n.lhs) < 5 || (n.lhs->kind == NodeKind::Constant && n.lhs->value < 0),
                          out);
            out += '^';
            print_wrapped(*n.rhs, precedence(*n.rhs) < 4, out);
            return;
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Expr

Expr::Expr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {
    if (!root_) throw Error(ErrorKind::InvalidArgument, "null expression");
    std::function<void(const ExprNode&)> validate = [&](const ExprNode& n) {
        if (n.lhs) validate(*n.lhs);
        if (n.rhs) validate(*n.rhs);
        const int want = arity(n.kind);
        const int have = (n.lhs ? 1 : 0) + (n.rhs ? 1 : 0);
        if (want != have || (want == 1 && !n.lhs)) throw Error(ErrorKind::InvalidArgument, "node arity mismatch");
        if (n.kind == NodeKind::Constant && !std::isfinite(n.value)) {
            throw Error(ErrorKind::InvalidArgument, "constant is not finite");
        }
    };
    validate(*root_);
    program_ = compile(*root_);
}

Expr Expr::constant(double value) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Constant;
    n->value = value;
    return Expr(std::move(n));
}

Expr Expr::variable() {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Variable;
    return Expr(std::move(n));
}

Expr Expr::unary(NodeKind kind, const Expr& child) {
    if (arity(kind) != 1) throw Error(ErrorKind::InvalidArgument, "not a unary node kind");
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->lhs = child.root_;
    return Expr(std::move(n));
}

Expr Expr::binary(NodeKind kind, const Expr& lhs, const Expr& rhs) {
    if (arity(kind) != 2) throw Error(ErrorKind::InvalidArgument, "not a binary node kind");
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->lhs = lhs.root_;
    n->rhs = rhs.root_;
    return Expr(std::move(n));
}

std::size_t Expr::node_count() const noexcept { return program_->code.size(); }

Expr pow(const Expr& base, const Expr& exponent) { return Expr::binary(NodeKind::Pow, base, exponent); }

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

std::string print(const ExprNode& node) {
    std::string out;
    print_into(node, out);
    return out;
}

std::string print(const Expr& f) { return print(f.root()); }

double eval(const Expr& f, double x) {
    thread_local std::vector<double> values;
    return run_scalar(*f.program_, x, values);
}

Jet jet_eval(const Expr& f, double x0, int order, int max_order) {
    if (order < 0) throw Error(ErrorKind::InvalidArgument, "negative jet order");
    if (order > max_order) {
        throw Error(ErrorKind::OrderOverflow,
                    "jet order " + std::to_string(order) + " exceeds maximum " + std::to_string(max_order));
    }
    std::vector<double> out(static_cast<std::size_t>(order) + 1);
    derivatives_into(f, x0, out);
    return Jet(x0, std::move(out));
}

void derivatives_into(const Expr& f, double x0, std::span<double> out) {
    thread_local std::vector<double> buf;
    thread_local std::vector<double> scratch;
    const std::size_t m = out.size();
    if (m == 0) return;
    run_jet(*f.program_, x0, m, buf, scratch);
    std::copy(buf.end() - static_cast<std::ptrdiff_t>(m), buf.end(), out.begin());
}

std::optional<int> order_of_vanishing(const Jet& jet, double tol, int start) {
    double scale = 1.0;
    for (double t : jet.coeffs()) scale = std::max(scale, std::fabs(t));
    for (int j = std::max(start, 0); j <= jet.order(); ++j) {
        if (std::fabs(jet[j]) > tol * scale) return j;
    }
    return std::nullopt;
}

std::optional<int> order_of_vanishing(const Expr& f, double x0, int kmax, double tol) {
    if (kmax < 1) throw Error(ErrorKind::InvalidArgument, "kmax must be at least 1");
    return order_of_vanishing(jet_eval(f, x0, kmax), tol, 0);
}

}  // namespace mva
