#include "superfg/model.hpp"

#include <cctype>
#include <set>

namespace superfg {

const char* deformation_kind_name(DeformationKind k) {
    switch (k) {
    case DeformationKind::SymTafel: return "sym_tafel";
    case DeformationKind::Symmetry: return "symmetry";
    case DeformationKind::Gauge: return "gauge";
    }
    return "?";
}

const ScenarioDef& ModelFile::scenario(std::string_view name) const {
    for (const auto& s : scenarios)
        if (s.name == name) return s;
    throw Error(ErrorKind::UnknownScenario, "unknown scenario " + std::string(name));
}

namespace {

const Coeff I = Coeff::imag_unit();

// ---- lexer ----

enum class Tok { Number, Ident, Op, Newline, End };

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1, depth = 0;
    size_t k = 0;
    auto adv = [&] {
        if (src[k] == '\n') ++line, col = 1;
        else ++col;
        ++k;
    };
    while (k < src.size()) {
        char c = src[k];
        if (c == '#') {
            while (k < src.size() && src[k] != '\n') adv();
            continue;
        }
        if (c == '\n') {
            if (depth == 0 && (out.empty() || out.back().kind != Tok::Newline)) out.push_back({Tok::Newline, "\\n", line, col});
            adv();
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            adv();
            continue;
        }
        int l = line, cc = col;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string t;
            while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) t += src[k], adv();
            out.push_back({Tok::Number, t, l, cc});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string t;
            while (k < src.size() && (std::isalnum(static_cast<unsigned char>(src[k])) || src[k] == '_')) t += src[k], adv();
            out.push_back({Tok::Ident, t, l, cc});
            continue;
        }
        if (std::string_view("+-*/^()[],={}").find(c) != std::string_view::npos) {
            if (c == '(' || c == '[') ++depth;
            if ((c == ')' || c == ']') && depth > 0) --depth;
            out.push_back({Tok::Op, std::string(1, c), l, cc});
            adv();
            continue;
        }
        throw SyntaxError(l, cc, std::string("unexpected character '") + c + "'");
    }
    out.push_back({Tok::End, "end of input", line, col});
    return out;
}

// ---- values ----

struct Value {
    enum class K { Scalar, Matrix, Deriv, Phi };
    K k = K::Scalar;
    SuperFraction s;
    SuperMatrix m;
    DerivationOp d;
};

const char* kind_name(Value::K k) {
    switch (k) {
    case Value::K::Scalar: return "scalar";
    case Value::K::Matrix: return "matrix";
    case Value::K::Deriv: return "derivation";
    case Value::K::Phi: return "field";
    }
    return "?";
}

std::optional<DerivKind> builtin_derivation(std::string_view n) {
    static const std::map<std::string_view, DerivKind> table = {
        {"D_p", DerivKind::Dplus},         {"D_m", DerivKind::Dminus},         {"Dx_p", DerivKind::DxPlus},
        {"Dx_m", DerivKind::DxMinus},      {"Dth_p", DerivKind::DthetaPlus},   {"Dth_m", DerivKind::DthetaMinus},
        {"Dlam", DerivKind::Dlambda}};
    auto it = table.find(n);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

std::vector<std::pair<SuperExpr, DerivKind>> deriv_terms(const DerivationOp& op, const CatalogPtr& cat) {
    if (op.kind != DerivKind::Combo) return {{SuperExpr::constant(cat, 1), op.kind}};
    return op.terms;
}

SuperExpr phi_derivative(const DerivationOp& op, const JetSpec& spec) {
    if (op.kind == DerivKind::Combo) {
        SuperExpr r(spec.catalog());
        for (const auto& [c, k] : op.terms) r += c * phi_derivative(DerivationOp::basic(k), spec);
        return r;
    }
    switch (op.kind) {
    case DerivKind::Dplus: return spec.jet(true, 1);
    case DerivKind::Dminus: return spec.jet(false, 1);
    case DerivKind::DxPlus: return I * spec.jet(true, 2);
    case DerivKind::DxMinus: return I * spec.jet(false, 2);
    case DerivKind::DthetaPlus: return spec.jet(true, 1) - spec.theta(true) * spec.jet(true, 2);
    case DerivKind::DthetaMinus: return spec.jet(false, 1) - spec.theta(false) * spec.jet(false, 2);
    default: return SuperExpr(spec.catalog());
    }
}

// ---- parser ----

class Parser {
public:
    Parser(std::vector<Token> toks, ParseOptions opt) : t_(std::move(toks)), opt_(opt) {}

    // Expression-only mode against a fixed catalog.
    Parser(std::vector<Token> toks, CatalogPtr cat, const JetSpec* spec) : t_(std::move(toks)), cat_(std::move(cat)), spec_(spec) {
        frozen_ = true;
    }

    ModelFile model() {
        skip_newlines();
        while (peek().kind != Tok::End) {
            statement(nullptr);
            skip_newlines();
        }
        if (!mf_.spec) fail_at(peek(), ErrorKind::ConfigError, "model has no equation");
        if (mf_.Uplus.size() == 0 || mf_.Uminus.size() == 0)
            fail_at(peek(), ErrorKind::ConfigError, "model needs potentials U_p and U_m");
        return std::move(mf_);
    }

    SuperFraction scalar_only() {
        Token at = peek();
        Value v = expr();
        if (peek().kind == Tok::Newline) next();
        expect_kind(Tok::End, "end of input");
        if (v.k != Value::K::Scalar) fail_at(at, ErrorKind::ParityError, std::string("expected a scalar, got a ") + kind_name(v.k));
        return v.s;
    }

private:
    // -- token helpers --
    const Token& peek(size_t ahead = 0) const { return t_[std::min(p_ + ahead, t_.size() - 1)]; }
    const Token& next() { return t_[std::min(p_++, t_.size() - 1)]; }
    bool is_op(const char* op) const { return peek().kind == Tok::Op && peek().text == op; }
    bool is_word(const char* w) const { return peek().kind == Tok::Ident && peek().text == w; }
    void skip_newlines() {
        while (peek().kind == Tok::Newline) next();
    }
    [[noreturn]] void syntax(const Token& at, const std::string& what, std::vector<std::string> expected = {}) const {
        throw SyntaxError(at.line, at.col, what + " '" + at.text + "'", std::move(expected));
    }
    [[noreturn]] void fail_at(const Token& at, ErrorKind kind, const std::string& what) const {
        throw LocatedError(kind, at.line, at.col, what);
    }
    const Token& expect_op(const char* op) {
        if (!is_op(op)) syntax(peek(), "unexpected", {std::string("'") + op + "'"});
        return next();
    }
    const Token& expect_kind(Tok k, const char* what) {
        if (peek().kind != k) syntax(peek(), "unexpected", {what});
        return next();
    }
    std::string ident(const char* what) { return expect_kind(Tok::Ident, what).text; }
    void end_of_statement() {
        if (peek().kind == Tok::Newline || peek().kind == Tok::End) {
            if (peek().kind == Tok::Newline) next();
            return;
        }
        if (is_op("}")) return;
        syntax(peek(), "unexpected", {"end of line"});
    }
    int integer() {
        const Token& tk = expect_kind(Tok::Number, "integer");
        try {
            return std::stoi(tk.text);
        } catch (const std::exception&) {
            syntax(tk, "integer out of range");
        }
    }

    // -- catalog --
    void freeze(const Token& at) {
        if (frozen_) return;
        if (!field_) fail_at(at, ErrorKind::ConfigError, "the field must be declared before any expression");
        mf_.fields = make_field_catalog(fopt_);
        cat_ = mf_.fields.catalog;
        frozen_ = true;
    }
    const JetSpec& spec_at(const Token& at) const {
        if (!spec_) fail_at(at, ErrorKind::ConfigError, "derivations need the equation to be declared first");
        return *spec_;
    }
    SuperFraction constant(const Coeff& c) const { return SuperFraction(SuperExpr::constant(cat_, c)); }

    // -- statements --
    void statement(ScenarioDef* sc) {
        const Token& kw = peek();
        if (kw.kind != Tok::Ident) syntax(kw, "expected a statement, got");
        std::string w = kw.text;
        if (sc) return scenario_statement(*sc);
        next();
        if (w == "grading") {
            if (frozen_) fail_at(kw, ErrorKind::ConfigError, "grading must precede expressions");
            mf_.m = integer();
            mf_.n = integer();
        } else if (w == "field") {
            if (frozen_) fail_at(kw, ErrorKind::ConfigError, "field must precede expressions");
            field_ = true;
            while (peek().kind == Tok::Ident) {
                const Token& o = next();
                if (o.text == "no_lambda") fopt_.with_sqrt_lambda = false;
                else if (o.text == "no_phase") fopt_.with_phase = false;
                else syntax(o, "unknown field option", {"no_lambda", "no_phase"});
            }
        } else if (w == "param") {
            if (frozen_) fail_at(kw, ErrorKind::ConfigError, "parameters must be declared before use");
            Generator g;
            g.name = ident("parameter name");
            std::string par = ident("even or odd");
            if (par != "even" && par != "odd") syntax(t_[p_ - 1], "unknown parity", {"even", "odd"});
            g.odd = par == "odd";
            if (is_word("invertible")) {
                next();
                if (g.odd) fail_at(t_[p_ - 1], ErrorKind::ParityError, "odd parameters cannot be invertible");
                g.invertible = true;
            }
            g.role = "parameter";
            fopt_.parameters.push_back(g);
        } else if (w == "equation") {
            if (spec_) fail_at(kw, ErrorKind::ConfigError, "equation declared twice");
            freeze(kw);
            expect_op("=");
            Token at = peek();
            SuperFraction rhs = scalar(at);
            if (!rhs.is_polynomial()) fail_at(at, ErrorKind::ConfigError, "the equation must be polynomial");
            try {
                mf_.spec = std::make_shared<JetSpec>(mf_.fields, rhs.num(), opt_.max_jet_order);
            } catch (const Error& e) {
                fail_at(at, e.kind(), e.what());
            }
            spec_ = mf_.spec.get();
        } else if (w == "let") {
            const Token& nt = peek();
            std::string name = ident("name");
            check_free(nt, name);
            expect_op("=");
            freeze(nt);
            env_[name] = expr();
        } else if (w == "potential") {
            const Token& nt = peek();
            std::string name = ident("U_p or U_m");
            if (name != "U_p" && name != "U_m") syntax(nt, "unknown potential", {"U_p", "U_m"});
            expect_op("=");
            freeze(nt);
            SuperMatrix M = matrix(peek());
            if (!M.fits(Parity::Odd)) fail_at(nt, ErrorKind::ParityError, name + " must be an odd supermatrix");
            (name == "U_p" ? mf_.Uplus : mf_.Uminus) = M;
            env_[name] = Value{Value::K::Matrix, {}, M, {}};
        } else if (w == "normal") {
            const Token& nt = peek();
            std::string name = ident("normal name");
            check_free(nt, name);
            expect_op("=");
            freeze(nt);
            SuperMatrix M = matrix(peek());
            if (!M.fits(Parity::Even)) fail_at(nt, ErrorKind::ParityError, "normals must be even");
            mf_.normals[name] = M;
            env_[name] = Value{Value::K::Matrix, {}, M, {}};
        } else if (w == "check") {
            const Token& nt = peek();
            std::string name = ident("potential name");
            static const std::set<std::string> ok = {"U_p", "U_m", "V_p", "V_m", "W_p", "W_m"};
            if (!ok.count(name)) syntax(nt, "unknown check", {"U_p", "U_m", "V_p", "V_m", "W_p", "W_m"});
            expect_op("=");
            freeze(nt);
            mf_.checks.push_back({name, matrix(peek()), nt.line});
        } else if (w == "scenario") {
            scenario(kw);
            return;
        } else {
            syntax(kw, "unknown statement",
                   {"grading", "field", "param", "equation", "let", "potential", "normal", "check", "scenario"});
        }
        end_of_statement();
    }

    void check_free(const Token& at, const std::string& name) {
        if (name == "i" || name == "phi" || name == "diag" || builtin_derivation(name))
            fail_at(at, ErrorKind::ConfigError, "'" + name + "' is reserved");
        if (frozen_ && cat_->find(name)) fail_at(at, ErrorKind::ConfigError, "'" + name + "' is a generator");
        if (!frozen_)
            for (const auto& g : fopt_.parameters)
                if (g.name == name) fail_at(at, ErrorKind::ConfigError, "'" + name + "' is a generator");
    }

    void scenario(const Token& kw) {
        ScenarioDef sc;
        sc.line = kw.line;
        sc.name = ident("scenario name");
        for (const auto& o : mf_.scenarios)
            if (o.name == sc.name) fail_at(kw, ErrorKind::ConfigError, "scenario " + sc.name + " declared twice");
        expect_op("{");
        bool has_def = false;
        skip_newlines();
        while (!is_op("}")) {
            if (peek().kind == Tok::End) syntax(peek(), "unterminated scenario", {"'}'"});
            if (is_word("deformation")) has_def = true;
            statement(&sc);
            skip_newlines();
        }
        next();
        if (!has_def) fail_at(kw, ErrorKind::ConfigError, "scenario " + sc.name + " has no deformation");
        if (sc.normal_name.empty()) fail_at(kw, ErrorKind::ConfigError, "scenario " + sc.name + " has no normal");
        mf_.scenarios.push_back(std::move(sc));
        end_of_statement();
    }

    static bool form_index(const std::string& q, char form, int& i, int& j) {
        if (q.size() != 3 || q[0] != form || q[1] < '1' || q[1] > '4' || q[2] < '1' || q[2] > '4') return false;
        i = q[1] - '0', j = q[2] - '0';
        return true;
    }

    void scenario_statement(ScenarioDef& sc) {
        const Token kw = next();
        const std::string& w = kw.text;
        if (w == "sector") {
            std::string s = ident("bosonic or fermionic");
            if (s == "bosonic") sc.sector = Sector::Bosonic;
            else if (s == "fermionic") sc.sector = Sector::Fermionic;
            else syntax(t_[p_ - 1], "unknown sector", {"bosonic", "fermionic"});
        } else if (w == "deformation") {
            std::string k = ident("sym_tafel, symmetry or gauge");
            Token at = peek();
            freeze(at);
            if (k == "sym_tafel") {
                sc.kind = DeformationKind::SymTafel;
                sc.beta = scalar(at);
            } else if (k == "symmetry") {
                sc.kind = DeformationKind::Symmetry;
                sc.Q = derivation(at);
            } else if (k == "gauge") {
                sc.kind = DeformationKind::Gauge;
                sc.S = matrix(at);
            } else {
                syntax(t_[p_ - 1], "unknown deformation", {"sym_tafel", "symmetry", "gauge"});
            }
        } else if (w == "minus_branch") {
            Token at = peek();
            freeze(at);
            sc.Q_minus = derivation(at);
        } else if (w == "normal") {
            const Token& nt = peek();
            sc.normal_name = ident("normal name");
            auto it = mf_.normals.find(sc.normal_name);
            if (it == mf_.normals.end()) fail_at(nt, ErrorKind::ConfigError, "unknown normal " + sc.normal_name);
            sc.N0 = it->second;
        } else if (w == "expect" || w == "soft") {
            bool soft = w == "soft";
            if (soft && ident("expect") != "expect") syntax(t_[p_ - 1], "unexpected", {"expect"});
            fixture(sc, soft);
        } else if (w == "zeros") {
            ZeroPattern z;
            z.line = kw.line;
            std::string f = ident("g or b");
            if (f != "g" && f != "b") syntax(t_[p_ - 1], "unknown form", {"g", "b"});
            z.form = f[0];
            while (peek().kind == Tok::Number) {
                const Token& tk = next();
                int i = 0, j = 0;
                if (!form_index(z.form + tk.text, z.form, i, j)) syntax(tk, "bad coefficient index", {"two digits 1-4"});
                z.zeros.emplace_back(i, j);
            }
            sc.zeros.push_back(std::move(z));
        } else if (w == "let") {
            --p_;
            statement(nullptr);
            return;
        } else {
            syntax(kw, "unknown scenario statement",
                   {"sector", "deformation", "minus_branch", "normal", "expect", "soft", "zeros", "let"});
        }
        end_of_statement();
    }

    void fixture(ScenarioDef& sc, bool soft) {
        const Token qt = peek();
        Fixture f;
        f.quantity = ident("quantity");
        f.soft = soft;
        f.line = qt.line;
        static const std::set<std::string> mats = {"A_p", "A_m", "B_p", "B_m", "C_p", "C_m"};
        int i = 0, j = 0;
        bool is_mat = mats.count(f.quantity) > 0;
        bool is_coef = form_index(f.quantity, 'g', i, j) || form_index(f.quantity, 'b', i, j);
        bool is_curv = f.quantity == "H" || f.quantity == "K";
        if (!is_mat && !is_coef && !is_curv) syntax(qt, "unknown quantity", {"A_p..C_m", "g11..b44", "H", "K"});
        freeze(qt);
        if (is_word("undefined")) {
            next();
            if (!is_curv) fail_at(qt, ErrorKind::ConfigError, "only curvatures can be undefined");
            f.kind = Fixture::Kind::Undefined;
            f.undefined_which = ident("g or b");
            if (f.undefined_which != "g" && f.undefined_which != "b") syntax(t_[p_ - 1], "unknown form", {"g", "b"});
        } else {
            expect_op("=");
            Token at = peek();
            if (is_mat) {
                f.kind = Fixture::Kind::Matrix;
                f.matrix = matrix(at);
            } else {
                f.kind = Fixture::Kind::Scalar;
                f.scalar = scalar(at);
            }
        }
        sc.fixtures.push_back(std::move(f));
    }

    // -- typed expressions --
    SuperFraction scalar(const Token& at) {
        Value v = expr();
        if (v.k != Value::K::Scalar) fail_at(at, ErrorKind::ParityError, std::string("expected a scalar, got a ") + kind_name(v.k));
        return v.s;
    }
    SuperMatrix matrix(const Token& at) {
        Value v = expr();
        if (v.k != Value::K::Matrix) fail_at(at, ErrorKind::ParityError, std::string("expected a matrix, got a ") + kind_name(v.k));
        return v.m;
    }
    DerivationOp derivation(const Token& at) {
        Value v = expr();
        if (v.k != Value::K::Deriv) fail_at(at, ErrorKind::ParityError, std::string("expected a derivation, got a ") + kind_name(v.k));
        return v.d;
    }

    // expr := term (('+'|'-') term)*
    Value expr() {
        Value a = term();
        while (is_op("+") || is_op("-")) {
            Token op = next();
            Value b = term();
            a = add(op, a, b, op.text == "-");
        }
        return a;
    }
    // term := unary (('*'|'/') unary)*
    Value term() {
        Value a = unary();
        while (is_op("*") || is_op("/")) {
            Token op = next();
            Value b = unary();
            a = op.text == "*" ? mul(op, a, b) : div(op, a, b);
        }
        return a;
    }
    // unary := '-' unary | power
    Value unary() {
        if (is_op("-")) {
            Token op = next();
            return negate(op, unary());
        }
        return power();
    }
    // power := primary ('^' '-'? INT)?
    Value power() {
        Token at = peek();
        bool bare_gen = at.kind == Tok::Ident && frozen_ && cat_->find(at.text) && !env_.count(at.text);
        Value base = primary();
        if (!is_op("^")) return base;
        Token op = next();
        bool neg = false;
        if (is_op("-")) next(), neg = true;
        int k = integer();
        if (neg) k = -k;
        if (base.k == Value::K::Scalar) {
            if (k < 0) {
                if (bare_gen && !(*cat_)[*cat_->find(at.text)].invertible)
                    fail_at(at, ErrorKind::NotInvertible, "generator " + at.text + " is not invertible");
                if (bare_gen) {
                    base.s = SuperFraction(SuperExpr::generator(cat_, at.text, k));
                    return base;
                }
                try {
                    base.s = base.s.inverse();
                } catch (const Error& e) {
                    fail_at(at, e.kind(), e.what());
                }
                k = -k;
            }
            SuperFraction r = constant(1);
            for (int e = 0; e < k; ++e) r *= base.s;
            base.s = r;
            return base;
        }
        if (base.k == Value::K::Matrix) {
            SuperMatrix m = base.m;
            if (k < 0) {
                try {
                    m = mat_inverse(m);
                } catch (const Error& e) {
                    fail_at(at, e.kind(), e.what());
                }
                k = -k;
            }
            SuperMatrix r = SuperMatrix::identity(cat_, mf_m(), mf_n());
            for (int e = 0; e < k; ++e) r = r * m;
            base.m = r;
            return base;
        }
        fail_at(op, ErrorKind::ParityError, std::string("cannot raise a ") + kind_name(base.k) + " to a power");
    }

    int mf_m() const { return mf_.m; }
    int mf_n() const { return mf_.n; }

    Value primary() {
        const Token tk = peek();
        if (tk.kind == Tok::Number) {
            next();
            freeze(tk);
            return scal(constant(Coeff(mpq_class(tk.text))));
        }
        if (is_op("(")) {
            next();
            Value v = expr();
            expect_op(")");
            if (v.k == Value::K::Deriv && is_op("(")) return apply(tk, v);
            return v;
        }
        if (is_op("[")) return matrix_literal();
        if (tk.kind == Tok::Ident) {
            next();
            freeze(tk);
            if (is_op("(")) return call(tk);
            return lookup(tk);
        }
        syntax(tk, "unexpected", {"number", "identifier", "'('", "'['"});
    }

    Value lookup(const Token& tk) {
        const std::string& n = tk.text;
        if (n == "i") return scal(constant(I));
        if (n == "phi") {
            Value v;
            v.k = Value::K::Phi;
            return v;
        }
        if (auto it = env_.find(n); it != env_.end()) return it->second;
        if (auto d = builtin_derivation(n)) return deriv(DerivationOp::basic(*d));
        if (cat_->find(n)) return scal(SuperFraction(SuperExpr::generator(cat_, n)));
        fail_at(tk, ErrorKind::UnknownGenerator, "unknown name " + n);
    }

    Value call(const Token& tk) {
        if (tk.text == "diag") return apply(tk, Value{});
        return apply(tk, lookup(tk));
    }

    Value apply(const Token& tk, const Value& f) {
        next(); // (
        std::vector<Value> args;
        std::vector<Token> at;
        if (!is_op(")")) {
            for (;;) {
                at.push_back(peek());
                args.push_back(expr());
                if (is_op(",")) {
                    next();
                    continue;
                }
                break;
            }
        }
        expect_op(")");
        if (tk.text == "diag") {
            int N = mf_m() + mf_n();
            if (static_cast<int>(args.size()) != N)
                fail_at(tk, ErrorKind::DimensionMismatch, "diag needs " + std::to_string(N) + " entries");
            std::vector<SuperFraction> d;
            for (size_t k = 0; k < args.size(); ++k) {
                if (args[k].k != Value::K::Scalar) fail_at(at[k], ErrorKind::ParityError, "diag entries must be scalars");
                d.push_back(args[k].s);
            }
            return mat(SuperMatrix::diag(cat_, mf_m(), mf_n(), d));
        }
        if (f.k != Value::K::Deriv) fail_at(tk, ErrorKind::ConfigError, tk.text + " is not callable");
        if (args.size() != 1) fail_at(tk, ErrorKind::ConfigError, "derivations take one argument");
        const JetSpec& spec = spec_at(tk);
        const Value& a = args[0];
        try {
            switch (a.k) {
            case Value::K::Phi: return scal(SuperFraction(phi_derivative(f.d, spec)));
            case Value::K::Scalar: {
                if (f.d.kind == DerivKind::Combo && a.s.parity() == Parity::Heterogeneous)
                    fail_at(at[0], ErrorKind::ParityError, "derivation of a heterogeneous expression");
                return scal(apply_derivation(f.d, a.s, spec));
            }
            case Value::K::Matrix: return mat(mat_derive(f.d, a.m, spec));
            case Value::K::Deriv: break;
            }
        } catch (const LocatedError&) {
            throw;
        } catch (const Error& e) {
            fail_at(at[0], e.kind(), e.what());
        }
        fail_at(at[0], ErrorKind::ParityError, "cannot differentiate a derivation");
    }

    Value matrix_literal() {
        const Token open = next(); // [
        std::vector<std::vector<SuperFraction>> rows;
        for (;;) {
            expect_op("[");
            rows.emplace_back();
            for (;;) {
                Token at = peek();
                rows.back().push_back(scalar(at));
                if (is_op(",")) {
                    next();
                    continue;
                }
                break;
            }
            expect_op("]");
            if (is_op(",")) {
                next();
                continue;
            }
            break;
        }
        expect_op("]");
        freeze(open);
        int N = mf_m() + mf_n();
        bool square = static_cast<int>(rows.size()) == N;
        for (const auto& r : rows) square = square && static_cast<int>(r.size()) == N;
        if (!square)
            fail_at(open, ErrorKind::DimensionMismatch,
                    "matrix literal must be " + std::to_string(N) + "x" + std::to_string(N));
        return mat(SuperMatrix::from_rows(cat_, mf_m(), mf_n(), rows));
    }

    // -- arithmetic on values --
    static Value scal(SuperFraction s) {
        Value v;
        v.k = Value::K::Scalar;
        v.s = std::move(s);
        return v;
    }
    static Value mat(SuperMatrix m) {
        Value v;
        v.k = Value::K::Matrix;
        v.m = std::move(m);
        return v;
    }
    static Value deriv(DerivationOp d) {
        Value v;
        v.k = Value::K::Deriv;
        v.d = std::move(d);
        return v;
    }

    [[noreturn]] void type_error(const Token& op, const Value& a, const Value& b) const {
        fail_at(op, ErrorKind::ParityError,
                std::string("cannot apply '") + op.text + "' to a " + kind_name(a.k) + " and a " + kind_name(b.k));
    }

    Value add(const Token& op, const Value& a, const Value& b, bool minus) {
        if (a.k != b.k || a.k == Value::K::Phi) type_error(op, a, b);
        switch (a.k) {
        case Value::K::Scalar: return scal(minus ? a.s - b.s : a.s + b.s);
        case Value::K::Matrix: return mat(minus ? a.m - b.m : a.m + b.m);
        case Value::K::Deriv: {
            auto t = deriv_terms(a.d, cat_);
            for (auto [c, k] : deriv_terms(b.d, cat_)) t.emplace_back(minus ? -c : c, k);
            return deriv(simplify(DerivationOp::combo(std::move(t))));
        }
        case Value::K::Phi: break;
        }
        type_error(op, a, b);
    }

    Value negate(const Token& op, const Value& a) {
        switch (a.k) {
        case Value::K::Scalar: return scal(-a.s);
        case Value::K::Matrix: return mat(-a.m);
        case Value::K::Deriv: {
            auto t = deriv_terms(a.d, cat_);
            for (auto& [c, k] : t) c = -c;
            return deriv(DerivationOp::combo(std::move(t)));
        }
        case Value::K::Phi: break;
        }
        fail_at(op, ErrorKind::ParityError, "cannot negate the field itself");
    }

    Value mul(const Token& op, const Value& a, const Value& b) {
        using K = Value::K;
        if (a.k == K::Scalar && b.k == K::Scalar) return scal(a.s * b.s);
        if (a.k == K::Matrix && b.k == K::Matrix) return mat(a.m * b.m);
        if (a.k == K::Scalar && b.k == K::Matrix) {
            // c·M with odd c is the graded action c⋆M
            if (a.s.parity() == Parity::Heterogeneous) fail_at(op, ErrorKind::ParityError, "heterogeneous scalar factor");
            return mat(scalar_star(a.s, b.m));
        }
        if (a.k == K::Matrix && b.k == K::Scalar) {
            if (!b.s.has_parity(Parity::Even))
                fail_at(op, ErrorKind::ParityError, "odd scalars must multiply matrices from the left");
            return mat(b.s * a.m);
        }
        if (a.k == K::Scalar && b.k == K::Deriv) {
            if (!a.s.is_polynomial()) fail_at(op, ErrorKind::ConfigError, "derivation coefficients must be polynomial");
            auto t = deriv_terms(b.d, cat_);
            for (auto& [c, k] : t) c = a.s.num() * c;
            return deriv(simplify(DerivationOp::combo(std::move(t))));
        }
        type_error(op, a, b);
    }

    Value div(const Token& op, const Value& a, const Value& b) {
        using K = Value::K;
        if (b.k != K::Scalar) type_error(op, a, b);
        SuperFraction inv;
        try {
            inv = b.s.inverse();
        } catch (const Error& e) {
            fail_at(op, e.kind(), e.what());
        }
        if (a.k == K::Scalar) return scal(a.s * inv);
        if (a.k == K::Matrix) return mat(inv * a.m);
        type_error(op, a, b);
    }

    std::vector<Token> t_;
    size_t p_ = 0;
    ParseOptions opt_;
    ModelFile mf_;
    FieldOptions fopt_;
    bool field_ = false, frozen_ = false;
    CatalogPtr cat_;
    const JetSpec* spec_ = nullptr;
    std::map<std::string, Value> env_;
};

} // namespace

ModelFile parse_model(std::string_view text, const ParseOptions& opt) {
    Parser p(lex(text), opt);
    return p.model();
}

SuperFraction parse_scalar(std::string_view text, const CatalogPtr& cat, const JetSpec* spec) {
    Parser p(lex(text), cat, spec);
    return p.scalar_only();
}

} // namespace superfg
