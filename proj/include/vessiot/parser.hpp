#ifndef VESSIOT_PARSER_HPP
#define VESSIOT_PARSER_HPP

#include "system.hpp"

#include <cctype>
#include <optional>
#include <sstream>

namespace vessiot {

struct Diagnostic {
    int line = 0; // 1-based
    int col = 0;  // 1-based
    std::string message;

    std::string str() const {
        std::ostringstream os;
        os << line << ":" << col << ": " << message;
        return os.str();
    }
};

/* Recursive-descent parser for the expression grammar shared by the system
 * files and the tests: rational literals, identifiers, + - * / ^ and
 * parentheses.  Derivative coordinates are written u_xt (suffix of
 * independent-variable names, multiplicity by repetition, order-free).
 */
class ExprParser {
public:
    ExprParser(ChartPtr chart, std::string text, int line = 1, int col = 1, int max_order = -1)
        : chart_(std::move(chart)), text_(std::move(text)), line_(line), col0_(col),
          max_order_(max_order) {}

    std::optional<Expr> parse(std::vector<Diagnostic>& diags) {
        pos_ = 0;
        diags_ = &diags;
        failed_ = false;
        Expr e = parse_sum();
        skip_ws();
        if (!failed_ && pos_ < text_.size()) {
            error("unexpected trailing input '" + text_.substr(pos_) + "'");
        }
        if (failed_) return std::nullopt;
        return e;
    }

private:
    Expr zero() const { return Expr::constant(chart_, Rational(0)); }

    void error(const std::string& msg) {
        if (!failed_) diags_->push_back({line_, col0_ + static_cast<int>(pos_), msg});
        failed_ = true;
    }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Expr parse_sum() {
        Expr e = parse_product();
        while (!failed_) {
            if (eat('+'))
                e = e + parse_product();
            else if (eat('-'))
                e = e - parse_product();
            else
                break;
        }
        return e;
    }

    Expr parse_product() {
        Expr e = parse_unary();
        while (!failed_) {
            if (eat('*'))
                e = e * parse_unary();
            else if (eat('/')) {
                Expr d = parse_unary();
                if (failed_) break;
                if (d.is_zero()) {
                    error("division by zero");
                    break;
                }
                e = e / d;
            } else
                break;
        }
        return e;
    }

    Expr parse_unary() {
        if (eat('-')) return zero() - parse_unary();
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (failed_) return base;
        if (eat('^')) {
            bool neg = eat('-');
            skip_ws();
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (start == pos_) {
                error("expected integer exponent after '^'");
                return base;
            }
            int e = std::stoi(text_.substr(start, pos_ - start));
            if (neg && base.is_zero()) {
                error("division by zero");
                return base;
            }
            return base.pow(neg ? -e : e);
        }
        return base;
    }

    Expr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) {
            error("unexpected end of expression");
            return zero();
        }
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_sum();
            if (!eat(')')) error("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            Integer v(text_.substr(start, pos_ - start));
            return Expr::constant(chart_, Rational(v));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            return resolve(text_.substr(start, pos_ - start), start);
        }
        error(std::string("unexpected character '") + c + "'");
        return zero();
    }

    Expr resolve(const std::string& ident, std::size_t at) {
        // independent variable?
        for (int i = 0; i < chart_->n(); ++i)
            if (chart_->xname(i) == ident) return Expr::variable(chart_, chart_->indep(i));
        // parameter?
        for (const std::string& p : params_)
            if (p == ident) return Expr::variable(chart_, chart_->add_param(p));
        // dependent variable, possibly with a derivative suffix
        auto us = ident.find('_');
        std::string base = ident.substr(0, us);
        int alpha = -1;
        for (int a = 0; a < chart_->m(); ++a)
            if (chart_->uname(a) == base) alpha = a;
        if (alpha < 0) {
            diags_->push_back({line_, col0_ + static_cast<int>(at), "unknown identifier '" + ident + "'"});
            failed_ = true;
            return zero();
        }
        MultiIndex mu(chart_->n());
        if (us != std::string::npos) {
            std::string suffix = ident.substr(us + 1);
            if (!segment_suffix(suffix, mu)) {
                diags_->push_back({line_, col0_ + static_cast<int>(at),
                                   "malformed derivative suffix '_" + suffix + "' on '" + base + "'"});
                failed_ = true;
                return zero();
            }
            if (max_order_ >= 0 && mu.order() > max_order_) {
                diags_->push_back({line_, col0_ + static_cast<int>(at),
                                   "derivative order " + std::to_string(mu.order()) + " of '" + ident +
                                       "' exceeds the declared order " + std::to_string(max_order_)});
                failed_ = true;
                return zero();
            }
        }
        return Expr::variable(chart_, chart_->jet(alpha, mu));
    }

    // split a derivative suffix into independent-variable names (backtracking,
    // longest candidates first, so multi-letter names work)
    bool segment_suffix(const std::string& s, MultiIndex& mu) {
        if (s.empty()) return false;
        return segment_from(s, 0, mu);
    }
    bool segment_from(const std::string& s, std::size_t at, MultiIndex& mu) {
        if (at == s.size()) return true;
        std::vector<int> order(chart_->n());
        for (int i = 0; i < chart_->n(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return chart_->xname(a).size() > chart_->xname(b).size();
        });
        for (int i : order) {
            const std::string& nm = chart_->xname(i);
            if (s.compare(at, nm.size(), nm) == 0) {
                mu.counts[i]++;
                if (segment_from(s, at + nm.size(), mu)) return true;
                mu.counts[i]--;
            }
        }
        return false;
    }

public:
    void set_params(std::vector<std::string> params) { params_ = std::move(params); }

private:
    ChartPtr chart_;
    std::string text_;
    int line_, col0_, max_order_;
    std::vector<std::string> params_;
    std::size_t pos_ = 0;
    std::vector<Diagnostic>* diags_ = nullptr;
    bool failed_ = false;
};

/* Parsed system file: exactly one of the solved ('eq') or implicit ('impl')
 * forms.
 */
struct SystemFile {
    std::string name;
    ChartPtr chart;
    std::vector<std::string> params;
    int order = 1;
    std::optional<SolvedSystem> solved;
    std::optional<ImplicitSystem> implicit;
    std::map<VarId, Rational> point;
};

struct ParseResult {
    std::optional<SystemFile> file;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return file.has_value() && diagnostics.empty(); }
};

inline ParseResult parse_system_file(const std::string& text) {
    ParseResult res;
    std::vector<std::string> xnames, unames, params;
    std::string name;
    int order = 1;
    bool have_order = false;

    struct PendingEq {
        int line;
        std::string lhs, rhs;
        int rhs_col;
        bool implicit;
    };
    std::vector<PendingEq> pending;
    std::string point_line;
    int point_lineno = 0;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    auto err = [&](int line, int col, const std::string& m) {
        res.diagnostics.push_back({line, col, m});
    };
    while (std::getline(in, raw)) {
        ++lineno;
        std::string s = raw;
        auto hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        std::istringstream ls(s);
        std::string kw;
        if (!(ls >> kw)) continue;
        if (kw == "name") {
            std::getline(ls, name);
            while (!name.empty() && name.front() == ' ') name.erase(name.begin());
        } else if (kw == "indep" || kw == "dep" || kw == "param") {
            std::vector<std::string>& tgt = kw == "indep" ? xnames : (kw == "dep" ? unames : params);
            std::string w;
            while (ls >> w) {
                if (w.find('_') != std::string::npos)
                    err(lineno, 1, "'_' is not allowed in declared names: '" + w + "'");
                tgt.push_back(w);
            }
            if (tgt.empty()) err(lineno, 1, "empty '" + kw + "' declaration");
        } else if (kw == "order") {
            if (!(ls >> order) || order < 1) err(lineno, 1, "order must be a positive integer");
            have_order = true;
        } else if (kw == "eq" || kw == "impl") {
            std::string rest;
            std::getline(ls, rest);
            int col = static_cast<int>(raw.find(kw)) + static_cast<int>(kw.size()) + 2;
            if (kw == "eq") {
                auto eqpos = rest.find('=');
                if (eqpos == std::string::npos) {
                    err(lineno, col, "'eq' line needs '<derivative> = <expression>'");
                    continue;
                }
                std::string lhs = rest.substr(0, eqpos), rhs = rest.substr(eqpos + 1);
                pending.push_back({lineno, lhs, rhs, col + static_cast<int>(eqpos) + 1, false});
            } else {
                pending.push_back({lineno, "", rest, col, true});
            }
        } else if (kw == "point") {
            std::getline(ls, point_line);
            point_lineno = lineno;
        } else {
            err(lineno, 1, "unknown keyword '" + kw + "'");
        }
    }

    if (xnames.empty()) err(1, 1, "missing 'indep' declaration");
    if (unames.empty()) err(1, 1, "missing 'dep' declaration");
    if (pending.empty()) err(1, 1, "no 'eq' or 'impl' lines");
    bool any_eq = false, any_impl = false;
    for (auto& p : pending) (p.implicit ? any_impl : any_eq) = true;
    if (any_eq && any_impl) err(1, 1, "mix of 'eq' and 'impl' lines; use exactly one form");
    if (!res.diagnostics.empty()) return res;
    if (!have_order) order = 1;

    auto chart = Chart::create(static_cast<int>(xnames.size()), static_cast<int>(unames.size()),
                               order, xnames, unames);
    for (const std::string& p : params) chart->add_param(p);

    SystemFile f;
    f.name = name;
    f.chart = chart;
    f.params = params;
    f.order = order;

    if (any_impl) {
        ImplicitSystem sys(chart, order);
        for (auto& p : pending) {
            ExprParser ep(chart, p.rhs, p.line, p.rhs_col, order);
            ep.set_params(params);
            auto e = ep.parse(res.diagnostics);
            if (e) sys.add_equation(*e);
        }
        if (!res.diagnostics.empty()) return res;
        f.implicit = std::move(sys);
    } else {
        SolvedSystem sys(chart, order);
        for (auto& p : pending) {
            // parse the left side as a single jet variable
            ExprParser lp(chart, p.lhs, p.line, 1, order);
            lp.set_params(params);
            std::vector<Diagnostic> ldiags;
            auto lhs = lp.parse(ldiags);
            bool lhs_ok = lhs.has_value() && ldiags.empty();
            int alpha = -1;
            MultiIndex mu;
            if (lhs_ok) {
                lhs_ok = false;
                if (lhs->den().is_constant() && lhs->num().size() == 1 &&
                    lhs->num().leading().c == 1 && lhs->num().leading().m.vars.size() == 1 &&
                    lhs->num().leading().m.vars[0].second == 1) {
                    VarId v = lhs->num().leading().m.vars[0].first;
                    const VarInfo& vi = chart->info(v);
                    if (vi.kind == VarKind::Jet) {
                        alpha = vi.alpha;
                        mu = vi.mu;
                        lhs_ok = true;
                    }
                }
            }
            if (!lhs_ok) {
                for (auto& d : ldiags) res.diagnostics.push_back(d);
                err(p.line, 1, "left side of 'eq' must be a single derivative coordinate");
                continue;
            }
            ExprParser rp(chart, p.rhs, p.line, p.rhs_col, order);
            rp.set_params(params);
            auto rhs = rp.parse(res.diagnostics);
            if (rhs) sys.add_equation(alpha, mu, *rhs);
        }
        if (!res.diagnostics.empty()) return res;
        f.solved = std::move(sys);
    }

    if (!point_line.empty()) {
        std::istringstream ps(point_line);
        std::string item;
        while (ps >> item) {
            auto eq = item.find('=');
            if (eq == std::string::npos) {
                err(point_lineno, 1, "point entries look like coord=value");
                continue;
            }
            std::string cname = item.substr(0, eq), val = item.substr(eq + 1);
            ExprParser cp(chart, cname, point_lineno, 1, -1);
            cp.set_params(params);
            std::vector<Diagnostic> cd;
            auto ce = cp.parse(cd);
            if (!ce || !cd.empty() || ce->num().size() != 1 ||
                ce->num().leading().m.vars.size() != 1) {
                err(point_lineno, 1, "unknown coordinate '" + cname + "' in point");
                continue;
            }
            ExprParser vp(chart, val, point_lineno, 1, -1);
            std::vector<Diagnostic> vd;
            auto ve = vp.parse(vd);
            if (!ve || !vd.empty() || !ve->is_constant()) {
                err(point_lineno, 1, "point value '" + val + "' is not rational");
                continue;
            }
            f.point[ce->num().leading().m.vars[0].first] = ve->constant_value();
        }
    }

    if (!res.diagnostics.empty()) return res;
    res.file = std::move(f);
    return res;
}

// Convenience for tests: parse one expression against a chart.
inline Expr parse_expr(const ChartPtr& chart, const std::string& text,
                       const std::vector<std::string>& params = {}) {
    ExprParser p(chart, text, 1, 1, -1);
    p.set_params(params);
    std::vector<Diagnostic> diags;
    auto e = p.parse(diags);
    if (!e) throw ExprError("parse_expr: " + (diags.empty() ? "failed" : diags[0].str()));
    return *e;
}

} // namespace vessiot

#endif
