#ifndef VESSIOT_REPORT_HPP
#define VESSIOT_REPORT_HPP

#include "connection.hpp"
#include "parser.hpp"

#include <json.hpp>

#include <sstream>

namespace vessiot {

using Json = nlohmann::json;

struct AnalysisOptions {
    bool contract = true;
    int step_limit = 0;        // 0: run every step
    std::uint64_t seed = 9241; // seeds the random evaluation points of the rank guards
};

struct AnalysisResult {
    int exit_code = 2; // 0: involutive, family built; 1: analysis done, no family; 2: input error
    Json machine;
    std::string text;
};

namespace detail {

inline Json matrix_json(const SymMatrix& m) {
    Json rows = Json::array();
    for (int r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c).str());
        rows.push_back(std::move(row));
    }
    Json labelled = Json::array();
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            if (!m.at(r, c).is_zero())
                labelled.push_back(Json{{"row", m.row_label(r)},
                                        {"col", m.col_label(c)},
                                        {"value", m.at(r, c).str()}});
    return Json{{"matrix", rows}, {"entries", labelled}};
}

inline Json exprs_json(const std::vector<Expr>& es) {
    Json a = Json::array();
    for (const Expr& e : es) a.push_back(e.str());
    return a;
}

inline Json field_json(const VectorField& f) {
    Json o = Json::object();
    for (auto& [c, e] : f.components()) o[f.chart()->name(c)] = e.str();
    return o;
}

} // namespace detail

inline Json system_section(const SystemFile& f, const std::vector<Violation>& violations) {
    Json sec;
    sec["name"] = f.name;
    Json indep = Json::array(), dep = Json::array(), params = Json::array();
    for (int i = 0; i < f.chart->n(); ++i) indep.push_back(f.chart->xname(i));
    for (int a = 0; a < f.chart->m(); ++a) dep.push_back(f.chart->uname(a));
    for (auto& p : f.params) params.push_back(p);
    sec["independent"] = indep;
    sec["dependent"] = dep;
    sec["parameters"] = params;
    sec["order"] = f.order;
    sec["form"] = f.solved ? "solved" : "implicit";
    Json eqs = Json::array();
    if (f.solved)
        for (auto& e : f.solved->equations())
            eqs.push_back(f.chart->jet_name(e.alpha, e.mu) + " = " + e.rhs.str());
    else
        for (auto& e : f.implicit->equations()) eqs.push_back(e.str() + " = 0");
    sec["equations"] = eqs;
    Json viol = Json::array();
    for (auto& v : violations)
        viol.push_back(Json{{"equation", v.equation}, {"message", v.message}});
    sec["violations"] = viol;
    if (f.solved && violations.empty()) {
        Json b = Json::array(), a = Json::array();
        for (int x : f.solved->betas()) b.push_back(x);
        sec["betas"] = b;
        if (f.order == 1) {
            for (int x : f.solved->alphas()) a.push_back(x);
            sec["cartan_characters"] = a;
        }
    }
    return sec;
}

inline Json symbol_section(const SymbolData& sym, const CartanTest& ct) {
    Json sec;
    sec["matrix"] = detail::matrix_json(sym.matrix);
    Json cols = Json::array();
    for (int c = 0; c < sym.matrix.cols(); ++c) cols.push_back(sym.matrix.col_label(c));
    sec["columns"] = cols;
    sec["rank"] = sym.rank;
    sec["dim_symbol"] = sym.dim_symbol;
    Json b = Json::array();
    for (int x : sym.betas) b.push_back(x);
    sec["betas"] = b;
    sec["caveats"] = detail::exprs_json(sym.caveats);
    Json cart;
    cart["passes"] = ct.passes;
    cart["rank_prolonged"] = ct.rank_prolonged;
    cart["weighted_sum"] = ct.weighted_sum;
    cart["caveats"] = detail::exprs_json(ct.caveats);
    if (!ct.passes)
        cart["note"] = "failure indicates a non-involutive symbol or coordinates that are not "
                       "delta-regular; the test cannot distinguish the two";
    sec["cartan_test"] = cart;
    return sec;
}

inline Json involution_section(const ObstructionReport& rep, const ChartPtr& ch) {
    Json sec;
    sec["symbol_involutive"] = rep.symbol_involutive;
    sec["equation_involutive"] = rep.equation_involutive;
    sec["monotone_indices"] = rep.monotone_indices;
    sec["assumption"] = rep.assumption;
    Json triples = Json::array();
    for (auto& t : rep.triples) {
        Json tr;
        tr["unknown"] = ch->uname(t.alpha);
        tr["i"] = t.i;
        tr["j"] = t.j;
        tr["residue"] = t.residue.str();
        tr["residue_vanishes"] = t.residue.is_zero();
        Json brackets = Json::array();
        for (auto& [key, coeff] : t.brackets)
            brackets.push_back(Json{{"unknown", ch->uname(key.delta)},
                                    {"classes", Json::array({key.h, key.k})},
                                    {"coefficient", coeff.str()}});
        tr["nonzero_brackets"] = brackets;
        triples.push_back(std::move(tr));
    }
    sec["triples"] = triples;
    return sec;
}

inline Json vessiot_section_solved(const SolvedSystem& sys, const StructureData& sd) {
    Json sec;
    VessiotBasis b = vessiot_basis(sys);
    Json xs = Json::array(), ys = Json::array();
    for (auto& f : b.x_fields) xs.push_back(detail::field_json(f));
    for (std::size_t k = 0; k < b.y_fields.size(); ++k)
        ys.push_back(sys.chart()->jet_name(b.y_labels[k].first, b.y_labels[k].second));
    sec["reference_complement"] = xs;
    sec["symbol_fields"] = ys;
    Json theta = Json::object();
    for (auto& [ij, th] : sd.theta) {
        std::string key = "(" + std::to_string(ij.first) + "," + std::to_string(ij.second) + ")";
        theta[key] = detail::exprs_json(th);
    }
    sec["theta"] = theta;
    Json xis = Json::array();
    for (auto& x : sd.xi) xis.push_back(detail::matrix_json(x));
    sec["xi"] = xis;
    return sec;
}

inline Json vessiot_section_implicit(const ImplicitGenerators& gen) {
    Json sec;
    Json fs = Json::array();
    for (auto& f : gen.fields) fs.push_back(detail::field_json(f));
    sec["generators"] = fs;
    sec["caveats"] = detail::exprs_json(gen.caveats);
    return sec;
}

inline Json connection_section(const SolvedSystem& sys, const ConnectionFamily& fam) {
    const ChartPtr& ch = sys.chart();
    Json sec;
    Json steps = Json::array();
    for (auto& st : fam.steps) {
        Json s;
        s["j"] = st.j;
        auto cond = [&](const RankCondition& rc) {
            return Json{{"lhs_rank", rc.lhs_rank},
                        {"rhs_rank", rc.rhs_rank},
                        {"passes", rc.passes},
                        {"caveats", detail::exprs_json(rc.caveats)}};
        };
        s["rank_condition"] = cond(st.rank_condition);
        s["augmented_condition"] = cond(st.augmented_condition);
        s["solved"] = st.solved;
        Json assigned = Json::object();
        for (auto& [z, e] : st.assigned)
            assigned[ch->name(ch->zeta(z.sub, z.alpha, z.mu))] = e.str();
        s["assigned"] = assigned;
        Json freec = Json::array();
        for (auto& z : st.free_components) freec.push_back(ch->name(ch->zeta(z.sub, z.alpha, z.mu)));
        s["free"] = freec;
        Json off = Json::array();
        for (auto& [row, residual] : st.offending)
            off.push_back(Json{{"row", row}, {"residual", residual.str()}});
        s["offending"] = off;
        steps.push_back(std::move(s));
    }
    sec["steps"] = steps;
    sec["success"] = fam.success;
    if (!fam.success) sec["failed_step"] = fam.failed_step;
    if (fam.success) {
        Json freec = Json::array();
        for (auto& z : fam.free_components) freec.push_back(ch->name(ch->zeta(z.sub, z.alpha, z.mu)));
        sec["free_functions"] = freec;
        Json zeta = Json::object();
        for (auto& [z, e] : fam.zeta) zeta[ch->name(ch->zeta(z.sub, z.alpha, z.mu))] = e.str();
        sec["zeta"] = zeta;
        sec["algebraic_conditions_verified"] = fam.algebraic_verified;
        Json us = Json::array();
        for (auto& u : fam.u_fields) us.push_back(detail::field_json(u));
        sec["fields"] = us;
    }
    return sec;
}

inline Json differential_section(const SolvedSystem& sys, const ConnectionFamily& fam,
                                 const std::vector<DifferentialCondition>& dcs,
                                 const ReducedDifferentialSystem& red) {
    const ChartPtr& ch = sys.chart();
    Json sec;
    Json full = Json::array();
    for (auto& dc : dcs)
        full.push_back(Json{{"class", dc.j},
                            {"leader", ch->name(dc.leader)},
                            {"rhs", dc.rhs.str()}});
    sec["solved_form"] = full;
    Json reduced = Json::array();
    for (auto& dc : red.equations)
        reduced.push_back(Json{{"class", dc.j},
                               {"leader", ch->name(dc.leader)},
                               {"rhs", dc.rhs.str()}});
    sec["reduced"] = reduced;
    Json ren = Json::array();
    for (auto& [sym, nm] : red.renumbering)
        ren.push_back(Json{{"symbol", ch->name(sym)}, {"name", nm}});
    sec["renumbering"] = ren;
    Json alg = Json::array();
    for (auto& [where, e] : red.new_algebraic)
        alg.push_back(Json{{"origin", where}, {"condition", e.str()}});
    sec["new_algebraic_conditions"] = alg;
    sec["solved_form_ok"] = red.solved_form_ok;
    return sec;
}

inline std::string render_text(const Json& rep) {
    std::ostringstream os;
    const Json& sys = rep.at("system");
    os << "system";
    if (sys.contains("name") && !sys.at("name").get<std::string>().empty())
        os << " '" << sys.at("name").get<std::string>() << "'";
    os << " (" << sys.at("form").get<std::string>() << ", order " << sys.at("order").get<int>()
       << ")\n";
    for (auto& e : sys.at("equations")) os << "  " << e.get<std::string>() << "\n";
    if (!sys.at("violations").empty()) {
        os << "violations:\n";
        for (auto& v : sys.at("violations"))
            os << "  equation " << v.at("equation").get<int>() << ": "
               << v.at("message").get<std::string>() << "\n";
        return os.str();
    }
    if (sys.contains("betas")) {
        os << "indices beta:";
        for (auto& b : sys.at("betas")) os << " " << b.get<int>();
        if (sys.contains("cartan_characters")) {
            os << "   characters alpha:";
            for (auto& a : sys.at("cartan_characters")) os << " " << a.get<int>();
        }
        os << "\n";
    }
    if (rep.contains("symbol")) {
        const Json& s = rep.at("symbol");
        os << "symbol: dim " << s.at("dim_symbol").get<int>() << ", rank " << s.at("rank").get<int>();
        const Json& ct = s.at("cartan_test");
        os << "; Cartan test " << (ct.at("passes").get<bool>() ? "passes" : "FAILS") << " (rank "
           << ct.at("rank_prolonged").get<int>() << " vs " << ct.at("weighted_sum").get<int>()
           << ")\n";
        if (ct.contains("note")) os << "  note: " << ct.at("note").get<std::string>() << "\n";
    }
    if (rep.contains("involution")) {
        const Json& iv = rep.at("involution");
        os << "involution: symbol " << (iv.at("symbol_involutive").get<bool>() ? "involutive" : "NOT involutive")
           << ", equation " << (iv.at("equation_involutive").get<bool>() ? "involutive" : "NOT involutive")
           << "\n";
        for (auto& t : iv.at("triples")) {
            if (!t.at("residue_vanishes").get<bool>())
                os << "  integrability residue (" << t.at("unknown").get<std::string>() << "; "
                   << t.at("i").get<int>() << "," << t.at("j").get<int>()
                   << "): " << t.at("residue").get<std::string>() << "\n";
            for (auto& b : t.at("nonzero_brackets"))
                os << "  obstruction on " << b.at("unknown").get<std::string>() << "_{"
                   << b.at("classes")[0].get<int>() << b.at("classes")[1].get<int>()
                   << "}: " << b.at("coefficient").get<std::string>() << "\n";
        }
    }
    if (rep.contains("vessiot") && rep.at("vessiot").contains("generators")) {
        os << "vessiot generators:\n";
        for (auto& f : rep.at("vessiot").at("generators")) {
            os << " ";
            for (auto& [k, v] : f.items()) os << "  (" << v.get<std::string>() << ")d/d" << k;
            os << "\n";
        }
        if (!rep.at("vessiot").at("caveats").empty()) {
            os << "  caveat pivots:";
            for (auto& c : rep.at("vessiot").at("caveats")) os << " " << c.get<std::string>();
            os << "\n";
        }
    }
    if (rep.contains("connection")) {
        const Json& cn = rep.at("connection");
        for (auto& st : cn.at("steps")) {
            os << "step j=" << st.at("j").get<int>() << ": rank "
               << (st.at("rank_condition").at("passes").get<bool>() ? "ok" : "FAIL") << " ("
               << st.at("rank_condition").at("lhs_rank").get<int>() << "/"
               << st.at("rank_condition").at("rhs_rank").get<int>() << "), augmented "
               << (st.at("augmented_condition").at("passes").get<bool>() ? "ok" : "FAIL") << "\n";
            for (auto& o : st.at("offending"))
                os << "  offending " << o.at("row").get<std::string>() << ": residual "
                   << o.at("residual").get<std::string>() << "\n";
        }
        if (cn.at("success").get<bool>()) {
            os << "integral distributions: family with " << cn.at("free_functions").size()
               << " free function(s):";
            for (auto& f : cn.at("free_functions")) os << " " << f.get<std::string>();
            os << "\n";
        } else {
            os << "construction failed at step " << cn.at("failed_step").get<int>() << "\n";
        }
    }
    if (rep.contains("differential")) {
        const Json& d = rep.at("differential");
        os << "reduced differential system (" << d.at("reduced").size() << " equation(s)):\n";
        for (auto& e : d.at("reduced"))
            os << "  [class " << e.at("class").get<int>() << "] " << e.at("leader").get<std::string>()
               << " = " << e.at("rhs").get<std::string>() << "\n";
        for (auto& a : d.at("new_algebraic_conditions"))
            os << "  new algebraic condition from " << a.at("origin").get<std::string>() << ": "
               << a.at("condition").get<std::string>() << "\n";
    }
    if (rep.contains("verdict")) os << "verdict: " << rep.at("verdict").get<std::string>() << "\n";
    return os.str();
}

} // namespace vessiot

#endif
