#include <catch2/catch_amalgamated.hpp>

#include <vessiot/integral.hpp>
#include <vessiot/parser.hpp>

#include <random>

using namespace vessiot;

namespace {

ChartPtr wave_chart() { return Chart::create(2, 3, 1, {"x", "t"}, {"u", "v", "w"}); }

// the four projected wave equations as an implicit system
ImplicitSystem wave_projected(const ChartPtr& ch) {
    ImplicitSystem sys(ch, 1);
    sys.add_equation(parse_expr(ch, "u_t - v"));
    sys.add_equation(parse_expr(ch, "v_t - w_x"));
    sys.add_equation(parse_expr(ch, "w_t - v_x"));
    sys.add_equation(parse_expr(ch, "u_x - w"));
    return sys;
}

} // namespace

TEST_CASE("class of a multi-index") {
    CHECK(MultiIndex{0, 0, 1}.cls() == 3);
    CHECK(MultiIndex{1, 1}.cls() == 1);
    CHECK(MultiIndex{0, 2, 0, 0, 0}.cls() == 2);
    CHECK_THROWS_AS((MultiIndex{0, 0}).cls(), std::domain_error);
    // class(mu + 1_i) = min(class(mu), i+1) for nonzero mu
    MultiIndex mu{0, 1, 0};
    CHECK(mu.plus(0).cls() == 1);
    CHECK(mu.plus(2).cls() == 2);
}

TEST_CASE("degree reverse lexicographic ranking, term over position") {
    MultiIndex ex{1, 0}, et{0, 1};
    // u^1_(1,0) before u^1_(0,1)
    CHECK(rank_compare(0, ex, 0, et) < 0);
    // alpha breaks ties
    CHECK(rank_compare(0, ex, 1, ex) < 0);
    // order dominates everything
    MultiIndex exx{2, 0};
    CHECK(rank_compare(1, et, 0, exx) < 0);
    // class-respecting: same order, lower class first
    MultiIndex eyy{0, 2}, exy{1, 1};
    CHECK(rank_compare(0, exy, 0, eyy) < 0);
    CHECK(rank_compare(2, exy, 0, eyy) < 0);
}

TEST_CASE("contact fields") {
    auto ch = wave_chart();
    VectorField c1 = contact_field(ch, 0);
    CHECK(c1.component(ch->indep(0)) == parse_expr(ch, "1"));
    CHECK(c1.component(ch->dependent(0)) == parse_expr(ch, "u_x"));
    CHECK(c1.component(ch->dependent(1)) == parse_expr(ch, "v_x"));
    CHECK(c1.component(ch->dependent(2)) == parse_expr(ch, "w_x"));
    CHECK(c1.component(ch->jet(0, {1, 0})).is_zero());

    auto ode = Chart::create(1, 1, 1, {"x"}, {"u"});
    VectorField f = contact_field(ode, 0);
    CHECK(f.component(ode->indep(0)) == parse_expr(ode, "1"));
    CHECK(f.component(ode->dependent(0)) == parse_expr(ode, "u_x"));

    auto ch2 = Chart::create(2, 1, 2, {"x", "y"}, {"u"});
    VectorField g = contact_field(ch2, 0);
    CHECK(g.component(ch2->dependent(0)) == parse_expr(ch2, "u_x"));
    CHECK(g.component(ch2->jet(0, {1, 0})) == parse_expr(ch2, "u_xx"));
    CHECK(g.component(ch2->jet(0, {0, 1})) == parse_expr(ch2, "u_xy"));

    VectorField vert = vertical_field(ch2, 0, {2, 0});
    CHECK(vert.component(ch2->jet(0, {2, 0})) == parse_expr(ch2, "1"));
}

TEST_CASE("formal derivative") {
    auto ch = wave_chart();
    Expr e = parse_expr(ch, "u_t - v");
    Expr d = formal_derivative(e, 0);
    CHECK(d == Expr::variable(ch, ch->jet(0, {1, 1})) - parse_expr(ch, "v_x"));

    Expr e2 = parse_expr(ch, "u_x - w");
    Expr d2 = formal_derivative(e2, 1);
    CHECK(d2 == Expr::variable(ch, ch->jet(0, {1, 1})) - parse_expr(ch, "w_t"));

    auto ode = Chart::create(1, 1, 1, {"x"}, {"u"});
    Expr circle = parse_expr(ode, "u_x^2 + u^2 + x^2 - 1");
    Expr dc = formal_derivative(circle, 0);
    Expr expect = parse_expr(ode, "2*u*u_x + 2*x") +
                  parse_expr(ode, "2*u_x") * Expr::variable(ode, ode->jet(0, {2}));
    CHECK(dc == expect);
}

TEST_CASE("formal derivative splits into contact plus vertical parts") {
    auto ch = wave_chart();
    std::mt19937_64 rng(5150);
    std::uniform_int_distribution<int> cst(-3, 3);
    std::vector<VarId> vars;
    for (int i = 0; i < 2; ++i) vars.push_back(ch->indep(i));
    for (int a = 0; a < 3; ++a) vars.push_back(ch->dependent(a));
    for (VarId v : ch->jets_of_order(1)) vars.push_back(v);

    for (int rep = 0; rep < 200; ++rep) {
        // random polynomial of degree <= 2 in a few variables
        Expr f = Expr::constant(ch, Rational(cst(rng)));
        for (int t = 0; t < 3; ++t) {
            Expr term = Expr::constant(ch, Rational(cst(rng)));
            std::uniform_int_distribution<std::size_t> pv(0, vars.size() - 1);
            term = term * Expr::variable(ch, vars[pv(rng)]);
            if (rep % 2) term = term * Expr::variable(ch, vars[pv(rng)]);
            f = f + term;
        }
        int i = rep % 2;
        Expr lhs = formal_derivative(f, i);
        Expr rhs = contact_field(ch, i).apply(f);
        for (auto& [a, mu] : std::vector<std::pair<int, MultiIndex>>{
                 {0, {1, 0}}, {1, {1, 0}}, {2, {1, 0}}, {0, {0, 1}}, {1, {0, 1}}, {2, {0, 1}}}) {
            rhs = rhs + vertical_field(ch, a, mu).apply(f) *
                            Expr::variable(ch, ch->jet(a, mu.plus(i)));
        }
        REQUIRE(lhs == rhs);
    }
}

TEST_CASE("lie bracket: contact structure equations") {
    auto ch2 = Chart::create(2, 1, 2, {"x", "y"}, {"u"});
    // [C^{nu+1_i}_alpha, C_i] = d/du^alpha_nu for |nu| = q-1
    VectorField c1 = contact_field(ch2, 0);
    VectorField vert = vertical_field(ch2, 0, {2, 0}); // nu = (1,0), i = x
    VectorField br = lie_bracket(vert, c1);
    CHECK(br.component(ch2->jet(0, {1, 0})) == parse_expr(ch2, "1"));
    CHECK(br.components().size() == 1);

    // transversal contact fields commute
    VectorField c2 = contact_field(ch2, 1);
    CHECK(lie_bracket(c1, c2).is_zero());

    // wave example: barred reference fields
    auto ch = wave_chart();
    VectorField x1(ch), x2(ch), y1(ch), y2(ch);
    x1.set(ch->indep(0), parse_expr(ch, "1"));
    x1.set(ch->dependent(0), parse_expr(ch, "w"));
    x1.set(ch->dependent(1), parse_expr(ch, "v_x"));
    x1.set(ch->dependent(2), parse_expr(ch, "w_x"));
    x2.set(ch->indep(1), parse_expr(ch, "1"));
    x2.set(ch->dependent(0), parse_expr(ch, "v"));
    x2.set(ch->dependent(1), parse_expr(ch, "w_x"));
    x2.set(ch->dependent(2), parse_expr(ch, "v_x"));
    y1.set(ch->jet(1, {1, 0}), parse_expr(ch, "1"));
    y2.set(ch->jet(2, {1, 0}), parse_expr(ch, "1"));

    VectorField b = lie_bracket(x1, y1);
    CHECK(b.component(ch->dependent(1)) == parse_expr(ch, "-1"));
    CHECK(b.components().size() == 1);
    CHECK(lie_bracket(x1, x2).is_zero());
    CHECK(lie_bracket(x2, y1).component(ch->dependent(2)) == parse_expr(ch, "-1"));
    CHECK(lie_bracket(x1, y2).component(ch->dependent(2)) == parse_expr(ch, "-1"));
    CHECK(lie_bracket(x2, y2).component(ch->dependent(1)) == parse_expr(ch, "-1"));

    // antisymmetry on a field with itself
    CHECK(lie_bracket(x1, x1).is_zero());
}

TEST_CASE("lie bracket satisfies the Jacobi identity on random fields") {
    auto ch = wave_chart();
    std::mt19937_64 rng(999);
    std::uniform_int_distribution<int> cst(-3, 3);
    std::vector<VarId> coords{ch->indep(0), ch->indep(1), ch->dependent(0), ch->dependent(1),
                              ch->jet(1, {1, 0})};
    auto random_field = [&]() {
        VectorField f(ch);
        for (VarId c : coords) {
            // sparse polynomial coefficients of degree <= 2
            if (cst(rng) > 0) {
                std::uniform_int_distribution<std::size_t> pv(0, coords.size() - 1);
                Expr e = Expr::constant(ch, Rational(cst(rng)));
                e = e * Expr::variable(ch, coords[pv(rng)]);
                if (cst(rng) > 1) e = e * Expr::variable(ch, coords[pv(rng)]);
                f.set(c, e);
            }
        }
        return f;
    };
    for (int rep = 0; rep < 12; ++rep) {
        VectorField a = random_field(), b = random_field(), c = random_field();
        VectorField jac = lie_bracket(a, lie_bracket(b, c)) + lie_bracket(b, lie_bracket(c, a)) +
                          lie_bracket(c, lie_bracket(a, b));
        REQUIRE(jac.is_zero());
    }
}

TEST_CASE("derivation property of vector field application") {
    auto ch = wave_chart();
    VectorField c1 = contact_field(ch, 0);
    Expr f = parse_expr(ch, "u*v_x + x");
    Expr g = parse_expr(ch, "w - t*u");
    CHECK(c1.apply(f * g) == c1.apply(f) * g + f * c1.apply(g));
}

TEST_CASE("contact map in coordinates") {
    auto ode = Chart::create(1, 1, 1, {"x"}, {"u"});
    std::map<VarId, Rational> p{{ode->indep(0), Rational(0)},
                                {ode->dependent(0), Rational(1)},
                                {ode->jet(0, {1}), Rational(2)}};
    TangentVector t = contact_map_at(ode, p, 0);
    CHECK(t.component(ode->indep(0)) == 1);
    CHECK(t.component(ode->dependent(0)) == 2);

    // wave system: matches the base projection of the first contact field
    auto ch = wave_chart();
    std::map<VarId, Rational> wp;
    wp[ch->indep(0)] = 1;
    wp[ch->indep(1)] = 2;
    for (int a = 0; a < 3; ++a) wp[ch->dependent(a)] = Rational(a + 1);
    wp[ch->jet(0, {1, 0})] = 4; // u_x
    wp[ch->jet(1, {1, 0})] = 5;
    wp[ch->jet(2, {1, 0})] = 6;
    wp[ch->jet(0, {0, 1})] = 7;
    wp[ch->jet(1, {0, 1})] = 8;
    wp[ch->jet(2, {0, 1})] = 9;
    TangentVector tw = contact_map_at(ch, wp, 0);
    CHECK(tw.component(ch->indep(0)) == 1);
    CHECK(tw.component(ch->dependent(0)) == 4);
    CHECK(tw.component(ch->dependent(1)) == 5);
    CHECK(tw.component(ch->dependent(2)) == 6);
    // transversality: the x-component is one by construction
    TangentVector tt = contact_map_at(ch, wp, 1);
    CHECK(tt.component(ch->indep(1)) == 1);
}

TEST_CASE("integral elements of the projected wave system") {
    auto ch = wave_chart();
    ImplicitSystem sys = wave_projected(ch);

    // prolonged graph of the polynomial solution u = x^2 + x t + t^2
    std::map<VarId, Rational> base;
    Rational x(1), t(2);
    base[ch->indep(0)] = x;
    base[ch->indep(1)] = t;
    base[ch->dependent(0)] = x * x + x * t + t * t;
    base[ch->dependent(1)] = x + 2 * t; // v = u_t
    base[ch->dependent(2)] = 2 * x + t; // w = u_x
    base[ch->jet(0, {1, 0})] = 2 * x + t;
    base[ch->jet(0, {0, 1})] = x + 2 * t;
    base[ch->jet(1, {1, 0})] = 1;
    base[ch->jet(1, {0, 1})] = 2;
    base[ch->jet(2, {1, 0})] = 2;
    base[ch->jet(2, {0, 1})] = 1;

    TangentVector dx, dt;
    dx.comp[ch->indep(0)] = 1;
    dx.comp[ch->dependent(0)] = base[ch->jet(0, {1, 0})];
    dx.comp[ch->dependent(1)] = 1; // v_x
    dx.comp[ch->dependent(2)] = 2; // w_x
    dx.comp[ch->jet(0, {1, 0})] = 2;
    dx.comp[ch->jet(0, {0, 1})] = 1;
    dt.comp[ch->indep(1)] = 1;
    dt.comp[ch->dependent(0)] = base[ch->jet(0, {0, 1})];
    dt.comp[ch->dependent(1)] = 2; // v_t
    dt.comp[ch->dependent(2)] = 1; // w_t
    dt.comp[ch->jet(0, {1, 0})] = 1;
    dt.comp[ch->jet(0, {0, 1})] = 2;

    PointFrame frame{base, {dx, dt}};
    IntegralCheck res = is_integral_element(frame, sys);
    CHECK(res.integral);
    CHECK(res.transversal);
    REQUIRE(res.witness.has_value());
    CHECK(*res.witness);
    CHECK(res.note.empty());

    // a vertical symbol direction alone: integral but not transversal
    TangentVector vert;
    vert.comp[ch->jet(1, {1, 0})] = 1; // v_x
    vert.comp[ch->jet(2, {0, 1})] = 1; // w_t
    PointFrame vframe{base, {vert}};
    IntegralCheck vres = is_integral_element(vframe, sys);
    CHECK(vres.integral);
    CHECK_FALSE(vres.transversal);
    CHECK_FALSE(vres.witness.has_value());

    // span{d/dx, d/du}: the first contact form does not vanish on d/du
    TangentVector du;
    du.comp[ch->dependent(0)] = 1;
    TangentVector ex;
    ex.comp[ch->indep(0)] = 1;
    PointFrame bad{base, {ex, du}};
    IntegralCheck bres = is_integral_element(bad, sys);
    CHECK_FALSE(bres.integral);

    // off-manifold base point is rejected
    std::map<VarId, Rational> off = base;
    off[ch->dependent(1)] = off[ch->dependent(1)] + 1;
    CHECK_THROWS_AS(is_integral_element(PointFrame{off, {ex}}, sys), ExprError);
}
