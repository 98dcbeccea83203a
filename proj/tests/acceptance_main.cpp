// Acceptance suite: one pass/fail line per criterion, exact checks only.

#include "jetform/corpus.hpp"
#include "jetform/multiform.hpp"
#include "jetform/textio.hpp"
#include "testutil.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace jetform;
using testutil::ExprGen;

namespace {

int failures = 0;

void criterion(const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        auto [p, d] = body();
        pass = p;
        detail = d;
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    auto t1 = std::chrono::steady_clock::now();
    double secs = std::chrono::duration<double>(t1 - t0).count();
    std::printf("[%s] %-38s (%.2f s)\n", pass ? "PASS" : "FAIL", name.c_str(), secs);
    if (!pass) {
        if (!detail.empty()) std::printf("       %s\n", detail.c_str());
        ++failures;
    }
}

std::pair<bool, std::string> from_report(const Report& report) {
    if (report.all_pass()) return {true, ""};
    std::ostringstream os;
    for (const CheckResult& c : report.checks)
        if (!c.pass) os << c.name << (c.residual.empty() ? "" : ": " + c.residual) << "; ";
    return {false, os.str()};
}

// --- criterion 6: randomized property suites, 100+ instances each ----------

std::pair<bool, std::string> property_suites() {
    {
        ExprGen gen(Context::make(3, {"u"}, {"u"}), 616);
        for (int round = 0; round < 100; ++round) {
            DiffPoly f = gen.poly();
            Axis a{gen.uniform(1, 3)};
            if (!euler(total_derivative(f, a), Field{1}, f.context()->all_axes()).is_zero())
                return {false, "Euler failed to annihilate a total derivative"};
        }
    }
    {
        for (int axes : {3, 4}) {
            auto ctx = Context::make(axes, {"u"}, {"u"});
            ExprGen gen(ctx, 1000 + axes, 2, 2);
            for (int round = 0; round < 50; ++round)
                for (int degree : {1, 2}) {
                    KForm form(ctx, degree);
                    for (int reps = 0; reps < 3; ++reps) {
                        std::vector<int> tuple;
                        while (static_cast<int>(tuple.size()) < degree) {
                            int a = gen.uniform(1, axes);
                            bool dup = false;
                            for (int t : tuple) dup = dup || t == a;
                            if (!dup) tuple.push_back(a);
                        }
                        form.add_coefficient(tuple, gen.poly(2));
                    }
                    KForm dd = exterior_derivative(exterior_derivative(form));
                    for (auto& [tuple, coeff] : dd.coefficients())
                        if (!coeff.is_zero()) return {false, "d(d(form)) nonzero"};
                }
        }
    }
    {
        ExprGen gen(Context::make(3, {"u"}, {"u"}), 1414);
        auto ctx = gen.context();
        for (int round = 0; round < 100; ++round) {
            DiffPoly l = gen.poly();
            int excluded = gen.uniform(1, 3);
            std::vector<Axis> axes;
            for (int a = 1; a <= 3; ++a)
                if (a != excluded) axes.push_back(Axis{a});
            MultiIndex i = gen.multi_index(3);
            DiffPoly lhs = partial_jet(l, Generator::jet_of(Field{1}, i));
            DiffPoly rhs(ctx);
            for (int b0 : {0, 1})
                for (int b1 : {0, 1}) {
                    MultiIndex j(3);
                    if (b0) j = j.incremented(axes[0]);
                    if (b1) j = j.incremented(axes[1]);
                    rhs += total_derivative(
                        variational_derivative(l, Field{1}, i.plus(j).counts(), axes), j);
                }
            if (!(lhs == rhs)) return {false, "Lemma A.2 identity failed"};
        }
    }
    {
        auto ctx = Context::make(2, {"u", "w"}, {"u"});
        ExprGen gen(ctx, 9090, 2, 3);
        for (int round = 0; round < 100; ++round) {
            DiffPoly l = gen.poly();
            Characteristic q = gen.characteristic();
            IbpResult r = ibp_reduce(q, l, ctx->all_axes());
            if (!(prolong_apply(q, l) - r.core - divergence(r.boundary)).is_zero())
                return {false, "ibp_reduce identity failed"};
        }
    }
    {
        ExprGen gen(Context::make(2, {"u"}, {"u"}), 31337);
        for (int round = 0; round < 100; ++round) {
            DiffPoly l = gen.poly();
            if (!helmholtz_check({euler(l, Field{1}, l.context()->all_axes())}))
                return {false, "Euler expression not self-adjoint"};
        }
    }
    {
        auto ctx = Context::make(2, {"u"}, {"u"});
        ExprGen gen(ctx, 5252, 2, 3);
        for (int round = 0; round < 100; ++round) {
            VectorDensity g(ctx);
            g.set_component(Axis{1}, gen.poly(3));
            g.set_component(Axis{2}, gen.poly(3));
            DiffPoly f = divergence(g);
            if (f.is_zero()) continue;
            if (!verify_divergence(div_decompose(f, ctx->all_axes()), f))
                return {false, "decomposition round trip failed"};
        }
    }
    {
        ExprGen gen(Context::make(3, {"u", "w"}, {"u"}), 5150);
        for (int round = 0; round < 200; ++round) {
            DiffPoly f = gen.poly(5);
            if (!(parse_expr(print_expr(f), f.context()) == f))
                return {false, "parse/print round trip failed"};
        }
    }
    return {true, ""};
}

// --- criterion 7: both EL criteria agree on the sine-Gordon multiform ------

std::pair<bool, std::string> criterion_equivalence() {
    KForm form = multiform_from_json(corpus_case("sg").doc("multiform"));
    EOMSystem sys = eom_from_json(corpus_case("sg").doc("eom"));
    EomReducer reducer(sys);
    for (const ELEntry& e : multiform_el_equations(form))
        if (!reducer.reduce(e.expr).is_zero())
            return {false, "variational criterion residual at I=" + MultiIndex(e.index).str()};
    for (const ELEntry& e : multiform_el_direct(form))
        if (!reducer.reduce(e.expr).is_zero())
            return {false, "direct criterion residual at I=" + MultiIndex(e.index).str()};
    return {true, ""};
}

} // namespace

int main() {
    criterion("1. sine-Gordon certificate & build", [] { return from_report(corpus_run("sg")); });
    criterion("2. AKNS three-flow multiform", [] { return from_report(corpus_run("akns3")); });
    criterion("3. AKNS four-flow coherence", [] { return from_report(corpus_run("akns4")); });
    criterion("4. KP 3-form", [] { return from_report(corpus_run("kp")); });
    criterion("5. zero-symmetry demonstration",
              [] { return from_report(corpus_run("zero-demo")); });
    criterion("6. randomized property suites", property_suites);
    criterion("7. EL criterion equivalence", criterion_equivalence);

    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
