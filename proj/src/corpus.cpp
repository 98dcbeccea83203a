#include "jetform/corpus.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <functional>
#include <sstream>

namespace jetform {

namespace {

// --- document bodies -------------------------------------------------------
//
// Expressions are transcribed from the source hierarchies term by term; the
// verification checks below hold them to exact identities.

json sg_context() {
    return json{{"axes", {"x1", "x2", "x3"}}, {"fields", {"u"}}, {"trig_fields", {"u"}}};
}

json akns_context(int axes) {
    json names = json::array();
    for (int k = 1; k <= axes; ++k) names.push_back("x" + std::to_string(k));
    return json{{"axes", names}, {"fields", {"q", "r"}}, {"trig_fields", json::array()}};
}

json kp_context() {
    return json{{"axes", {"x1", "x2", "x3", "x4"}}, {"fields", {"v"}},
                {"trig_fields", json::array()}};
}

const char* kSgL12 = "1/2*u_x1*u_x2 - cos(u)";
// mKdV flow defect: qtilde = u_x3 - u_3x1 - 1/2 u_x1^3.
const char* kSgBuildChar = "-u_x1x1x1 - 1/2*u_x1^3";
const char* kSgProduct = "(u_x3 - u_x1x1x1 - 1/2*u_x1^3)*(sin(u) - u_x1x2)";
const char* kSgP1 = "-1/2*u_x2*u_x3 + u_x1x1*u_x1x2 - u_x1x1*sin(u) + 1/2*u_x1^2*cos(u)";
const char* kSgP2 = "-1/2*u_x1*u_x3 - 1/2*u_x1x1^2 + 1/8*u_x1^4";
const char* kSgP3 = "1/2*u_x1*u_x2 - cos(u)";
// Divergence certificate of pr12 v_Q(L) for Q = u_3x1 + u_x1^3/2.
const char* kSgB1 = "1/2*u_x1*u_x1x1x2 - 1/2*u_x1x1*u_x1x2 + 1/2*u_x1x1x1*u_x2 + "
                    "1/4*u_x1^3*u_x2 + u_x1x1*sin(u) - 1/2*u_x1^2*cos(u)";
const char* kSgB2 = "1/8*u_x1^4";

const char* kAknsL12 = "1/2*(r*q_x2 - q*r_x2) + i/2*q_x1*r_x1 + i/2*q^2*r^2";
const char* kAknsL31 = "1/2*(q*r_x3 - r*q_x3) + 1/8*(r_x1*q_x1x1 - q_x1*r_x1x1) + "
                       "3/8*q*r*(r*q_x1 - q*r_x1)";
const char* kAknsL23 =
    "1/4*(q_x2*r_x1x1 - r_x2*q_x1x1) - i/2*(q_x3*r_x1 + r_x3*q_x1) + "
    "1/8*(q_x1*r_x1x2 - r_x1*q_x1x2) + 3/8*q*r*(q*r_x2 - r*q_x2) - i/8*q_x1x1*r_x1x1 + "
    "i/4*q*r*(q*r_x1x1 + r*q_x1x1) - i/8*(q^2*r_x1^2 + r^2*q_x1^2) + i/4*q*r*q_x1*r_x1 - "
    "i/2*q^3*r^3";
// x3 flow defect components: qtilde = u_x3 - Q3.
const char* kAknsQ3q = "-3/2*q*r*q_x1 + 1/4*q_x1x1x1";
const char* kAknsQ3r = "-3/2*r*q*r_x1 + 1/4*r_x1x1x1";
const char* kAknsEq41Product =
    "(q_x3 - 3/2*q*r*q_x1 + 1/4*q_x1x1x1)*(-r_x2 - i/2*r_x1x1 + i*r^2*q) + "
    "(r_x3 - 3/2*r*q*r_x1 + 1/4*r_x1x1x1)*(q_x2 - i/2*q_x1x1 + i*q^2*r)";
const char* kAknsRuleQ2 = "i/2*q_x1x1 - i*q^2*r";
const char* kAknsRuleR2 = "-i/2*r_x1x1 + i*r^2*q";
const char* kAknsRuleQ3 = "3/2*q*r*q_x1 - 1/4*q_x1x1x1";
const char* kAknsRuleR3 = "3/2*r*q*r_x1 - 1/4*r_x1x1x1";
// x4 flow defect components (fourth AKNS flow).
const char* kAknsQ4q = "i*(3/4*q^3*r^2 - 1/4*q^2*r_x1x1 - 1/2*q*q_x1*r_x1 - q*r*q_x1x1 - "
                       "3/4*r*q_x1^2 + 1/8*q_x1x1x1x1)";
const char* kAknsQ4r = "-i*(3/4*q^2*r^3 - 1/4*r^2*q_x1x1 - 1/2*r*q_x1*r_x1 - q*r*r_x1x1 - "
                       "3/4*q*r_x1^2 + 1/8*r_x1x1x1x1)";
const char* kAknsL41 = "1/2*(q*r_x4 - r*q_x4) + 3*i/16*(q^2*r_x1^2 + r^2*q_x1^2) + "
                       "i/4*q*r*q_x1*r_x1 + 5*i/16*q*r*(q*r_x1x1 + r*q_x1x1) - "
                       "i/8*q_x1x1*r_x1x1 - i/4*q^3*r^3";
const char* kAknsL24 =
    "3/8*q^2*r^2*(r*q_x1 - q*r_x1) - i/16*(q^2*r_x1*r_x2 + r^2*q_x1*q_x2) - "
    "5*i/16*q*r*(q*r_x1x2 + r*q_x1x2) - 1/8*q*r*(r*q_x1x1x1 - q*r_x1x1x1) - "
    "1/8*(q^2*r_x1*r_x1x1 - r^2*q_x1*q_x1x1) - 1/8*q_x1*r_x1*(r*q_x1 - q*r_x1) + "
    "1/4*q*r*(r_x1*q_x1x1 - q_x1*r_x1x1) + 3*i/8*q*r*(q_x1*r_x2 + r_x1*q_x2) - "
    "i/8*(q_x1x1x1*r_x2 + r_x1x1x1*q_x2) + 1/16*(q_x1x1x1*r_x1x1 - r_x1x1x1*q_x1x1) + "
    "i/8*(q_x1x1*r_x1x2 + r_x1x1*q_x1x2) - i/2*(q_x1*r_x4 + r_x1*q_x4)";
const char* kAknsL34 =
    "i/8*(q_x1x1*r_x1x3 + r_x1x1*q_x1x3) - i/8*(q_x1x1x1*r_x3 + r_x1x1x1*q_x3) - "
    "i/32*q_x1x1x1*r_x1x1x1 + i/32*(q^2*r_x1x1^2 + r^2*q_x1x1^2) + i/32*q_x1^2*r_x1^2 + "
    "3/8*q*r*(r*q_x4 - q*r_x4) + 9*i/32*q^4*r^4 - 3*i/16*q^2*r^2*(q*r_x1x1 + r*q_x1x1) - "
    "i/16*(q^2*r_x1*r_x3 + r^2*q_x1*q_x3) - 5*i/16*q*r*(q*r_x1x3 + r*q_x1x3) + "
    "1/4*(q_x1x1*r_x4 - r_x1x1*q_x4) + 3*i/16*q*r*(q_x1*r_x1x1x1 + r_x1*q_x1x1x1) + "
    "i/16*q*r*q_x1x1*r_x1x1 - i/16*q_x1*r_x1*(q*r_x1x1 + r*q_x1x1) - "
    "15*i/16*q^2*r^2*q_x1*r_x1 + 3*i/8*q*r*(q_x1*r_x3 + r_x1*q_x3) - "
    "1/8*(q_x1*r_x1x4 - r_x1*q_x1x4)";
const char* kAknsRuleQ4 = "-i*(3/4*q^3*r^2 - 1/4*q^2*r_x1x1 - 1/2*q*q_x1*r_x1 - q*r*q_x1x1 - "
                          "3/4*r*q_x1^2 + 1/8*q_x1x1x1x1)";
const char* kAknsRuleR4 = "i*(3/4*q^2*r^3 - 1/4*r^2*q_x1x1 - 1/2*r*q_x1*r_x1 - q*r*r_x1x1 - "
                          "3/4*q*r_x1^2 + 1/8*r_x1x1x1x1)";

const char* kKpL123 = "1/2*v_x1x1*v_x1x3 - 1/2*v_x1x1x1^2 - 1/2*v_x1x2^2 + v_x1x1^3";
const char* kKpL412 = "1/2*v_x1x1*v_x1x4 - 2*v_x1x1x1*v_x1x1x2 - 2/3*v_x1x2*v_x2x2 + "
                      "4*v_x1x1^2*v_x1x2";
const char* kKpL234 =
    "-1/2*v_x1x3*v_x1x4 - 4*v_x1x3*v_x1x1x1x2 + 2*v_x1x1x3*v_x1x1x2 - 2/3*v_x2x2*v_x2x3 + "
    "v_x2x2*v_x1x4 + 4*v_x2x2*v_x1x1x1x2 - 8/3*v_x1x2x2*v_x1x1x2 - v_x1x1x1*v_x1x1x4 + "
    "4/3*v_x1x1x1*v_x2x2x2 - 4*v_x1x1x1^2*v_x1x2 + 8*v_x1x1*v_x1x1x1*v_x1x1x2 + "
    "8*v_x1x1*v_x1x2*v_x2x2 + 4/3*v_x1x2^3 - 8*v_x1x1*v_x1x2*v_x1x3 - 8*v_x1x1^3*v_x1x2";
const char* kKpL341 =
    "2/3*v_x2x2^2 + 2*v_x1x1x1x1^2 - 2*v_x1x1x1*v_x1x1x3 - 4/3*v_x2x2*v_x1x3 - "
    "2/3*v_x1x2*v_x2x3 + v_x1x2*v_x1x4 - 4/3*v_x1x1x2^2 + 4/3*v_x1x1x1*v_x1x2x2 + "
    "12*v_x1x1^2*v_x1x1x1x1 + 4*v_x1x1x1^2*v_x1x1 - 4*v_x1x1^2*v_x2x2 + 4*v_x1x1*v_x1x2^2 + "
    "4*v_x1x1^2*v_x1x3 + 10*v_x1x1^4";
// First-flow defect, once integrated in x1 so every term is local.
const char* kKpChar = "v_x1x3 - v_x2x2 + 3*v_x1x1^2 + v_x1x1x1x1";
const char* kKpProduct =
    "(v_x1x1x4 + 4*v_x1x1x1x1x2 - 4/3*v_x2x2x2 + 8*v_x1x1x1*v_x1x2 + 16*v_x1x1*v_x1x1x2)*"
    "(v_x1x3 - v_x2x2 + 3*v_x1x1^2 + v_x1x1x1x1)";
const char* kKpRule1Rhs = "v_x2x2 - 3*v_x1x1^2 - v_x1x1x1x1";
const char* kKpRule2Rhs = "-4*v_x1x1x1x1x2 + 4/3*v_x2x2x2 - 8*v_x1x1x1*v_x1x2 - "
                          "16*v_x1x1*v_x1x1x2";

std::vector<CorpusCase> make_corpus() {
    std::vector<CorpusCase> cases;

    {
        CorpusCase c;
        c.name = "sg";
        c.documents["lagrangian"] = json{{"context", sg_context()}, {"expr", kSgL12}};
        c.documents["characteristic"] =
            json{{"context", sg_context()}, {"components", {{"u", kSgBuildChar}}}};
        c.documents["product"] = json{{"context", sg_context()}, {"expr", kSgProduct}};
        c.documents["noether_vector"] = json{{"context", sg_context()},
                                             {"components", {{"x1", kSgP1}, {"x2", kSgP2}, {"x3", kSgP3}}}};
        c.documents["certificate"] =
            json{{"context", sg_context()}, {"components", {{"x1", kSgB1}, {"x2", kSgB2}}}};
        c.documents["multiform"] = json{
            {"context", sg_context()},
            {"degree", 2},
            {"coefficients",
             {{"12", kSgP3},
              {"13", "1/2*u_x1*u_x3 + 1/2*u_x1x1^2 - 1/8*u_x1^4"},
              {"23", kSgP1}}}};
        c.documents["eom"] = json{{"context", sg_context()},
                                  {"rules",
                                   {{{"field", "u"}, {"lead", {1, 1, 0}}, {"rhs", "sin(u)"}},
                                    {{"field", "u"},
                                     {"lead", {0, 0, 1}},
                                     {"rhs", "u_x1x1x1 + 1/2*u_x1^3"}}}},
                                  {"confluence_order", 4}};
        cases.push_back(std::move(c));
    }

    {
        CorpusCase c;
        c.name = "akns3";
        json ctx = akns_context(3);
        c.documents["lagrangian"] = json{{"context", ctx}, {"expr", kAknsL12}};
        c.documents["lagrangian31"] = json{{"context", ctx}, {"expr", kAknsL31}};
        c.documents["lagrangian23"] = json{{"context", ctx}, {"expr", kAknsL23}};
        c.documents["characteristic"] =
            json{{"context", ctx}, {"components", {{"q", kAknsQ3q}, {"r", kAknsQ3r}}}};
        c.documents["product"] = json{{"context", ctx}, {"expr", kAknsEq41Product}};
        c.documents["multiform"] =
            json{{"context", ctx},
                 {"degree", 2},
                 {"coefficients",
                  {{"12", kAknsL12},
                   {"13", std::string("-(") + kAknsL31 + ")"},
                   {"23", kAknsL23}}}};
        c.documents["eom"] =
            json{{"context", ctx},
                 {"rules",
                  {{{"field", "q"}, {"lead", {0, 1, 0}}, {"rhs", kAknsRuleQ2}},
                   {{"field", "r"}, {"lead", {0, 1, 0}}, {"rhs", kAknsRuleR2}},
                   {{"field", "q"}, {"lead", {0, 0, 1}}, {"rhs", kAknsRuleQ3}},
                   {{"field", "r"}, {"lead", {0, 0, 1}}, {"rhs", kAknsRuleR3}}}},
                 {"confluence_order", 3}};
        cases.push_back(std::move(c));
    }

    {
        CorpusCase c;
        c.name = "akns4";
        json ctx = akns_context(4);
        c.documents["lagrangian"] = json{{"context", ctx}, {"expr", kAknsL12}};
        c.documents["lagrangian13"] =
            json{{"context", ctx}, {"expr", std::string("-(") + kAknsL31 + ")"}};
        c.documents["lagrangian23"] = json{{"context", ctx}, {"expr", kAknsL23}};
        c.documents["characteristic"] =
            json{{"context", ctx}, {"components", {{"q", kAknsQ4q}, {"r", kAknsQ4r}}}};
        c.documents["l41"] = json{{"context", ctx}, {"expr", kAknsL41}};
        c.documents["l24"] = json{{"context", ctx}, {"expr", kAknsL24}};
        c.documents["l34"] = json{{"context", ctx}, {"expr", kAknsL34}};
        c.documents["eom"] =
            json{{"context", ctx},
                 {"rules",
                  {{{"field", "q"}, {"lead", {0, 1, 0, 0}}, {"rhs", kAknsRuleQ2}},
                   {{"field", "r"}, {"lead", {0, 1, 0, 0}}, {"rhs", kAknsRuleR2}},
                   {{"field", "q"}, {"lead", {0, 0, 1, 0}}, {"rhs", kAknsRuleQ3}},
                   {{"field", "r"}, {"lead", {0, 0, 1, 0}}, {"rhs", kAknsRuleR3}},
                   {{"field", "q"}, {"lead", {0, 0, 0, 1}}, {"rhs", kAknsRuleQ4}},
                   {{"field", "r"}, {"lead", {0, 0, 0, 1}}, {"rhs", kAknsRuleR4}}}},
                 {"confluence_order", 2}};
        cases.push_back(std::move(c));
    }

    {
        CorpusCase c;
        c.name = "kp";
        json ctx = kp_context();
        c.documents["lagrangian"] = json{{"context", ctx}, {"expr", kKpL412}};
        c.documents["characteristic"] =
            json{{"context", ctx}, {"components", {{"v", kKpChar}}}};
        c.documents["product"] = json{{"context", ctx}, {"expr", kKpProduct}};
        c.documents["multiform"] = json{{"context", ctx},
                                        {"degree", 3},
                                        {"coefficients",
                                         {{"123", kKpL123},
                                          {"124", kKpL412},
                                          {"134", kKpL341},
                                          {"234", kKpL234}}}};
        c.documents["eom"] =
            json{{"context", ctx},
                 {"rules",
                  {{{"field", "v"}, {"lead", {1, 0, 1, 0}}, {"rhs", kKpRule1Rhs}},
                   {{"field", "v"}, {"lead", {2, 0, 0, 1}}, {"rhs", kKpRule2Rhs}}}},
                 {"confluence_order", 3}};
        cases.push_back(std::move(c));
    }

    {
        CorpusCase c;
        c.name = "zero-demo";
        json ctx = json{{"axes", {"x1", "x2"}}, {"fields", {"u"}}, {"trig_fields", json::array()}};
        c.documents["lagrangian"] = json{{"context", ctx}, {"expr", "1/2*u_x1^2"}};
        c.documents["characteristic"] = json{{"context", ctx}, {"components", {{"u", "0"}}}};
        c.documents["eom"] = json{{"context", ctx},
                                  {"rules",
                                   {{{"field", "u"}, {"lead", {0, 1}}, {"rhs", "0"}},
                                    {{"field", "u"}, {"lead", {2, 0}}, {"rhs", "0"}}}},
                                  {"confluence_order", 3}};
        cases.push_back(std::move(c));
    }

    return cases;
}

const std::vector<CorpusCase>& corpus() {
    static const std::vector<CorpusCase> cases = make_corpus();
    return cases;
}

// Densities are stored as characteristic-style component maps keyed by axis
// name; decode into a VectorDensity.
VectorDensity density_from_doc(const json& doc) {
    ContextPtr ctx = context_from_json(doc.at("context"));
    VectorDensity p(ctx);
    for (auto it = doc.at("components").begin(); it != doc.at("components").end(); ++it) {
        auto axis = ctx->find_axis(it.key());
        if (!axis) throw SchemaError("density component on unknown axis '" + it.key() + "'");
        p.set_component(*axis, parse_expr(it.value().get<std::string>(), ctx));
    }
    return p;
}

class Runner {
  public:
    explicit Runner(Report& report) : report_(report) {}

    void check(const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
        CheckResult r;
        r.name = name;
        auto t0 = std::chrono::steady_clock::now();
        try {
            auto [pass, residual] = body();
            r.pass = pass;
            r.residual = residual;
        } catch (const std::exception& e) {
            r.pass = false;
            r.residual = std::string("exception: ") + e.what();
        }
        auto t1 = std::chrono::steady_clock::now();
        r.millis = std::chrono::duration<double, std::milli>(t1 - t0).count();
        report_.checks.push_back(std::move(r));
    }

  private:
    Report& report_;
};

std::pair<bool, std::string> ok() { return {true, ""}; }
std::pair<bool, std::string> verdict(bool pass, const std::string& residual = "") {
    return {pass, pass ? "" : residual};
}
std::pair<bool, std::string> expect_zero(const DiffPoly& f) {
    return verdict(f.is_zero(), print_expr(f));
}

void run_sg(Runner& run) {
    const CorpusCase& c = corpus_case("sg");
    DiffPoly l12 = lagrangian_from_json(c.doc("lagrangian"));
    ContextPtr ctx = l12.context();
    Characteristic q = characteristic_from_json(c.doc("characteristic"));
    DiffPoly product = lagrangian_from_json(c.doc("product"));
    VectorDensity p_paper = density_from_doc(c.doc("noether_vector"));
    KForm form_paper = multiform_from_json(c.doc("multiform"));
    EOMSystem eom = eom_from_json(c.doc("eom"));
    std::vector<Axis> base{Axis{1}, Axis{2}};

    run.check("product-is-qtilde-dot-euler", [&] {
        DiffPoly qe(ctx);
        for (Field f : ctx->all_fields()) {
            DiffPoly qt = DiffPoly::jet(ctx, f, MultiIndex::unit(3, Axis{3})) + q.component(f);
            qe += qt * euler(l12, f, base);
        }
        return expect_zero(qe - product);
    });
    run.check("verify-divergence-of-printed-P", [&] {
        return verdict(verify_divergence(p_paper, product), "Div P != product");
    });
    run.check("prolongation-certificate", [&] {
        VectorDensity b = density_from_doc(c.doc("certificate"));
        return verdict(verify_divergence(b, prolong_apply(-q, l12)), "Div B != pr(L)");
    });
    run.check("symmetry-check", [&] {
        SymmetryReport rep = symmetry_check(q, l12, base);
        if (!rep.is_symmetry) return verdict(false, "not a symmetry");
        if (!rep.certificate) return verdict(false, "no certificate");
        return verdict(verify_divergence(*rep.certificate, prolong_apply(q, l12)),
                       "certificate does not verify");
    });

    BuildResult built = build_multiform(l12, q, Axis{3});
    run.check("build-new-axis-slot-is-L", [&] {
        return expect_zero(built.p.component(Axis{3}) - l12);
    });
    run.check("build-matches-paper-mod-null", [&] {
        for (auto& [tuple, coeff] : form_paper.coefficients()) {
            DiffPoly diff = built.form.coefficient(tuple) - coeff;
            std::vector<Axis> axes;
            for (int a : tuple) axes.push_back(Axis{a});
            if (!is_total_divergence(diff, axes))
                return verdict(false, "coefficient " + std::to_string(tuple[0]) +
                                          std::to_string(tuple[1]) + " differs beyond a null Lagrangian");
        }
        return ok();
    });
    run.check("build-dL-single-coefficient", [&] {
        KForm dl = exterior_derivative(built.form);
        if (dl.coefficients().size() != 1) return verdict(false, "dL has several coefficients");
        return expect_zero(dl.coefficient({1, 2, 3}) - built.product);
    });
    run.check("eom-commutes", [&] { return verdict(commuting_check(eom), "critical pair mismatch"); });
    run.check("closure-and-double-zero", [&] {
        ClosureReport rep = closure_check(built.form, eom);
        if (!rep.closed) return verdict(false, "not closed");
        if (!rep.double_zero) return verdict(false, "no double zero");
        ClosureReport paper_rep = closure_check(form_paper, eom);
        return verdict(paper_rep.closed && paper_rep.double_zero, "printed form fails closure");
    });
}

void run_akns3(Runner& run) {
    const CorpusCase& c = corpus_case("akns3");
    DiffPoly l12 = lagrangian_from_json(c.doc("lagrangian"));
    ContextPtr ctx = l12.context();
    DiffPoly l31 = lagrangian_from_json(c.doc("lagrangian31"));
    Characteristic q = characteristic_from_json(c.doc("characteristic"));
    DiffPoly product = lagrangian_from_json(c.doc("product"));
    KForm form = multiform_from_json(c.doc("multiform"));
    EOMSystem eom = eom_from_json(c.doc("eom"));
    std::vector<Axis> base{Axis{1}, Axis{2}};

    run.check("euler-matches-printed-eom", [&] {
        DiffPoly eq = euler(l12, Field{1}, base) -
                      parse_expr("-r_x2 - i/2*r_x1x1 + i*r^2*q", ctx);
        DiffPoly er = euler(l12, Field{2}, base) -
                      parse_expr("q_x2 - i/2*q_x1x1 + i*q^2*r", ctx);
        return expect_zero(eq + er);
    });
    run.check("symmetry-check-third-order", [&] {
        SymmetryReport rep = symmetry_check(q, l12, base, /*want_certificate=*/false);
        return verdict(rep.is_symmetry, "not a symmetry");
    });
    run.check("div-of-printed-coefficients-is-eq41", [&] {
        VectorDensity p(ctx);
        p.set_component(Axis{1}, lagrangian_from_json(c.doc("lagrangian23")));
        p.set_component(Axis{2}, l31);
        p.set_component(Axis{3}, l12);
        return verdict(verify_divergence(p, product), "Div != product");
    });
    run.check("eom-commutes", [&] { return verdict(commuting_check(eom), "critical pair mismatch"); });
    run.check("multiform-el-reduce-to-zero", [&] {
        EomReducer reducer(eom);
        for (const ELEntry& e : multiform_el_equations(form)) {
            DiffPoly r = reducer.reduce(e.expr);
            if (!r.is_zero()) return verdict(false, print_expr(r));
        }
        return ok();
    });
    run.check("closure-and-double-zero", [&] {
        ClosureReport rep = closure_check(form, eom);
        if (!rep.closed) return verdict(false, "not closed");
        return verdict(rep.double_zero, "no double zero");
    });
}

void run_akns4(Runner& run) {
    const CorpusCase& c = corpus_case("akns4");
    DiffPoly l12 = lagrangian_from_json(c.doc("lagrangian"));
    ContextPtr ctx = l12.context();
    DiffPoly l13 = lagrangian_from_json(c.doc("lagrangian13"));
    DiffPoly l23 = lagrangian_from_json(c.doc("lagrangian23"));
    DiffPoly l41 = lagrangian_from_json(c.doc("l41"));
    DiffPoly l24 = lagrangian_from_json(c.doc("l24"));
    DiffPoly l34 = lagrangian_from_json(c.doc("l34"));
    Characteristic q4 = characteristic_from_json(c.doc("characteristic"));
    EOMSystem eom = eom_from_json(c.doc("eom"));

    BuildResult b124 = build_multiform(l12, q4, Axis{4}, {Axis{1}, Axis{2}});
    BuildResult b134 = build_multiform(l13, q4, Axis{4}, {Axis{1}, Axis{3}});

    run.check("P124-new-axis-slot-is-L12", [&] {
        return expect_zero(b124.p.component(Axis{4}) - l12);
    });
    run.check("P134-new-axis-slot-is-L13", [&] {
        return expect_zero(b134.p.component(Axis{4}) - l13);
    });
    run.check("P124_2-equals-P134_3", [&] {
        return expect_zero(b124.p.component(Axis{2}) - b134.p.component(Axis{3}));
    });
    run.check("P134_3-matches-printed-L41-mod-Dx1", [&] {
        DiffPoly diff = b134.p.component(Axis{3}) - l41;
        return verdict(is_total_divergence(diff, {Axis{1}}),
                       "difference is not a total x1 derivative: " + print_expr(diff));
    });
    run.check("printed-P124-verifies", [&] {
        VectorDensity p(ctx);
        p.set_component(Axis{1}, l24);
        p.set_component(Axis{2}, l41);
        p.set_component(Axis{4}, l12);
        return verdict(verify_divergence(p, b124.product), "Div != product");
    });
    run.check("printed-P134-verifies", [&] {
        VectorDensity p(ctx);
        p.set_component(Axis{1}, l34);
        p.set_component(Axis{3}, l41);
        p.set_component(Axis{4}, l13);
        return verdict(verify_divergence(p, b134.product), "Div != product");
    });
    run.check("eom-commutes", [&] { return verdict(commuting_check(eom), "critical pair mismatch"); });
    run.check("dL234-double-zero", [&] {
        KForm form(ctx, 2);
        form.set_coefficient({1, 2}, l12);
        form.set_coefficient({1, 3}, l13);
        form.set_coefficient({2, 3}, l23);
        form.set_coefficient({1, 4}, -b134.p.component(Axis{3}));
        form.set_coefficient({2, 4}, b124.p.component(Axis{1}));
        form.set_coefficient({3, 4}, b134.p.component(Axis{1}));
        KForm dl = exterior_derivative(form);
        DiffPoly a234 = dl.coefficient({2, 3, 4});
        EomReducer reducer(eom);
        DiffPoly r = reducer.reduce(a234);
        if (!r.is_zero()) return verdict(false, print_expr(r));
        for (Field f : ctx->all_fields()) {
            for (const MultiIndex& j : partial_targets(a234, f)) {
                DiffPoly p = reducer.reduce(partial_jet(a234, Generator::jet_of(f, j)));
                if (!p.is_zero()) return verdict(false, print_expr(p));
            }
        }
        return ok();
    });
}

void run_kp(Runner& run) {
    const CorpusCase& c = corpus_case("kp");
    DiffPoly l412 = lagrangian_from_json(c.doc("lagrangian"));
    ContextPtr ctx = l412.context();
    Characteristic q = characteristic_from_json(c.doc("characteristic"));
    DiffPoly product = lagrangian_from_json(c.doc("product"));
    KForm form = multiform_from_json(c.doc("multiform"));
    EOMSystem eom = eom_from_json(c.doc("eom"));

    run.check("noether-product-euler-annihilates", [&] {
        for (Field f : ctx->all_fields()) {
            DiffPoly e = euler(product, f, ctx->all_axes());
            if (!e.is_zero()) return verdict(false, print_expr(e));
        }
        return ok();
    });
    run.check("product-factors-from-flow-and-euler", [&] {
        DiffPoly b1 = euler(l412, Field{1}, {Axis{1}, Axis{2}, Axis{4}});
        DiffPoly factor1 = inv_total_derivative(b1, Axis{1});
        DiffPoly rebuilt = factor1 * q.component(Field{1});
        return expect_zero(rebuilt - product);
    });
    run.check("div-of-printed-coefficients-is-eq68", [&] {
        VectorDensity p(ctx);
        p.set_component(Axis{1}, -form.coefficient({2, 3, 4}));
        p.set_component(Axis{2}, form.coefficient({1, 3, 4}));
        p.set_component(Axis{3}, -form.coefficient({1, 2, 4}));
        p.set_component(Axis{4}, form.coefficient({1, 2, 3}));
        return verdict(verify_divergence(p, product), "Div != product");
    });
    run.check("closure-and-double-zero", [&] {
        ClosureReport rep = closure_check(form, eom);
        if (!rep.closed) return verdict(false, "not closed");
        return verdict(rep.double_zero, "no double zero");
    });
    run.check("transfer-reproduces-integrated-factor", [&] {
        // Moving one x1 derivative from the product's differentiated factor
        // onto the flow defect recovers the first bracket exactly.
        DiffPoly el412 = euler(l412, Field{1}, {Axis{1}, Axis{2}, Axis{4}});
        TransferSpec spec{GaussRat(1), MultiIndex::unit(4, Axis{1})};
        TransferResult t = transfer_derivatives({q.component(Field{1})}, {el412}, {spec});
        DiffPoly bracket1 = parse_expr(
            "v_x1x1x4 + 4*v_x1x1x1x1x2 - 4/3*v_x2x2x2 + 8*v_x1x1x1*v_x1x2 + 16*v_x1x1*v_x1x1x2",
            ctx);
        if (!(t.e[0] - bracket1).is_zero()) return verdict(false, "integrated factor differs");
        DiffPoly relation = t.qt[0] * t.e[0] + q.component(Field{1}) * el412 -
                            divergence(t.boundary);
        return expect_zero(relation);
    });
}

void run_zero_demo(Runner& run) {
    const CorpusCase& c = corpus_case("zero-demo");
    DiffPoly l = lagrangian_from_json(c.doc("lagrangian"));
    ContextPtr ctx = l.context();
    Characteristic q = characteristic_from_json(c.doc("characteristic"));
    EOMSystem eom = eom_from_json(c.doc("eom"));

    BuildResult built = build_multiform(l, q, Axis{2}, {Axis{1}});
    run.check("noether-vector", [&] {
        DiffPoly p1 = built.p.component(Axis{1}) - parse_expr("-u_x1*u_x2", ctx);
        DiffPoly p2 = built.p.component(Axis{2}) - l;
        return expect_zero(p1 + p2);
    });
    run.check("dL-coefficient", [&] {
        KForm dl = exterior_derivative(built.form);
        // dL = (-1)^p Div P with p = 1 here.
        return expect_zero(dl.coefficient({1, 2}) - parse_expr("u_x1x1*u_x2", ctx));
    });
    run.check("el-equations", [&] {
        bool saw_ux2 = false, saw_ux1x1 = false;
        EomReducer reducer(eom);
        DiffPoly ux2 = parse_expr("u_x2", ctx);
        DiffPoly ux1x1 = parse_expr("u_x1x1", ctx);
        for (const ELEntry& e : multiform_el_equations(built.form)) {
            if (!reducer.reduce(e.expr).is_zero()) return verdict(false, print_expr(e.expr));
            if ((e.expr - ux2).is_zero() || (e.expr + ux2).is_zero()) saw_ux2 = true;
            if ((e.expr - ux1x1).is_zero() || (e.expr + ux1x1).is_zero()) saw_ux1x1 = true;
        }
        return verdict(saw_ux2 && saw_ux1x1, "flow and EL equations not both present");
    });
}

} // namespace

json CorpusCase::doc(const std::string& key) const {
    auto it = documents.find(key);
    if (it == documents.end())
        throw SchemaError("corpus case '" + name + "' has no document '" + key + "'");
    return it->second;
}

const std::vector<std::string>& corpus_case_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const CorpusCase& c : corpus()) v.push_back(c.name);
        return v;
    }();
    return names;
}

const CorpusCase& corpus_case(const std::string& name) {
    for (const CorpusCase& c : corpus())
        if (c.name == name) return c;
    throw SchemaError("unknown corpus case '" + name + "'");
}

Report corpus_run(const std::string& name) {
    Report report;
    report.case_name = name;
    Runner run(report);
    if (name == "sg")
        run_sg(run);
    else if (name == "akns3")
        run_akns3(run);
    else if (name == "akns4")
        run_akns4(run);
    else if (name == "kp")
        run_kp(run);
    else if (name == "zero-demo")
        run_zero_demo(run);
    else
        throw SchemaError("unknown corpus case '" + name + "'");
    return report;
}

std::string Report::text() const {
    std::ostringstream os;
    os << "case " << case_name << "\n";
    for (const CheckResult& c : checks) {
        os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name;
        char buf[32];
        std::snprintf(buf, sizeof(buf), " (%.1f ms)", c.millis);
        os << buf;
        if (!c.pass && !c.residual.empty()) os << "\n         residual: " << c.residual;
        os << "\n";
    }
    return os.str();
}

json Report::to_json() const {
    json j;
    j["case"] = case_name;
    j["pass"] = all_pass();
    json checks_json = json::array();
    for (const CheckResult& c : checks) {
        json cj;
        cj["name"] = c.name;
        cj["pass"] = c.pass;
        cj["millis"] = c.millis;
        if (!c.residual.empty()) cj["residual"] = c.residual;
        checks_json.push_back(std::move(cj));
    }
    j["checks"] = std::move(checks_json);
    return j;
}

} // namespace jetform
