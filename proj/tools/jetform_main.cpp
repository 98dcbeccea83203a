#include "jetform/corpus.hpp"
#include "jetform/documents.hpp"
#include "jetform/multiform.hpp"
#include "jetform/textio.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cctype>
#include <fstream>
#include <iostream>
#include <set>

namespace jf = jetform;
using jf::json;

namespace {

// Builds a context from an expression when no --context file is given: x<k>
// names become axes, sin/cos arguments become trig fields, remaining names
// become fields in order of first appearance.
jf::ContextPtr infer_context(const std::vector<std::string>& sources,
                             const std::vector<std::string>& extra_axes) {
    int num_axes = 0;
    std::vector<std::string> fields;
    std::set<std::string> trig;
    auto see_axis = [&](const std::string& name) {
        if (name.size() < 2 || name[0] != 'x') return false;
        for (size_t k = 1; k < name.size(); ++k)
            if (!std::isdigit(static_cast<unsigned char>(name[k]))) return false;
        num_axes = std::max(num_axes, std::stoi(name.substr(1)));
        return true;
    };
    for (const std::string& a : extra_axes) see_axis(a);
    for (const std::string& src : sources) {
        std::string prev;
        for (size_t k = 0; k < src.size();) {
            char c = src[k];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                size_t q = k;
                while (q < src.size() &&
                       (std::isalnum(static_cast<unsigned char>(src[q])) || src[q] == '_'))
                    ++q;
                std::string tok = src.substr(k, q - k);
                k = q;
                std::string base = tok.substr(0, tok.find('_'));
                if (tok.find('_') != std::string::npos) {
                    std::string run = tok.substr(tok.find('_') + 1);
                    size_t p = 0;
                    while (p < run.size()) {
                        if (run[p] != 'x') break;
                        size_t d = ++p;
                        while (d < run.size() && std::isdigit(static_cast<unsigned char>(run[d])))
                            ++d;
                        if (d == p) break;
                        see_axis("x" + run.substr(p, d - p));
                        p = d;
                    }
                }
                if (base == "i" || base == "sin" || base == "cos" || see_axis(base)) {
                    prev = base;
                    continue;
                }
                if (std::find(fields.begin(), fields.end(), base) == fields.end())
                    fields.push_back(base);
                if (prev == "sin" || prev == "cos") trig.insert(base);
                prev = base;
            } else {
                if (!std::isspace(static_cast<unsigned char>(c)) && c != '(') prev.clear();
                ++k;
            }
        }
    }
    if (num_axes == 0) num_axes = 1;
    if (fields.empty()) fields.push_back("u");
    return jf::Context::make(num_axes, fields,
                             std::vector<std::string>(trig.begin(), trig.end()));
}

std::vector<jf::Axis> parse_axis_list(const jf::ContextPtr& ctx, const std::string& list) {
    std::vector<jf::Axis> axes;
    size_t k = 0;
    while (k < list.size()) {
        size_t q = list.find(',', k);
        if (q == std::string::npos) q = list.size();
        std::string name = list.substr(k, q - k);
        auto a = ctx->find_axis(name);
        if (!a) throw jf::ContextError("unknown axis '" + name + "'");
        axes.push_back(*a);
        k = q + 1;
    }
    if (axes.empty()) throw jf::ContextError("empty axis list");
    return axes;
}

struct CommonOpts {
    std::string context_file;
    bool as_json = false;
};

jf::ContextPtr resolve_context(const CommonOpts& common, const std::vector<std::string>& exprs,
                               const std::vector<std::string>& extra_axes) {
    if (!common.context_file.empty())
        return jf::context_from_json(jf::load_document(common.context_file, "context"));
    return infer_context(exprs, extra_axes);
}

void emit(const CommonOpts& common, const std::string& kind, const json& payload,
          const std::string& text) {
    if (common.as_json) {
        json j = payload;
        j["kind"] = kind;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << text << "\n";
    }
}

int run_corpus(const std::string& which, bool as_json) {
    std::vector<std::string> names;
    if (which == "all")
        names = jf::corpus_case_names();
    else
        names.push_back(which);
    bool all_pass = true;
    json out = json::array();
    for (const std::string& name : names) {
        jf::Report report = jf::corpus_run(name);
        all_pass = all_pass && report.all_pass();
        if (as_json)
            out.push_back(report.to_json());
        else
            std::cout << report.text();
    }
    if (as_json) std::cout << out.dump(2) << "\n";
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Lagrangian multiform toolkit"};
    app.require_subcommand(1);
    CommonOpts common;
    app.add_option("--context", common.context_file, "context document (JSON)");
    app.add_flag("--json", common.as_json, "machine-readable reports");

    std::string expr, field_name, axes_list, axis_name, char_file, lagr_file, eom_file,
        form_file, out_file, new_axis, which;
    std::vector<std::string> exprs;
    bool no_certificate = false;

    auto* cmd_euler = app.add_subcommand("euler", "Euler-Lagrange expression of a density");
    cmd_euler->add_option("expr", expr)->required();
    cmd_euler->add_option("--field", field_name, "field to vary (default: all)");
    cmd_euler->add_option("--axes", axes_list, "axes of the Euler operator (default: all)");

    auto* cmd_totald = app.add_subcommand("totald", "total derivative along axes");
    cmd_totald->add_option("expr", expr)->required();
    cmd_totald->add_option("--axes", axes_list, "comma list, applied left to right")->required();

    auto* cmd_symcheck = app.add_subcommand("symcheck", "variational-symmetry test");
    cmd_symcheck->add_option("lagrangian", lagr_file, "density expression or document")->required();
    cmd_symcheck->add_option("--char", char_file, "characteristic document or expression")
        ->required();
    cmd_symcheck->add_option("--axes", axes_list, "base axes (default: all)");
    cmd_symcheck->add_flag("--no-certificate", no_certificate, "skip the witness search");

    auto* cmd_divdecomp = app.add_subcommand("divdecomp", "divergence witness");
    cmd_divdecomp->add_option("expr", expr)->required();
    cmd_divdecomp->add_option("--axes", axes_list)->required();
    cmd_divdecomp->add_option("--out", out_file, "write the witness as a JSON object");

    auto* cmd_invd = app.add_subcommand("invd", "inverse total derivative on one axis");
    cmd_invd->add_option("expr", expr)->required();
    cmd_invd->add_option("--axis", axis_name)->required();

    auto* cmd_helmholtz = app.add_subcommand("helmholtz", "self-adjointness test");
    cmd_helmholtz->add_option("exprs", exprs, "one component per field")->required();

    auto* cmd_reduce = app.add_subcommand("reduce", "normal form modulo an EOM system");
    cmd_reduce->add_option("expr", expr)->required();
    cmd_reduce->add_option("--eom", eom_file)->required();

    auto* cmd_mf = app.add_subcommand("multiform", "Lagrangian multiform operations");
    cmd_mf->require_subcommand(1);
    auto* mf_build = cmd_mf->add_subcommand("build", "Noether construction from a symmetry");
    mf_build->add_option("--lagrangian", lagr_file, "density expression or document")->required();
    mf_build->add_option("--char", char_file, "characteristic document")->required();
    mf_build->add_option("--new-axis", new_axis, "axis of the added flow")->required();
    mf_build->add_option("--axes", axes_list, "base axes (default: inferred)");
    mf_build->add_option("--out", out_file, "write the multiform document");
    auto* mf_d = cmd_mf->add_subcommand("d", "exterior derivative of a multiform");
    mf_d->add_option("--form", form_file)->required();
    auto* mf_check = cmd_mf->add_subcommand("check", "closure and multiform EL verification");
    mf_check->add_option("--form", form_file)->required();
    mf_check->add_option("--eom", eom_file)->required();

    auto* cmd_corpus = app.add_subcommand("corpus", "bundled verification corpus");
    auto* corpus_run_cmd = cmd_corpus->add_subcommand("run", "run a case (or 'all')");
    corpus_run_cmd->add_option("case", which)->required();

    try {
        app.parse(argc, argv);

        if (*cmd_euler) {
            auto ctx = resolve_context(common, {expr}, {axes_list.empty() ? "" : axes_list});
            jf::DiffPoly f = jf::parse_expr(expr, ctx);
            std::vector<jf::Axis> axes =
                axes_list.empty() ? ctx->all_axes() : parse_axis_list(ctx, axes_list);
            json payload;
            std::string text;
            for (jf::Field fld : ctx->all_fields()) {
                if (!field_name.empty() && ctx->field_name(fld) != field_name) continue;
                jf::DiffPoly e = jf::euler(f, fld, axes);
                payload[ctx->field_name(fld)] = jf::print_expr(e);
                if (!text.empty()) text += "\n";
                if (field_name.empty()) text += ctx->field_name(fld) + ": ";
                text += jf::print_expr(e);
            }
            if (payload.empty()) throw jf::ContextError("unknown field '" + field_name + "'");
            emit(common, "euler", payload, text);
            return 0;
        }
        if (*cmd_totald) {
            auto ctx = resolve_context(common, {expr}, {axes_list});
            jf::DiffPoly f = jf::parse_expr(expr, ctx);
            for (jf::Axis a : parse_axis_list(ctx, axes_list)) f = jf::total_derivative(f, a);
            emit(common, "totald", json{{"expr", jf::print_expr(f)}}, jf::print_expr(f));
            return 0;
        }
        if (*cmd_symcheck) {
            jf::Characteristic q;
            jf::DiffPoly lagr;
            std::ifstream probe(char_file);
            if (probe.good()) {
                q = jf::characteristic_from_json(jf::load_document(char_file, "characteristic"));
                std::ifstream probe_l(lagr_file);
                lagr = probe_l.good()
                           ? jf::lagrangian_from_json(jf::load_document(lagr_file, "lagrangian"))
                           : jf::parse_expr(lagr_file, q.context());
            } else {
                auto ctx = resolve_context(common, {char_file, lagr_file}, {axes_list});
                if (ctx->num_fields() != 1)
                    throw jf::ContextError("inline --char needs a single-field context");
                q = jf::Characteristic(ctx, {jf::parse_expr(char_file, ctx)});
                lagr = jf::parse_expr(lagr_file, ctx);
            }
            jf::require_same_context(q.context(), lagr.context());
            std::vector<jf::Axis> axes = axes_list.empty() ? q.context()->all_axes()
                                                           : parse_axis_list(q.context(), axes_list);
            jf::SymmetryReport rep = jf::symmetry_check(q, lagr, axes, !no_certificate);
            json payload{{"is_symmetry", rep.is_symmetry},
                         {"basis_exhausted", rep.basis_exhausted}};
            std::string text = rep.is_symmetry ? "variational symmetry: yes"
                                               : "variational symmetry: no";
            if (rep.certificate) {
                json cert;
                for (auto& [axis, comp] : rep.certificate->components())
                    cert["x" + std::to_string(axis)] = jf::print_expr(comp);
                payload["certificate"] = cert;
                text += "\ncertificate: Div B = pr v_Q(L) with";
                for (auto& [axis, comp] : rep.certificate->components())
                    text += "\n  B_x" + std::to_string(axis) + " = " + jf::print_expr(comp);
            }
            if (rep.basis_exhausted) text += "\n(certificate search exhausted its basis)";
            emit(common, "symcheck", payload, text);
            return rep.is_symmetry ? (rep.basis_exhausted ? 3 : 0) : 1;
        }
        if (*cmd_divdecomp) {
            auto ctx = resolve_context(common, {expr}, {axes_list});
            jf::DiffPoly f = jf::parse_expr(expr, ctx);
            std::vector<jf::Axis> axes = parse_axis_list(ctx, axes_list);
            jf::VectorDensity p = jf::div_decompose(f, axes);
            json payload = json::object();
            std::string text;
            for (jf::Axis a : axes) {
                std::string name = "x" + std::to_string(a.index);
                payload[name] = jf::print_expr(p.component(a));
                if (!text.empty()) text += "\n";
                text += "P_" + name + " = " + jf::print_expr(p.component(a));
            }
            if (!out_file.empty()) {
                std::ofstream out(out_file);
                out << payload.dump(2) << "\n";
            }
            emit(common, "divdecomp", payload, text);
            return 0;
        }
        if (*cmd_invd) {
            auto ctx = resolve_context(common, {expr}, {axis_name});
            jf::DiffPoly f = jf::parse_expr(expr, ctx);
            auto a = ctx->find_axis(axis_name);
            if (!a) throw jf::ContextError("unknown axis '" + axis_name + "'");
            jf::DiffPoly g = jf::inv_total_derivative(f, *a);
            emit(common, "invd", json{{"expr", jf::print_expr(g)}}, jf::print_expr(g));
            return 0;
        }
        if (*cmd_helmholtz) {
            auto ctx = resolve_context(common, exprs, {});
            std::vector<jf::DiffPoly> f;
            for (const std::string& e : exprs) f.push_back(jf::parse_expr(e, ctx));
            bool self_adjoint = jf::helmholtz_check(f);
            emit(common, "helmholtz", json{{"self_adjoint", self_adjoint}},
                 self_adjoint ? "self-adjoint: yes" : "self-adjoint: no");
            return self_adjoint ? 0 : 1;
        }
        if (*cmd_reduce) {
            jf::EOMSystem sys = jf::eom_from_json(jf::load_document(eom_file, "eom"));
            jf::DiffPoly f = jf::parse_expr(expr, sys.context());
            jf::DiffPoly r = jf::reduce_mod_eom(f, sys);
            emit(common, "reduce", json{{"expr", jf::print_expr(r)}}, jf::print_expr(r));
            return 0;
        }
        if (*mf_build) {
            jf::Characteristic q =
                jf::characteristic_from_json(jf::load_document(char_file, "characteristic"));
            std::ifstream probe(lagr_file);
            jf::DiffPoly lagr =
                probe.good() ? jf::lagrangian_from_json(jf::load_document(lagr_file, "lagrangian"))
                             : jf::parse_expr(lagr_file, q.context());
            auto axis = q.context()->find_axis(new_axis);
            if (!axis) throw jf::ContextError("unknown axis '" + new_axis + "'");
            std::vector<jf::Axis> base;
            if (!axes_list.empty()) base = parse_axis_list(q.context(), axes_list);
            jf::BuildResult built = jf::build_multiform(lagr, q, *axis, base);
            json doc = jf::multiform_to_json(built.form);
            if (!out_file.empty()) jf::save_document(out_file, "multiform", doc);
            std::string text = "built " + std::to_string(built.form.degree()) + "-form";
            for (auto& [tuple, coeff] : built.form.coefficients()) {
                std::string key;
                for (int a : tuple) key += std::to_string(a);
                text += "\nL_(" + key + ") = " + jf::print_expr(coeff);
            }
            emit(common, "multiform-build", doc, text);
            return 0;
        }
        if (*mf_d) {
            jf::KForm form = jf::multiform_from_json(jf::load_document(form_file, "multiform"));
            jf::KForm dl = jf::exterior_derivative(form);
            json payload = jf::multiform_to_json(dl);
            std::string text = "dL coefficients:";
            if (dl.coefficients().empty()) text += " 0";
            for (auto& [tuple, coeff] : dl.coefficients()) {
                std::string key;
                for (int a : tuple) key += std::to_string(a);
                text += "\nA_" + key + " = " + jf::print_expr(coeff);
            }
            emit(common, "multiform-d", payload, text);
            return 0;
        }
        if (*mf_check) {
            jf::KForm form = jf::multiform_from_json(jf::load_document(form_file, "multiform"));
            jf::EOMSystem sys = jf::eom_from_json(jf::load_document(eom_file, "eom"));
            if (!jf::commuting_check(sys))
                throw jf::ContextError("EOM system fails its commuting check");
            jf::ClosureReport closure = jf::closure_check(form, sys);
            jf::EomReducer reducer(sys);
            json residuals = json::array();
            bool el_ok = true;
            for (const jf::ELEntry& e : jf::multiform_el_equations(form)) {
                jf::DiffPoly r = reducer.reduce(e.expr);
                if (r.is_zero()) continue;
                el_ok = false;
                std::string key;
                for (int a : e.tuple) key += std::to_string(a);
                json item{{"tuple", key},
                          {"field", form.context()->field_name(e.field)},
                          {"index", e.index},
                          {"residual", jf::print_expr(r)}};
                residuals.push_back(std::move(item));
            }
            json payload{{"closed", closure.closed},
                         {"double_zero", closure.double_zero},
                         {"el_satisfied", el_ok},
                         {"el_residuals", residuals}};
            std::string text = std::string("closed: ") + (closure.closed ? "yes" : "no") +
                               "\ndouble zero: " + (closure.double_zero ? "yes" : "no") +
                               "\nmultiform EL mod EOM: " + (el_ok ? "all zero" : "residuals");
            for (auto& item : residuals)
                text += "\n  " + item["tuple"].get<std::string>() + " I=" +
                        json(item["index"]).dump() + ": " + item["residual"].get<std::string>();
            for (auto& [tuple, r] : closure.residuals) {
                std::string key;
                for (int a : tuple) key += std::to_string(a);
                text += "\n  dL residual on " + key + ": " + jf::print_expr(r);
            }
            emit(common, "multiform-check", payload, text);
            return (closure.closed && closure.double_zero && el_ok) ? 0 : 1;
        }
        if (*corpus_run_cmd) return run_corpus(which, common.as_json);

        std::cerr << "no command\n";
        return 2;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const jf::BasisExhaustedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const jf::NotADivergenceError& e) {
        std::cerr << "not a divergence: " << e.what() << "\n";
        return 1;
    } catch (const jf::NotExactError& e) {
        std::cerr << "not exact: " << e.what() << "\n";
        return 1;
    } catch (const jf::SymmetryError& e) {
        std::cerr << "not a symmetry: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
