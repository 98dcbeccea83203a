#include "jetform/corpus.hpp"
#include "jetform/documents.hpp"
#include "jetform/multiform.hpp"
#include "jetform/textio.hpp"

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

namespace py = pybind11;
using namespace jetform;

namespace {

using PyCtx = std::shared_ptr<Context>;

PyCtx unconst(const ContextPtr& ctx) { return std::const_pointer_cast<Context>(ctx); }

std::vector<Axis> axes_from_ints(const ContextPtr& ctx, std::vector<int> ids) {
    std::vector<Axis> out;
    if (ids.empty())
        return ctx->all_axes();
    for (int a : ids) out.push_back(ctx->axis(a));
    return out;
}

Field field_by_name(const ContextPtr& ctx, const std::string& name) {
    auto f = ctx->find_field(name);
    if (!f) throw ContextError("unknown field '" + name + "'");
    return *f;
}

py::dict density_to_dict(const VectorDensity& p) {
    py::dict d;
    for (auto& [axis, comp] : p.components())
        d[py::int_(axis)] = comp;
    return d;
}

Characteristic char_from_dict(const ContextPtr& ctx, const py::dict& components) {
    std::vector<DiffPoly> comps(static_cast<size_t>(ctx->num_fields()), DiffPoly::zero(ctx));
    for (auto item : components) {
        Field f = field_by_name(ctx, py::cast<std::string>(item.first));
        comps[static_cast<size_t>(f.index - 1)] =
            py::cast<DiffPoly>(item.second);
    }
    return Characteristic(ctx, std::move(comps));
}

} // namespace

PYBIND11_MODULE(_jetform, m) {
    m.doc() = "exact Lagrangian multiform toolkit";

    py::register_exception<SyntaxError>(m, "ExprSyntaxError", PyExc_ValueError);
    py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
    py::register_exception<ContextError>(m, "ContextError", PyExc_ValueError);
    py::register_exception<NotADivergenceError>(m, "NotADivergenceError", PyExc_ValueError);
    py::register_exception<NotExactError>(m, "NotExactError", PyExc_ValueError);
    py::register_exception<BasisExhaustedError>(m, "BasisExhaustedError", PyExc_RuntimeError);
    py::register_exception<SymmetryError>(m, "SymmetryError", PyExc_ValueError);

    py::class_<Context, PyCtx>(m, "Context")
        .def(py::init([](int axes, std::vector<std::string> fields,
                         std::vector<std::string> trig) {
                 return unconst(Context::make(axes, fields, trig));
             }),
             py::arg("axes"), py::arg("fields"), py::arg("trig_fields") = std::vector<std::string>{})
        .def_property_readonly("num_axes", &Context::num_axes)
        .def_property_readonly("fields", &Context::field_names)
        .def_property_readonly("trig_fields", &Context::trig_field_names)
        .def("parse", [](const PyCtx& ctx, const std::string& src) {
            return parse_expr(src, ctx);
        })
        .def("__repr__", [](const PyCtx& ctx) {
            return "Context(axes=" + std::to_string(ctx->num_axes()) + ", fields=" +
                   std::to_string(ctx->num_fields()) + ")";
        });

    py::class_<DiffPoly>(m, "DiffPoly")
        .def_property_readonly("context",
                               [](const DiffPoly& f) { return unconst(f.context()); })
        .def("is_zero", &DiffPoly::is_zero)
        .def("max_order", &DiffPoly::max_order)
        .def("term_count", &DiffPoly::term_count)
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def(py::self * py::self)
        .def(-py::self)
        .def(py::self == py::self)
        .def("pow", &DiffPoly::pow)
        .def("__str__", &print_expr)
        .def("__repr__", [](const DiffPoly& f) { return "DiffPoly(" + print_expr(f) + ")"; });

    py::class_<KForm>(m, "KForm")
        .def(py::init([](const PyCtx& ctx, int degree, const py::dict& coeffs,
                         std::vector<int> frame) {
                 KForm form(ctx, degree, frame);
                 for (auto item : coeffs)
                     form.set_coefficient(py::cast<std::vector<int>>(item.first),
                                          py::cast<DiffPoly>(item.second));
                 return form;
             }),
             py::arg("context"), py::arg("degree"), py::arg("coefficients") = py::dict(),
             py::arg("frame") = std::vector<int>{})
        .def_property_readonly("degree", &KForm::degree)
        .def_property_readonly("frame", &KForm::frame)
        .def("coefficient",
             [](const KForm& f, std::vector<int> tuple) { return f.coefficient(tuple); })
        .def("coefficients",
             [](const KForm& f) {
                 py::dict d;
                 for (auto& [tuple, coeff] : f.coefficients())
                     d[py::tuple(py::cast(tuple))] = coeff;
                 return d;
             })
        .def("max_order", &KForm::max_order);

    py::class_<EOMSystem>(m, "EOMSystem")
        .def(py::init([](const PyCtx& ctx,
                         const std::vector<std::tuple<std::string, std::vector<int>, DiffPoly>>& rules,
                         std::optional<int> confluence_order) {
                 std::vector<EOMRule> out;
                 for (auto& [field, lead, rhs] : rules)
                     out.push_back(EOMRule{field_by_name(ctx, field), MultiIndex(lead), rhs});
                 return EOMSystem(ctx, std::move(out), confluence_order);
             }),
             py::arg("context"), py::arg("rules"), py::arg("confluence_order") = std::nullopt)
        .def_property_readonly("confluence_order", &EOMSystem::confluence_order);

    m.def("total_derivative",
          [](const DiffPoly& f, int axis) { return total_derivative(f, Axis{axis}); },
          py::arg("expr"), py::arg("axis"));
    m.def("euler",
          [](const DiffPoly& f, const std::string& field, std::vector<int> axes) {
              return euler(f, field_by_name(f.context(), field), axes_from_ints(f.context(), axes));
          },
          py::arg("expr"), py::arg("field"), py::arg("axes") = std::vector<int>{});
    m.def("variational_derivative",
          [](const DiffPoly& f, const std::string& field, std::vector<int> index,
             std::vector<int> axes) {
              return variational_derivative(f, field_by_name(f.context(), field), index,
                                            axes_from_ints(f.context(), axes));
          },
          py::arg("expr"), py::arg("field"), py::arg("index"), py::arg("axes"));
    m.def("prolong_apply",
          [](const py::dict& q, const DiffPoly& f) {
              return prolong_apply(char_from_dict(f.context(), q), f);
          },
          py::arg("characteristic"), py::arg("expr"));
    m.def("symmetry_check",
          [](const py::dict& q, const DiffPoly& lagr, std::vector<int> axes, bool certificate) {
              SymmetryReport r = symmetry_check(char_from_dict(lagr.context(), q), lagr,
                                                axes_from_ints(lagr.context(), axes), certificate);
              py::dict out;
              out["is_symmetry"] = r.is_symmetry;
              out["basis_exhausted"] = r.basis_exhausted;
              if (r.certificate) out["certificate"] = density_to_dict(*r.certificate);
              return out;
          },
          py::arg("characteristic"), py::arg("lagrangian"), py::arg("axes") = std::vector<int>{},
          py::arg("certificate") = true);
    m.def("is_null_lagrangian",
          [](const DiffPoly& f, std::vector<int> axes) {
              return is_null_lagrangian(f, axes_from_ints(f.context(), axes));
          },
          py::arg("expr"), py::arg("axes") = std::vector<int>{});
    m.def("div_decompose",
          [](const DiffPoly& f, std::vector<int> axes) {
              return density_to_dict(div_decompose(f, axes_from_ints(f.context(), axes)));
          },
          py::arg("expr"), py::arg("axes") = std::vector<int>{});
    m.def("inv_total_derivative",
          [](const DiffPoly& f, int axis) { return inv_total_derivative(f, Axis{axis}); },
          py::arg("expr"), py::arg("axis"));
    m.def("helmholtz_check",
          [](const std::vector<DiffPoly>& f) { return helmholtz_check(f); }, py::arg("exprs"));
    m.def("exterior_derivative", &exterior_derivative, py::arg("form"));
    m.def("reduce_mod_eom", &reduce_mod_eom, py::arg("expr"), py::arg("eom"));
    m.def("commuting_check", &commuting_check, py::arg("eom"));
    m.def("closure_check",
          [](const KForm& form, const EOMSystem& sys) {
              ClosureReport r = closure_check(form, sys);
              py::dict out;
              out["closed"] = r.closed;
              out["double_zero"] = r.double_zero;
              return out;
          },
          py::arg("form"), py::arg("eom"));
    m.def("multiform_el_equations",
          [](const KForm& form) {
              py::list out;
              for (const ELEntry& e : multiform_el_equations(form)) {
                  py::dict d;
                  d["tuple"] = py::tuple(py::cast(e.tuple));
                  d["field"] = form.context()->field_name(e.field);
                  d["index"] = py::tuple(py::cast(e.index));
                  d["expr"] = e.expr;
                  out.append(std::move(d));
              }
              return out;
          },
          py::arg("form"));
    m.def("build_multiform",
          [](const DiffPoly& lagr, const py::dict& q, int new_axis, std::vector<int> base_axes) {
              std::vector<Axis> base;
              for (int a : base_axes) base.push_back(lagr.context()->axis(a));
              BuildResult r = build_multiform(lagr, char_from_dict(lagr.context(), q),
                                              Axis{new_axis}, base);
              py::dict out;
              out["form"] = r.form;
              out["p"] = density_to_dict(r.p);
              out["product"] = r.product;
              return out;
          },
          py::arg("lagrangian"), py::arg("characteristic"), py::arg("new_axis"),
          py::arg("base_axes") = std::vector<int>{});
    m.def("corpus_case_names", [] { return corpus_case_names(); });
    m.def("corpus_run", [](const std::string& name) {
        Report r = corpus_run(name);
        py::dict out;
        out["case"] = r.case_name;
        out["pass"] = r.all_pass();
        py::list checks;
        for (const CheckResult& c : r.checks) {
            py::dict cd;
            cd["name"] = c.name;
            cd["pass"] = c.pass;
            cd["millis"] = c.millis;
            if (!c.residual.empty()) cd["residual"] = c.residual;
            checks.append(std::move(cd));
        }
        out["checks"] = std::move(checks);
        return out;
    });
}
