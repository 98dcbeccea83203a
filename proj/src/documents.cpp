#include "jetform/documents.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace jetform {

namespace {

const json& require_key(const json& j, const std::string& key, const char* where) {
    if (!j.is_object()) throw SchemaError(std::string(where) + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(std::string(where) + ": missing key '" + key + "'");
    return *it;
}

std::vector<std::string> string_list(const json& j, const char* where) {
    if (!j.is_array()) throw SchemaError(std::string(where) + ": expected an array of strings");
    std::vector<std::string> out;
    for (auto& v : j) {
        if (!v.is_string()) throw SchemaError(std::string(where) + ": expected strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

std::vector<int> tuple_from_key(const std::string& key) {
    std::vector<int> out;
    size_t k = 0;
    while (k < key.size()) {
        char c = key[k];
        if (c == ' ' || c == ',') {
            ++k;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw SchemaError("multiform key '" + key + "' is not an axis tuple");
        size_t q = k;
        while (q < key.size() && std::isdigit(static_cast<unsigned char>(key[q]))) ++q;
        if (q - k == 1 || key.find_first_of(" ,") == std::string::npos) {
            // Digit-run form "123": one axis per digit.
            for (size_t t = k; t < q; ++t) out.push_back(key[t] - '0');
        } else {
            out.push_back(std::stoi(key.substr(k, q - k)));
        }
        k = q;
    }
    if (out.empty()) throw SchemaError("multiform key '" + key + "' is empty");
    return out;
}

} // namespace

ContextPtr context_from_json(const json& j) {
    auto axes = string_list(require_key(j, "axes", "context"), "context.axes");
    auto fields = string_list(require_key(j, "fields", "context"), "context.fields");
    std::vector<std::string> trig;
    if (j.contains("trig_fields")) trig = string_list(j["trig_fields"], "context.trig_fields");
    for (size_t k = 0; k < axes.size(); ++k)
        if (axes[k] != "x" + std::to_string(k + 1))
            throw SchemaError("context axes must be x1..xN in order, got '" + axes[k] + "'");
    try {
        return Context::make(static_cast<int>(axes.size()), fields, trig);
    } catch (const ContextError& e) {
        throw SchemaError(std::string("context: ") + e.what());
    }
}

json context_to_json(const ContextPtr& ctx) {
    json j;
    j["axes"] = json::array();
    for (Axis a : ctx->all_axes()) j["axes"].push_back(ctx->axis_name(a));
    j["fields"] = ctx->field_names();
    j["trig_fields"] = ctx->trig_field_names();
    return j;
}

DiffPoly lagrangian_from_json(const json& j) {
    ContextPtr ctx = context_from_json(require_key(j, "context", "lagrangian"));
    const json& expr = require_key(j, "expr", "lagrangian");
    if (!expr.is_string()) throw SchemaError("lagrangian.expr must be a string");
    return parse_expr(expr.get<std::string>(), ctx);
}

json lagrangian_to_json(const DiffPoly& f) {
    json j;
    j["context"] = context_to_json(f.context());
    j["expr"] = print_expr(f);
    return j;
}

Characteristic characteristic_from_json(const json& j) {
    ContextPtr ctx = context_from_json(require_key(j, "context", "characteristic"));
    const json& comps = require_key(j, "components", "characteristic");
    if (!comps.is_object()) throw SchemaError("characteristic.components must be an object");
    std::vector<DiffPoly> parts(static_cast<size_t>(ctx->num_fields()), DiffPoly::zero(ctx));
    for (auto it = comps.begin(); it != comps.end(); ++it) {
        auto field = ctx->find_field(it.key());
        if (!field) throw SchemaError("characteristic component for unknown field '" + it.key() + "'");
        if (!it.value().is_string()) throw SchemaError("characteristic components must be strings");
        parts[static_cast<size_t>(field->index - 1)] = parse_expr(it.value().get<std::string>(), ctx);
    }
    return Characteristic(ctx, std::move(parts));
}

json characteristic_to_json(const Characteristic& q) {
    json j;
    j["context"] = context_to_json(q.context());
    json comps = json::object();
    for (Field f : q.context()->all_fields())
        comps[q.context()->field_name(f)] = print_expr(q.component(f));
    j["components"] = std::move(comps);
    return j;
}

KForm multiform_from_json(const json& j) {
    ContextPtr ctx = context_from_json(require_key(j, "context", "multiform"));
    const json& deg = require_key(j, "degree", "multiform");
    if (!deg.is_number_integer()) throw SchemaError("multiform.degree must be an integer");
    std::vector<int> frame;
    if (j.contains("frame")) {
        for (auto& v : j["frame"]) {
            if (!v.is_number_integer()) throw SchemaError("multiform.frame must hold integers");
            frame.push_back(v.get<int>());
        }
    }
    KForm form(ctx, deg.get<int>(), frame);
    const json& coeffs = require_key(j, "coefficients", "multiform");
    if (!coeffs.is_object()) throw SchemaError("multiform.coefficients must be an object");
    std::set<std::vector<int>> seen;
    for (auto it = coeffs.begin(); it != coeffs.end(); ++it) {
        std::vector<int> tuple = tuple_from_key(it.key());
        for (size_t k = 0; k + 1 < tuple.size(); ++k)
            if (tuple[k] >= tuple[k + 1])
                throw SchemaError("multiform key '" + it.key() + "' is not strictly increasing");
        if (!seen.insert(tuple).second)
            throw SchemaError("duplicate multiform key '" + it.key() + "'");
        if (!it.value().is_string()) throw SchemaError("multiform coefficients must be strings");
        try {
            form.set_coefficient(tuple, parse_expr(it.value().get<std::string>(), ctx));
        } catch (const ContextError& e) {
            throw SchemaError("multiform key '" + it.key() + "': " + e.what());
        }
    }
    return form;
}

json multiform_to_json(const KForm& form) {
    json j;
    j["context"] = context_to_json(form.context());
    j["degree"] = form.degree();
    j["frame"] = form.frame();
    json coeffs = json::object();
    for (auto& [tuple, value] : form.coefficients()) {
        std::string key;
        for (int a : tuple) key += std::to_string(a);
        coeffs[key] = print_expr(value);
    }
    j["coefficients"] = std::move(coeffs);
    return j;
}

EOMSystem eom_from_json(const json& j) {
    ContextPtr ctx = context_from_json(require_key(j, "context", "eom"));
    const json& rules = require_key(j, "rules", "eom");
    if (!rules.is_array()) throw SchemaError("eom.rules must be an array");
    std::vector<EOMRule> out;
    for (auto& r : rules) {
        const json& fname = require_key(r, "field", "eom rule");
        if (!fname.is_string()) throw SchemaError("eom rule field must be a string");
        auto field = ctx->find_field(fname.get<std::string>());
        if (!field) throw SchemaError("eom rule for unknown field '" + fname.get<std::string>() + "'");
        const json& lead = require_key(r, "lead", "eom rule");
        if (!lead.is_array() || static_cast<int>(lead.size()) != ctx->num_axes())
            throw SchemaError("eom rule lead must list one count per axis");
        std::vector<int> counts;
        for (auto& v : lead) {
            if (!v.is_number_integer() || v.get<int>() < 0)
                throw SchemaError("eom rule lead entries must be non-negative integers");
            counts.push_back(v.get<int>());
        }
        const json& rhs = require_key(r, "rhs", "eom rule");
        if (!rhs.is_string()) throw SchemaError("eom rule rhs must be a string");
        out.push_back(EOMRule{*field, MultiIndex(counts), parse_expr(rhs.get<std::string>(), ctx)});
    }
    std::optional<int> confluence;
    if (j.contains("confluence_order")) {
        if (!j["confluence_order"].is_number_integer())
            throw SchemaError("eom.confluence_order must be an integer");
        confluence = j["confluence_order"].get<int>();
    }
    try {
        return EOMSystem(ctx, std::move(out), confluence);
    } catch (const ContextError& e) {
        throw SchemaError(std::string("eom: ") + e.what());
    }
}

json eom_to_json(const EOMSystem& sys) {
    json j;
    j["context"] = context_to_json(sys.context());
    json rules = json::array();
    for (const EOMRule& r : sys.rules()) {
        json rule;
        rule["field"] = sys.context()->field_name(r.field);
        rule["lead"] = r.lead.counts();
        rule["rhs"] = print_expr(r.rhs);
        rules.push_back(std::move(rule));
    }
    j["rules"] = std::move(rules);
    j["confluence_order"] = sys.confluence_order();
    return j;
}

json load_document(const std::string& path, const std::string& kind) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw SchemaError("invalid JSON in '" + path + "': " + e.what());
    }
    // Validate by round-tripping through the typed loader.
    if (kind == "context")
        context_from_json(j);
    else if (kind == "lagrangian")
        lagrangian_from_json(j);
    else if (kind == "characteristic")
        characteristic_from_json(j);
    else if (kind == "multiform")
        multiform_from_json(j);
    else if (kind == "eom")
        eom_from_json(j);
    else
        throw SchemaError("unknown document kind '" + kind + "'");
    return j;
}

void save_document(const std::string& path, const std::string& kind, const json& body) {
    if (kind != "context" && kind != "lagrangian" && kind != "characteristic" &&
        kind != "multiform" && kind != "eom")
        throw SchemaError("unknown document kind '" + kind + "'");
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot write '" + path + "'");
    out << body.dump(2) << "\n";
}

} // namespace jetform
