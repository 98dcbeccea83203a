#pragma once

#include "jetform/multiform.hpp"
#include "jetform/textio.hpp"

#include <nlohmann/json_fwd.hpp>
#include <string>

namespace jetform {

class SchemaError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

using json = nlohmann::json;

/// JSON schemas (informal):
///   context:        {"axes": ["x1",...], "fields": [...], "trig_fields": [...]}
///   lagrangian:     {"context": {...}, "expr": "..."}
///   characteristic: {"context": {...}, "components": {"field": "expr", ...}}
///   multiform:      {"context": {...}, "degree": k,
///                    "coefficients": {"12": "expr", ...}, "frame": [ints]?}
///   eom:            {"context": {...}, "rules": [{"field": "...",
///                    "lead": [ints], "rhs": "expr"}], "confluence_order": n?}
/// Multiform keys are strictly increasing axis tuples ("12", "123", also
/// accepted with spaces or commas); non-increasing or duplicate keys are
/// rejected.

ContextPtr context_from_json(const json& j);
json context_to_json(const ContextPtr& ctx);

DiffPoly lagrangian_from_json(const json& j);
json lagrangian_to_json(const DiffPoly& f);

Characteristic characteristic_from_json(const json& j);
json characteristic_to_json(const Characteristic& q);

KForm multiform_from_json(const json& j);
json multiform_to_json(const KForm& form);

EOMSystem eom_from_json(const json& j);
json eom_to_json(const EOMSystem& sys);

/// File round trips; `kind` is one of context, lagrangian, characteristic,
/// multiform, eom. The value is validated against the schema for that kind.
json load_document(const std::string& path, const std::string& kind);
void save_document(const std::string& path, const std::string& kind, const json& body);

} // namespace jetform
