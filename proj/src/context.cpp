#include "jetform/context.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace jetform {

namespace {

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '\'') return false;
    return true;
}

// Names of the form x<digits> are reserved for coordinates.
bool is_coord_like(const std::string& s) {
    if (s.size() < 2 || s[0] != 'x') return false;
    for (size_t k = 1; k < s.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
    return true;
}

} // namespace

std::string MultiIndex::str() const {
    std::ostringstream os;
    os << '(';
    for (size_t k = 0; k < counts_.size(); ++k) {
        if (k) os << ',';
        os << counts_[k];
    }
    os << ')';
    return os.str();
}

std::shared_ptr<const Context> Context::make(int num_axes,
                                             std::vector<std::string> field_names,
                                             std::vector<std::string> trig_fields) {
    if (num_axes < 1) throw ContextError("a context needs at least one axis");
    if (field_names.empty()) throw ContextError("a context needs at least one field");
    std::set<std::string> seen;
    for (const auto& name : field_names) {
        if (!is_identifier(name) || name == "i" || name == "sin" || name == "cos" ||
            is_coord_like(name))
            throw ContextError("invalid field name '" + name + "'");
        if (!seen.insert(name).second)
            throw ContextError("duplicate field name '" + name + "'");
    }
    auto ctx = std::shared_ptr<Context>(new Context());
    ctx->num_axes_ = num_axes;
    ctx->field_names_ = std::move(field_names);
    ctx->trig_.assign(ctx->field_names_.size(), false);
    for (const auto& name : trig_fields) {
        auto it = std::find(ctx->field_names_.begin(), ctx->field_names_.end(), name);
        if (it == ctx->field_names_.end())
            throw ContextError("trig field '" + name + "' is not a declared field");
        ctx->trig_[static_cast<size_t>(it - ctx->field_names_.begin())] = true;
    }
    return ctx;
}

std::string Context::axis_name(Axis a) const {
    if (a.index < 1 || a.index > num_axes_) throw ContextError("axis index out of range");
    return "x" + std::to_string(a.index);
}

const std::string& Context::field_name(Field f) const {
    if (f.index < 1 || f.index > num_fields()) throw ContextError("field index out of range");
    return field_names_[static_cast<size_t>(f.index - 1)];
}

std::vector<Axis> Context::all_axes() const {
    std::vector<Axis> v;
    for (int k = 1; k <= num_axes_; ++k) v.push_back(Axis{k});
    return v;
}

std::vector<Field> Context::all_fields() const {
    std::vector<Field> v;
    for (int k = 1; k <= num_fields(); ++k) v.push_back(Field{k});
    return v;
}

std::vector<std::string> Context::trig_field_names() const {
    std::vector<std::string> v;
    for (size_t k = 0; k < trig_.size(); ++k)
        if (trig_[k]) v.push_back(field_names_[k]);
    return v;
}

Axis Context::axis(int index) const {
    if (index < 1 || index > num_axes_)
        throw ContextError("axis x" + std::to_string(index) + " is not declared");
    return Axis{index};
}

Field Context::field(int index) const {
    if (index < 1 || index > num_fields()) throw ContextError("field index out of range");
    return Field{index};
}

std::optional<Axis> Context::find_axis(const std::string& name) const {
    if (!is_coord_like(name)) return std::nullopt;
    int idx = std::stoi(name.substr(1));
    if (idx < 1 || idx > num_axes_) return std::nullopt;
    return Axis{idx};
}

std::optional<Field> Context::find_field(const std::string& name) const {
    for (size_t k = 0; k < field_names_.size(); ++k)
        if (field_names_[k] == name) return Field{static_cast<int>(k) + 1};
    return std::nullopt;
}

std::shared_ptr<const Context> Context::with_placeholder_fields(int count) const {
    std::vector<std::string> names = field_names_;
    int next = 1;
    for (int k = 0; k < count; ++k) {
        std::string candidate;
        do {
            candidate = "ph" + std::to_string(next++);
        } while (std::find(names.begin(), names.end(), candidate) != names.end());
        names.push_back(candidate);
    }
    auto ctx = std::shared_ptr<Context>(new Context());
    ctx->num_axes_ = num_axes_;
    ctx->field_names_ = std::move(names);
    ctx->trig_ = trig_;
    ctx->trig_.resize(ctx->field_names_.size(), false);
    return ctx;
}

bool Context::extends(const Context& other) const {
    if (num_axes_ != other.num_axes_) return false;
    if (other.field_names_.size() > field_names_.size()) return false;
    for (size_t k = 0; k < other.field_names_.size(); ++k) {
        if (field_names_[k] != other.field_names_[k]) return false;
        if (trig_[k] != other.trig_[k]) return false;
    }
    return true;
}

} // namespace jetform
