#pragma once

#include <algorithm>
#include <compare>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetform {

class ContextError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Independent variable x_i, identified by 1-based index.
struct Axis {
    int index = 0;
    friend auto operator<=>(const Axis&, const Axis&) = default;
};

/// Dependent variable u^alpha, identified by 1-based index.
struct Field {
    int index = 0;
    friend auto operator<=>(const Field&, const Field&) = default;
};

/// Derivative multi-index (j_1,...,j_N), one count per axis.
///
/// The canonical ordering puts more derivatives on earlier axes first, so
/// jets sort the way their subscripts read: u_x1x1 < u_x1x2 < u_x2x2.
class MultiIndex {
  public:
    MultiIndex() = default;
    explicit MultiIndex(int num_axes) : counts_(static_cast<size_t>(num_axes), 0) {}
    explicit MultiIndex(std::vector<int> counts) : counts_(std::move(counts)) {
        for (int c : counts_)
            if (c < 0) throw ContextError("multi-index components must be non-negative");
    }

    static MultiIndex unit(int num_axes, Axis a, int r = 1) {
        MultiIndex j(num_axes);
        j.counts_.at(static_cast<size_t>(a.index - 1)) = r;
        return j;
    }

    int num_axes() const { return static_cast<int>(counts_.size()); }
    int order() const {
        int s = 0;
        for (int c : counts_) s += c;
        return s;
    }
    bool is_zero() const { return order() == 0; }

    int operator[](Axis a) const { return counts_.at(static_cast<size_t>(a.index - 1)); }
    const std::vector<int>& counts() const { return counts_; }

    /// Ji^r of the paper: increment axis i by r.
    MultiIndex incremented(Axis a, int r = 1) const {
        MultiIndex j = *this;
        j.counts_.at(static_cast<size_t>(a.index - 1)) += r;
        return j;
    }
    /// J\k^r of the paper: decrement, failing below zero.
    MultiIndex decremented(Axis a, int r = 1) const {
        MultiIndex j = *this;
        int& c = j.counts_.at(static_cast<size_t>(a.index - 1));
        c -= r;
        if (c < 0) throw ContextError("multi-index decrement below zero");
        return j;
    }

    MultiIndex plus(const MultiIndex& o) const {
        MultiIndex j = *this;
        for (size_t k = 0; k < counts_.size(); ++k) j.counts_[k] += o.counts_[k];
        return j;
    }
    MultiIndex minus(const MultiIndex& o) const {
        MultiIndex j = *this;
        for (size_t k = 0; k < counts_.size(); ++k) {
            j.counts_[k] -= o.counts_[k];
            if (j.counts_[k] < 0) throw ContextError("multi-index difference below zero");
        }
        return j;
    }

    /// Componentwise >=.
    bool dominates(const MultiIndex& o) const {
        for (size_t k = 0; k < counts_.size(); ++k)
            if (counts_[k] < o.counts_[k]) return false;
        return true;
    }

    static MultiIndex lub(const MultiIndex& a, const MultiIndex& b) {
        MultiIndex j = a;
        for (size_t k = 0; k < j.counts_.size(); ++k)
            if (b.counts_[k] > j.counts_[k]) j.counts_[k] = b.counts_[k];
        return j;
    }

    /// True if every nonzero component lies on one of the given axes.
    bool supported_on(const std::vector<Axis>& axes) const {
        for (size_t k = 0; k < counts_.size(); ++k) {
            if (counts_[k] == 0) continue;
            bool found = false;
            for (Axis a : axes)
                if (a.index == static_cast<int>(k) + 1) found = true;
            if (!found) return false;
        }
        return true;
    }

    /// The part of the index lying off the given axes.
    MultiIndex off_axes_part(const std::vector<Axis>& axes) const {
        MultiIndex j = *this;
        for (Axis a : axes) j.counts_.at(static_cast<size_t>(a.index - 1)) = 0;
        return j;
    }

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
        return a.counts_ == b.counts_;
    }

    /// Graded jet-lex order: lower total order first; at equal order, more
    /// derivatives on an earlier axis sorts earlier (u_x1 < u_x2,
    /// u_x1x1 < u_x1x2 < u_x2x2, u_x3 < u_x1x1x1).
    friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
        if (int oa = a.order(), ob = b.order(); oa != ob) return oa <=> ob;
        size_t n = std::max(a.counts_.size(), b.counts_.size());
        for (size_t k = 0; k < n; ++k) {
            int ca = k < a.counts_.size() ? a.counts_[k] : 0;
            int cb = k < b.counts_.size() ? b.counts_[k] : 0;
            if (ca != cb) return cb <=> ca;
        }
        return std::strong_ordering::equal;
    }

    std::string str() const; // "(j1,...,jN)"

  private:
    std::vector<int> counts_;
};

/// Shared declaration of the independent axes, dependent fields and which
/// fields admit sin/cos generators. Axes are always named x1..xN. Immutable.
class Context {
  public:
    static std::shared_ptr<const Context> make(int num_axes,
                                               std::vector<std::string> field_names,
                                               std::vector<std::string> trig_fields = {});

    int num_axes() const { return num_axes_; }
    int num_fields() const { return static_cast<int>(field_names_.size()); }

    std::string axis_name(Axis a) const;
    const std::string& field_name(Field f) const;
    bool has_trig(Field f) const { return trig_.at(static_cast<size_t>(f.index - 1)); }

    std::vector<Axis> all_axes() const;
    std::vector<Field> all_fields() const;
    std::vector<std::string> field_names() const { return field_names_; }
    std::vector<std::string> trig_field_names() const;

    Axis axis(int index) const;
    Field field(int index) const;
    /// Resolves a name of the form x<k> to an axis, if valid in this context.
    std::optional<Axis> find_axis(const std::string& name) const;
    std::optional<Field> find_field(const std::string& name) const;

    /// A new context with `count` fresh non-trig fields appended; existing
    /// axis and field indices keep their meaning.
    std::shared_ptr<const Context> with_placeholder_fields(int count) const;

    /// True when `other` has the same axes and its fields are a prefix of
    /// this context's fields (so values can be lifted here unchanged).
    bool extends(const Context& other) const;

    friend bool operator==(const Context& a, const Context& b) {
        return a.num_axes_ == b.num_axes_ && a.field_names_ == b.field_names_ &&
               a.trig_ == b.trig_;
    }

  private:
    Context() = default;
    int num_axes_ = 0;
    std::vector<std::string> field_names_;
    std::vector<bool> trig_;
};

using ContextPtr = std::shared_ptr<const Context>;

inline void require_same_context(const ContextPtr& a, const ContextPtr& b) {
    if (a == b) return;
    if (!a || !b || !(*a == *b)) throw ContextError("operands belong to different contexts");
}

} // namespace jetform
