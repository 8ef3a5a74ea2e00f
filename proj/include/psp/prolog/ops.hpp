#pragma once

#include <optional>
#include <string_view>

namespace psp::prolog {

enum class OpFixity { xfx, xfy, yfx, fy, fx };

struct OpEntry {
    int priority;
    OpFixity fixity;
};

// Fixed operator table; there is no user-defined op/3.
std::optional<OpEntry> lookup_infix(std::string_view name);
std::optional<OpEntry> lookup_prefix(std::string_view name);
bool is_operator_name(std::string_view name);

inline int infix_left_max(const OpEntry& op) {
    return op.fixity == OpFixity::yfx ? op.priority : op.priority - 1;
}
inline int infix_right_max(const OpEntry& op) {
    return op.fixity == OpFixity::xfy ? op.priority : op.priority - 1;
}
inline int prefix_arg_max(const OpEntry& op) {
    return op.fixity == OpFixity::fy ? op.priority : op.priority - 1;
}

} // namespace psp::prolog
