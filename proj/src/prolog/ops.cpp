#include "psp/prolog/ops.hpp"

#include <array>
#include <string_view>

namespace psp::prolog {

namespace {

struct NamedOp {
    std::string_view name;
    OpEntry entry;
};

constexpr std::array<NamedOp, 21> kInfix{{
    {":-", {1200, OpFixity::xfx}},
    {";", {1100, OpFixity::xfy}},
    {"->", {1050, OpFixity::xfy}},
    {",", {1000, OpFixity::xfy}},
    {"=", {700, OpFixity::xfx}},
    {"\\=", {700, OpFixity::xfx}},
    {"==", {700, OpFixity::xfx}},
    {"\\==", {700, OpFixity::xfx}},
    {"is", {700, OpFixity::xfx}},
    {"<", {700, OpFixity::xfx}},
    {">", {700, OpFixity::xfx}},
    {"=<", {700, OpFixity::xfx}},
    {">=", {700, OpFixity::xfx}},
    {"=:=", {700, OpFixity::xfx}},
    {"=\\=", {700, OpFixity::xfx}},
    {"+", {500, OpFixity::yfx}},
    {"-", {500, OpFixity::yfx}},
    {"*", {400, OpFixity::yfx}},
    {"/", {400, OpFixity::yfx}},
    {"//", {400, OpFixity::yfx}},
    {"mod", {400, OpFixity::yfx}},
}};

constexpr std::array<NamedOp, 4> kPrefix{{
    {":-", {1200, OpFixity::fx}},
    {"?-", {1200, OpFixity::fx}},
    {"\\+", {900, OpFixity::fy}},
    {"-", {200, OpFixity::fy}},
}};

} // namespace

std::optional<OpEntry> lookup_infix(std::string_view name) {
    for (const auto& op : kInfix)
        if (op.name == name)
            return op.entry;
    return std::nullopt;
}

std::optional<OpEntry> lookup_prefix(std::string_view name) {
    for (const auto& op : kPrefix)
        if (op.name == name)
            return op.entry;
    return std::nullopt;
}

bool is_operator_name(std::string_view name) {
    return lookup_infix(name).has_value() || lookup_prefix(name).has_value();
}

} // namespace psp::prolog
