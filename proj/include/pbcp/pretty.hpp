#pragma once

// Ground-level pretty printer; its output reparses to a structurally
// identical ActionDescription (modulo law/tuple indices and positions).

#include "pbcp/ast.hpp"

#include <sstream>
#include <string>

namespace pbcp {

namespace detail {

inline std::string print_literal(const ActionDescription& d, const Literal& l) {
    return d.literal_string(l);
}

inline std::string print_formula(const ActionDescription& d, const Formula& f) {
    if (f.is_false) return "false";
    if (f.lits.empty()) return "true";
    std::string s;
    for (std::size_t i = 0; i < f.lits.size(); ++i) {
        if (i) s += " & ";
        s += print_literal(d, f.lits[i]);
    }
    return s;
}

inline std::string print_head(const ActionDescription& d, const CausalLaw& l) {
    if (l.head_false) return "false";
    return print_literal(d, l.head);
}

}  // namespace detail

inline std::string pretty_print(const ActionDescription& d) {
    std::ostringstream os;
    for (const auto& s : d.sorts) {
        if (s.name == kBooleanSortName) continue;
        os << "sort " << s.name << " = {";
        for (std::size_t i = 0; i < s.members.size(); ++i)
            os << (i ? ", " : "") << s.members[i];
        os << "}.\n";
    }
    for (const auto& f : d.families) {
        os << kind_name(f.kind) << " " << f.name;
        if (!f.arg_sorts.empty()) {
            os << "(";
            for (std::size_t i = 0; i < f.arg_sorts.size(); ++i)
                os << (i ? ", " : "") << d.sorts[f.arg_sorts[i]].name;
            os << ")";
        }
        if (f.kind != ConstantKind::Action && f.value_sort >= 0 &&
            d.sorts[f.value_sort].name != kBooleanSortName)
            os << " :: " << d.sorts[f.value_sort].name;
        os << ".\n";
    }
    for (const auto& l : d.laws) {
        switch (l.kind) {
            case LawKind::Static:
                if (l.choice_head) {
                    os << "default " << detail::print_literal(d, l.head) << ".\n";
                    break;
                }
                os << "caused " << detail::print_head(d, l);
                if (!l.cond.is_true()) os << " if " << detail::print_formula(d, l.cond);
                break;
            case LawKind::FluentDynamic:
                // choice-head laws only exist after expansion; round-tripping is
                // defined on parsed (unexpanded) descriptions
                os << "caused " << detail::print_head(d, l);
                if (!l.cond.is_true()) os << " if " << detail::print_formula(d, l.cond);
                os << " after " << detail::print_formula(d, l.precond);
                break;
            case LawKind::ObservationDynamic:
                os << "observed " << detail::print_head(d, l);
                if (!l.cond.is_true()) os << " if " << detail::print_formula(d, l.cond);
                os << " after " << detail::print_formula(d, l.precond);
                break;
            case LawKind::InitStatic:
                os << "initially " << detail::print_head(d, l);
                if (!l.cond.is_true()) os << " if " << detail::print_formula(d, l.cond);
                break;
            case LawKind::PfDecl:
            case LawKind::InitPfDecl: {
                os << "caused " << d.constants[l.pf_constant].display << " = {";
                for (std::size_t i = 0; i < l.pf_rows.size(); ++i) {
                    os << (i ? ", " : "") << d.values_of(l.pf_constant)[l.pf_rows[i].first] << ": "
                       << to_string(l.pf_rows[i].second);
                }
                os << "}";
                if (!l.cond.is_true()) os << " if " << detail::print_formula(d, l.cond);
                break;
            }
            case LawKind::Utility:
                os << "reward " << to_string(l.utility_value) << " if "
                   << detail::print_formula(d, l.cond) << " after "
                   << detail::print_formula(d, l.precond);
                break;
            case LawKind::Inertial:
                os << "inertial " << d.constants[l.inertial_constant].display;
                break;
            case LawKind::Default:
                os << "default " << detail::print_literal(d, l.head);
                break;
        }
        if (l.unless_ab >= 0) os << " unless " << d.constants[l.unless_ab].display;
        os << ".\n";
    }
    for (const auto& g : d.groups) {
        os << "group " << g.name << " {";
        for (std::size_t i = 0; i < g.actions.size(); ++i)
            os << (i ? ", " : "") << d.constants[g.actions[i]].display;
        os << "}.\n";
    }
    return os.str();
}

// Structural equality modulo positions and law/tuple indices.
inline bool literals_equal(const Literal& a, const Literal& b) {
    return a.constant == b.constant && a.value == b.value && a.positive == b.positive;
}

inline bool formulas_equal(const Formula& a, const Formula& b) {
    if (a.is_false != b.is_false || a.lits.size() != b.lits.size()) return false;
    for (std::size_t i = 0; i < a.lits.size(); ++i)
        if (!literals_equal(a.lits[i], b.lits[i])) return false;
    return true;
}

inline bool laws_equal(const CausalLaw& a, const CausalLaw& b) {
    return a.kind == b.kind && a.head_false == b.head_false &&
           (a.head_false || a.kind == LawKind::PfDecl || a.kind == LawKind::InitPfDecl ||
            a.kind == LawKind::Utility || a.kind == LawKind::Inertial ||
            literals_equal(a.head, b.head)) &&
           formulas_equal(a.cond, b.cond) && formulas_equal(a.precond, b.precond) &&
           a.choice_head == b.choice_head && a.pf_constant == b.pf_constant &&
           a.pf_rows == b.pf_rows && a.utility_value == b.utility_value &&
           a.inertial_constant == b.inertial_constant && a.unless_ab == b.unless_ab;
}

inline bool structurally_equal(const ActionDescription& a, const ActionDescription& b) {
    if (a.sorts.size() != b.sorts.size() || a.families.size() != b.families.size() ||
        a.constants.size() != b.constants.size() || a.laws.size() != b.laws.size() ||
        a.groups.size() != b.groups.size())
        return false;
    for (std::size_t i = 0; i < a.sorts.size(); ++i)
        if (a.sorts[i].name != b.sorts[i].name || a.sorts[i].members != b.sorts[i].members)
            return false;
    for (std::size_t i = 0; i < a.families.size(); ++i) {
        const auto& x = a.families[i];
        const auto& y = b.families[i];
        if (x.name != y.name || x.kind != y.kind || x.arg_sorts != y.arg_sorts ||
            x.values != y.values)
            return false;
    }
    for (std::size_t i = 0; i < a.laws.size(); ++i)
        if (!laws_equal(a.laws[i], b.laws[i])) return false;
    for (std::size_t i = 0; i < a.groups.size(); ++i)
        if (a.groups[i].name != b.groups[i].name || a.groups[i].actions != b.groups[i].actions)
            return false;
    return true;
}

}  // namespace pbcp
