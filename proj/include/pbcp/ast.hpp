#pragma once

// Abstract syntax for action descriptions. Everything below the parser is
// ground: schematic variables are expanded over their sorts at parse time.

#include "pbcp/diagnostics.hpp"
#include "pbcp/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pbcp {

constexpr const char* kNaValue = "NA";
constexpr const char* kBooleanSortName = "boolean";

struct Sort {
    std::string name;
    std::vector<std::string> members;

    int member_index(const std::string& m) const {
        for (std::size_t i = 0; i < members.size(); ++i)
            if (members[i] == m) return static_cast<int>(i);
        return -1;
    }
};

enum class ConstantKind {
    RegularFluent,
    SdFluent,  // statically determined
    Rigid,
    Action,
    Pf,
    InitPf,
    Observation,
};

inline bool is_fluent_kind(ConstantKind k) {
    return k == ConstantKind::RegularFluent || k == ConstantKind::SdFluent ||
           k == ConstantKind::Rigid;
}

inline const char* kind_name(ConstantKind k) {
    switch (k) {
        case ConstantKind::RegularFluent: return "fluent";
        case ConstantKind::SdFluent: return "sdFluent";
        case ConstantKind::Rigid: return "rigid";
        case ConstantKind::Action: return "action";
        case ConstantKind::Pf: return "pf";
        case ConstantKind::InitPf: return "initpf";
        case ConstantKind::Observation: return "observation";
    }
    return "?";
}

// A declared constant family, e.g. TigerPosition(Tiger) :: Location.
struct ConstantFamily {
    std::string name;
    std::vector<int> arg_sorts;        // indices into ActionDescription::sorts
    ConstantKind kind = ConstantKind::RegularFluent;
    int value_sort = -1;               // -1 for implicit boolean / {NA}
    std::vector<std::string> values;   // value domain (NA appended for observations)
    SourcePos pos;

    int value_index(const std::string& v) const {
        for (std::size_t i = 0; i < values.size(); ++i)
            if (values[i] == v) return static_cast<int>(i);
        return -1;
    }
};

// One ground constant: family plus argument member indices.
struct GroundConstant {
    int family = -1;
    std::vector<int> args;  // member index per argument sort
    std::string display;    // e.g. "TigerPosition(Tiger1)"
};

// Ground literal: constant = value, possibly negated.
struct Literal {
    int constant = -1;
    int value = -1;
    bool positive = true;
};

// Conjunction of literals; empty conjunction is TRUE.
struct Formula {
    bool is_false = false;
    std::vector<Literal> lits;

    bool is_true() const { return !is_false && lits.empty(); }
};

enum class LawKind {
    Static,
    FluentDynamic,
    ObservationDynamic,
    InitStatic,
    PfDecl,
    InitPfDecl,
    Utility,
    Inertial,  // abbreviation, removed by expansion
    Default,   // abbreviation, removed by expansion
};

struct CausalLaw {
    LawKind kind = LawKind::Static;
    bool head_false = false;   // head is ⊥
    Literal head;              // Static/FluentDynamic/ObservationDynamic/InitStatic/Default
    Formula cond;              // "if" part
    Formula precond;           // "after" part
    bool choice_head = false;  // head is wrapped in a choice rule (from inertia/defaults)
    int pf_constant = -1;      // PfDecl/InitPfDecl
    std::vector<std::pair<int, Rational>> pf_rows;
    Rational utility_value;    // Utility
    int inertial_constant = -1;
    int unless_ab = -1;        // ground constant conjoined as ¬ab by expansion
    int law_index = 0;         // source-order index of the (schematic) law
    int tuple_index = 0;       // grounding tuple index within the law
    SourcePos pos;
};

struct ActionGroup {
    std::string name;
    std::vector<int> actions;  // ground action constant ids
    SourcePos pos;
};

struct ActionDescription {
    std::vector<Sort> sorts;
    std::vector<ConstantFamily> families;
    std::vector<GroundConstant> constants;  // ordered family-major, args lexicographic
    std::vector<CausalLaw> laws;
    std::vector<ActionGroup> groups;
    bool expanded = false;

    int sort_index(const std::string& name) const {
        for (std::size_t i = 0; i < sorts.size(); ++i)
            if (sorts[i].name == name) return static_cast<int>(i);
        return -1;
    }

    int family_index(const std::string& name) const {
        for (std::size_t i = 0; i < families.size(); ++i)
            if (families[i].name == name) return static_cast<int>(i);
        return -1;
    }

    ConstantKind kind_of(int constant) const {
        return families[constants[constant].family].kind;
    }

    const std::vector<std::string>& values_of(int constant) const {
        return families[constants[constant].family].values;
    }

    int domain_size(int constant) const {
        return static_cast<int>(values_of(constant).size());
    }

    int find_constant(int family, const std::vector<int>& args) const {
        for (std::size_t i = 0; i < constants.size(); ++i)
            if (constants[i].family == family && constants[i].args == args)
                return static_cast<int>(i);
        return -1;
    }

    std::vector<int> constants_of_kind(ConstantKind k) const {
        std::vector<int> out;
        for (std::size_t i = 0; i < constants.size(); ++i)
            if (kind_of(static_cast<int>(i)) == k) out.push_back(static_cast<int>(i));
        return out;
    }

    std::string literal_string(const Literal& l) const {
        std::string s = constants[l.constant].display;
        s += l.positive ? "=" : "!=";
        s += values_of(l.constant)[l.value];
        return s;
    }

    std::string atom_string(int constant, int value) const {
        return constants[constant].display + "=" + values_of(constant)[value];
    }
};

// Rebuilds the ground constant list from the families; called by the parser.
inline void instantiate_constants(ActionDescription& d) {
    d.constants.clear();
    for (std::size_t f = 0; f < d.families.size(); ++f) {
        const auto& fam = d.families[f];
        std::vector<int> idx(fam.arg_sorts.size(), 0);
        while (true) {
            GroundConstant gc;
            gc.family = static_cast<int>(f);
            gc.args = idx;
            gc.display = fam.name;
            if (!idx.empty()) {
                gc.display += "(";
                for (std::size_t a = 0; a < idx.size(); ++a) {
                    if (a) gc.display += ",";
                    gc.display += d.sorts[fam.arg_sorts[a]].members[idx[a]];
                }
                gc.display += ")";
            }
            d.constants.push_back(std::move(gc));
            // advance odometer
            int pos = static_cast<int>(idx.size()) - 1;
            while (pos >= 0) {
                if (++idx[pos] < static_cast<int>(d.sorts[fam.arg_sorts[pos]].members.size())) break;
                idx[pos] = 0;
                --pos;
            }
            if (pos < 0) break;
            if (idx.empty()) break;
        }
    }
}

}  // namespace pbcp
