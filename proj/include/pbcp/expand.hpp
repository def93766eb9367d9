#pragma once

// Expansion of syntactic abbreviations into core causal laws:
//   inertial c      -> choice dynamic laws {i+1:c=v}ch <- i:c=v, one per value
//   default  c=v    -> choice static law {i:c=v}ch
//   ... unless ab   -> ~ab conjoined to the law's condition
// Rigid constants are not expanded here; the translator resolves their
// values and erases them from rule bodies.

#include "pbcp/ast.hpp"

namespace pbcp {

inline ActionDescription expand_abbreviations(const ActionDescription& input) {
    ActionDescription d = input;
    std::vector<CausalLaw> out;
    out.reserve(d.laws.size());
    for (const auto& law : d.laws) {
        CausalLaw l = law;
        if (l.unless_ab >= 0) {
            const auto& fam = d.families[d.constants[l.unless_ab].family];
            int ti = fam.value_index("true");
            l.cond.lits.push_back(Literal{l.unless_ab, ti, false});
            l.unless_ab = -1;
        }
        switch (l.kind) {
            case LawKind::Inertial: {
                const int c = l.inertial_constant;
                const int n = d.domain_size(c);
                for (int v = 0; v < n; ++v) {
                    CausalLaw inert;
                    inert.kind = LawKind::FluentDynamic;
                    inert.head = Literal{c, v, true};
                    inert.precond.lits.push_back(Literal{c, v, true});
                    inert.choice_head = true;
                    inert.law_index = l.law_index;
                    inert.tuple_index = l.tuple_index * n + v;
                    inert.pos = l.pos;
                    out.push_back(std::move(inert));
                }
                break;
            }
            case LawKind::Default: {
                CausalLaw def;
                def.kind = LawKind::Static;
                def.head = l.head;
                def.choice_head = true;
                def.law_index = l.law_index;
                def.tuple_index = l.tuple_index;
                def.pos = l.pos;
                out.push_back(std::move(def));
                break;
            }
            default: out.push_back(std::move(l)); break;
        }
    }
    d.laws = std::move(out);
    d.expanded = true;
    return d;
}

}  // namespace pbcp
