#pragma once

// Static validation (Assumptions 1-4 as far as they are checkable without
// enumeration) and translation-time resolution of rigid constants.

#include "pbcp/ast.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace pbcp {

struct RigidResolution {
    bool ok = true;
    // value index per constant; -1 for non-rigid constants
    std::vector<int> value;
    std::vector<Diagnostic> diagnostics;

    bool literal_true(const Literal& l) const {
        return l.positive ? value[l.constant] == l.value : value[l.constant] != l.value;
    }
};

// Evaluates the rigid-only static subprogram to the unique value assignment
// required by Assumption 4. Hard laws first to fixpoint, then defaults as a
// last resort, until every rigid constant is pinned.
inline RigidResolution resolve_rigids(const ActionDescription& d) {
    RigidResolution r;
    r.value.assign(d.constants.size(), -1);
    std::vector<int> rigids = d.constants_of_kind(ConstantKind::Rigid);
    if (rigids.empty()) return r;

    struct RLaw {
        const CausalLaw* law;
        bool is_default;
    };
    std::vector<RLaw> rlaws;
    for (const auto& law : d.laws) {
        if (law.kind != LawKind::Static) continue;
        if (law.head_false) {
            bool rigid_only = !law.cond.lits.empty();
            for (const auto& l : law.cond.lits)
                if (d.kind_of(l.constant) != ConstantKind::Rigid) rigid_only = false;
            if (rigid_only) rlaws.push_back({&law, false});
            continue;
        }
        if (d.kind_of(law.head.constant) != ConstantKind::Rigid) continue;
        rlaws.push_back({&law, law.choice_head});
    }

    auto assign = [&](int c, int v, SourcePos pos) {
        if (r.value[c] >= 0 && r.value[c] != v) {
            r.diagnostics.push_back(make_error(
                pos, "rigid constant '" + d.constants[c].display + "' takes conflicting values '" +
                         d.values_of(c)[r.value[c]] + "' and '" + d.values_of(c)[v] + "'"));
            r.ok = false;
            return false;
        }
        if (r.value[c] < 0) {
            r.value[c] = v;
            return true;
        }
        return false;
    };

    // three-valued truth of a rigid condition: 1 true, 0 false, -1 unknown
    auto eval = [&](const Formula& f) {
        if (f.is_false) return 0;
        int res = 1;
        for (const auto& l : f.lits) {
            int v = r.value[l.constant];
            if (v < 0) {
                // a negative literal can be decided early only when assigned
                res = -1;
                continue;
            }
            bool t = l.positive ? v == l.value : v != l.value;
            if (!t) return 0;
        }
        return res;
    };

    bool progress = true;
    while (progress) {
        progress = false;
        // hard laws to fixpoint
        bool hard_progress = true;
        while (hard_progress) {
            hard_progress = false;
            for (const auto& rl : rlaws) {
                if (rl.is_default || rl.law->head_false) continue;
                if (r.value[rl.law->head.constant] >= 0) continue;
                if (eval(rl.law->cond) == 1) {
                    if (assign(rl.law->head.constant, rl.law->head.value, rl.law->pos))
                        hard_progress = progress = true;
                    if (!r.ok) return r;
                }
            }
        }
        // defaults: only for constants whose hard laws are all dead or absent
        for (const auto& rl : rlaws) {
            if (!rl.is_default || rl.law->head_false) continue;
            const int c = rl.law->head.constant;
            if (r.value[c] >= 0) continue;
            bool blocked = false;
            for (const auto& other : rlaws) {
                if (other.is_default || other.law->head_false) continue;
                if (other.law->head.constant != c) continue;
                if (eval(other.law->cond) != 0) blocked = true;
            }
            if (blocked) continue;
            if (eval(rl.law->cond) == 1) {
                if (assign(c, rl.law->head.value, rl.law->pos)) progress = true;
                if (!r.ok) return r;
            }
        }
        if (!progress) {
            // positive cycles among conditionals: minimality makes them not fire;
            // take the first applicable default unconditionally
            for (const auto& rl : rlaws) {
                if (!rl.is_default || rl.law->head_false) continue;
                const int c = rl.law->head.constant;
                if (r.value[c] >= 0) continue;
                if (eval(rl.law->cond) != 0) {
                    if (assign(c, rl.law->head.value, rl.law->pos)) progress = true;
                    if (!r.ok) return r;
                    break;
                }
            }
        }
    }

    for (int c : rigids) {
        if (r.value[c] < 0) {
            r.diagnostics.push_back(make_error(
                d.families[d.constants[c].family].pos,
                "rigid constant '" + d.constants[c].display +
                    "' cannot be resolved to a unique value (Assumption 4); add a fact or default"));
            r.ok = false;
        }
    }
    if (!r.ok) return r;

    // hard constraints and satisfied-law consistency
    for (const auto& rl : rlaws) {
        if (rl.law->head_false) {
            if (eval(rl.law->cond) == 1) {
                r.diagnostics.push_back(make_error(rl.law->pos,
                                                   "rigid constraint violated by resolved values"));
                r.ok = false;
            }
        } else if (!rl.is_default && eval(rl.law->cond) == 1 &&
                   r.value[rl.law->head.constant] != rl.law->head.value) {
            r.diagnostics.push_back(make_error(rl.law->pos, "rigid static law violated"));
            r.ok = false;
        }
    }
    return r;
}

// Statically checkable violations of Assumptions 1-4; dynamic uniqueness of
// successors is checked during enumeration.
inline std::vector<Diagnostic> validate_assumptions_static(const ActionDescription& d) {
    std::vector<Diagnostic> diags;
    if (!d.expanded) {
        diags.push_back(make_error(SourcePos{0, 0}, "description must be expanded before validation"));
        return diags;
    }
    RigidResolution rr = resolve_rigids(d);
    for (auto& dd : rr.diagnostics) diags.push_back(dd);

    // exactly one active pf declaration per pf/initpf constant
    std::map<int, int> active, total;
    for (const auto& law : d.laws) {
        if (law.kind != LawKind::PfDecl && law.kind != LawKind::InitPfDecl) continue;
        ++total[law.pf_constant];
        bool cond_true = true;
        if (rr.ok) {
            if (law.cond.is_false) cond_true = false;
            for (const auto& l : law.cond.lits)
                if (!rr.literal_true(l)) cond_true = false;
        }
        if (cond_true) ++active[law.pf_constant];
    }
    for (int c = 0; c < static_cast<int>(d.constants.size()); ++c) {
        ConstantKind k = d.kind_of(c);
        if (k != ConstantKind::Pf && k != ConstantKind::InitPf) continue;
        const std::string& name = d.constants[c].display;
        if (total.find(c) == total.end()) {
            diags.push_back(make_error(d.families[d.constants[c].family].pos,
                                       "pf constant '" + name + "' has no declaration"));
            continue;
        }
        if (!rr.ok) continue;
        int a = active.count(c) ? active[c] : 0;
        if (a == 0)
            diags.push_back(make_error(d.families[d.constants[c].family].pos,
                                       "no probability declaration for '" + name +
                                           "' is active under the resolved rigid values"));
        if (a > 1)
            diags.push_back(make_error(d.families[d.constants[c].family].pos,
                                       "pf constant '" + name +
                                           "' has multiple active declarations"));
    }

    // declared groups must partition the ground action atoms
    if (!d.groups.empty()) {
        std::map<int, std::string> owner;
        for (const auto& g : d.groups)
            for (int a : g.actions) {
                auto it = owner.find(a);
                if (it != owner.end())
                    diags.push_back(make_error(g.pos, "action '" + d.constants[a].display +
                                                          "' appears in groups '" + it->second +
                                                          "' and '" + g.name + "'"));
                else
                    owner[a] = g.name;
            }
        for (int c = 0; c < static_cast<int>(d.constants.size()); ++c)
            if (d.kind_of(c) == ConstantKind::Action && owner.find(c) == owner.end())
                diags.push_back(make_error(d.constants[c].family >= 0
                                               ? d.families[d.constants[c].family].pos
                                               : SourcePos{},
                                           "action '" + d.constants[c].display +
                                               "' is not covered by any group"));
    }

    // unused pf constants only cost enumeration time; flag them
    std::set<int> referenced;
    for (const auto& law : d.laws) {
        for (const auto& l : law.cond.lits) referenced.insert(l.constant);
        for (const auto& l : law.precond.lits) referenced.insert(l.constant);
    }
    for (int c = 0; c < static_cast<int>(d.constants.size()); ++c)
        if (d.kind_of(c) == ConstantKind::Pf && referenced.find(c) == referenced.end())
            diags.push_back(make_warning(d.families[d.constants[c].family].pos,
                                         "pf constant '" + d.constants[c].display +
                                             "' is never used in a law"));
    return diags;
}

}  // namespace pbcp
