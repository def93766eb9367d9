#pragma once

// Translation of an expanded action description into the timed ground
// weighted-rule program Tr(D,m) = D_init ∪ D_m: hard rules, choice rules and
// probability-fact atoms with exact rational weights. Rigid constants are
// resolved here and erased from rule bodies.

#include "pbcp/ast.hpp"
#include "pbcp/validate.hpp"

#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace pbcp {

struct GLit {
    int tc = -1;
    int val = -1;
    bool pos = true;
};

struct GRule {
    enum class Kind { Hard, Choice, PfFact, Utility };
    Kind kind = Kind::Hard;
    int head_tc = -1;  // -1 with Kind::Hard means a constraint (⊥ head)
    int head_val = -1;
    Rational prob;          // PfFact
    Rational util_value;    // Utility
    int util_id = -1;       // Utility
    int util_step = -1;     // Utility (the step stamped on the atom, i+1)
    std::vector<GLit> body;
    bool in_init = false;
};

struct TimedConstantInfo {
    int constant = -1;  // ActionDescription constant id
    int step = 0;
    ConstantKind kind = ConstantKind::RegularFluent;
    int domain = 0;
    std::string display;  // "1:TigerPosition(Tiger1)"
};

struct GroundProgram {
    int m = 0;
    std::shared_ptr<const ActionDescription> description;
    std::vector<TimedConstantInfo> tcs;
    std::vector<std::vector<int>> tc_of;  // [ad constant][step] -> tc id or -1
    std::vector<GRule> rules;
    // signature partition, as tc id lists
    std::vector<int> sig_fluent, sig_action, sig_pf, sig_initpf, sig_obs;
    std::vector<std::vector<int>> action_tcs_by_step;
    RigidResolution rigid;
    // atom packing for the engine: atom id = atom_offset[tc] + value
    std::vector<int> atom_offset;
    int atom_count = 0;

    int tc(int constant, int step) const { return tc_of[constant][step]; }

    std::string atom_string(int tcid, int val) const {
        return tcs[tcid].display + "=" +
               description->values_of(tcs[tcid].constant)[val];
    }
};

struct TranslateOptions {
    // C_i(m): require exactly one action of the (remaining) action set per
    // step, instead of the default at-most-one block.
    bool require_action_each_step = false;
};

struct TranslateResult {
    bool ok = false;
    std::vector<Diagnostic> diagnostics;
    GroundProgram program;
};

namespace detail {

inline void finalize_atoms(GroundProgram& p) {
    p.atom_offset.assign(p.tcs.size(), 0);
    int off = 0;
    for (std::size_t i = 0; i < p.tcs.size(); ++i) {
        p.atom_offset[i] = off;
        off += p.tcs[i].domain;
    }
    p.atom_count = off;
}

}  // namespace detail

inline TranslateResult translate(const ActionDescription& dIn, int m,
                                 TranslateOptions opt = {}) {
    TranslateResult res;
    if (m < 0) {
        res.diagnostics.push_back(make_error(SourcePos{}, "maximum step m must be >= 0"));
        return res;
    }
    if (!dIn.expanded) {
        res.diagnostics.push_back(make_error(SourcePos{}, "description must be expanded before translation"));
        return res;
    }
    auto dShared = std::make_shared<ActionDescription>(dIn);
    const ActionDescription& d = *dShared;
    GroundProgram p;
    p.m = m;
    p.description = dShared;
    p.rigid = resolve_rigids(d);
    if (!p.rigid.ok) {
        res.diagnostics = p.rigid.diagnostics;
        return res;
    }

    // timed constants (rigids are erased, not stamped)
    p.tc_of.assign(d.constants.size(), {});
    for (int c = 0; c < static_cast<int>(d.constants.size()); ++c) {
        ConstantKind k = d.kind_of(c);
        int lo = 0, hi = -1;
        switch (k) {
            case ConstantKind::RegularFluent:
            case ConstantKind::SdFluent:
            case ConstantKind::Observation: hi = m; break;
            case ConstantKind::Action:
            case ConstantKind::Pf: hi = m - 1; break;
            case ConstantKind::InitPf: hi = 0; break;
            case ConstantKind::Rigid: hi = -1; break;
        }
        p.tc_of[c].assign(m + 1, -1);
        for (int i = lo; i <= hi; ++i) {
            TimedConstantInfo info;
            info.constant = c;
            info.step = i;
            info.kind = k;
            info.domain = d.domain_size(c);
            info.display = std::to_string(i) + ":" + d.constants[c].display;
            p.tc_of[c][i] = static_cast<int>(p.tcs.size());
            p.tcs.push_back(std::move(info));
            int tcid = p.tc_of[c][i];
            switch (k) {
                case ConstantKind::RegularFluent:
                case ConstantKind::SdFluent: p.sig_fluent.push_back(tcid); break;
                case ConstantKind::Observation: p.sig_obs.push_back(tcid); break;
                case ConstantKind::Action: p.sig_action.push_back(tcid); break;
                case ConstantKind::Pf: p.sig_pf.push_back(tcid); break;
                case ConstantKind::InitPf: p.sig_initpf.push_back(tcid); break;
                default: break;
            }
        }
    }
    p.action_tcs_by_step.assign(std::max(m, 0), {});
    for (int i = 0; i < m; ++i)
        for (int c = 0; c < static_cast<int>(d.constants.size()); ++c)
            if (d.kind_of(c) == ConstantKind::Action) p.action_tcs_by_step[i].push_back(p.tc(c, i));

    // stamps a formula at a step; returns false if a rigid literal kills the rule
    auto stamp = [&](const Formula& f, int step, std::vector<GLit>& out) -> bool {
        for (const auto& l : f.lits) {
            if (d.kind_of(l.constant) == ConstantKind::Rigid) {
                if (p.rigid.literal_true(l)) continue;
                return false;
            }
            out.push_back(GLit{p.tc(l.constant, step), l.value, l.positive});
        }
        return true;
    };

    bool pf_error = false;
    int next_util_id = 0;

    // D_init: initpf rows, then initial static constraints
    for (const auto& law : d.laws) {
        if (law.kind != LawKind::InitPfDecl) continue;
        for (const auto& row : law.pf_rows) {
            GRule r;
            r.kind = GRule::Kind::PfFact;
            r.head_tc = p.tc(law.pf_constant, 0);
            r.head_val = row.first;
            r.prob = row.second;
            r.in_init = true;
            p.rules.push_back(std::move(r));
        }
    }
    for (const auto& law : d.laws) {
        if (law.kind != LawKind::InitStatic) continue;
        GRule r;
        r.kind = GRule::Kind::Hard;
        r.in_init = true;
        if (!law.head_false) {
            if (d.kind_of(law.head.constant) == ConstantKind::Rigid) continue;
            r.body.push_back(GLit{p.tc(law.head.constant, 0), law.head.value, false});
        }
        if (!stamp(law.cond, 0, r.body)) continue;
        if (law.cond.is_false) continue;
        p.rules.push_back(std::move(r));
    }

    // D_m: stamped causal laws
    for (const auto& law : d.laws) {
        switch (law.kind) {
            case LawKind::Static: {
                if (!law.head_false && d.kind_of(law.head.constant) == ConstantKind::Rigid)
                    continue;  // consumed by rigid resolution
                if (law.cond.is_false) continue;
                for (int i = 0; i <= m; ++i) {
                    GRule r;
                    r.kind = law.choice_head ? GRule::Kind::Choice : GRule::Kind::Hard;
                    if (!law.head_false) {
                        r.head_tc = p.tc(law.head.constant, i);
                        r.head_val = law.head.value;
                    }
                    if (!stamp(law.cond, i, r.body)) continue;
                    p.rules.push_back(std::move(r));
                }
                break;
            }
            case LawKind::FluentDynamic:
            case LawKind::ObservationDynamic: {
                if (law.cond.is_false || law.precond.is_false) continue;
                for (int i = 0; i + 1 <= m; ++i) {
                    GRule r;
                    r.kind = law.choice_head ? GRule::Kind::Choice : GRule::Kind::Hard;
                    if (!law.head_false) {
                        r.head_tc = p.tc(law.head.constant, i + 1);
                        r.head_val = law.head.value;
                    }
                    if (!stamp(law.cond, i + 1, r.body)) continue;
                    if (!stamp(law.precond, i, r.body)) continue;
                    p.rules.push_back(std::move(r));
                }
                break;
            }
            case LawKind::Utility: {
                if (law.cond.is_false || law.precond.is_false) continue;
                const int id = next_util_id++;
                for (int i = 0; i + 1 <= m; ++i) {
                    GRule r;
                    r.kind = GRule::Kind::Utility;
                    r.util_value = law.utility_value;
                    r.util_id = id;
                    r.util_step = i + 1;
                    if (!stamp(law.cond, i + 1, r.body)) continue;
                    if (!stamp(law.precond, i, r.body)) continue;
                    p.rules.push_back(std::move(r));
                }
                break;
            }
            case LawKind::PfDecl: {
                // keep only the declaration whose rigid condition holds
                bool active = !law.cond.is_false;
                for (const auto& l : law.cond.lits)
                    if (!p.rigid.literal_true(l)) active = false;
                if (!active) continue;
                for (int i = 0; i + 1 <= m; ++i) {
                    for (const auto& row : law.pf_rows) {
                        GRule r;
                        r.kind = GRule::Kind::PfFact;
                        r.head_tc = p.tc(law.pf_constant, i);
                        r.head_val = row.first;
                        r.prob = row.second;
                        p.rules.push_back(std::move(r));
                    }
                }
                break;
            }
            case LawKind::InitPfDecl:
            case LawKind::InitStatic: break;  // emitted above
            case LawKind::Inertial:
            case LawKind::Default:
                res.diagnostics.push_back(make_error(law.pos,
                                                     "abbreviation found; expand the description first"));
                pf_error = true;
                break;
        }
        if (pf_error) break;
    }
    if (pf_error) return res;

    // initial fluent choices for regular fluents
    for (int c = 0; c < static_cast<int>(d.constants.size()); ++c) {
        if (d.kind_of(c) != ConstantKind::RegularFluent) continue;
        for (int v = 0; v < d.domain_size(c); ++v) {
            GRule r;
            r.kind = GRule::Kind::Choice;
            r.head_tc = p.tc(c, 0);
            r.head_val = v;
            p.rules.push_back(std::move(r));
        }
    }
    // observation choices: exogenous at step 0, NA default afterwards
    for (int c = 0; c < static_cast<int>(d.constants.size()); ++c) {
        if (d.kind_of(c) != ConstantKind::Observation) continue;
        for (int v = 0; v < d.domain_size(c); ++v) {
            GRule r;
            r.kind = GRule::Kind::Choice;
            r.head_tc = p.tc(c, 0);
            r.head_val = v;
            p.rules.push_back(std::move(r));
        }
        const int na = d.families[d.constants[c].family].value_index(kNaValue);
        for (int i = 1; i <= m; ++i) {
            GRule r;
            r.kind = GRule::Kind::Choice;
            r.head_tc = p.tc(c, i);
            r.head_val = na;
            p.rules.push_back(std::move(r));
        }
    }
    // action choices plus the no-concurrency block (C(m))
    for (int i = 0; i < m; ++i) {
        const auto& acts = p.action_tcs_by_step[i];
        for (int tcid : acts) {
            for (int v = 0; v < p.tcs[tcid].domain; ++v) {
                GRule r;
                r.kind = GRule::Kind::Choice;
                r.head_tc = tcid;
                r.head_val = v;
                p.rules.push_back(std::move(r));
            }
        }
        const int t = 1;  // boolean sort: {false,true}
        for (std::size_t a = 0; a < acts.size(); ++a)
            for (std::size_t b = a + 1; b < acts.size(); ++b) {
                GRule r;
                r.kind = GRule::Kind::Hard;
                r.body.push_back(GLit{acts[a], t, true});
                r.body.push_back(GLit{acts[b], t, true});
                p.rules.push_back(std::move(r));
            }
        if (opt.require_action_each_step && !acts.empty()) {
            GRule r;
            r.kind = GRule::Kind::Hard;
            for (int tcid : acts) r.body.push_back(GLit{tcid, t, false});
            p.rules.push_back(std::move(r));
        }
    }
    // uniqueness and existence of value for every timed constant
    for (int tcid = 0; tcid < static_cast<int>(p.tcs.size()); ++tcid) {
        const int n = p.tcs[tcid].domain;
        const bool init = p.tcs[tcid].kind == ConstantKind::InitPf;
        for (int v1 = 0; v1 < n; ++v1)
            for (int v2 = v1 + 1; v2 < n; ++v2) {
                GRule r;
                r.kind = GRule::Kind::Hard;
                r.in_init = init;
                r.body.push_back(GLit{tcid, v1, true});
                r.body.push_back(GLit{tcid, v2, true});
                p.rules.push_back(std::move(r));
            }
        GRule r;
        r.kind = GRule::Kind::Hard;
        r.in_init = init;
        for (int v = 0; v < n; ++v) r.body.push_back(GLit{tcid, v, false});
        p.rules.push_back(std::move(r));
    }

    detail::finalize_atoms(p);
    res.ok = true;
    res.program = std::move(p);
    return res;
}

// Π(m) ∪ Π_i(m) ∪ C_i(m): the action-free core plus the group's laws plus a
// choice block generating exactly one action of the group per step. Group -1
// is the implicit no-action group. pf declarations travel with the laws that
// reference them.
inline TranslateResult restrict_to_group(const GroundProgram& p, int group_index) {
    TranslateResult res;
    const ActionDescription& d = *p.description;
    std::vector<int> group_actions;
    if (group_index >= 0) {
        if (group_index >= static_cast<int>(d.groups.size())) {
            res.diagnostics.push_back(make_error(SourcePos{}, "no such action group"));
            return res;
        }
        group_actions = d.groups[group_index].actions;
    }
    auto in_group = [&](int c) {
        for (int a : group_actions)
            if (a == c) return true;
        return false;
    };

    ActionDescription filtered = d;
    filtered.laws.clear();
    for (const auto& law : d.laws) {
        bool drop = false;
        CausalLaw l = law;
        Formula pre;
        pre.is_false = l.precond.is_false;
        for (const auto& lit : l.precond.lits) {
            if (d.kind_of(lit.constant) == ConstantKind::Action && !in_group(lit.constant)) {
                if (lit.positive) drop = true;
                // negative literal on an absent action holds vacuously
                continue;
            }
            pre.lits.push_back(lit);
        }
        if (drop) continue;
        l.precond = std::move(pre);
        filtered.laws.push_back(std::move(l));
    }
    // referenced pf constants survive; the rest are dropped with their rows
    std::set<int> referenced;
    for (const auto& law : filtered.laws) {
        if (law.kind == LawKind::PfDecl) continue;
        for (const auto& l : law.cond.lits) referenced.insert(l.constant);
        for (const auto& l : law.precond.lits) referenced.insert(l.constant);
    }
    std::vector<CausalLaw> kept;
    for (auto& law : filtered.laws) {
        if (law.kind == LawKind::PfDecl && referenced.find(law.pf_constant) == referenced.end())
            continue;
        kept.push_back(std::move(law));
    }
    filtered.laws = std::move(kept);

    // drop the other groups' action constants and unreferenced pf constants
    // entirely; translate() only stamps what exists
    ActionDescription reduced;
    reduced.sorts = filtered.sorts;
    reduced.groups.clear();
    reduced.expanded = true;
    std::vector<int> cmap(d.constants.size(), -1);
    reduced.families = filtered.families;
    for (std::size_t c = 0; c < d.constants.size(); ++c) {
        ConstantKind k = d.kind_of(static_cast<int>(c));
        if (k == ConstantKind::Action && !in_group(static_cast<int>(c))) continue;
        if (k == ConstantKind::Pf && referenced.find(static_cast<int>(c)) == referenced.end())
            continue;
        cmap[c] = static_cast<int>(reduced.constants.size());
        reduced.constants.push_back(d.constants[c]);
    }
    auto remapFormula = [&](Formula& f) {
        for (auto& l : f.lits) l.constant = cmap[l.constant];
    };
    for (auto law : filtered.laws) {
        if (!law.head_false && law.kind != LawKind::PfDecl && law.kind != LawKind::InitPfDecl &&
            law.kind != LawKind::Utility)
            law.head.constant = cmap[law.head.constant];
        if (law.pf_constant >= 0) law.pf_constant = cmap[law.pf_constant];
        remapFormula(law.cond);
        remapFormula(law.precond);
        reduced.laws.push_back(std::move(law));
    }
    TranslateOptions opt;
    opt.require_action_each_step = !group_actions.empty();
    return translate(reduced, p.m, opt);
}

inline std::string dump(const GroundProgram& p) {
    std::ostringstream os;
    auto lit = [&](const GLit& l) {
        std::string s = l.pos ? "" : "not ";
        return s + p.atom_string(l.tc, l.val);
    };
    for (const auto& r : p.rules) {
        switch (r.kind) {
            case GRule::Kind::PfFact:
                os << to_string(r.prob) << " :: " << p.atom_string(r.head_tc, r.head_val);
                break;
            case GRule::Kind::Choice:
                os << "{" << p.atom_string(r.head_tc, r.head_val) << "}ch";
                break;
            case GRule::Kind::Hard:
                if (r.head_tc < 0) os << "bot";
                else os << p.atom_string(r.head_tc, r.head_val);
                break;
            case GRule::Kind::Utility:
                os << "utility(" << to_string(r.util_value) << ", " << r.util_step << ", "
                   << r.util_id << ")";
                break;
        }
        if (!r.body.empty()) {
            os << " <- ";
            for (std::size_t i = 0; i < r.body.size(); ++i)
                os << (i ? " & " : "") << lit(r.body[i]);
        }
        if (r.in_init) os << "  [init]";
        os << "\n";
    }
    return os.str();
}

}  // namespace pbcp
