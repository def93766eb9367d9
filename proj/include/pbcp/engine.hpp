#pragma once

// Exact inference over ground programs: enumerate probabilistic stable
// models, answer conditional probability and expected-utility queries.
//
// Search is exogenous-first: choice-backed atoms (initial fluents, initial
// observations, actions, pf/initpf atoms) are branched in chronological
// order; everything else is filled by unit propagation and support-filtered
// branching. Every leaf is verified with the reduct/minimal-model check, so
// the heuristics can only cost time, never correctness.

#include "pbcp/ground.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace pbcp {

struct EngineError : std::runtime_error {
    enum class Code { ConditioningOnNull, AssumptionViolation, SearchBudget, ImpossibleQuery };
    Code code;
    EngineError(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

struct WeightedModel {
    std::vector<int16_t> vals;  // value index per timed constant (-1 where absent)
    Rational weight;            // product of satisfied pf-fact probabilities
    Rational utility;           // sum of utility atoms true in the model
};

struct EngineOptions {
    bool include_init = true;     // include the D_init part
    std::uint64_t max_models = 0; // 0 = unlimited
};

class Engine {
  public:
    Engine(const GroundProgram& p, EngineOptions opt = {}) : p_(p), opt_(opt) { build(); }

    const GroundProgram& program() const { return p_; }

    // ---- full verification: satisfaction + minimality of the reduct ----
    bool is_stable_model(const std::vector<int16_t>& vals) {
        // hard-rule satisfaction
        for (const auto& r : rules_) {
            if (r.kind == GRule::Kind::Choice || r.kind == GRule::Kind::PfFact ||
                r.kind == GRule::Kind::Utility)
                continue;
            bool body = true;
            for (const auto& l : r.body)
                if (lit_truth(vals, l) != 1) {
                    body = false;
                    break;
                }
            if (!body) continue;
            if (r.head_tc < 0) return false;  // violated constraint
            if (vals[r.head_tc] != r.head_val) return false;
        }
        // least model of the reduct must reproduce the assignment
        ++epoch_;
        fire_queue_.clear();
        for (std::size_t ri = 0; ri < rules_.size(); ++ri) {
            const auto& r = rules_[ri];
            if (r.head_tc < 0 || r.kind == GRule::Kind::Utility) continue;
            bool active = true;
            for (const auto& l : r.body)
                if (!l.pos && vals[l.tc] == l.val) {
                    active = false;
                    break;
                }
            if (active &&
                (r.kind == GRule::Kind::Choice || r.kind == GRule::Kind::PfFact)) {
                // choice and soft facts support their head only when taken
                if (vals[r.head_tc] != r.head_val) active = false;
            }
            rule_active_[ri] = active;
            rule_remaining_[ri] = 0;
            if (!active) continue;
            int pos = 0;
            for (const auto& l : r.body)
                if (l.pos) ++pos;
            rule_remaining_[ri] = pos;
            if (pos == 0) fire_queue_.push_back(static_cast<int>(ri));
        }
        std::size_t qi = 0;
        while (qi < fire_queue_.size()) {
            const auto& r = rules_[fire_queue_[qi++]];
            const int atom = p_.atom_offset[r.head_tc] + r.head_val;
            if (derived_epoch_[atom] == epoch_) continue;
            derived_epoch_[atom] = epoch_;
            for (int ri : watchers_[atom]) {
                if (!rule_active_[ri]) continue;
                if (--rule_remaining_[ri] == 0) fire_queue_.push_back(ri);
            }
        }
        for (int tc : alive_)
            if (derived_epoch_[p_.atom_offset[tc] + vals[tc]] != epoch_) return false;
        return true;
    }

    Rational model_weight(const std::vector<int16_t>& vals) const {
        Rational w(1);
        for (const auto& [tc, probs] : pf_probs_) w *= probs[vals[tc]];
        return w;
    }

    Rational model_utility(const std::vector<int16_t>& vals) const {
        Rational u(0);
        for (const auto& r : rules_) {
            if (r.kind != GRule::Kind::Utility) continue;
            bool body = true;
            for (const auto& l : r.body)
                if (lit_truth(vals, l) != 1) {
                    body = false;
                    break;
                }
            if (body) u += r.util_value;
        }
        return u;
    }

    // ---- enumeration ----
    void for_each_model(const std::function<void(const WeightedModel&)>& visit,
                        const std::vector<GLit>& condition = {}) {
        vals_.assign(p_.tcs.size(), -1);
        excluded_.assign(p_.tcs.size(), 0);
        trail_.clear();
        models_seen_ = 0;
        for (const auto& l : condition) {
            if (l.pos) {
                if (!assign(l.tc, l.val)) return;
            } else {
                if (!exclude(l.tc, l.val)) return;
            }
        }
        if (!propagate_all()) return;
        search(0, visit);
    }

    std::vector<WeightedModel> enumerate_models(const std::vector<GLit>& condition = {}) {
        std::vector<WeightedModel> out;
        for_each_model([&](const WeightedModel& m) { out.push_back(m); }, condition);
        return out;
    }

    // P(event | given); throws ConditioningOnNull when the given has no mass.
    Rational probability(const std::vector<GLit>& event, const std::vector<GLit>& given = {}) {
        Rational num(0), den(0);
        for_each_model(
            [&](const WeightedModel& m) {
                den += m.weight;
                bool ok = true;
                for (const auto& l : event)
                    if (lit_truth(m.vals, l) != 1) {
                        ok = false;
                        break;
                    }
                if (ok) num += m.weight;
            },
            given);
        if (den == 0)
            throw EngineError(EngineError::Code::ConditioningOnNull,
                              "conditioning event has zero probability mass");
        return num / den;
    }

    Rational expected_utility(const std::vector<GLit>& given = {}) {
        Rational num(0), den(0);
        for_each_model(
            [&](const WeightedModel& m) {
                den += m.weight;
                num += m.weight * m.utility;
            },
            given);
        if (den == 0)
            throw EngineError(EngineError::Code::ConditioningOnNull,
                              "conditioning event has zero probability mass");
        return num / den;
    }

    const std::vector<int>& alive_tcs() const { return alive_; }

  private:
    const GroundProgram& p_;
    EngineOptions opt_;
    std::vector<GRule> rules_;  // filtered by include_init
    std::vector<int> alive_;    // tc ids that carry a value in this mode
    std::vector<char> tc_alive_;
    std::vector<int> branch_order_;
    std::vector<std::vector<int>> rules_touching_;  // tc -> rule index list
    std::vector<std::vector<int>> head_rules_;      // tc -> rules with that head tc
    std::vector<std::vector<int>> watchers_;        // atom -> rules with atom positive in body
    std::vector<std::pair<int, std::vector<Rational>>> pf_probs_;  // (tc, prob per value)

    // search state
    std::vector<int16_t> vals_;
    std::vector<std::uint32_t> excluded_;
    struct TrailEntry {
        int tc;
        int16_t old_val;
        std::uint32_t old_excluded;
    };
    std::vector<TrailEntry> trail_;
    std::uint64_t models_seen_ = 0;

    // scratch for is_stable_model
    mutable std::vector<char> rule_active_;
    mutable std::vector<int> rule_remaining_;
    mutable std::vector<int> fire_queue_;
    mutable std::vector<std::uint32_t> derived_epoch_;
    mutable std::uint32_t epoch_ = 0;

    static int lit_truth(const std::vector<int16_t>& vals, const GLit& l) {
        if (vals[l.tc] < 0) return -1;
        const bool eq = vals[l.tc] == l.val;
        return (l.pos ? eq : !eq) ? 1 : 0;
    }

    void build() {
        for (const auto& info : p_.tcs)
            if (info.domain > 31)
                throw EngineError(EngineError::Code::ImpossibleQuery,
                                  "domains with more than 31 values are not supported");
        tc_alive_.assign(p_.tcs.size(), 1);
        if (!opt_.include_init)
            for (std::size_t i = 0; i < p_.tcs.size(); ++i)
                if (p_.tcs[i].kind == ConstantKind::InitPf) tc_alive_[i] = 0;
        for (std::size_t i = 0; i < p_.tcs.size(); ++i)
            if (tc_alive_[i]) alive_.push_back(static_cast<int>(i));
        for (const auto& r : p_.rules) {
            if (!opt_.include_init && r.in_init) continue;
            bool dead = false;
            if (r.head_tc >= 0 && !tc_alive_[r.head_tc]) dead = true;
            for (const auto& l : r.body)
                if (!tc_alive_[l.tc]) dead = true;
            if (!dead) rules_.push_back(r);
        }
        rules_touching_.assign(p_.tcs.size(), {});
        head_rules_.assign(p_.tcs.size(), {});
        watchers_.assign(p_.atom_count, {});
        for (std::size_t ri = 0; ri < rules_.size(); ++ri) {
            const auto& r = rules_[ri];
            std::vector<int> seen;
            for (const auto& l : r.body) {
                if (std::find(seen.begin(), seen.end(), l.tc) == seen.end()) {
                    rules_touching_[l.tc].push_back(static_cast<int>(ri));
                    seen.push_back(l.tc);
                }
                if (l.pos && r.head_tc >= 0 && r.kind != GRule::Kind::Utility)
                    watchers_[p_.atom_offset[l.tc] + l.val].push_back(static_cast<int>(ri));
            }
            if (r.head_tc >= 0 && r.kind != GRule::Kind::Utility)
                head_rules_[r.head_tc].push_back(static_cast<int>(ri));
        }
        // deduplicate watchers per rule/atom
        for (auto& w : watchers_) {
            std::sort(w.begin(), w.end());
            w.erase(std::unique(w.begin(), w.end()), w.end());
        }
        // pf probabilities per timed constant
        std::map<int, std::vector<Rational>> probs;
        for (const auto& r : rules_)
            if (r.kind == GRule::Kind::PfFact) {
                auto& v = probs[r.head_tc];
                v.resize(p_.tcs[r.head_tc].domain, Rational(0));
                v[r.head_val] = r.prob;
            }
        for (auto& [tc, v] : probs) pf_probs_.push_back({tc, v});
        // branch order: chronological, exogenous first
        branch_order_ = alive_;
        auto priority = [&](int tc) {
            const auto& info = p_.tcs[tc];
            int sub = 8;
            switch (info.kind) {
                case ConstantKind::InitPf: sub = 0; break;
                case ConstantKind::RegularFluent: sub = info.step == 0 ? 1 : 6; break;
                case ConstantKind::Observation: sub = info.step == 0 ? 2 : 7; break;
                case ConstantKind::Action: sub = 3; break;
                case ConstantKind::Pf: sub = 4; break;
                case ConstantKind::SdFluent: sub = 5; break;
                default: sub = 8; break;
            }
            return info.step * 16 + sub;
        };
        std::stable_sort(branch_order_.begin(), branch_order_.end(),
                         [&](int a, int b) {
                             int pa = priority(a), pb = priority(b);
                             if (pa != pb) return pa < pb;
                             return a < b;
                         });
        rule_active_.assign(rules_.size(), 0);
        rule_remaining_.assign(rules_.size(), 0);
        derived_epoch_.assign(std::max(p_.atom_count, 1), 0);
    }

    bool assign(int tc, int val) {
        if (vals_[tc] >= 0) return vals_[tc] == val;
        if (excluded_[tc] & (1u << val)) return false;
        trail_.push_back({tc, vals_[tc], excluded_[tc]});
        vals_[tc] = static_cast<int16_t>(val);
        return true;
    }

    bool exclude(int tc, int val) {
        if (vals_[tc] >= 0) return vals_[tc] != val;
        if (excluded_[tc] & (1u << val)) return true;
        trail_.push_back({tc, vals_[tc], excluded_[tc]});
        excluded_[tc] |= 1u << val;
        // the existence-of-value constraint forces the last remaining value
        // (or reports the conflict) when this tc is rechecked
        return true;
    }

    // three-valued truth under the current partial assignment
    int plit_truth(const GLit& l) const {
        if (vals_[l.tc] >= 0) {
            const bool eq = vals_[l.tc] == l.val;
            return (l.pos ? eq : !eq) ? 1 : 0;
        }
        if (excluded_[l.tc] & (1u << l.val)) return l.pos ? 0 : 1;
        return -1;
    }

    // forward chaining on hard rules + constraint narrowing; processes trail
    // entries from `cursor` onward, including those it appends itself
    bool propagate(std::size_t cursor) {
        while (cursor < trail_.size()) {
            int tc = trail_[cursor++].tc;
            for (int ri : rules_touching_[tc])
                if (!check_rule(ri)) return false;
        }
        return true;
    }

    // one full scan; needed before any assignment exists on the trail
    bool propagate_all() {
        while (true) {
            const std::size_t before = trail_.size();
            for (std::size_t ri = 0; ri < rules_.size(); ++ri)
                if (!check_rule(static_cast<int>(ri))) return false;
            if (!propagate(before)) return false;
            if (trail_.size() == before) return true;
        }
    }

    // applies forced consequences of one rule; false on conflict
    bool check_rule(int ri) {
        const auto& r = rules_[ri];
        if (r.kind == GRule::Kind::Choice || r.kind == GRule::Kind::PfFact ||
            r.kind == GRule::Kind::Utility)
            return true;
        int unknown = -1, nfalse = 0, nunknown = 0;
        for (std::size_t i = 0; i < r.body.size(); ++i) {
            int t = plit_truth(r.body[i]);
            if (t == 0) ++nfalse;
            else if (t == -1) {
                ++nunknown;
                unknown = static_cast<int>(i);
            }
        }
        if (nfalse > 0) return true;  // rule cannot fire
        if (r.head_tc < 0) {
            // constraint: body must not become all-true
            if (nunknown == 0) return false;
            if (nunknown == 1) {
                const auto& l = r.body[unknown];
                return l.pos ? exclude(l.tc, l.val) : assign(l.tc, l.val);
            }
            return true;
        }
        if (nunknown == 0) return assign(r.head_tc, r.head_val);
        return true;
    }

    void search(std::size_t depth, const std::function<void(const WeightedModel&)>& visit) {
        // next unassigned constant in branch order
        int tc = -1;
        for (std::size_t i = depth; i < branch_order_.size(); ++i)
            if (vals_[branch_order_[i]] < 0) {
                tc = branch_order_[i];
                depth = i;
                break;
            }
        if (tc < 0) {
            emit(visit);
            return;
        }
        // support-filtered candidates: a value is viable only if some head rule
        // for it can still fire
        const int n = p_.tcs[tc].domain;
        for (int v = 0; v < n; ++v) {
            if (excluded_[tc] & (1u << v)) continue;
            bool supported = false;
            for (int ri : head_rules_[tc]) {
                const auto& r = rules_[ri];
                if (r.head_val != v) continue;
                bool dead = false;
                for (const auto& l : r.body)
                    if (plit_truth(l) == 0) {
                        dead = true;
                        break;
                    }
                if (!dead) {
                    supported = true;
                    break;
                }
            }
            if (!supported) continue;
            const std::size_t mark = trail_.size();
            if (assign(tc, v) && propagate(mark)) search(depth + 1, visit);
            while (trail_.size() > mark) {
                const auto& e = trail_.back();
                vals_[e.tc] = e.old_val;
                excluded_[e.tc] = e.old_excluded;
                trail_.pop_back();
            }
        }
    }

    void emit(const std::function<void(const WeightedModel&)>& visit) {
        if (!is_stable_model(vals_)) return;
        if (opt_.max_models && ++models_seen_ > opt_.max_models)
            throw EngineError(EngineError::Code::SearchBudget, "model budget exceeded");
        WeightedModel m;
        m.vals = vals_;
        m.weight = model_weight(vals_);
        m.utility = model_utility(vals_);
        visit(m);
    }
};

}  // namespace pbcp
