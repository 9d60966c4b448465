#include "fanostab/trace_check.hpp"

#include <algorithm>

#include "fanostab/weyl.hpp"

namespace fano::trace_check {

using chase::Group;
using chase::LesRole;
using chase::MapHandle;
using chase::MapProp;
using chase::ProofTrace;
using chase::SES;
using chase::SheafExpr;
using chase::Step;

namespace {

/// The checker's own view of a trace: registries indexed for re-validation.
/// All derivation logic below is written against the exactness of
/// 0 -> left -> middle -> right -> 0 directly, not against the engine.
struct Context {
    const ProofTrace& trace;
    std::vector<const FactStore*> stores;
    std::map<std::string, SpaceDescriptor> spaces;
    std::map<int, const Step*> steps; // only steps already validated

    explicit Context(const ProofTrace& t, std::vector<const FactStore*> s)
        : trace(t), stores(std::move(s)) {
        for (const auto& sp : t.spaces) spaces[sp.id] = sp;
    }

    [[nodiscard]] const SpaceDescriptor* space(const std::string& id) const {
        auto it = spaces.find(id);
        return it == spaces.end() ? nullptr : &it->second;
    }

    [[nodiscard]] const SES* ses(int id) const {
        if (id < 0 || id >= static_cast<int>(trace.sequences.size())) return nullptr;
        return &trace.sequences[std::size_t(id)];
    }

    [[nodiscard]] Group map_source(const MapHandle& m) const {
        switch (m.kind) {
            case MapHandle::Kind::Les: {
                const SES* s = ses(m.ses_id);
                if (!s) throw std::runtime_error("bad ses id");
                if (m.role == LesRole::Left) return Group{s->left, m.p};
                if (m.role == LesRole::Middle) return Group{s->middle, m.p};
                return Group{s->right, m.p};
            }
            case MapHandle::Kind::Restriction:
                return Group{SheafExpr::omega(m.from_space, m.q, m.t), m.p};
            case MapHandle::Kind::Cupping:
                return Group{SheafExpr::omega(m.from_space, m.q - 1, 0), m.p - 1};
        }
        throw std::runtime_error("bad map kind");
    }

    [[nodiscard]] Group map_target(const MapHandle& m) const {
        switch (m.kind) {
            case MapHandle::Kind::Les: {
                const SES* s = ses(m.ses_id);
                if (!s) throw std::runtime_error("bad ses id");
                if (m.role == LesRole::Left) return Group{s->middle, m.p};
                if (m.role == LesRole::Middle) return Group{s->right, m.p};
                return Group{s->left, m.p + 1};
            }
            case MapHandle::Kind::Restriction:
                return Group{SheafExpr::omega(m.to_space, m.q, m.t), m.p};
            case MapHandle::Kind::Cupping:
                return Group{SheafExpr::omega(m.from_space, m.q, 0), m.p};
        }
        throw std::runtime_error("bad map kind");
    }

    /// Finds a validated premise step asserting the group's value.
    [[nodiscard]] const Step* premise_value(const Step& s, const Group& g) const {
        for (int id : s.premise_steps) {
            auto it = steps.find(id);
            if (it == steps.end()) continue;
            const Step* p = it->second;
            if (p->what == Step::What::CellValue && p->group == g) return p;
        }
        return nullptr;
    }

    [[nodiscard]] bool premise_zero(const Step& s, const Group& g) const {
        const Step* p = premise_value(s, g);
        return p && p->value.is_zero();
    }

    /// Finds a validated premise step asserting a property of the map
    /// (bijective counts as injective and surjective).
    [[nodiscard]] bool premise_prop(const Step& s, const MapHandle& m,
                                    MapProp prop) const {
        for (int id : s.premise_steps) {
            auto it = steps.find(id);
            if (it == steps.end()) continue;
            const Step* p = it->second;
            if (p->what != Step::What::MapProperty || !(p->map == m)) continue;
            if (p->prop == prop) return true;
            if (p->prop == MapProp::Bijective &&
                (prop == MapProp::Injective || prop == MapProp::Surjective))
                return true;
        }
        return false;
    }

    /// Independent Betti computation: store facts, exact values on
    /// homogeneous spaces, weak Lefschetz along section chains.
    [[nodiscard]] std::optional<BigInt> betti(const std::string& id, int i) const {
        for (const FactStore* st : stores)
            if (const BettiFact* f = st->betti(id, i)) return f->value;
        const SpaceDescriptor* sp = space(id);
        if (!sp) return std::nullopt;
        if (sp->homogeneous()) return weyl::grassmann_betti(sp->k, sp->n, i);
        if (sp->kind == SpaceKind::Section && i <= sp->dim - 1)
            return betti(sp->parent, i);
        return std::nullopt;
    }
};

std::string fail(const Step& s, const std::string& why) {
    return "step " + std::to_string(s.id) + " [" + s.rule + "] " + s.statement + ": " +
           why;
}

/// Re-derivation of one step. Returns an empty string on success.
std::string validate(Context& ctx, const Step& s) {
    const std::string& r = s.rule;

    // --- leaf value rules -------------------------------------------------
    if (r == "range") {
        const SpaceDescriptor* sp = ctx.space(s.group.sheaf.space);
        if (!sp) return fail(s, "unknown space");
        const bool out = s.group.p < 0 || s.group.p > sp->dim || s.group.sheaf.q < 0 ||
                         s.group.sheaf.q > sp->dim;
        if (!out || !s.value.is_zero()) return fail(s, "range logic");
        return {};
    }
    if (r == "file-fact" || r == "use-fact") {
        const SheafExpr& e = s.group.sheaf;
        for (const FactStore* st : ctx.stores)
            if (const CellFact* f = st->cell(e.space, s.group.p, e.q, e.t))
                return f->value == s.value ? std::string{}
                                           : fail(s, "store value differs");
        return fail(s, "fact not present in any store");
    }
    if (r == "weyl") {
        const SpaceDescriptor* sp = ctx.space(s.group.sheaf.space);
        if (!sp || !sp->homogeneous()) return fail(s, "not homogeneous");
        BigInt expect =
            weyl::hodge_cell(sp->k, sp->n, s.group.p, s.group.sheaf.q, s.group.sheaf.t);
        return s.value == CohomologyValue::of_dim(expect)
                   ? std::string{}
                   : fail(s, "recomputation differs");
    }
    if (r == "kodaira-nakano") {
        const SpaceDescriptor* sp = ctx.space(s.group.sheaf.space);
        if (!sp) return fail(s, "unknown space");
        if (!kodaira_nakano_zone(sp->dim, s.group.p, s.group.sheaf.q, s.group.sheaf.t)
                 .is_zero())
            return fail(s, "cell not in a vanishing zone");
        return s.value.is_zero() ? std::string{} : fail(s, "nonzero value");
    }
    if (r == "hodge-betti") {
        const SheafExpr& e = s.group.sheaf;
        if (e.t != 0) return fail(s, "twisted cell");
        const int m = s.group.p + e.q;
        auto b = ctx.betti(e.space, m);
        if (!b) return fail(s, "betti number not available");
        CohomologyValue expect;
        if (*b == 0)
            expect = CohomologyValue::zero();
        else if (*b == 1 && m % 2 == 0)
            expect = s.group.p == e.q ? CohomologyValue::of_dim(1)
                                      : CohomologyValue::zero();
        else
            return fail(s, "betti value does not pin the cell");
        return s.value == expect ? std::string{} : fail(s, "hodge bookkeeping differs");
    }
    if (r == "lefschetz-restriction" && s.what == Step::What::CellValue) {
        const SpaceDescriptor* sp = ctx.space(s.group.sheaf.space);
        if (!sp || sp->kind != SpaceKind::Section) return fail(s, "not a section");
        if (s.group.sheaf.t != 0) return fail(s, "twisted cell");
        if (s.group.p + s.group.sheaf.q >= sp->dim) return fail(s, "not below middle");
        Group up{SheafExpr::omega(sp->parent, s.group.sheaf.q, 0), s.group.p};
        const Step* prem = ctx.premise_value(s, up);
        if (!prem || !(prem->value == s.value)) return fail(s, "premise mismatch");
        return {};
    }
    if (r == "serre-duality") {
        const SpaceDescriptor* sp = ctx.space(s.group.sheaf.space);
        if (!sp) return fail(s, "unknown space");
        Group dual{SheafExpr::omega(s.group.sheaf.space, sp->dim - s.group.sheaf.q,
                                    -s.group.sheaf.t),
                   sp->dim - s.group.p};
        const Step* prem = ctx.premise_value(s, dual);
        if (!prem || !(prem->value == s.value)) return fail(s, "dual premise mismatch");
        return {};
    }
    if (r == "sum-decomposition") {
        if (s.group.sheaf.kind != SheafExpr::Kind::Sum) return fail(s, "not a sum");
        BigInt total = 0;
        for (const SheafExpr& part : s.group.sheaf.summands) {
            const Step* prem = ctx.premise_value(s, Group{part, s.group.p});
            if (!prem) return fail(s, "summand premise missing");
            total += prem->value.dim();
        }
        return s.value == CohomologyValue::of_dim(total) ? std::string{}
                                                         : fail(s, "sum differs");
    }

    // --- exactness: values -------------------------------------------------
    const SES* q = ctx.ses(s.ses_id);
    auto G = [&](const SheafExpr& e, int p) { return Group{e, p}; };

    if (r == "les-flanked-zero") {
        if (!q) return fail(s, "no ses");
        if (!(s.group == G(q->middle, s.degree))) return fail(s, "wrong group");
        if (!ctx.premise_zero(s, G(q->left, s.degree)) ||
            !ctx.premise_zero(s, G(q->right, s.degree)))
            return fail(s, "flanks not proven zero");
        return s.value.is_zero() ? std::string{} : fail(s, "nonzero value");
    }
    if (r == "les-right-zero") {
        if (!q) return fail(s, "no ses");
        if (!(s.group == G(q->right, s.degree))) return fail(s, "wrong group");
        if (!ctx.premise_zero(s, G(q->middle, s.degree)) ||
            !ctx.premise_zero(s, G(q->left, s.degree + 1)))
            return fail(s, "premises not proven zero");
        return s.value.is_zero() ? std::string{} : fail(s, "nonzero value");
    }
    if (r == "les-left-zero") {
        if (!q) return fail(s, "no ses");
        if (!(s.group == G(q->left, s.degree))) return fail(s, "wrong group");
        if (!ctx.premise_zero(s, G(q->middle, s.degree)))
            return fail(s, "middle not proven zero");
        if (s.degree > 0 && !ctx.premise_zero(s, G(q->right, s.degree - 1)))
            return fail(s, "lower right flank not proven zero");
        return s.value.is_zero() ? std::string{} : fail(s, "nonzero value");
    }
    if (r == "les-zero-maps") {
        if (!q) return fail(s, "no ses");
        if (!(s.group == G(q->right, s.degree))) return fail(s, "wrong group");
        if (!ctx.premise_prop(s, MapHandle::les(s.ses_id, LesRole::Middle, s.degree),
                              MapProp::ZeroMap) ||
            !ctx.premise_prop(s, MapHandle::les(s.ses_id, LesRole::Connecting, s.degree),
                              MapProp::ZeroMap))
            return fail(s, "zero-map premises missing");
        return s.value.is_zero() ? std::string{} : fail(s, "nonzero value");
    }

    // --- generic map/value interaction --------------------------------------
    if (r == "map-injective-into-zero") {
        if (!ctx.premise_prop(s, s.map, MapProp::Injective))
            return fail(s, "injectivity premise missing");
        if (!ctx.premise_zero(s, ctx.map_target(s.map)))
            return fail(s, "target not proven zero");
        if (!(s.group == ctx.map_source(s.map))) return fail(s, "wrong group");
        return s.value.is_zero() ? std::string{} : fail(s, "nonzero value");
    }
    if (r == "map-surjective-from-zero") {
        if (!ctx.premise_prop(s, s.map, MapProp::Surjective))
            return fail(s, "surjectivity premise missing");
        if (!ctx.premise_zero(s, ctx.map_source(s.map)))
            return fail(s, "source not proven zero");
        if (!(s.group == ctx.map_target(s.map))) return fail(s, "wrong group");
        return s.value.is_zero() ? std::string{} : fail(s, "nonzero value");
    }
    if (r == "map-transfer-bijective") {
        if (!ctx.premise_prop(s, s.map, MapProp::Bijective))
            return fail(s, "bijectivity premise missing");
        Group src = ctx.map_source(s.map), dst = ctx.map_target(s.map);
        const Step* from = ctx.premise_value(s, src);
        if (!from) from = ctx.premise_value(s, dst);
        if (!from || !(from->value == s.value)) return fail(s, "transfer mismatch");
        if (!(s.group == src) && !(s.group == dst)) return fail(s, "wrong group");
        return {};
    }

    // --- exactness: map properties ------------------------------------------
    if (s.what == Step::What::MapProperty) {
        const MapHandle& m = s.map;
        if (r == "les-inj" || r == "les-surj" || r == "les-iso-left" ||
            r == "les-iso-middle" || r == "les-iso-connecting") {
            if (!q || m.kind != MapHandle::Kind::Les || m.ses_id != s.ses_id)
                return fail(s, "no ses context");
            const int p = m.p;
            // which vanishing premises legitimize which property of which map
            auto need = [&](const SheafExpr& e, int deg) {
                return ctx.premise_zero(s, G(e, deg)) ||
                       (deg < 0); // degrees below zero vanish identically
            };
            switch (m.role) {
                case LesRole::Left:
                    if (s.prop == MapProp::Injective) {
                        if (p > 0 && !need(q->right, p - 1))
                            return fail(s, "H^{p-1}(right) not zero");
                        return {};
                    }
                    if (s.prop == MapProp::Surjective)
                        return need(q->right, p) ? std::string{}
                                                 : fail(s, "H^p(right) not zero");
                    if (s.prop == MapProp::Bijective)
                        return (p == 0 || need(q->right, p - 1)) && need(q->right, p)
                                   ? std::string{}
                                   : fail(s, "right flanks not zero");
                    break;
                case LesRole::Middle:
                    if (s.prop == MapProp::Injective)
                        return need(q->left, p) ? std::string{}
                                                : fail(s, "H^p(left) not zero");
                    if (s.prop == MapProp::Surjective)
                        return need(q->left, p + 1) ? std::string{}
                                                    : fail(s, "H^{p+1}(left) not zero");
                    if (s.prop == MapProp::Bijective)
                        return need(q->left, p) && need(q->left, p + 1)
                                   ? std::string{}
                                   : fail(s, "left flanks not zero");
                    break;
                case LesRole::Connecting:
                    if (s.prop == MapProp::Injective)
                        return need(q->middle, p) ? std::string{}
                                                  : fail(s, "H^p(middle) not zero");
                    if (s.prop == MapProp::Surjective)
                        return need(q->middle, p + 1)
                                   ? std::string{}
                                   : fail(s, "H^{p+1}(middle) not zero");
                    if (s.prop == MapProp::Bijective)
                        return need(q->middle, p) && need(q->middle, p + 1)
                                   ? std::string{}
                                   : fail(s, "middle flanks not zero");
                    break;
            }
            return fail(s, "unrecognized les property");
        }
        if (r == "les-zero-after-surjection") {
            if (m.kind != MapHandle::Kind::Les) return fail(s, "not a les map");
            // the image of a surjection is the kernel of the next map
            MapHandle prev = m.role == LesRole::Middle
                                 ? MapHandle::les(m.ses_id, LesRole::Left, m.p)
                                 : MapHandle::les(m.ses_id, LesRole::Middle, m.p);
            if (s.prop != MapProp::ZeroMap) return fail(s, "wrong property");
            if (m.role == LesRole::Left) return fail(s, "no predecessor in degree");
            return ctx.premise_prop(s, prev, MapProp::Surjective)
                       ? std::string{}
                       : fail(s, "predecessor surjectivity missing");
        }
        if (r == "les-zero-map-trivial") {
            if (m.kind != MapHandle::Kind::Les || s.prop != MapProp::ZeroMap)
                return fail(s, "wrong shape");
            return ctx.premise_zero(s, ctx.map_source(m)) ||
                           ctx.premise_zero(s, ctx.map_target(m))
                       ? std::string{}
                       : fail(s, "neither endpoint proven zero");
        }
        if (r == "les-zero-before-injection") {
            if (m.kind != MapHandle::Kind::Les || s.prop != MapProp::ZeroMap)
                return fail(s, "wrong shape");
            // the kernel of an injection is the image of the previous map
            MapHandle next = m.role == LesRole::Connecting
                                 ? MapHandle::les(m.ses_id, LesRole::Left, m.p + 1)
                                 : (m.role == LesRole::Left
                                        ? MapHandle::les(m.ses_id, LesRole::Middle, m.p)
                                        : MapHandle::les(m.ses_id, LesRole::Connecting,
                                                         m.p));
            return ctx.premise_prop(s, next, MapProp::Injective)
                       ? std::string{}
                       : fail(s, "successor injectivity missing");
        }
        if (r == "les-inj-after-zero-map") {
            if (m.kind != MapHandle::Kind::Les || s.prop != MapProp::Injective)
                return fail(s, "wrong shape");
            MapHandle prev = m.role == LesRole::Middle
                                 ? MapHandle::les(m.ses_id, LesRole::Left, m.p)
                                 : MapHandle::les(m.ses_id, LesRole::Middle, m.p);
            if (m.role == LesRole::Left) return fail(s, "no predecessor in degree");
            return ctx.premise_prop(s, prev, MapProp::ZeroMap)
                       ? std::string{}
                       : fail(s, "predecessor zero-map missing");
        }
        if (r == "les-surj-before-zero-map") {
            if (m.kind != MapHandle::Kind::Les || s.prop != MapProp::Surjective)
                return fail(s, "wrong shape");
            MapHandle next = m.role == LesRole::Left
                                 ? MapHandle::les(m.ses_id, LesRole::Middle, m.p)
                                 : MapHandle::les(m.ses_id, LesRole::Connecting, m.p);
            return ctx.premise_prop(s, next, MapProp::ZeroMap)
                       ? std::string{}
                       : fail(s, "successor zero-map missing");
        }
        if (r == "map-inj-surj-bijective") {
            return ctx.premise_prop(s, m, MapProp::Injective) &&
                           ctx.premise_prop(s, m, MapProp::Surjective)
                       ? std::string{}
                       : fail(s, "premises missing");
        }
        if (r == "dimension-count-bijective") {
            if (!ctx.premise_prop(s, m, MapProp::Injective))
                return fail(s, "injectivity premise missing");
            const Step* sv = ctx.premise_value(s, ctx.map_source(m));
            const Step* dv = ctx.premise_value(s, ctx.map_target(m));
            if (!sv || !dv || sv->value.dim() != dv->value.dim())
                return fail(s, "dimension premises missing or different");
            return {};
        }
        if (r == "hard-lefschetz-injectivity") {
            if (m.kind != MapHandle::Kind::Cupping || s.prop != MapProp::Injective)
                return fail(s, "wrong shape");
            const SpaceDescriptor* sp = ctx.space(m.from_space);
            if (!sp) return fail(s, "unknown space");
            return (m.p - 1) + (m.q - 1) < sp->dim
                       ? std::string{}
                       : fail(s, "outside the hard Lefschetz range");
        }
        if (r == "lefschetz-restriction") {
            if (m.kind != MapHandle::Kind::Restriction || s.prop != MapProp::Bijective)
                return fail(s, "wrong shape");
            const SpaceDescriptor* sx = ctx.space(m.to_space);
            if (!sx || sx->kind != SpaceKind::Section || sx->parent != m.from_space)
                return fail(s, "not a section pair");
            if (m.t != 0) return fail(s, "twisted restriction");
            return m.p + m.q < sx->dim ? std::string{}
                                       : fail(s, "not below the middle dimension");
        }
        if (r == "factor-middle-surjective" || r == "factor-middle-injective") {
            // the cupping composite factors through restriction, the
            // conormal-sequence map, and the restriction-sequence connecting
            // map; recover the canonical factorization and check it
            if (m.kind != MapHandle::Kind::Les) return fail(s, "middle not a les map");
            const SES* conormal = ctx.ses(m.ses_id);
            if (!conormal || conormal->rule != "conormal")
                return fail(s, "middle map not in a conormal sequence");
            const std::string X = conormal->left.space;
            const std::string Y = conormal->middle.ambient;
            const int qq = conormal->middle.q;
            const int pp = m.p + 1;
            if (conormal->left.q != qq - 1 || conormal->left.t != 0)
                return fail(s, "not the untwisted conormal instance");
            if (m.role != LesRole::Left) return fail(s, "middle map role");
            // locate the restriction sequence 0->O^q_Y(0)->O^q_Y(d)->Res->0
            const SpaceDescriptor* sx = ctx.space(X);
            if (!sx) return fail(s, "unknown section");
            int restr_id = -1;
            for (const SES& cand : ctx.trace.sequences)
                if (cand.rule == "restriction" && cand.right == conormal->middle &&
                    cand.left.t == 0)
                    restr_id = cand.id;
            if (restr_id < 0) return fail(s, "restriction sequence not registered");
            MapHandle cup = MapHandle::cupping(Y, X, pp, qq);
            MapHandle r1 = MapHandle::restriction(Y, X, pp - 1, qq - 1, 0);
            MapHandle del = MapHandle::les(restr_id, LesRole::Connecting, pp - 1);
            if (r == "factor-middle-surjective") {
                if (s.prop != MapProp::Surjective) return fail(s, "wrong property");
                return ctx.premise_prop(s, cup, MapProp::Surjective) &&
                               ctx.premise_prop(s, del, MapProp::Injective)
                           ? std::string{}
                           : fail(s, "composite/outer premises missing");
            }
            if (s.prop != MapProp::Injective) return fail(s, "wrong property");
            return ctx.premise_prop(s, cup, MapProp::Injective) &&
                           ctx.premise_prop(s, r1, MapProp::Bijective)
                       ? std::string{}
                       : fail(s, "composite/outer premises missing");
        }
        if (r == "restriction-surjectivity[c<d]" ||
            r == "restriction-surjectivity[c=d]") {
            if (m.kind != MapHandle::Kind::Restriction || s.prop != MapProp::Surjective)
                return fail(s, "wrong shape");
            const SpaceDescriptor* sx = ctx.space(m.to_space);
            const SpaceDescriptor* sy = ctx.space(m.from_space);
            if (!sx || !sy || sx->kind != SpaceKind::Section ||
                sx->parent != m.from_space)
                return fail(s, "not a section pair");
            if (m.p != 0) return fail(s, "only global sections");
            if (m.q >= sy->dim - 1) return fail(s, "q out of range");
            if (r == "restriction-surjectivity[c=d]") {
                if (m.t != sx->d) return fail(s, "twist is not d");
                if (!ctx.premise_zero(s, Group{SheafExpr::omega(m.from_space, m.q, 0), 1}))
                    return fail(s, "H^1 hypothesis missing");
            } else if (m.t >= sx->d) {
                return fail(s, "c < d violated");
            }
            return {};
        }
    }

    return fail(s, "unknown rule");
}

} // namespace

CheckResult check_trace(const ProofTrace& trace,
                        const std::vector<const FactStore*>& stores) {
    CheckResult result;
    Context ctx(trace, stores);
    int last_id = 0;
    for (const Step& s : trace.steps) {
        if (s.id <= last_id) {
            result.ok = false;
            result.errors.push_back("step ids not strictly increasing at " +
                                    std::to_string(s.id));
            return result;
        }
        last_id = s.id;
        for (int pid : s.premise_steps)
            if (pid >= s.id) {
                result.ok = false;
                result.errors.push_back(fail(s, "forward premise reference"));
            }
        std::string err;
        try {
            err = validate(ctx, s);
        } catch (const std::exception& e) {
            err = fail(s, e.what());
        }
        if (!err.empty()) {
            result.ok = false;
            result.errors.push_back(err);
        } else {
            ctx.steps[s.id] = &s;
        }
    }
    for (const auto& c : trace.conclusions) {
        auto it = ctx.steps.find(c.step);
        if (it == ctx.steps.end() || !(it->second->group == c.group) ||
            !(it->second->value == c.value)) {
            result.ok = false;
            result.errors.push_back("conclusion " + c.group.to_string() +
                                    " not backed by a valid step");
        }
    }
    return result;
}

} // namespace fano::trace_check
