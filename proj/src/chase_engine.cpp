#include "fanostab/chase.hpp"

#include <algorithm>
#include <cassert>

#include "fanostab/weyl.hpp"

namespace fano::chase {

namespace {

std::string cell_fact_key(const std::string& id, int p, int q, int t,
                          const CohomologyValue& v) {
    std::string base = id + " p " + std::to_string(p) + " q " + std::to_string(q) +
                       " t " + std::to_string(t);
    if (v.is_zero()) return "vanish " + base;
    return "dim " + base + " = " + v.dim().str();
}

std::string weyl_fact_key(const std::string& id, int p, int q, int t) {
    return "weyl " + id + " p " + std::to_string(p) + " q " + std::to_string(q) + " t " +
           std::to_string(t);
}

} // namespace

ChaseEnv::ChaseEnv(std::vector<const FactStore*> stores, std::set<FactKey> suppressed)
    : stores_(std::move(stores)), suppressed_(std::move(suppressed)) {
    for (const FactStore* s : stores_)
        for (const auto& [id, sp] : s->spaces()) add_space(sp);
}

void ChaseEnv::add_space(const SpaceDescriptor& s) {
    auto it = spaces_.find(s.id);
    if (it != spaces_.end()) {
        if (it->second.dim != s.dim || it->second.kind != s.kind)
            throw Contradiction("space " + s.id + " registered inconsistently");
        return;
    }
    spaces_[s.id] = s;
}

const SpaceDescriptor* ChaseEnv::find_space(const std::string& id) const {
    auto it = spaces_.find(id);
    return it == spaces_.end() ? nullptr : &it->second;
}

const SpaceDescriptor& ChaseEnv::space(const std::string& id) const {
    const SpaceDescriptor* s = find_space(id);
    if (!s) throw std::invalid_argument("unknown space '" + id + "'");
    return *s;
}

int ChaseEnv::register_ses(const std::string& rule, const SheafExpr& left,
                           const SheafExpr& middle, const SheafExpr& right) {
    for (const SES& s : sequences_)
        if (s.rule == rule && s.left == left && s.middle == middle && s.right == right)
            return s.id;

    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("ses[" + rule + "] bookkeeping: " + why + " in 0->" +
                                    left.to_string() + "->" + middle.to_string() + "->" +
                                    right.to_string() + "->0");
    };
    using K = SheafExpr::Kind;

    if (rule == "restriction") {
        if (left.kind != K::Omega || middle.kind != K::Omega ||
            right.kind != K::Restricted)
            fail("wrong shapes");
        const SpaceDescriptor& x = space(right.space);
        if (x.kind != SpaceKind::Section || x.parent != right.ambient)
            fail(right.space + " is not a section of " + right.ambient);
        if (left.space != right.ambient || middle.space != right.ambient)
            fail("ambient mismatch");
        if (left.q != middle.q || middle.q != right.q) fail("q mismatch");
        if (middle.t != left.t + x.d || right.t != middle.t) fail("twist mismatch");
    } else if (rule == "conormal") {
        if (left.kind != K::Omega || middle.kind != K::Restricted ||
            right.kind != K::Omega)
            fail("wrong shapes");
        const SpaceDescriptor& x = space(left.space);
        if (x.kind != SpaceKind::Section || x.parent != middle.ambient)
            fail(left.space + " is not a section of " + middle.ambient);
        if (right.space != left.space || middle.space != left.space)
            fail("section mismatch");
        if (middle.q != left.q + 1 || right.q != left.q + 1) fail("q mismatch");
        if (middle.t != left.t + x.d || right.t != middle.t) fail("twist mismatch");
    } else if (rule == "cover-conormal") {
        if (left.kind != K::Omega || middle.kind != K::Pushforward ||
            right.kind != K::Omega)
            fail("wrong shapes");
        const SpaceDescriptor& x = space(left.space);
        if (x.kind != SpaceKind::CyclicCover) fail(left.space + " is not a cover");
        if (middle.space != left.space || right.space != left.space)
            fail("cover mismatch");
        if (middle.q != left.q + 1 || right.q != middle.q) fail("q mismatch");
        const int kd = x.sheets * x.d;
        if (middle.t != left.t + kd || right.t != middle.t) fail("twist mismatch");
    } else if (rule == "pushforward") {
        if (left.kind != K::Sum || middle.kind != K::Pushforward ||
            right.kind != K::Sum)
            fail("wrong shapes");
        const SpaceDescriptor& x = space(middle.space);
        if (x.kind != SpaceKind::CyclicCover) fail(middle.space + " is not a cover");
        const int k = x.sheets, d = x.d;
        if (static_cast<int>(left.summands.size()) != k ||
            static_cast<int>(right.summands.size()) != k)
            fail("summand count != k");
        for (int j = 0; j < k; ++j) {
            const SheafExpr& l = left.summands[std::size_t(j)];
            const SheafExpr& r = right.summands[std::size_t(j)];
            if (l.kind != K::Omega || l.space != x.parent || l.q != middle.q ||
                l.t != middle.t - j * d)
                fail("left summand " + std::to_string(j));
            if (r.kind != K::Omega || r.space != x.parent || r.q != middle.q - 1 ||
                r.t != middle.t - (j + 1) * d)
                fail("right summand " + std::to_string(j));
        }
    } else {
        fail("unknown rule name");
    }

    SES s{static_cast<int>(sequences_.size()), rule, left, middle, right};
    sequences_.push_back(s);
    return s.id;
}

Group ChaseEnv::les_source(int ses_id, LesRole role, int p) const {
    const SES& s = sequences_[std::size_t(ses_id)];
    switch (role) {
        case LesRole::Left: return Group{s.left, p};
        case LesRole::Middle: return Group{s.middle, p};
        case LesRole::Connecting: return Group{s.right, p};
    }
    throw std::logic_error("bad role");
}

Group ChaseEnv::les_target(int ses_id, LesRole role, int p) const {
    const SES& s = sequences_[std::size_t(ses_id)];
    switch (role) {
        case LesRole::Left: return Group{s.middle, p};
        case LesRole::Middle: return Group{s.right, p};
        case LesRole::Connecting: return Group{s.left, p + 1};
    }
    throw std::logic_error("bad role");
}

Group ChaseEnv::map_source(const MapHandle& m) const {
    switch (m.kind) {
        case MapHandle::Kind::Les: return les_source(m.ses_id, m.role, m.p);
        case MapHandle::Kind::Restriction:
            return Group{SheafExpr::omega(m.from_space, m.q, m.t), m.p};
        case MapHandle::Kind::Cupping:
            return Group{SheafExpr::omega(m.from_space, m.q - 1, 0), m.p - 1};
    }
    throw std::logic_error("bad map kind");
}

Group ChaseEnv::map_target(const MapHandle& m) const {
    switch (m.kind) {
        case MapHandle::Kind::Les: return les_target(m.ses_id, m.role, m.p);
        case MapHandle::Kind::Restriction:
            return Group{SheafExpr::omega(m.to_space, m.q, m.t), m.p};
        case MapHandle::Kind::Cupping:
            return Group{SheafExpr::omega(m.from_space, m.q, 0), m.p};
    }
    throw std::logic_error("bad map kind");
}

CohomologyValue ChaseEnv::known(const Group& g) const {
    auto it = values_.find(g);
    return it == values_.end() ? CohomologyValue::unknown() : it->second.first;
}

std::optional<int> ChaseEnv::value_step(const Group& g) const {
    auto it = values_.find(g);
    if (it == values_.end()) return std::nullopt;
    return it->second.second;
}

void ChaseEnv::record(Step& step) {
    step.id = next_step_id();
    steps_.push_back(step);
}

void ChaseEnv::assert_value(const Group& g, const CohomologyValue& v, Step step) {
    if (!v.known()) return;
    auto it = values_.find(g);
    if (it != values_.end()) {
        if (!(it->second.first == v)) {
            std::string where =
                step.ses_id >= 0 ? " in " + sequences_[std::size_t(step.ses_id)].to_string()
                                 : "";
            throw Contradiction("contradiction on " + g.to_string() + ": step " +
                                std::to_string(it->second.second) + " says " +
                                it->second.first.to_string() + ", rule '" + step.rule +
                                "' derives " + v.to_string() + where);
        }
        return;
    }
    step.what = Step::What::CellValue;
    step.group = g;
    step.value = v;
    if (step.statement.empty())
        step.statement = g.to_string() + " = " + v.to_string();
    record(step);
    values_[g] = {v, step.id};
}

void ChaseEnv::add_map_prop(const MapHandle& m, MapProp prop, Step step) {
    auto& entry = props_[m];
    if (entry.count(prop)) return;
    step.what = Step::What::MapProperty;
    step.map = m;
    step.prop = prop;
    if (step.statement.empty())
        step.statement = m.to_string() + " is " + chase::to_string(prop);
    record(step);
    entry[prop] = step.id;
}

bool ChaseEnv::has_prop(const MapHandle& m, MapProp prop) const {
    auto it = props_.find(m);
    if (it == props_.end()) return false;
    if (it->second.count(prop)) return true;
    if (prop == MapProp::Injective || prop == MapProp::Surjective)
        return it->second.count(MapProp::Bijective) > 0;
    return false;
}

std::optional<BigInt> ChaseEnv::betti(const std::string& id, int i) {
    std::string leaf;
    return betti_leaf(id, i, leaf);
}

std::optional<BigInt> ChaseEnv::betti_leaf(const std::string& id, int i,
                                           std::string& leaf_key) {
    if (i < 0) return BigInt(0);
    const SpaceDescriptor* sp = find_space(id);
    if (!sp) return std::nullopt;
    if (i > 2 * sp->dim) return BigInt(0);
    const std::string key = "betti " + id + " b" + std::to_string(i);
    if (!suppressed_.count(key)) {
        for (const FactStore* s : stores_)
            if (const BettiFact* f = s->betti(id, i)) {
                leaf_key = key;
                return f->value;
            }
    } else {
        misses_.insert(key);
    }
    if (sp->homogeneous()) {
        const std::string wkey = "weyl-betti " + id + " b" + std::to_string(i);
        if (suppressed_.count(wkey)) {
            misses_.insert(wkey);
            return std::nullopt;
        }
        leaf_key = wkey;
        return weyl::grassmann_betti(sp->k, sp->n, i);
    }
    if (sp->kind == SpaceKind::Section && i <= sp->dim - 1)
        return betti_leaf(sp->parent, i, leaf_key); // weak Lefschetz below the middle
    return std::nullopt;
}

CohomologyValue ChaseEnv::lookup(const Group& g) { return lookup_inner(g, 0, true); }

CohomologyValue ChaseEnv::lookup_inner(const Group& g, int depth, bool allow_serre) {
    if (auto it = values_.find(g); it != values_.end()) return it->second.first;
    if (depth > 32) return CohomologyValue::unknown();

    const SheafExpr& e = g.sheaf;

    if (e.kind == SheafExpr::Kind::Sum) {
        BigInt total = 0;
        std::vector<int> premise_steps;
        for (const SheafExpr& part : e.summands) {
            CohomologyValue v = lookup_inner(Group{part, g.p}, depth + 1, allow_serre);
            if (!v.known()) return CohomologyValue::unknown();
            total += v.dim();
            premise_steps.push_back(values_.at(Group{part, g.p}).second);
        }
        Step step;
        step.rule = "sum-decomposition";
        step.premise_steps = premise_steps;
        assert_value(g, CohomologyValue::of_dim(total), step);
        return known(g);
    }

    if (e.kind != SheafExpr::Kind::Omega) {
        // restricted and pushforward layers carry no providers; they are
        // derived through the registered sequences
        return CohomologyValue::unknown();
    }

    const SpaceDescriptor* sp = find_space(e.space);
    if (!sp) {
        if (depth == 0) misses_.insert("space " + e.space);
        return CohomologyValue::unknown();
    }

    // degrees and form degrees outside [0, dim] carry nothing
    if (g.p < 0 || g.p > sp->dim || e.q < 0 || e.q > sp->dim) {
        Step step;
        step.rule = "range";
        step.premise_refs = {"0<=p<=dim,0<=q<=dim on " + sp->id};
        assert_value(g, CohomologyValue::zero(), step);
        return known(g);
    }

    // 1. explicit facts from the loaded stores; on a homogeneous space every
    //    injected fact must agree with the exact computation
    for (const FactStore* s : stores_) {
        if (const CellFact* f = s->cell(e.space, g.p, e.q, e.t)) {
            const std::string key = cell_fact_key(e.space, g.p, e.q, e.t, f->value);
            if (suppressed_.count(key)) {
                misses_.insert(key);
                break;
            }
            if (sp->homogeneous()) {
                BigInt exact = weyl::hodge_cell(sp->k, sp->n, g.p, e.q, e.t);
                if (!(f->value == CohomologyValue::of_dim(exact)))
                    throw Contradiction("fact '" + key + "' (" + f->provenance +
                                        ") disagrees with the exact value " +
                                        exact.str() + " on " + e.space);
            }
            Step step;
            step.rule = "file-fact";
            step.premise_refs = {key, f->provenance};
            assert_value(g, f->value, step);
            return known(g);
        }
    }

    // 2. exact computation on homogeneous spaces
    if (sp->homogeneous()) {
        const std::string key = weyl_fact_key(e.space, g.p, e.q, e.t);
        if (suppressed_.count(key)) {
            misses_.insert(key);
            return CohomologyValue::unknown();
        }
        Step step;
        step.rule = "weyl";
        step.premise_refs = {key};
        assert_value(g, CohomologyValue::of_dim(weyl::hodge_cell(sp->k, sp->n, g.p, e.q, e.t)),
                     step);
        return known(g);
    }

    // 3. Kodaira-Nakano zones
    if (kodaira_nakano_zone(sp->dim, g.p, e.q, e.t).is_zero()) {
        Step step;
        step.rule = "kodaira-nakano";
        step.premise_refs = {"dim " + sp->id + " = " + std::to_string(sp->dim)};
        assert_value(g, CohomologyValue::zero(), step);
        return known(g);
    }

    // 4. Hodge bookkeeping from Betti numbers at t = 0
    if (e.t == 0) {
        const int m = g.p + e.q;
        std::string leaf;
        if (auto b = betti_leaf(e.space, m, leaf)) {
            std::optional<CohomologyValue> v;
            if (*b == 0)
                v = CohomologyValue::zero();
            else if (*b == 1 && m % 2 == 0)
                v = g.p == e.q ? CohomologyValue::of_dim(1) : CohomologyValue::zero();
            if (v) {
                Step step;
                step.rule = "hodge-betti";
                step.premise_refs = {leaf.empty() ? "betti " + e.space + " b" +
                                                        std::to_string(m)
                                                  : leaf,
                                     "b" + std::to_string(m) + "=" + b->str() + " on " +
                                         e.space};
                assert_value(g, *v, step);
                return known(g);
            }
        }
    }

    // 5. Lefschetz restriction from the ambient space, below the middle
    if (e.t == 0 && sp->kind == SpaceKind::Section && g.p + e.q < sp->dim) {
        Group up{SheafExpr::omega(sp->parent, e.q, 0), g.p};
        CohomologyValue v = lookup_inner(up, depth + 1, allow_serre);
        if (v.known()) {
            Step step;
            step.rule = "lefschetz-restriction";
            step.premise_steps = {values_.at(up).second};
            step.premise_refs = {"p+q<dim " + sp->id};
            assert_value(g, v, step);
            return known(g);
        }
    }

    // 6. Serre duality
    if (allow_serre) {
        Group dual{SheafExpr::omega(e.space, sp->dim - e.q, -e.t), sp->dim - g.p};
        CohomologyValue v = lookup_inner(dual, depth + 1, false);
        if (v.known()) {
            Step step;
            step.rule = "serre-duality";
            step.premise_steps = {values_.at(dual).second};
            assert_value(g, v, step);
            return known(g);
        }
    }

    if (depth == 0) misses_.insert(g.to_string());
    return CohomologyValue::unknown();
}

int ChaseEnv::les_pass(int ses_id) {
    const SES& s = sequences_[std::size_t(ses_id)];
    int max_dim = 0;
    auto bump = [&](const SheafExpr& e) {
        if (e.kind == SheafExpr::Kind::Sum) {
            for (const auto& part : e.summands)
                if (const SpaceDescriptor* sp = find_space(part.space))
                    max_dim = std::max(max_dim, sp->dim);
        } else if (const SpaceDescriptor* sp = find_space(e.space)) {
            max_dim = std::max(max_dim, sp->dim);
        }
    };
    bump(s.left);
    bump(s.middle);
    bump(s.right);

    int changed = 0;
    auto step_of = [&](const Group& g) { return values_.at(g).second; };

    for (int p = 0; p <= max_dim + 1; ++p) {
        Group A{s.left, p}, B{s.middle, p}, C{s.right, p};
        Group A1{s.left, p + 1}, B1{s.middle, p + 1}, Cm{s.right, p - 1};
        CohomologyValue a = lookup(A), b = lookup(B), c = lookup(C);
        CohomologyValue a1 = lookup(A1), b1 = lookup(B1);
        CohomologyValue cm = p == 0 ? CohomologyValue::zero() : lookup(Cm);

        auto ctx = [&](Step& st) {
            st.ses_id = ses_id;
            st.degree = p;
        };
        auto claim = [&](const Group& g, const CohomologyValue& v,
                         const std::string& rule, std::vector<int> prem) {
            CohomologyValue cur = known(g);
            if (cur.known() && cur == v) return;
            Step st;
            st.rule = rule;
            st.premise_steps = std::move(prem);
            ctx(st);
            assert_value(g, v, st); // throws on a conflicting known value
            ++changed;
        };
        auto mark = [&](LesRole role, int deg, MapProp prop, const std::string& rule,
                        std::vector<int> prem) {
            MapHandle m = MapHandle::les(ses_id, role, deg);
            if (has_prop(m, prop)) return;
            Step st;
            st.rule = rule;
            st.premise_steps = std::move(prem);
            ctx(st);
            add_map_prop(m, prop, st);
            ++changed;
        };

        // values forced by exactness
        if (a.is_zero() && c.is_zero())
            claim(B, CohomologyValue::zero(), "les-flanked-zero",
                  {step_of(A), step_of(C)});
        if (b.is_zero() && a1.is_zero())
            claim(C, CohomologyValue::zero(), "les-right-zero",
                  {step_of(B), step_of(A1)});
        if (b.is_zero() && (p == 0 || cm.is_zero())) {
            std::vector<int> prem{step_of(B)};
            if (p > 0) prem.push_back(step_of(Cm));
            claim(A, CohomologyValue::zero(), "les-left-zero", std::move(prem));
        }

        // isomorphisms when both flanks vanish
        if (a.is_zero() && a1.is_zero()) {
            mark(LesRole::Middle, p, MapProp::Bijective, "les-iso-middle",
                 {step_of(A), step_of(A1)});
        }
        if (b.is_zero() && b1.is_zero()) {
            mark(LesRole::Connecting, p, MapProp::Bijective, "les-iso-connecting",
                 {step_of(B), step_of(B1)});
        }
        if ((p == 0 || cm.is_zero()) && c.is_zero()) {
            std::vector<int> prem{step_of(C)};
            if (p > 0) prem.insert(prem.begin(), step_of(Cm));
            mark(LesRole::Left, p, MapProp::Bijective, "les-iso-left", std::move(prem));
        }

        // single-sided properties
        if (a.is_zero())
            mark(LesRole::Middle, p, MapProp::Injective, "les-inj", {step_of(A)});
        if (a1.is_zero())
            mark(LesRole::Middle, p, MapProp::Surjective, "les-surj", {step_of(A1)});
        if (p == 0 || cm.is_zero()) {
            std::vector<int> prem;
            if (p > 0) prem.push_back(step_of(Cm));
            mark(LesRole::Left, p, MapProp::Injective, "les-inj", std::move(prem));
        }
        if (c.is_zero())
            mark(LesRole::Left, p, MapProp::Surjective, "les-surj", {step_of(C)});
        if (b.is_zero())
            mark(LesRole::Connecting, p, MapProp::Injective, "les-inj", {step_of(B)});
        if (b1.is_zero())
            mark(LesRole::Connecting, p, MapProp::Surjective, "les-surj", {step_of(B1)});

        // zero-map propagation through exactness
        MapHandle f = MapHandle::les(ses_id, LesRole::Left, p);
        MapHandle gmap = MapHandle::les(ses_id, LesRole::Middle, p);
        MapHandle delta = MapHandle::les(ses_id, LesRole::Connecting, p);
        MapHandle f1 = MapHandle::les(ses_id, LesRole::Left, p + 1);
        auto prop_step = [&](const MapHandle& m, MapProp pr) {
            return props_.at(m).count(pr) ? props_.at(m).at(pr)
                                          : props_.at(m).at(MapProp::Bijective);
        };
        if (has_prop(f, MapProp::Surjective))
            mark(LesRole::Middle, p, MapProp::ZeroMap, "les-zero-after-surjection",
                 {prop_step(f, MapProp::Surjective)});
        if (has_prop(gmap, MapProp::Surjective))
            mark(LesRole::Connecting, p, MapProp::ZeroMap, "les-zero-after-surjection",
                 {prop_step(gmap, MapProp::Surjective)});
        if (has_prop(f1, MapProp::Injective))
            mark(LesRole::Connecting, p, MapProp::ZeroMap, "les-zero-before-injection",
                 {prop_step(f1, MapProp::Injective)});
        // a map whose source or target vanishes is the zero map
        if (a.is_zero()) {
            mark(LesRole::Left, p, MapProp::ZeroMap, "les-zero-map-trivial",
                 {step_of(A)});
            if (p > 0)
                mark(LesRole::Connecting, p - 1, MapProp::ZeroMap,
                     "les-zero-map-trivial", {step_of(A)});
        }
        if (c.is_zero()) {
            mark(LesRole::Middle, p, MapProp::ZeroMap, "les-zero-map-trivial",
                 {step_of(C)});
            mark(LesRole::Connecting, p, MapProp::ZeroMap, "les-zero-map-trivial",
                 {step_of(C)});
        }
        if (has_prop(gmap, MapProp::ZeroMap))
            mark(LesRole::Connecting, p, MapProp::Injective, "les-inj-after-zero-map",
                 {prop_step(gmap, MapProp::ZeroMap)});
        if (has_prop(delta, MapProp::ZeroMap))
            mark(LesRole::Middle, p, MapProp::Surjective, "les-surj-before-zero-map",
                 {prop_step(delta, MapProp::ZeroMap)});
        if (has_prop(f, MapProp::ZeroMap))
            mark(LesRole::Middle, p, MapProp::Injective, "les-inj-after-zero-map",
                 {prop_step(f, MapProp::ZeroMap)});
        if (has_prop(gmap, MapProp::ZeroMap) && has_prop(delta, MapProp::ZeroMap))
            claim(C, CohomologyValue::zero(), "les-zero-maps",
                  {prop_step(gmap, MapProp::ZeroMap), prop_step(delta, MapProp::ZeroMap)});
    }
    return changed;
}

int ChaseEnv::generic_map_pass() {
    int changed = 0;
    // props_ can grow while we iterate; work over a snapshot of keys
    std::vector<MapHandle> handles;
    handles.reserve(props_.size());
    for (const auto& [m, _] : props_) handles.push_back(m);

    for (const MapHandle& m : handles) {
        Group src = map_source(m), dst = map_target(m);
        CohomologyValue sv = lookup(src), dv = lookup(dst);
        const auto& entry = props_.at(m);
        // premise step for a property, falling back to the bijectivity step
        auto prop_step = [&](MapProp pr) {
            auto it = entry.find(pr);
            return it != entry.end() ? it->second : entry.at(MapProp::Bijective);
        };

        if (has_prop(m, MapProp::Injective) && dv.is_zero() && !sv.known()) {
            Step st;
            st.rule = "map-injective-into-zero";
            st.premise_steps = {values_.at(dst).second, prop_step(MapProp::Injective)};
            st.map = m;
            assert_value(src, CohomologyValue::zero(), st);
            ++changed;
        }
        if (has_prop(m, MapProp::Surjective) && sv.is_zero() && !dv.known()) {
            Step st;
            st.rule = "map-surjective-from-zero";
            st.premise_steps = {values_.at(src).second, prop_step(MapProp::Surjective)};
            st.map = m;
            assert_value(dst, CohomologyValue::zero(), st);
            ++changed;
        }
        if (has_prop(m, MapProp::Bijective)) {
            if (sv.known() && !dv.known()) {
                Step st;
                st.rule = "map-transfer-bijective";
                st.premise_steps = {values_.at(src).second, prop_step(MapProp::Bijective)};
                st.map = m;
                assert_value(dst, sv, st);
                ++changed;
            } else if (dv.known() && !sv.known()) {
                Step st;
                st.rule = "map-transfer-bijective";
                st.premise_steps = {values_.at(dst).second, prop_step(MapProp::Bijective)};
                st.map = m;
                assert_value(src, dv, st);
                ++changed;
            }
        }
        if (!has_prop(m, MapProp::Bijective) && has_prop(m, MapProp::Injective) &&
            has_prop(m, MapProp::Surjective)) {
            Step st;
            st.rule = "map-inj-surj-bijective";
            st.premise_steps = {entry.at(MapProp::Injective),
                                entry.at(MapProp::Surjective)};
            add_map_prop(m, MapProp::Bijective, st);
            ++changed;
        }
        if (!has_prop(m, MapProp::Bijective) && has_prop(m, MapProp::Injective) &&
            sv.known() && dv.known() && sv.dim() == dv.dim()) {
            Step st;
            st.rule = "dimension-count-bijective";
            st.premise_steps = {values_.at(src).second, values_.at(dst).second,
                                prop_step(MapProp::Injective)};
            add_map_prop(m, MapProp::Bijective, st);
            ++changed;
        }
    }
    return changed;
}

int ChaseEnv::factorization_pass() {
    int changed = 0;
    for (const Factorization& f : factorizations_) {
        assert(f.parts.size() == 3);
        const MapHandle &m1 = f.parts[0], &m2 = f.parts[1], &m3 = f.parts[2];
        auto prop_step = [&](const MapHandle& m, MapProp pr) {
            const auto& e = props_.at(m);
            return e.count(pr) ? e.at(pr) : e.at(MapProp::Bijective);
        };
        if (has_prop(f.composite, MapProp::Surjective) &&
            has_prop(m3, MapProp::Injective) && !has_prop(m2, MapProp::Surjective)) {
            Step st;
            st.rule = "factor-middle-surjective";
            st.premise_steps = {prop_step(f.composite, MapProp::Surjective),
                                prop_step(m3, MapProp::Injective)};
            st.premise_refs = {f.composite.to_string() + " = " + m3.to_string() + " . " +
                               m2.to_string() + " . " + m1.to_string()};
            add_map_prop(m2, MapProp::Surjective, st);
            ++changed;
        }
        if (has_prop(f.composite, MapProp::Injective) &&
            has_prop(m1, MapProp::Bijective) && !has_prop(m2, MapProp::Injective)) {
            Step st;
            st.rule = "factor-middle-injective";
            st.premise_steps = {prop_step(f.composite, MapProp::Injective),
                                prop_step(m1, MapProp::Bijective)};
            st.premise_refs = {f.composite.to_string() + " = " + m3.to_string() + " . " +
                               m2.to_string() + " . " + m1.to_string()};
            add_map_prop(m2, MapProp::Injective, st);
            ++changed;
        }
    }
    return changed;
}

void ChaseEnv::saturate() {
    for (;;) {
        int changed = 0;
        for (const SES& s : sequences_) changed += les_pass(s.id);
        changed += generic_map_pass();
        changed += factorization_pass();
        if (changed == 0) break;
    }
}

bool ChaseEnv::use_fact_cell(const std::string& id, int p, int q, int t,
                             const std::optional<CohomologyValue>& expected) {
    for (const FactStore* s : stores_) {
        if (const CellFact* f = s->cell(id, p, q, t)) {
            const std::string key = cell_fact_key(id, p, q, t, f->value);
            if (suppressed_.count(key) || (expected && !(f->value == *expected))) {
                misses_.insert(expected ? cell_fact_key(id, p, q, t, *expected) : key);
                return false;
            }
            Step step;
            step.rule = "use-fact";
            step.premise_refs = {key, f->provenance};
            assert_value(Group{SheafExpr::omega(id, q, t), p}, f->value, step);
            return true;
        }
    }
    misses_.insert(cell_fact_key(id, p, q, t,
                                 expected ? *expected : CohomologyValue::zero()));
    return false;
}

void ChaseEnv::add_cupping(const std::string& Y, const std::string& X, int p, int q) {
    const SpaceDescriptor& sx = space(X);
    const SpaceDescriptor& sy = space(Y);
    if (sx.kind != SpaceKind::Section || sx.parent != Y)
        throw std::invalid_argument("add_cupping: " + X + " is not a section of " + Y);
    const int d = sx.d;

    const int conormal = register_ses(
        "conormal", SheafExpr::omega(X, q - 1, 0), SheafExpr::restricted(Y, X, q, d),
        SheafExpr::omega(X, q, d));
    const int restr = register_ses("restriction", SheafExpr::omega(Y, q, 0),
                                   SheafExpr::omega(Y, q, d),
                                   SheafExpr::restricted(Y, X, q, d));

    MapHandle cup = MapHandle::cupping(Y, X, p, q);
    MapHandle r = MapHandle::restriction(Y, X, p - 1, q - 1, 0);
    MapHandle u = MapHandle::les(conormal, LesRole::Left, p - 1);
    MapHandle del = MapHandle::les(restr, LesRole::Connecting, p - 1);
    factorizations_.push_back(Factorization{cup, {r, u, del}});

    if ((p - 1) + (q - 1) < sy.dim) {
        Step st;
        st.rule = "hard-lefschetz-injectivity";
        st.premise_refs = {"(p-1)+(q-1)=" + std::to_string(p + q - 2) + "<dim " + Y};
        add_map_prop(cup, MapProp::Injective, st);
    }
    if ((p - 1) + (q - 1) < sx.dim) {
        Step st;
        st.rule = "lefschetz-restriction";
        st.premise_refs = {"(p-1)+(q-1)=" + std::to_string(p + q - 2) + "<dim " + X,
                           "t=0"};
        add_map_prop(r, MapProp::Bijective, st);
    }
}

bool ChaseEnv::restriction_surjectivity(const std::string& Y, const std::string& X,
                                        int q, int c) {
    const SpaceDescriptor& sx = space(X);
    const SpaceDescriptor& sy = space(Y);
    if (sx.kind != SpaceKind::Section || sx.parent != Y)
        throw std::invalid_argument("restriction_surjectivity: " + X +
                                    " is not a section of " + Y);
    const int d = sx.d;
    if (c > d)
        throw std::invalid_argument("restriction_surjectivity: c <= d required, got c=" +
                                    std::to_string(c) + " d=" + std::to_string(d));
    if (q >= sy.dim - 1)
        throw std::invalid_argument("restriction_surjectivity: q < dim Y - 1 required");

    Step st;
    st.premise_refs = {"q<dim" + Y + "-1", "c<=d"};
    if (c == d) {
        Group hyp{SheafExpr::omega(Y, q, 0), 1};
        CohomologyValue v = lookup(hyp);
        if (!v.known()) {
            misses_.insert(hyp.to_string());
            return false;
        }
        if (!v.is_zero()) return false;
        st.rule = "restriction-surjectivity[c=d]";
        st.premise_steps = {values_.at(hyp).second};
        st.premise_refs.push_back("cupping-injectivity");
    } else {
        st.rule = "restriction-surjectivity[c<d]";
        st.premise_refs.push_back("kodaira-nakano on both obstruction cells");
    }
    add_map_prop(MapHandle::restriction(Y, X, 0, q, c), MapProp::Surjective, st);
    return true;
}

std::vector<std::string> ChaseEnv::misses() const {
    return {misses_.begin(), misses_.end()};
}

ProofTrace ChaseEnv::trace(const std::string& name) const {
    ProofTrace t;
    t.name = name;
    for (const auto& [id, s] : spaces_) t.spaces.push_back(s);
    t.sequences = sequences_;
    t.steps = steps_;
    return t;
}

bool derive_vanishing(ChaseEnv& env, const std::string& space_id, int p, int q, int t,
                      int depth) {
    Group g{SheafExpr::omega(space_id, q, t), p};
    CohomologyValue v = env.lookup(g);
    if (v.known()) return v.is_zero();
    if (depth <= 0) return false;
    const SpaceDescriptor* sp = env.find_space(space_id);
    if (!sp) return false;

    if (sp->kind == SpaceKind::Section) {
        const std::string& Y = sp->parent;
        const int d = sp->d;
        // quotient presentation through the conormal-wedge sequence
        env.register_ses("conormal", SheafExpr::omega(space_id, q - 1, t - d),
                         SheafExpr::restricted(Y, space_id, q, t),
                         SheafExpr::omega(space_id, q, t));
        env.register_ses("restriction", SheafExpr::omega(Y, q, t - d),
                         SheafExpr::omega(Y, q, t),
                         SheafExpr::restricted(Y, space_id, q, t));
        derive_vanishing(env, Y, p, q, t, depth - 1);
        derive_vanishing(env, Y, p + 1, q, t - d, depth - 1);
        if (q >= 1) {
            if (t - d == 0) {
                // the inductive cell sits at twist zero where the Hodge
                // diagonal is allowed to be nonzero; cupping ladders make
                // the maps around it injective resp. surjective instead
                env.add_cupping(Y, space_id, p + 2, q);
                env.add_cupping(Y, space_id, p + 1, q);
            } else {
                derive_vanishing(env, space_id, p + 1, q - 1, t - d, depth - 1);
            }
        }
        env.saturate();
        if (env.lookup(g).is_zero()) return true;

        // subbundle presentation: global twisted q-forms inject into the
        // restricted ambient (q+1)-forms one twist up
        if (p == 0 && q + 1 <= env.space(Y).dim) {
            env.register_ses("conormal", SheafExpr::omega(space_id, q, t),
                             SheafExpr::restricted(Y, space_id, q + 1, t + d),
                             SheafExpr::omega(space_id, q + 1, t + d));
            env.register_ses("restriction", SheafExpr::omega(Y, q + 1, t),
                             SheafExpr::omega(Y, q + 1, t + d),
                             SheafExpr::restricted(Y, space_id, q + 1, t + d));
            derive_vanishing(env, Y, 0, q + 1, t + d, depth - 1);
            derive_vanishing(env, Y, 1, q + 1, t, depth - 1);
            env.saturate();
        }
        return env.lookup(g).is_zero();
    }

    if (sp->kind == SpaceKind::CyclicCover) {
        const std::string& Y = sp->parent;
        const int k = sp->sheets, d = sp->d, kd = k * d;
        std::vector<SheafExpr> left, right;
        for (int j = 0; j < k; ++j)
            left.push_back(SheafExpr::omega(Y, q, t - j * d));
        for (int j = 1; j <= k; ++j)
            right.push_back(SheafExpr::omega(Y, q - 1, t - j * d));
        env.register_ses("pushforward", SheafExpr::sum(left),
                         SheafExpr::pushforward(space_id, q, t), SheafExpr::sum(right));
        env.register_ses("cover-conormal", SheafExpr::omega(space_id, q - 1, t - kd),
                         SheafExpr::pushforward(space_id, q, t),
                         SheafExpr::omega(space_id, q, t));
        for (int j = 0; j < k; ++j) derive_vanishing(env, Y, p, q, t - j * d, depth - 1);
        for (int j = 1; j <= k; ++j)
            derive_vanishing(env, Y, p, q - 1, t - j * d, depth - 1);
        if (q >= 1) derive_vanishing(env, space_id, p + 1, q - 1, t - kd, depth - 1);
        env.saturate();
        return env.lookup(g).is_zero();
    }

    return false;
}

} // namespace fano::chase
