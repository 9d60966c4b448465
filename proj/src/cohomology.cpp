#include "fanostab/cohomology.hpp"

#include "fanostab/weyl.hpp"

namespace fano {

SpaceDescriptor projective_space(const std::string& id, int n) {
    if (n < 1) throw std::invalid_argument("projective_space: n >= 1 required");
    SpaceDescriptor s;
    s.id = id;
    s.kind = SpaceKind::Projective;
    s.dim = n;
    s.index = n + 1;
    s.degree = 1;
    s.k = 0;
    s.n = n;
    return s;
}

SpaceDescriptor grassmannian_space(const std::string& id, int k, int n) {
    SpaceDescriptor s;
    s.id = id;
    s.kind = k == 0 ? SpaceKind::Projective : SpaceKind::Grassmannian;
    s.dim = weyl::grassmann_dim(k, n);
    s.index = n + 1;
    s.degree = weyl::grassmann_degree(k, n);
    s.k = k;
    s.n = n;
    return s;
}

SpaceDescriptor section_space(const SpaceDescriptor& parent, const std::string& id, int d) {
    if (d < 1) throw std::invalid_argument("section_space: d >= 1 required");
    if (parent.dim < 2) throw std::invalid_argument("section_space: parent too small");
    SpaceDescriptor s;
    s.id = id;
    s.kind = SpaceKind::Section;
    s.dim = parent.dim - 1;
    s.index = parent.index - d;
    s.degree = parent.degree * d;
    s.parent = parent.id;
    s.d = d;
    return s;
}

SpaceDescriptor cover_space(const SpaceDescriptor& parent, const std::string& id,
                            int sheets, int d) {
    if (sheets < 1 || d < 1)
        throw std::invalid_argument("cover_space: sheets >= 1, d >= 1 required");
    SpaceDescriptor s;
    s.id = id;
    s.kind = SpaceKind::CyclicCover;
    s.dim = parent.dim;
    s.index = parent.index - (sheets - 1) * d; // K_X = O(-s + (k-1)d)
    s.degree = parent.degree * sheets;
    s.parent = parent.id;
    s.d = d;
    s.sheets = sheets;
    return s;
}

void CohomologyTable::set(int p, int q, int t, const CohomologyValue& v) {
    if (!v.known()) return;
    Cell c{p, q, t};
    auto it = cells_.find(c);
    if (it != cells_.end() && it->second.known() && !(it->second == v))
        throw Contradiction("table cell " + c.to_string() + " on " + space_.id +
                            ": " + it->second.to_string() + " vs " + v.to_string());
    cells_[c] = v;
}

CohomologyValue kodaira_nakano_zone(int dim, int p, int q, int t) {
    if ((t > 0 && p + q > dim) || (t < 0 && p + q < dim))
        return CohomologyValue::zero();
    return CohomologyValue::unknown();
}

CohomologyTable serre_close(const CohomologyTable& table) {
    CohomologyTable out = table;
    const int n = table.space().dim;
    for (const auto& [cell, value] : table.cells()) {
        if (!value.known()) continue;
        const Cell dual{n - cell.p, n - cell.q, -cell.t};
        if (!table.window().contains(dual.t)) continue;
        const CohomologyValue dv = table.get(dual.p, dual.q, dual.t);
        if (dv.known()) {
            if (!(dv == value))
                throw Contradiction("Serre duality violated on " + table.space().id +
                                    ": cell " + cell.to_string() + " = " +
                                    value.to_string() + " but dual " +
                                    dual.to_string() + " = " + dv.to_string());
        } else {
            out.set(dual.p, dual.q, dual.t, value);
        }
    }
    return out;
}

CohomologyTable weyl_table(const SpaceDescriptor& space, Window window) {
    if (!space.homogeneous())
        throw std::invalid_argument("weyl_table: space " + space.id +
                                    " is not a Grassmannian or projective space");
    CohomologyTable out(space, window);
    const int N = space.dim;
    for (int q = 0; q <= N; ++q) {
        for (int t = window.lo; t <= window.hi; ++t) {
            auto coh = weyl::grassmann_cohomology(space.k, space.n, q, t);
            for (int p = 0; p <= N; ++p) {
                auto it = coh.find(p);
                out.set(p, q, t, it == coh.end() ? CohomologyValue::zero()
                                                 : CohomologyValue::of_dim(it->second));
            }
        }
    }
    return out;
}

namespace {

BigInt ambient_chi(const CohomologyTable& ambient, int q, int t) {
    const int N = ambient.space().dim;
    if (q < 0 || q > N) return 0;
    if (!ambient.window().contains(t))
        throw FootprintError("euler_recursion: twist " + std::to_string(t) +
                             " outside ambient window of " + ambient.space().id);
    BigInt chi = 0;
    for (int p = 0; p <= N; ++p) {
        CohomologyValue v = ambient.get(p, q, t);
        if (!v.known())
            throw FootprintError("euler_recursion: ambient cell " +
                                 Cell{p, q, t}.to_string() + " unknown");
        chi += (p % 2 == 0) ? v.dim() : -v.dim();
    }
    return chi;
}

// chi(O^q of the intersection of the first m degrees, twisted by t)
BigInt chi_rec(const CohomologyTable& ambient, const std::vector<int>& degrees,
               std::size_t m, int q, int t,
               std::map<std::tuple<std::size_t, int, int>, BigInt>& memo) {
    if (q < 0) return 0;
    if (m == 0) return ambient_chi(ambient, q, t);
    auto key = std::make_tuple(m, q, t);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const int d = degrees[m - 1];
    // chi of the restriction to X of q-forms of the previous level Y
    BigInt restricted = chi_rec(ambient, degrees, m - 1, q, t, memo) -
                        chi_rec(ambient, degrees, m - 1, q, t - d, memo);
    BigInt chi = restricted - chi_rec(ambient, degrees, m, q - 1, t - d, memo);
    memo[key] = chi;
    return chi;
}

} // namespace

BigInt euler_recursion(const CohomologyTable& ambient,
                       const std::vector<int>& degrees, int q, int t) {
    for (int d : degrees)
        if (d < 1) throw std::invalid_argument("euler_recursion: degrees must be >= 1");
    std::map<std::tuple<std::size_t, int, int>, BigInt> memo;
    return chi_rec(ambient, degrees, degrees.size(), q, t, memo);
}

} // namespace fano
