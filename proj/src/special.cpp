#include "fanostab/special.hpp"

namespace fano::special {

FlennerValue flenner_predicate(int n, int p, int q, int t) {
    if (p < 0 || p > n || q < 0 || q > n)
        throw std::invalid_argument("flenner_predicate: p,q out of range");
    FlennerValue v;
    const bool interior = p > 0 && p < n && p + q != n;
    if (interior && p != q) v.zero = true;           // (B)(a)
    if (interior && t != 0) v.zero = true;           // (B)(b)
    if (p + q > n && t > q - p) v.zero = true;       // (B)(c)
    if (p + q < n && t < q - p) v.zero = true;       // (B)(d)
    if (!v.zero && p == q && t == 0 && 2 * p != n) v.diagonal_one = true; // (A)
    return v;
}

SpecialCheck is_special(const CohomologyTable& table, int dim) {
    if (!table.window().contains(0))
        throw std::invalid_argument("is_special: window must contain t = 0");
    SpecialCheck out;
    auto record = [&](char cond, const Cell& c, const CohomologyValue& want) {
        const CohomologyValue got = table.get(c.p, c.q, c.t);
        if (!got.known()) {
            out.missing.push_back(c);
            return;
        }
        if (!(got == want)) out.violations.push_back(Violation{cond, c, got});
    };

    for (int p = 1; p < dim; ++p)
        for (int q = 0; q <= dim; ++q) {
            if (p + q == dim) continue;
            for (int t = table.window().lo; t <= table.window().hi; ++t) {
                if (t == 0) continue;
                record('a', Cell{p, q, t}, CohomologyValue::zero()); // (a)
            }
            if (p != q) record('b', Cell{p, q, 0}, CohomologyValue::zero()); // (b)
        }
    for (int p = 0; p <= dim; ++p) {
        if (2 * p == dim) continue;
        record('c', Cell{p, p, 0}, CohomologyValue::of_dim(1)); // (c)
    }

    if (!out.violations.empty())
        out.status = SpecialStatus::NotSpecial;
    else if (!out.missing.empty())
        out.status = SpecialStatus::Insufficient;
    else
        out.status = SpecialStatus::Special;
    return out;
}

} // namespace fano::special
