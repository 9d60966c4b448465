#include "fanostab/special.hpp"

#include <functional>
#include <sstream>

#include "fanostab/facts.hpp"

namespace fano::special {

namespace {

std::string href(const std::string& id, int p, int q, int t) {
    return "H^" + std::to_string(p) + "(Omega(" + id + "," + std::to_string(q) + "," +
           std::to_string(t) + "))";
}

std::string zref(const std::string& id, int p, int q, int t) {
    return href(id, p, q, t) + "=0";
}

std::string dref(const std::string& id, int p, int q, int t, const CohomologyValue& v) {
    return href(id, p, q, t) + "=" + v.to_string();
}

/// Visits every cell the three conditions constrain, with the value each
/// condition demands.
void for_each_condition_cell(
    int dim, const Window& w,
    const std::function<void(char, const Cell&, const CohomologyValue&)>& fn) {
    for (int p = 1; p < dim; ++p)
        for (int q = 0; q <= dim; ++q) {
            if (p + q == dim) continue;
            for (int t = w.lo; t <= w.hi; ++t) {
                if (t == 0) continue;
                fn('a', Cell{p, q, t}, CohomologyValue::zero());
            }
            if (p != q) fn('b', Cell{p, q, 0}, CohomologyValue::zero());
        }
    for (int p = 0; p <= dim; ++p) {
        if (2 * p == dim) continue;
        fn('c', Cell{p, p, 0}, CohomologyValue::of_dim(1));
    }
}

} // namespace

void Certificate::add(const Cell& c, const CohomologyValue& v, Evidence e) {
    auto it = cells_.find(c);
    if (it != cells_.end()) {
        if (!(it->second.first == v))
            throw Contradiction("certificate cell " + c.to_string() + " on " +
                                space_.id + " assigned twice with different values");
        return;
    }
    cells_[c] = {v, std::move(e)};
}

CohomologyValue Certificate::value(int p, int q, int t) const {
    auto it = cells_.find(Cell{p, q, t});
    return it == cells_.end() ? CohomologyValue::unknown() : it->second.first;
}

const Evidence* Certificate::evidence(int p, int q, int t) const {
    auto it = cells_.find(Cell{p, q, t});
    return it == cells_.end() ? nullptr : &it->second.second;
}

CohomologyTable Certificate::to_table() const {
    CohomologyTable t(space_, window_);
    for (const auto& [cell, cv] : cells_) {
        if (window_.contains(cell.t)) t.set(cell.p, cell.q, cell.t, cv.first);
    }
    return t;
}

Certificate certify_homogeneous(const SpaceDescriptor& space, Window window) {
    CohomologyTable table = weyl_table(space, window);
    SpecialCheck check = is_special(table, space.dim);
    if (!check.ok()) {
        std::string msg = "certify_homogeneous: " + space.id + " is not special";
        if (!check.violations.empty())
            msg += "; first violation at " + check.violations.front().cell.to_string() +
                   " = " + check.violations.front().found.to_string();
        throw std::invalid_argument(msg);
    }
    Certificate cert(space, window, "cell-checked");
    for_each_condition_cell(space.dim, window,
                            [&](char cond, const Cell& c, const CohomologyValue& v) {
                                cert.add(c, v, Evidence{cond, "cell-checked[weyl]", {}});
                            });
    return cert;
}

Certificate assume_special(const SpaceDescriptor& space, Window window,
                           const std::string& justification) {
    if (space.dim < 3)
        throw std::invalid_argument("assume_special: dimension >= 3 required");
    Certificate cert(space, window, "assumed");
    for_each_condition_cell(space.dim, window,
                            [&](char cond, const Cell& c, const CohomologyValue& v) {
                                cert.add(c, v, Evidence{cond, "assumed", {justification}});
                            });
    return cert;
}

namespace {

/// Shared scaffolding for both propagation routes: premise bookkeeping
/// against the parent certificate plus the Kodaira-Nakano / Serre zones.
struct Propagator {
    const Certificate& y;
    Certificate cert;
    // interior condition-(a) cells derived by the twist induction, including
    // twists above the certificate window needed only as Serre-dual premises
    std::map<Cell, std::pair<CohomologyValue, Evidence>> interior;

    Propagator(const Certificate& y_, Certificate cert_) : y(y_), cert(std::move(cert_)) {}

    [[nodiscard]] int dim() const { return cert.space().dim; }

    /// Fetches a parent cell the propagation relies on; the parent window
    /// must cover it and the parent must actually warrant it.
    CohomologyValue need_y(int p, int q, int t) {
        if (!y.window().contains(t))
            throw FootprintError("propagation footprint leaves " + y.space().id +
                                 " window at " + href(y.space().id, p, q, t));
        CohomologyValue v = y.value(p, q, t);
        if (!v.known())
            throw FootprintError("parent certificate " + y.space().id +
                                 " does not warrant " + href(y.space().id, p, q, t));
        return v;
    }

    void add_interior(const Cell& c, Evidence e) {
        if (cert.window().contains(c.t)) cert.add(c, CohomologyValue::zero(), e);
        interior[c] = {CohomologyValue::zero(), std::move(e)};
    }

    /// Zones not touched by the induction: Kodaira-Nakano for the two
    /// definite quadrants, Serre duality for p+q > dim.
    void close_zones() {
        const int n = dim();
        const Window& w = cert.window();
        for_each_condition_cell(n, w, [&](char cond, const Cell& c, const CohomologyValue&) {
            if (cond != 'a' || cert.value(c.p, c.q, c.t).known()) return;
            if ((c.t > 0 && c.p + c.q > n) || (c.t < 0 && c.p + c.q < n)) {
                cert.add(c, CohomologyValue::zero(), Evidence{'a', "kodaira-nakano", {}});
                return;
            }
            if (c.p + c.q > n) {
                const Cell dual{n - c.p, n - c.q, -c.t};
                auto it = interior.find(dual);
                if (it == interior.end())
                    throw std::logic_error("missing Serre-dual interior cell " +
                                           dual.to_string());
                cert.add(c, CohomologyValue::zero(),
                         Evidence{'a', "serre-duality",
                                  {zref(cert.space().id, dual.p, dual.q, dual.t)}});
            }
        });
    }
};

} // namespace

Certificate propagate_section(const Certificate& cert_Y, int d, Window window,
                              const std::string& id) {
    if (d < 1) throw std::invalid_argument("propagate_section: d >= 1 required");
    const int N = cert_Y.space().dim; // ambient dimension
    const int n = N - 1;              // section dimension
    if (n < 3)
        throw std::invalid_argument(
            "propagate_section: section has dimension < 3, outside the definition");
    if (window.lo > 0 || window.hi < 0)
        throw std::invalid_argument("propagate_section: window must contain 0");

    const std::string xid =
        id.empty() ? cert_Y.space().id + ".s" + std::to_string(d) : id;
    SpaceDescriptor X = section_space(cert_Y.space(), xid, d);
    Propagator prop(cert_Y, Certificate(X, window, "rule-backed"));
    const std::string& yid = cert_Y.space().id;

    // t = 0: restriction isomorphism below the middle, Serre duality above.
    for_each_condition_cell(n, Window{0, 0}, [&](char cond, const Cell& c,
                                                 const CohomologyValue& want) {
        if (c.t != 0) return;
        if (c.p + c.q < n) {
            CohomologyValue got = prop.need_y(c.p, c.q, 0);
            if (!(got == want))
                throw Contradiction("parent certificate breaks condition (" +
                                    std::string(1, cond) + ") at " +
                                    href(yid, c.p, c.q, 0));
            prop.cert.add(c, want,
                          Evidence{cond, "lefschetz-restriction",
                                   {dref(yid, c.p, c.q, 0, got)}});
        } else if (c.p + c.q > n) {
            prop.cert.add(c, want,
                          Evidence{cond, "serre-duality",
                                   {dref(xid, n - c.p, n - c.q, 0, want)}});
        }
    });

    // Twist induction for the interior cells 0 < p, p+q < n, t > 0, in
    // lexicographic (t, q, p) order; twists above the window are derived too
    // so Serre duals inside the window always have a premise.
    const int t_max = std::max(window.hi, -window.lo);
    for (int tau = 1; tau <= t_max; ++tau) {
        for (int q = 0; q <= n; ++q) {
            for (int p = 1; p + q < n; ++p) {
                const Cell cell{p, q, tau};
                const int t0 = tau - d;
                if (q == 0) {
                    // cohomology of 0 -> O_Y(t0) -> O_Y(tau) -> O_X(tau) -> 0
                    CohomologyValue a = prop.need_y(p, 0, tau);
                    CohomologyValue b = prop.need_y(p + 1, 0, t0);
                    if (!a.is_zero() || !b.is_zero())
                        throw Contradiction("structure-sheaf flanks nonzero at " +
                                            href(yid, p, 0, tau));
                    prop.add_interior(cell, Evidence{'a', "structure-sheaf-sequence",
                                                     {zref(yid, p, 0, tau),
                                                      zref(yid, p + 1, 0, t0)}});
                    continue;
                }
                if (tau != d) {
                    // generic step: both ambient flanks vanish by (a), the
                    // inductive cell by Kodaira-Nakano or an earlier step
                    CohomologyValue fa = prop.need_y(p, q, tau);
                    CohomologyValue fb = prop.need_y(p + 1, q, t0);
                    if (!fa.is_zero() || !fb.is_zero())
                        throw Contradiction("ambient flank nonzero at " +
                                            href(yid, p, q, tau));
                    std::vector<std::string> prem{zref(yid, p, q, tau),
                                                  zref(yid, p + 1, q, t0)};
                    if (t0 < 0) {
                        prem.push_back("kodaira-nakano:" + href(xid, p + 1, q - 1, t0));
                    } else { // t0 > 0 here since tau != d
                        const Cell prev{p + 1, q - 1, t0};
                        if ((p + 1) + (q - 1) < n) {
                            if (!prop.interior.count(prev))
                                throw std::logic_error("induction order violated at " +
                                                       prev.to_string());
                            prem.push_back(zref(xid, prev.p, prev.q, prev.t));
                        }
                        // (p+1)+(q-1) = p+q = n is impossible inside this loop
                    }
                    prop.add_interior(cell, Evidence{'a', "section-induction[t!=0]",
                                                     std::move(prem)});
                } else {
                    // boundary twist tau = d: the cupping ladder. The
                    // composite cup with c1(O(d)) on Y is injective by hard
                    // Lefschetz and matches dimensions on the untwisted
                    // diagonal, so the conormal-sequence map out of
                    // H^p(Omega^{q-1}_X) is onto and its next-degree twin is
                    // injective; exactness then kills the cell.
                    CohomologyValue fa = prop.need_y(p, q, d);
                    CohomologyValue fb = prop.need_y(p + 1, q, d);
                    CohomologyValue ya = prop.need_y(p, q - 1, 0);
                    CohomologyValue yb = prop.need_y(p + 1, q, 0);
                    if (!fa.is_zero() || !fb.is_zero())
                        throw Contradiction("ambient flank nonzero at " +
                                            href(yid, p, q, d));
                    if (!(ya.dim() == yb.dim()))
                        throw Contradiction("cupping endpoints differ at " +
                                            href(yid, p, q - 1, 0));
                    prop.add_interior(
                        cell,
                        Evidence{'a', "section-induction[t=0,cupping]",
                                 {zref(yid, p, q, d), zref(yid, p + 1, q, d),
                                  dref(yid, p, q - 1, 0, ya), dref(yid, p + 1, q, 0, yb),
                                  "hard-lefschetz-injectivity",
                                  "lefschetz-restriction"}});
                }
            }
        }
    }

    prop.close_zones();
    auto parent = std::make_shared<Certificate>(cert_Y);
    prop.cert.set_parent(parent);
    return prop.cert;
}

Certificate propagate_cyclic(const Certificate& cert_Y, int k, int d, Window window,
                             const std::string& id) {
    if (k < 1 || d < 1)
        throw std::invalid_argument("propagate_cyclic: k >= 1 and d >= 1 required");
    const int N = cert_Y.space().dim;
    if (N < 3) throw std::invalid_argument("propagate_cyclic: dimension >= 3 required");
    if (window.lo > 0 || window.hi < 0)
        throw std::invalid_argument("propagate_cyclic: window must contain 0");

    const std::string xid = id.empty() ? cert_Y.space().id + ".c" + std::to_string(k) +
                                             "x" + std::to_string(d)
                                       : id;
    SpaceDescriptor X = cover_space(cert_Y.space(), xid, k, d);
    const std::string& yid = cert_Y.space().id;

    if (k == 1) {
        // degenerate cover: X is Y itself under a new name
        Certificate cert(X, window, "rule-backed");
        for (const auto& [cell, cv] : cert_Y.cells()) {
            if (!window.contains(cell.t)) continue;
            if (!cert_Y.window().contains(cell.t)) continue;
            cert.add(cell, cv.first,
                     Evidence{cv.second.condition, "degenerate-cover",
                              {dref(yid, cell.p, cell.q, cell.t, cv.first)}});
        }
        cert.set_parent(std::make_shared<Certificate>(cert_Y));
        return cert;
    }

    Propagator prop(cert_Y, Certificate(X, window, "rule-backed"));
    const int kd = k * d;

    // t = 0: the pushforward of forms on X decomposes over Y and the
    // untwisted summand carries all the cohomology, identifying the Hodge
    // data of X with that of Y below the middle dimension.
    for_each_condition_cell(N, Window{0, 0}, [&](char cond, const Cell& c,
                                                 const CohomologyValue& want) {
        if (c.t != 0) return;
        if (c.p == 0 && c.q == 0) {
            prop.cert.add(c, want, Evidence{cond, "connected", {}});
            return;
        }
        if (c.p + c.q < N) {
            CohomologyValue got = prop.need_y(c.p, c.q, 0);
            if (!(got == want))
                throw Contradiction("parent certificate breaks condition (" +
                                    std::string(1, cond) + ") at " +
                                    href(yid, c.p, c.q, 0));
            prop.cert.add(c, want,
                          Evidence{cond, "cover-pushforward-identification",
                                   {dref(yid, c.p, c.q, 0, got),
                                    "kodaira-nakano:" + href(xid, c.p, c.q - 1, -kd),
                                    "kodaira-nakano:" + href(xid, c.p + 1, c.q - 1, -kd)}});
        } else if (c.p + c.q > N) {
            prop.cert.add(c, want,
                          Evidence{cond, "serre-duality",
                                   {dref(xid, N - c.p, N - c.q, 0, want)}});
        }
    });

    const int t_max = std::max(window.hi, -window.lo);
    for (int tau = 1; tau <= t_max; ++tau) {
        for (int q = 0; q <= N; ++q) {
            for (int p = 1; p + q < N; ++p) {
                const Cell cell{p, q, tau};
                const int t0 = tau - kd;
                if (q == 0) {
                    // pushforward of O_X splits as a sum of negative twists
                    std::vector<std::string> prem;
                    for (int j = 0; j < k; ++j) {
                        CohomologyValue v = prop.need_y(p, 0, tau - j * d);
                        if (!v.is_zero())
                            throw Contradiction("cover structure summand nonzero at " +
                                                href(yid, p, 0, tau - j * d));
                        prem.push_back(zref(yid, p, 0, tau - j * d));
                    }
                    prop.add_interior(cell, Evidence{'a', "cover-structure-decomposition",
                                                     std::move(prem)});
                    continue;
                }
                if (tau != kd) {
                    // pushforward layer vanishes away from the two special
                    // twists; footprint spans the decomposition's twists
                    if (!cert_Y.window().contains(tau) ||
                        !cert_Y.window().contains(tau - kd))
                        throw FootprintError("propagation footprint leaves " + yid +
                                             " window at twist span [" +
                                             std::to_string(tau - kd) + "," +
                                             std::to_string(tau) + "]");
                    std::vector<std::string> prem{
                        "cover-pushforward-vanishing:H^" + std::to_string(p) +
                        "(Push(" + xid + "," + std::to_string(q) + "," +
                        std::to_string(tau) + "))"};
                    if (t0 < 0) {
                        prem.push_back("kodaira-nakano:" + href(xid, p + 1, q - 1, t0));
                    } else if (t0 > 0) {
                        const Cell prev{p + 1, q - 1, t0};
                        if ((p + 1) + (q - 1) < N) {
                            if (!prop.interior.count(prev))
                                throw std::logic_error("induction order violated at " +
                                                       prev.to_string());
                            prem.push_back(zref(xid, prev.p, prev.q, prev.t));
                        }
                    }
                    prop.add_interior(cell,
                                      Evidence{'a', "cover-induction[t!=0]", std::move(prem)});
                } else {
                    // tau = kd: cupping boundary. The map out of
                    // H^p(Omega^{q-1}_X) into the pushforward layer is
                    // injective cupping; the pushforward injects into
                    // H^p(Omega^{q-1}_Y) whose dimension equals the X side,
                    // so the map is onto and exactness kills the cell.
                    CohomologyValue xdim = prop.cert.value(p, q - 1, 0);
                    CohomologyValue ydim = prop.need_y(p, q - 1, 0);
                    if (!xdim.known())
                        throw std::logic_error("cover cupping needs t=0 layer first at " +
                                               cell.to_string());
                    if (!(xdim.dim() == ydim.dim()))
                        throw Contradiction("cover cupping endpoint mismatch at " +
                                            href(yid, p, q - 1, 0));
                    prop.add_interior(
                        cell, Evidence{'a', "cover-induction[t=0,cupping]",
                                       {dref(xid, p, q - 1, 0, xdim),
                                        dref(yid, p, q - 1, 0, ydim),
                                        "cover-pushforward-injectivity",
                                        "cover-cupping-injectivity"}});
                }
            }
        }
    }

    prop.close_zones();
    prop.cert.set_parent(std::make_shared<Certificate>(cert_Y));
    return prop.cert;
}

std::string Certificate::serialize() const {
    std::ostringstream out;
    out << "certificate " << space_.id << "\n";
    out << "basis " << basis_ << "\n";
    out << "window " << window_.lo << " " << window_.hi << "\n";
    if (parent_) out << "parent " << parent_->space().id << "\n";

    // ancestor descriptors first so section/cover lines can be validated
    std::vector<const SpaceDescriptor*> chain;
    for (const Certificate* c = parent_.get(); c; c = c->parent().get())
        chain.push_back(&c->space());
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
        out << space_line(**it) << "\n";
    out << space_line(space_) << "\n";

    for (const auto& [cell, cv] : cells_) {
        const auto& [value, ev] = cv;
        if (value.is_zero())
            out << "vanish " << space_.id << " p " << cell.p << " q " << cell.q << " t "
                << cell.t << "\n";
        else
            out << "dim " << space_.id << " p " << cell.p << " q " << cell.q << " t "
                << cell.t << " = " << value.dim().str() << "\n";
        out << "evidence " << space_.id << " p " << cell.p << " q " << cell.q << " t "
            << cell.t << " cond " << ev.condition << " rule " << ev.rule;
        if (!ev.premises.empty()) {
            out << " premises ";
            for (std::size_t i = 0; i < ev.premises.size(); ++i) {
                if (i) out << ",";
                out << ev.premises[i];
            }
        }
        out << "\n";
    }
    return out.str();
}

Certificate Certificate::parse(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::string id, basis = "rule-backed";
    std::optional<Window> window;
    std::map<std::string, SpaceDescriptor> spaces;
    std::map<Cell, CohomologyValue> values;
    std::map<Cell, Evidence> evidences;

    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::vector<std::string> tok;
        std::string t;
        while (ss >> t) {
            if (t[0] == '#') break;
            tok.push_back(t);
        }
        if (tok.empty()) continue;
        const std::string& kw = tok[0];
        auto want = [&](bool cond, const std::string& msg) {
            if (!cond) throw ParseError(source, lineno, msg);
        };
        try {
            if (kw == "certificate") {
                want(tok.size() == 2, "malformed certificate line");
                id = tok[1];
            } else if (kw == "basis") {
                want(tok.size() == 2, "malformed basis line");
                basis = tok[1];
            } else if (kw == "window") {
                want(tok.size() == 3, "malformed window line");
                window = Window{std::stoi(tok[1]), std::stoi(tok[2])};
            } else if (kw == "parent") {
                // reference only; the parent certificate itself is not inlined
            } else if (kw == "space") {
                SpaceDescriptor s = parse_space_tokens(
                    std::vector<std::string>(tok.begin() + 1, tok.end()), spaces, source,
                    lineno);
                spaces[s.id] = s;
            } else if (kw == "vanish" || kw == "dim") {
                const bool isdim = kw == "dim";
                want(tok.size() == (isdim ? 10u : 8u), "malformed cell line");
                Cell c{std::stoi(tok[3]), std::stoi(tok[5]), std::stoi(tok[7])};
                values[c] = isdim ? CohomologyValue::of_dim(BigInt(tok[9]))
                                  : CohomologyValue::zero();
            } else if (kw == "evidence") {
                want(tok.size() >= 12 && tok[8] == "cond" && tok[10] == "rule",
                     "malformed evidence line");
                Cell c{std::stoi(tok[3]), std::stoi(tok[5]), std::stoi(tok[7])};
                Evidence ev;
                ev.condition = tok[9][0];
                ev.rule = tok[11];
                if (tok.size() >= 14 && tok[12] == "premises") {
                    std::istringstream ps(tok[13]);
                    std::string prem;
                    while (std::getline(ps, prem, ',')) ev.premises.push_back(prem);
                }
                evidences[c] = std::move(ev);
            } else {
                throw ParseError(source, lineno, "unknown directive '" + kw + "'");
            }
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(source, lineno, e.what());
        }
    }

    if (id.empty()) throw ParseError(source, 0, "missing certificate line");
    if (!window) throw ParseError(source, 0, "missing window line");
    auto it = spaces.find(id);
    if (it == spaces.end()) throw ParseError(source, 0, "missing space line for " + id);

    Certificate cert(it->second, *window, basis);
    for (const auto& [cell, v] : values) {
        auto ev = evidences.find(cell);
        cert.add(cell, v, ev == evidences.end() ? Evidence{'a', "unstated", {}}
                                                : ev->second);
    }
    return cert;
}

} // namespace fano::special
