#include "fanostab/chase.hpp"

#include <sstream>
#include <tuple>

namespace fano::chase {

SheafExpr SheafExpr::omega(std::string space, int q, int t) {
    SheafExpr e;
    e.kind = Kind::Omega;
    e.space = std::move(space);
    e.q = q;
    e.t = t;
    return e;
}

SheafExpr SheafExpr::restricted(std::string ambient, std::string section, int q, int t) {
    SheafExpr e;
    e.kind = Kind::Restricted;
    e.ambient = std::move(ambient);
    e.space = std::move(section);
    e.q = q;
    e.t = t;
    return e;
}

SheafExpr SheafExpr::pushforward(std::string cover, int q, int t) {
    SheafExpr e;
    e.kind = Kind::Pushforward;
    e.space = std::move(cover);
    e.q = q;
    e.t = t;
    return e;
}

SheafExpr SheafExpr::sum(std::vector<SheafExpr> parts) {
    SheafExpr e;
    e.kind = Kind::Sum;
    e.summands = std::move(parts);
    return e;
}

std::string SheafExpr::to_string() const {
    switch (kind) {
        case Kind::Omega:
            return "Omega(" + space + "," + std::to_string(q) + "," + std::to_string(t) +
                   ")";
        case Kind::Restricted:
            return "Res(" + ambient + "," + space + "," + std::to_string(q) + "," +
                   std::to_string(t) + ")";
        case Kind::Pushforward:
            return "Push(" + space + "," + std::to_string(q) + "," + std::to_string(t) +
                   ")";
        case Kind::Sum: {
            std::string s = "Sum[";
            for (std::size_t i = 0; i < summands.size(); ++i) {
                if (i) s += "+";
                s += summands[i].to_string();
            }
            return s + "]";
        }
    }
    return "?";
}

namespace {

std::vector<std::string> split_args(const std::string& inner) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : inner) {
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

int to_int(const std::string& s) {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad integer '" + s + "'");
    return v;
}

} // namespace

SheafExpr SheafExpr::parse(const std::string& text) {
    auto open = text.find('(');
    if (open == std::string::npos || text.back() != ')')
        throw std::invalid_argument("cannot parse sheaf expression '" + text + "'");
    const std::string head = text.substr(0, open);
    auto args = split_args(text.substr(open + 1, text.size() - open - 2));
    if (head == "Omega" && args.size() == 3)
        return omega(args[0], to_int(args[1]), to_int(args[2]));
    if (head == "O" && args.size() == 2) return structure(args[0], to_int(args[1]));
    if (head == "Res" && args.size() == 4)
        return restricted(args[0], args[1], to_int(args[2]), to_int(args[3]));
    if (head == "Push" && args.size() == 3)
        return pushforward(args[0], to_int(args[1]), to_int(args[2]));
    throw std::invalid_argument("cannot parse sheaf expression '" + text + "'");
}

bool SheafExpr::operator==(const SheafExpr& o) const {
    return kind == o.kind && space == o.space && ambient == o.ambient && q == o.q &&
           t == o.t && summands == o.summands;
}

bool SheafExpr::operator<(const SheafExpr& o) const {
    auto key = std::tie(kind, space, ambient, q, t);
    auto okey = std::tie(o.kind, o.space, o.ambient, o.q, o.t);
    if (key != okey) return key < okey;
    return summands < o.summands;
}

std::string to_string(MapProp p) {
    switch (p) {
        case MapProp::Injective: return "injective";
        case MapProp::Surjective: return "surjective";
        case MapProp::Bijective: return "bijective";
        case MapProp::ZeroMap: return "zero-map";
    }
    return "?";
}

MapHandle MapHandle::les(int ses_id, LesRole role, int p) {
    MapHandle m;
    m.kind = Kind::Les;
    m.ses_id = ses_id;
    m.role = role;
    m.p = p;
    return m;
}

MapHandle MapHandle::restriction(std::string Y, std::string X, int p, int q, int t) {
    MapHandle m;
    m.kind = Kind::Restriction;
    m.from_space = std::move(Y);
    m.to_space = std::move(X);
    m.p = p;
    m.q = q;
    m.t = t;
    return m;
}

MapHandle MapHandle::cupping(std::string Y, std::string X, int p, int q) {
    MapHandle m;
    m.kind = Kind::Cupping;
    m.from_space = std::move(Y);
    m.to_space = std::move(X);
    m.p = p;
    m.q = q;
    return m;
}

std::string MapHandle::to_string() const {
    switch (kind) {
        case Kind::Les: {
            const char* role_name = role == LesRole::Left      ? "left"
                                    : role == LesRole::Middle  ? "middle"
                                                               : "connecting";
            return "les(ses#" + std::to_string(ses_id) + "," + role_name + ",p=" +
                   std::to_string(p) + ")";
        }
        case Kind::Restriction:
            return "restrict(" + from_space + "->" + to_space + ",p=" +
                   std::to_string(p) + ",q=" + std::to_string(q) + ",t=" +
                   std::to_string(t) + ")";
        case Kind::Cupping:
            return "cup(" + from_space + "/" + to_space + ",p=" + std::to_string(p) +
                   ",q=" + std::to_string(q) + ")";
    }
    return "?";
}

bool MapHandle::operator<(const MapHandle& o) const {
    return std::tie(kind, ses_id, role, p, from_space, to_space, q, t) <
           std::tie(o.kind, o.ses_id, o.role, o.p, o.from_space, o.to_space, o.q, o.t);
}

bool MapHandle::operator==(const MapHandle& o) const {
    return !(*this < o) && !(o < *this);
}

std::string ProofTrace::serialize() const {
    std::ostringstream out;
    out << "trace " << name << "\n";
    for (const auto& s : spaces) out << "  " << space_line(s) << "\n";
    for (const auto& q : sequences) out << "  " << q.to_string() << "\n";
    for (const auto& s : steps) {
        out << "  step " << s.id << ": " << s.statement << " by " << s.rule;
        if (!s.premise_steps.empty() || !s.premise_refs.empty()) {
            out << " using [";
            bool first = true;
            for (int ps : s.premise_steps) {
                if (!first) out << ", ";
                out << "step " << ps;
                first = false;
            }
            for (const auto& r : s.premise_refs) {
                if (!first) out << ", ";
                out << r;
                first = false;
            }
            out << "]";
        }
        out << "\n";
    }
    for (const auto& c : conclusions)
        out << "  conclude " << c.group.to_string() << " = " << c.value.to_string()
            << " by step " << c.step << "\n";
    return out.str();
}

} // namespace fano::chase
