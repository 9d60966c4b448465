#include "fanostab/facts.hpp"

#include <fstream>
#include <sstream>

namespace fano {

void FactStore::add_space(const SpaceDescriptor& s) {
    auto it = spaces_.find(s.id);
    if (it != spaces_.end()) {
        const SpaceDescriptor& old = it->second;
        if (old.dim != s.dim || old.index != s.index || old.kind != s.kind)
            throw Contradiction("space " + s.id + " redeclared inconsistently");
        return;
    }
    spaces_[s.id] = s;
}

void FactStore::add_cell(const std::string& id, int p, int q, int t,
                         const CohomologyValue& v, const std::string& provenance) {
    if (provenance.empty())
        throw std::invalid_argument("fact for " + id + " lacks provenance");
    CellKey key{id, p, q, t};
    auto it = cells_.find(key);
    if (it != cells_.end()) {
        if (!(it->second.value == v))
            throw Contradiction("contradictory facts for " + id + " " +
                                Cell{p, q, t}.to_string() + ": " +
                                it->second.value.to_string() + " (" +
                                it->second.provenance + ") vs " + v.to_string() +
                                " (" + provenance + ")");
        return;
    }
    cells_[key] = CellFact{v, provenance};
}

void FactStore::add_betti(const std::string& id, int i, const BigInt& b,
                          const std::string& provenance) {
    if (provenance.empty())
        throw std::invalid_argument("betti fact for " + id + " lacks provenance");
    BettiKey key{id, i};
    auto it = betti_.find(key);
    if (it != betti_.end()) {
        if (it->second.value != b)
            throw Contradiction("contradictory betti facts for " + id + " b" +
                                std::to_string(i));
        return;
    }
    betti_[key] = BettiFact{b, provenance};
}

const SpaceDescriptor* FactStore::space(const std::string& id) const {
    auto it = spaces_.find(id);
    return it == spaces_.end() ? nullptr : &it->second;
}

const CellFact* FactStore::cell(const std::string& id, int p, int q, int t) const {
    auto it = cells_.find(CellKey{id, p, q, t});
    return it == cells_.end() ? nullptr : &it->second;
}

const BettiFact* FactStore::betti(const std::string& id, int i) const {
    auto it = betti_.find(BettiKey{id, i});
    return it == betti_.end() ? nullptr : &it->second;
}

void FactStore::merge(const FactStore& other) {
    for (const auto& [id, s] : other.spaces_) add_space(s);
    for (const auto& [k, f] : other.cells_)
        add_cell(std::get<0>(k), std::get<1>(k), std::get<2>(k), std::get<3>(k),
                 f.value, f.provenance);
    for (const auto& [k, f] : other.betti_)
        add_betti(k.first, k.second, f.value, f.provenance);
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
        if (tok[0] == '#') break;
        out.push_back(tok);
    }
    return out;
}

int parse_int(const std::string& tok, const std::string& src, int line) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(src, line, "expected integer, got '" + tok + "'");
    }
}

} // namespace

SpaceDescriptor parse_space_tokens(const std::vector<std::string>& tok,
                                   const std::map<std::string, SpaceDescriptor>& known,
                                   const std::string& src, int line) {
    if (tok.empty()) throw ParseError(src, line, "space: missing id");
    const std::string& id = tok[0];
    if (tok.size() == 3 && tok[1] == "projective")
        return projective_space(id, parse_int(tok[2], src, line));
    if (tok.size() == 4 && tok[1] == "grassmannian")
        return grassmannian_space(id, parse_int(tok[2], src, line),
                                  parse_int(tok[3], src, line));
    if (tok.size() >= 5 && tok[1] == "dim" && tok[3] == "index") {
        const int dim = parse_int(tok[2], src, line);
        const int index = parse_int(tok[4], src, line);
        if (tok.size() == 5) {
            SpaceDescriptor s;
            s.id = id;
            s.kind = SpaceKind::Abstract;
            s.dim = dim;
            s.index = index;
            return s;
        }
        if (tok.size() == 9 && tok[5] == "section-of" && tok[7] == "degree") {
            auto it = known.find(tok[6]);
            if (it == known.end())
                throw ParseError(src, line, "unknown parent space '" + tok[6] + "'");
            SpaceDescriptor s = section_space(it->second, id, parse_int(tok[8], src, line));
            if (s.dim != dim || s.index != index)
                throw ParseError(src, line, "space " + id +
                                 ": declared dim/index disagree with section arithmetic");
            return s;
        }
        if (tok.size() == 11 && tok[5] == "cover-of" && tok[7] == "k" && tok[9] == "degree") {
            auto it = known.find(tok[6]);
            if (it == known.end())
                throw ParseError(src, line, "unknown parent space '" + tok[6] + "'");
            SpaceDescriptor s = cover_space(it->second, id, parse_int(tok[8], src, line),
                                            parse_int(tok[10], src, line));
            if (s.dim != dim || s.index != index)
                throw ParseError(src, line, "space " + id +
                                 ": declared dim/index disagree with cover arithmetic");
            return s;
        }
    }
    throw ParseError(src, line, "malformed space declaration");
}

std::string space_line(const SpaceDescriptor& s) {
    std::ostringstream out;
    out << "space " << s.id << " ";
    switch (s.kind) {
        case SpaceKind::Projective:
            out << "projective " << s.n;
            break;
        case SpaceKind::Grassmannian:
            out << "grassmannian " << s.k << " " << s.n;
            break;
        case SpaceKind::Section:
            out << "dim " << s.dim << " index " << s.index << " section-of " << s.parent
                << " degree " << s.d;
            break;
        case SpaceKind::CyclicCover:
            out << "dim " << s.dim << " index " << s.index << " cover-of " << s.parent
                << " k " << s.sheets << " degree " << s.d;
            break;
        case SpaceKind::Abstract:
            out << "dim " << s.dim << " index " << s.index;
            break;
    }
    return out.str();
}

FactStore ingest_facts(const std::string& text, const std::string& source_name) {
    FactStore store;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto tok = tokenize(line);
        if (tok.empty()) continue;
        const std::string prov = source_name + ":" + std::to_string(lineno);
        const std::string& kw = tok[0];
        if (kw == "space") {
            store.add_space(parse_space_tokens(
                std::vector<std::string>(tok.begin() + 1, tok.end()),
                store.spaces(), source_name, lineno));
        } else if (kw == "betti") {
            if (tok.size() != 4 || tok[2].size() < 2 || tok[2][0] != 'b')
                throw ParseError(source_name, lineno, "malformed betti line");
            const int i = parse_int(tok[2].substr(1), source_name, lineno);
            store.add_betti(tok[1], i, BigInt(parse_int(tok[3], source_name, lineno)),
                            prov);
        } else if (kw == "vanish") {
            if (tok.size() != 8 || tok[2] != "p" || tok[4] != "q" || tok[6] != "t")
                throw ParseError(source_name, lineno, "malformed vanish line");
            store.add_cell(tok[1], parse_int(tok[3], source_name, lineno),
                           parse_int(tok[5], source_name, lineno),
                           parse_int(tok[7], source_name, lineno),
                           CohomologyValue::zero(), prov);
        } else if (kw == "dim") {
            if (tok.size() != 10 || tok[2] != "p" || tok[4] != "q" || tok[6] != "t" ||
                tok[8] != "=")
                throw ParseError(source_name, lineno, "malformed dim line");
            store.add_cell(tok[1], parse_int(tok[3], source_name, lineno),
                           parse_int(tok[5], source_name, lineno),
                           parse_int(tok[7], source_name, lineno),
                           CohomologyValue::of_dim(parse_int(tok[9], source_name, lineno)),
                           prov);
        } else if (kw == "certificate" || kw == "basis" || kw == "window" ||
                   kw == "parent" || kw == "evidence") {
            // certificate files are fact-compatible; the evidence layer is
            // read by Certificate::parse, not by the store
        } else {
            throw ParseError(source_name, lineno, "unknown directive '" + kw + "'");
        }
    }
    return store;
}

FactStore ingest_facts_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fact file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ingest_facts(ss.str(), path);
}

} // namespace fano
