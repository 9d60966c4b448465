#include "fanostab/chase.hpp"

#include <fstream>
#include <sstream>

namespace fano::chase {

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

int to_int(const std::string& s, const std::string& src, int line) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(src, line, "expected integer, got '" + s + "'");
    }
}

Script::Claim parse_claim(const std::vector<std::string>& tok, std::size_t from,
                          const std::string& src, int line) {
    // H <p> <expr> = <value>
    if (tok.size() != from + 5 || tok[from] != "H" || tok[from + 3] != "=")
        throw ParseError(src, line, "expected 'H <p> <expr> = <value>'");
    Script::Claim c;
    c.group.p = to_int(tok[from + 1], src, line);
    try {
        c.group.sheaf = SheafExpr::parse(tok[from + 2]);
    } catch (const std::exception& e) {
        throw ParseError(src, line, e.what());
    }
    c.want = CohomologyValue::of_dim(BigInt(tok[from + 4]));
    return c;
}

} // namespace

Script Script::parse(const std::string& text, const std::string& source) {
    Script script;
    script.name = source;
    if (auto slash = source.find_last_of('/'); slash != std::string::npos)
        script.name = source.substr(slash + 1);
    if (auto dot = script.name.find_last_of('.'); dot != std::string::npos)
        script.name = script.name.substr(0, dot);

    std::map<std::string, SpaceDescriptor> known;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto tok = tokenize(line);
        if (tok.empty()) continue;
        const std::string& kw = tok[0];
        if (kw == "space") {
            SpaceDescriptor s = parse_space_tokens(
                std::vector<std::string>(tok.begin() + 1, tok.end()), known, source,
                lineno);
            known[s.id] = s;
            script.spaces.push_back(s);
        } else if (kw == "goal") {
            script.goal = parse_claim(tok, 1, source, lineno);
        } else if (kw == "conclude") {
            script.conclusions.push_back(parse_claim(tok, 1, source, lineno));
        } else if (kw == "use") {
            if (tok.size() < 2) throw ParseError(source, lineno, "bare 'use'");
            Use u;
            u.line = lineno;
            u.tokens.assign(tok.begin() + 2, tok.end());
            if (tok[1] == "ses") {
                if (u.tokens.size() != 4)
                    throw ParseError(source, lineno,
                                     "expected 'use ses <rule> <left> <middle> <right>'");
                u.kind = Use::Kind::Ses;
            } else if (tok[1] == "cupping") {
                if (u.tokens.size() != 6 || u.tokens[2] != "p" || u.tokens[4] != "q")
                    throw ParseError(source, lineno,
                                     "expected 'use cupping <Y> <X> p <p> q <q>'");
                u.kind = Use::Kind::Cupping;
            } else if (tok[1] == "fact") {
                if (u.tokens.size() < 4)
                    throw ParseError(source, lineno, "malformed 'use fact'");
                u.kind = Use::Kind::Fact;
            } else if (tok[1] == "restriction") {
                if (u.tokens.size() != 6 || u.tokens[2] != "q" || u.tokens[4] != "c")
                    throw ParseError(source, lineno,
                                     "expected 'use restriction <Y> <X> q <q> c <c>'");
                u.kind = Use::Kind::Restriction;
            } else {
                throw ParseError(source, lineno, "unknown use-directive '" + tok[1] + "'");
            }
            script.uses.push_back(std::move(u));
        } else {
            throw ParseError(source, lineno, "unknown directive '" + kw + "'");
        }
    }
    if (!script.goal && script.conclusions.empty())
        throw ParseError(source, 0, "script has no goal");
    return script;
}

Script Script::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open script: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

ReplayResult replay(const Script& script, const std::vector<const FactStore*>& stores,
                    const std::set<FactKey>& suppressed) {
    ChaseEnv env(stores, suppressed);
    for (const SpaceDescriptor& s : script.spaces) env.add_space(s);

    for (const Script::Use& u : script.uses) {
        const auto& tk = u.tokens;
        switch (u.kind) {
            case Script::Use::Kind::Ses:
                env.register_ses(tk[0], SheafExpr::parse(tk[1]), SheafExpr::parse(tk[2]),
                                 SheafExpr::parse(tk[3]));
                break;
            case Script::Use::Kind::Cupping:
                env.add_cupping(tk[0], tk[1], std::stoi(tk[3]), std::stoi(tk[5]));
                break;
            case Script::Use::Kind::Fact: {
                const std::string& form = tk[0];
                if (form == "vanish" && tk.size() == 8) {
                    env.use_fact_cell(tk[1], std::stoi(tk[3]), std::stoi(tk[5]),
                                      std::stoi(tk[7]), CohomologyValue::zero());
                } else if (form == "dim" && tk.size() == 10) {
                    env.use_fact_cell(tk[1], std::stoi(tk[3]), std::stoi(tk[5]),
                                      std::stoi(tk[7]),
                                      CohomologyValue::of_dim(BigInt(tk[9])));
                } else if (form == "betti" && tk.size() == 4) {
                    (void)env.betti(tk[1], std::stoi(tk[2].substr(1)));
                } else {
                    throw std::invalid_argument("malformed fact reference in script " +
                                                script.name + " line " +
                                                std::to_string(u.line));
                }
                break;
            }
            case Script::Use::Kind::Restriction:
                env.restriction_surjectivity(tk[0], tk[1], std::stoi(tk[3]),
                                             std::stoi(tk[5]));
                break;
        }
    }

    env.saturate();

    ReplayResult result;
    result.ok = true;
    std::vector<Script::Claim> claims = script.conclusions;
    if (script.goal) claims.insert(claims.begin(), *script.goal);

    ProofTrace trace = env.trace(script.name);
    for (const Script::Claim& c : claims) {
        CohomologyValue v = env.lookup(c.group);
        if (v.known() && v == c.want) {
            trace.conclusions.push_back(
                ProofTrace::Conclusion{c.group, v, env.value_step(c.group).value_or(-1)});
        } else {
            result.ok = false;
            if (v.known())
                result.missing.push_back("claim failed: " + c.group.to_string() + " = " +
                                         v.to_string() + ", wanted " +
                                         c.want.to_string());
        }
    }
    if (!result.ok) {
        for (const std::string& m : env.misses()) result.missing.push_back(m);
        std::sort(result.missing.begin(), result.missing.end());
        result.missing.erase(std::unique(result.missing.begin(), result.missing.end()),
                             result.missing.end());
    }
    result.trace = std::move(trace);
    return result;
}

std::vector<FactKey> trace_support(const ProofTrace& trace) {
    std::map<int, const Step*> by_id;
    for (const Step& s : trace.steps) by_id[s.id] = &s;

    std::set<int> seen;
    std::vector<int> work;
    for (const auto& c : trace.conclusions)
        if (c.step > 0) work.push_back(c.step);

    std::set<FactKey> support;
    while (!work.empty()) {
        int id = work.back();
        work.pop_back();
        if (!seen.insert(id).second) continue;
        auto it = by_id.find(id);
        if (it == by_id.end()) continue;
        const Step& s = *it->second;
        if ((s.rule == "use-fact" || s.rule == "file-fact" || s.rule == "weyl" ||
             s.rule == "hodge-betti") &&
            !s.premise_refs.empty())
            support.insert(s.premise_refs.front());
        for (int ps : s.premise_steps) work.push_back(ps);
    }
    return {support.begin(), support.end()};
}

MutationReport mutation_analysis(const Script& script,
                                 const std::vector<const FactStore*>& stores) {
    ReplayResult clean = replay(script, stores);
    if (!clean.ok)
        throw std::runtime_error("mutation_analysis: script " + script.name +
                                 " does not replay cleanly");
    MutationReport report;
    for (const FactKey& key : trace_support(clean.trace)) {
        ReplayResult mutated = replay(script, stores, {key});
        if (mutated.ok)
            report.removable.push_back(key);
        else
            report.load_bearing.push_back(key);
    }
    return report;
}

} // namespace fano::chase
