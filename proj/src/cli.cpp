#include "fanostab/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include "CLI11.hpp"
#include "fanostab/chase.hpp"
#include "fanostab/selftest.hpp"
#include "fanostab/special.hpp"
#include "fanostab/stability.hpp"
#include "fanostab/trace_check.hpp"
#include "fanostab/weyl.hpp"

namespace fano::cli {

namespace {

/// Parses "P(5)" or "G(1,4)" into a descriptor named by the literal text.
SpaceDescriptor parse_space_arg(const std::string& text) {
    auto open = text.find('(');
    if (open == std::string::npos || text.back() != ')')
        throw CLI::ValidationError("--space", "expected P(n) or G(k,n)");
    const std::string head = text.substr(0, open);
    const std::string inner = text.substr(open + 1, text.size() - open - 2);
    try {
        if (head == "P") return grassmannian_space(text, 0, std::stoi(inner));
        if (head == "G") {
            auto comma = inner.find(',');
            if (comma == std::string::npos) throw std::invalid_argument(inner);
            return grassmannian_space(text, std::stoi(inner.substr(0, comma)),
                                      std::stoi(inner.substr(comma + 1)));
        }
    } catch (const std::exception&) {
        throw CLI::ValidationError("--space", "cannot parse '" + text + "'");
    }
    throw CLI::ValidationError("--space", "expected P(n) or G(k,n)");
}

Window parse_window_arg(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("window", "expected <lo>:<hi>");
    try {
        Window w{std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
        if (w.lo > w.hi) throw std::invalid_argument(text);
        return w;
    } catch (const std::exception&) {
        throw CLI::ValidationError("window", "cannot parse '" + text + "'");
    }
}

std::string env_or(const char* var, const std::string& fallback) {
    const char* v = std::getenv(var);
    return v && *v ? std::string(v) : fallback;
}

void write_output(const std::string& path, const std::string& content,
                  std::ostream& out) {
    if (path.empty()) {
        out << content;
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
}

int cmd_cohomology(const SpaceDescriptor& space, int q, const Window& window,
                   int p_filter, bool records, std::ostream& out) {
    out << "# cohomology of " << space.id << ": q=" << q << ", t in [" << window.lo
        << "," << window.hi << "]\n";
    if (records) out << space_line(space) << "\n"; // records re-ingest standalone
    for (int t = window.lo; t <= window.hi; ++t) {
        auto coh = weyl::grassmann_cohomology(space.k, space.n, q, t);
        for (const auto& [p, dim] : coh) {
            if (p_filter >= 0 && p != p_filter) continue;
            if (records) {
                out << "dim " << space.id << " p " << p << " q " << q << " t " << t
                    << " = " << dim << "\n";
            } else if (window.lo == window.hi) {
                out << "p=" << p << ": " << dim << "\n";
            } else {
                out << "t=" << t << " p=" << p << ": " << dim << "\n";
            }
        }
    }
    return 0;
}

int cmd_special(const SpaceDescriptor& base, const std::vector<int>& sections,
                const std::vector<int>& cover, const Window& window,
                const std::string& out_path, std::ostream& out) {
    out << "# special-cohomology check from " << base.id << ", window [" << window.lo
        << "," << window.hi << "]\n";

    if (sections.empty() && cover.empty()) {
        // plain check of the base space itself
        CohomologyTable table = weyl_table(base, window);
        auto chk = special::is_special(table, base.dim);
        if (chk.ok()) {
            out << "special: yes\n";
            special::Certificate cert = special::certify_homogeneous(base, window);
            write_output(out_path, cert.serialize(), out);
            return 0;
        }
        out << "special: no\n";
        for (const auto& v : chk.violations)
            out << "violation (" << v.condition << ") at " << v.cell.to_string()
                << " = " << v.found.to_string() << "\n";
        return 1;
    }

    // widen intermediate windows by the footprint the remaining steps need
    int remaining = 0;
    for (int d : sections) remaining += d;
    if (!cover.empty()) remaining += cover[0] * cover[1];
    Window base_window{window.lo - remaining - 2, window.hi + remaining + 2};
    special::Certificate cert = special::certify_homogeneous(base, base_window);
    for (int d : sections) {
        remaining -= d;
        cert = special::propagate_section(
            cert, d, Window{window.lo - remaining, window.hi + remaining});
    }
    if (!cover.empty())
        cert = special::propagate_cyclic(cert, cover[0], cover[1], window);

    auto chk = special::is_special(cert.to_table(), cert.space().dim);
    out << "special: " << (chk.ok() ? "yes" : "no") << "\n";
    out << "space: " << space_line(cert.space()) << "\n";
    write_output(out_path, cert.serialize(), out);
    return chk.ok() ? 0 : 1;
}

int cmd_chase(const std::string& script_path, const std::vector<std::string>& fact_paths,
              const std::string& out_path, std::ostream& out) {
    chase::Script script = chase::Script::parse_file(script_path);
    std::vector<FactStore> stores;
    for (const auto& p : fact_paths) stores.push_back(ingest_facts_file(p));
    std::vector<const FactStore*> ptrs;
    for (const auto& s : stores) ptrs.push_back(&s);

    auto res = chase::replay(script, ptrs);
    if (!res.ok) {
        out << "stuck: the following facts are missing\n";
        for (const auto& m : res.missing) out << "  " << m << "\n";
        return 1;
    }
    auto check = trace_check::check_trace(res.trace, ptrs);
    if (!check.ok) {
        out << "internal error: trace rejected by the independent checker\n";
        for (const auto& e : check.errors) out << "  " << e << "\n";
        return 1;
    }
    out << "success: " << res.trace.conclusions.size()
        << " conclusions, trace of " << res.trace.steps.size()
        << " steps verified by the independent checker\n";
    write_output(out_path, res.trace.serialize(), out);
    return 0;
}

int cmd_stability(int n, int r, std::optional<int> genus, bool assume_es,
                  const std::string& scripts_dir, const std::string& facts_dir,
                  std::ostream& out) {
    stability::FanoProfile profile = stability::FanoProfile::make(n, r, genus, assume_es);
    stability::Resources res(scripts_dir, facts_dir);
    auto verdict = stability::classify(profile, res);
    out << verdict.reason_log();
    return verdict.outcome == stability::Outcome::Stable ? 0 : 1;
}

} // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"cohomology tables, special-cohomology certificates, proof-trace "
                 "chases and slope-stability verdicts for Fano manifolds with b2 = 1"};
    app.require_subcommand(1);

    // cohomology
    std::string space_text, trange = "-10:10";
    int q = 0, p_filter = -1;
    std::string format = "grid";
    auto* coh = app.add_subcommand("cohomology", "print h^p(Omega^q(t)) tables");
    coh->add_option("--space", space_text, "P(n) or G(k,n)")->required();
    coh->add_option("--q", q, "form degree")->required();
    coh->add_option("--t-range", trange, "twist range lo:hi (default -10:10)");
    coh->add_option("--p", p_filter, "restrict to one cohomological degree");
    coh->add_option("--format", format, "grid | records")
        ->check(CLI::IsMember({"grid", "records"}));

    // special
    std::string from_text, window_text = "-10:10", out_path;
    std::vector<int> sections;
    std::vector<int> cover;
    auto* sp = app.add_subcommand("special",
                                  "check or propagate special-cohomology certificates");
    sp->add_option("--from", from_text, "base space P(n) or G(k,n)")->required();
    sp->add_option("--section", sections, "take a divisor of this degree (repeatable)");
    sp->add_option("--cover", cover, "take a k-cyclic cover branched in |O(k d)|: k d")
        ->expected(2);
    sp->add_option("--window", window_text, "twist window lo:hi (default -10:10)");
    sp->add_option("--out", out_path, "write the certificate to this file");

    // chase
    std::string script_path, trace_out;
    std::vector<std::string> fact_paths;
    auto* ch = app.add_subcommand("chase", "replay a proof script");
    ch->add_option("--script", script_path, "chase script file")->required();
    ch->add_option("--facts", fact_paths, "fact files to load (repeatable)");
    ch->add_option("--out", trace_out, "write the trace to this file");

    // stability
    int n = 0, r = 0, genus_arg = -1;
    bool assume_es = false;
    std::string scripts_dir = env_or("FANOSTAB_SCRIPTS_DIR", "scripts");
    std::string facts_dir = env_or("FANOSTAB_FACTS_DIR", "facts");
    auto* st = app.add_subcommand("stability", "slope-stability verdict for T_X");
    st->add_option("--n", n, "dimension")->required();
    st->add_option("--index", r, "Fano index")->required();
    st->add_option("--genus", genus_arg, "genus (coindex 3 only)");
    st->add_flag("--assume-es", assume_es, "assume the smooth divisor chain (ES)");
    st->add_option("--scripts-dir", scripts_dir, "chase script directory");
    st->add_option("--facts-dir", facts_dir, "fact file directory");

    // selftest
    std::string data_root = ".";
    auto* se = app.add_subcommand("selftest", "run the acceptance suite");
    se->add_option("--data-root", data_root,
                   "directory containing scripts/ and facts/");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (coh->parsed())
            return cmd_cohomology(parse_space_arg(space_text), q,
                                  parse_window_arg(trange), p_filter,
                                  format == "records", out);
        if (sp->parsed())
            return cmd_special(parse_space_arg(from_text), sections, cover,
                               parse_window_arg(window_text), out_path, out);
        if (ch->parsed()) return cmd_chase(script_path, fact_paths, trace_out, out);
        if (st->parsed())
            return cmd_stability(n, r,
                                 genus_arg >= 0 ? std::optional<int>(genus_arg)
                                                : std::nullopt,
                                 assume_es, scripts_dir, facts_dir, out);
        if (se->parsed()) return selftest::run(data_root, out) == 0 ? 0 : 1;
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace fano::cli
