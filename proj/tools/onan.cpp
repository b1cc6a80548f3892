#include "onan/arith.hpp"
#include "onan/lfun.hpp"
#include "onan/modfun.hpp"
#include "onan/qforms.hpp"
#include "onan/scan.hpp"
#include "onan/traces.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace {

using ordered_json = nlohmann::ordered_json;

// Negative integers collide with option syntax. Two rewrites keep the
// documented spellings working: a bare -N directly after a long option
// that takes a value becomes --opt=-N, and a bare -N inside classnum/trace
// becomes --D=-N (so `trace -7` parses).
std::vector<std::string> preprocess(int argc, char** argv) {
    static const std::regex neg_int("^-[0-9]+$");
    auto is_flag = [](const std::string& s) {
        return s == "--json" || s == "--indicator" ||
               s == "--all-discriminants" || s == "--no-cache" ||
               s == "--resume";
    };
    std::vector<std::string> out;
    bool positional_d = false;
    for (int i = 1; i < argc; ++i) {
        std::string tok = argv[i];
        if (tok == "classnum" || tok == "trace") positional_d = true;
        if (std::regex_match(tok, neg_int)) {
            if (!out.empty() && out.back().rfind("--", 0) == 0 &&
                out.back().find('=') == std::string::npos &&
                !is_flag(out.back())) {
                out.back() += "=" + tok;
                continue;
            }
            if (positional_d) {
                out.push_back("--D=" + tok);
                continue;
            }
        }
        out.push_back(std::move(tok));
    }
    return out;
}

void write_output(const std::string& path, const std::string& bytes) {
    if (path.empty() || path == "-") {
        std::cout << bytes;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << bytes;
}

int cmd_classnum(std::int64_t dval) {
    onan::Discriminant d(dval);
    auto forms = onan::class_representatives(d);
    if (!d.fundamental()) {
        std::cout << "warning: D = " << dval
                  << " is not fundamental; class_number rejects it. "
                     "Listing its reduced forms instead.\n";
    } else {
        std::cout << "h(" << dval << ") = " << onan::class_number(d) << "\n";
    }
    std::cout << "reduced forms (" << forms.size() << "):\n";
    for (const auto& f : forms)
        std::cout << "  (" << f.a << ", " << f.b << ", " << f.c << ")"
                  << (f.content() > 1 ? "  [imprimitive]" : "") << "\n";
    return 0;
}

int cmd_trace(std::int64_t dval, std::optional<int> digits, bool json) {
    onan::TraceResult t = onan::trace(onan::Discriminant(dval), digits);
    if (json) {
        ordered_json j;
        j["D"] = t.d;
        j["a"] = t.a.get_str();
        j["residual"] = t.residual;
        j["precision"] = t.precision_digits;
        j["attempts"] = t.attempts;
        j["class_count"] = t.class_count;
        j["imprimitive"] = t.has_imprimitive;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "a(" << t.d << ") = " << t.a.get_str() << "\n";
    }
    return 0;
}

int cmd_jcoeffs(int n, const std::string& out) {
    auto table = onan::j_coefficient_table(n);
    std::ostringstream s;
    s << "n,c\n";
    for (int k = -1; k <= n; ++k)
        s << k << ',' << (*table)[static_cast<std::size_t>(k) + 1].get_str()
          << '\n';
    write_output(out, s.str());
    return 0;
}

int cmd_scan(const onan::ScanOptions& opts, const std::string& out,
             const std::string& csv) {
    onan::ScanReport rep = onan::run_scan(opts);
    write_output(out, rep.to_json());
    if (!csv.empty()) write_output(csv, rep.to_csv());
    std::ostream& log = (out.empty() || out == "-") ? std::cerr : std::cout;
    log << "scanned " << rep.summary.scanned << " discriminants, "
        << rep.summary.applicable << " applicable congruences, "
        << rep.summary.failures << " failures\n";
    return onan::exit_code_for(rep.summary);
}

void print_lseries(const onan::LSeriesData& l, int pmax) {
    std::cout << "L(1) ~= " << l.l1 << " +- " << l.l1_error
              << "   root number ~= " << l.root_number
              << (l.local23_exact ? "   [a2,a3 exact]"
                                  : "   [a2,a3 approximated by 0]")
              << "\n";
    std::cout << "a_p:";
    for (const auto& [p, ap] : l.ap) {
        if (pmax > 0 && p > static_cast<std::uint64_t>(pmax)) break;
        std::cout << ' ' << p << ':' << ap;
    }
    std::cout << "\n";
}

ordered_json lseries_json(const onan::LSeriesData& l, int pmax) {
    ordered_json j;
    j["l1"] = l.l1;
    j["l1_error"] = l.l1_error;
    j["root_number"] = l.root_number;
    j["cutoff"] = l.cutoff;
    j["local23_exact"] = l.local23_exact;
    ordered_json ap = ordered_json::array();
    for (const auto& [p, apv] : l.ap) {
        if (pmax > 0 && p > static_cast<std::uint64_t>(pmax)) break;
        ap.push_back({{"p", p}, {"ap", apv}});
    }
    j["ap"] = std::move(ap);
    return j;
}

int cmd_ec_family(int family, std::int64_t dval, bool indicator, bool json,
                  int pmax) {
    onan::Discriminant d(dval);
    onan::CurveSpec e = onan::curve(family, d);

    if (indicator && (family == 14 || family == 15)) {
        std::cout << "indicator unavailable for family " << family
                  << ": it needs the order-" << (family == 14 ? 2 : 3)
                  << " twisted trace series, which this tool does not "
                     "compute\n";
        return 0;
    }

    if (json) {
        ordered_json j;
        j["family"] = family;
        j["D"] = dval;
        j["a"] = e.a.get_str();
        j["b"] = e.b.get_str();
        j["conductor"] = e.conductor.get_str();
        j["conductor_heuristic"] = e.conductor_heuristic;
        j["lseries"] = lseries_json(onan::l_value_at_1(e), pmax);
        if (indicator) {
            onan::SelmerIndicator si = onan::selmer_indicator(family, d);
            ordered_json ij;
            ij["p"] = si.p;
            ij["applicable"] = si.applicable;
            ij["a"] = si.a.get_str();
            ij["weighted_term"] = si.weighted_term;
            ij["a_mod_p"] = si.a_mod_p;
            ij["term_mod_p"] = si.term_mod_p;
            ij["congruent"] = si.congruent;
            ij["predicted_selmer_nontrivial"] = si.predicted_nontrivial;
            ij["label"] = "conditional on BSD";
            j["indicator"] = std::move(ij);
        }
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    std::cout << "family " << family << " twist D = " << dval << "\n";
    std::cout << "E: y^2 = x^3 + (" << e.a.get_str() << ") x + ("
              << e.b.get_str() << ")\n";
    std::cout << "conductor = " << e.conductor.get_str();
    if (e.conductor_heuristic)
        std::cout << "  [heuristic: gcd(D, " << 6 * family << ") != 1]";
    std::cout << "\n";
    print_lseries(onan::l_value_at_1(e), pmax);

    if (indicator) {
        onan::SelmerIndicator si = onan::selmer_indicator(family, d);
        std::cout << "indicator (p = " << si.p << "):\n";
        if (!si.applicable) {
            std::cout << "  gate: " << dval << " is a square mod " << si.p
                      << " -> indicator not applicable\n";
            return 0;
        }
        std::cout << "  gate: " << dval << " is a non-square mod " << si.p
                  << " -> applicable\n";
        std::cout << "  a(" << dval << ") = " << si.a.get_str() << ", mod "
                  << si.p << " = " << si.a_mod_p << "\n";
        std::cout << "  weighted class term = " << si.weighted_term
                  << ", mod " << si.p << " = " << si.term_mod_p << "\n";
        std::cout << "  residues " << si.a_mod_p << " and " << si.term_mod_p
                  << " mod " << si.p << ": "
                  << (si.congruent ? "congruent" : "not congruent") << "\n";
        std::cout << "  predicted Sel_" << si.p << " contribution: "
                  << (si.predicted_nontrivial ? "non-trivial" : "trivial")
                  << " (conditional on BSD)\n";
    }
    return 0;
}

int cmd_ec_direct(const std::string& a, const std::string& b,
                  const std::string& conductor, bool json, int pmax) {
    onan::CurveSpec e =
        onan::make_curve(mpz_class(a), mpz_class(b), mpz_class(conductor));
    if (json) {
        ordered_json j;
        j["a"] = e.a.get_str();
        j["b"] = e.b.get_str();
        j["conductor"] = e.conductor.get_str();
        j["lseries"] = lseries_json(onan::l_value_at_1(e), pmax);
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "E: y^2 = x^3 + (" << e.a.get_str() << ") x + ("
              << e.b.get_str() << "), conductor " << e.conductor.get_str()
              << " (as supplied)\n";
    print_lseries(onan::l_value_at_1(e), pmax);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"trace engine for the O'Nan-moonshine arithmetic pipeline",
                 "onan"};
    app.require_subcommand(1);

    auto* classnum = app.add_subcommand(
        "classnum", "class number and reduced forms of a discriminant");
    std::int64_t cn_d = 0;
    classnum->add_option("--D", cn_d, "negative discriminant")->required();

    auto* tracecmd =
        app.add_subcommand("trace", "certified trace of singular moduli");
    std::int64_t tr_d = 0;
    int tr_digits = 0;
    bool tr_json = false;
    tracecmd->add_option("--D", tr_d, "negative discriminant")->required();
    tracecmd->add_option("--digits", tr_digits,
                         "initial working precision override");
    tracecmd->add_flag("--json", tr_json, "JSON output");

    auto* jc = app.add_subcommand("jcoeffs",
                                  "exact hauptmodul coefficients c(-1)..c(n)");
    int jc_n = 10;
    std::string jc_out;
    jc->add_option("--n", jc_n, "largest index")->check(CLI::Range(1, 20000));
    jc->add_option("--out", jc_out, "output file (default stdout)");

    auto* scan = app.add_subcommand(
        "scan", "trace table over a discriminant range with congruence checks");
    onan::ScanOptions sopts;
    std::string scan_out, scan_csv, scan_check = "thm2", scan_cache_dir;
    bool scan_nocache = false, scan_resume = false;
    scan->add_option("--dmin", sopts.dmin, "lowest D (most negative)")
        ->required();
    scan->add_option("--dmax", sopts.dmax, "highest D (closest to 0)")
        ->required();
    scan->add_option("--check", scan_check, "congruence family: thm2 or none");
    scan->add_option("--out", scan_out, "JSON report file (default stdout)");
    scan->add_option("--csv", scan_csv, "also write a CSV table");
    scan->add_option("--threads", sopts.threads, "worker threads")
        ->check(CLI::Range(1, 256));
    scan->add_flag("--all-discriminants", sopts.all_discriminants,
                   "include non-fundamental discriminants");
    scan->add_flag("--no-cache", scan_nocache, "disable the trace cache");
    scan->add_option("--cache-dir", scan_cache_dir,
                     "trace cache directory (default $ONAN_CACHE_DIR)");
    scan->add_flag("--resume", scan_resume,
                   "reuse cached traces (requires a cache directory)");

    auto* ec = app.add_subcommand("ec", "twist-family elliptic curve data");
    int ec_family = 0, ec_pmax = 100;
    std::int64_t ec_d = 0;
    bool ec_indicator = false, ec_json = false;
    std::string ec_a, ec_b, ec_n;
    ec->add_option("--family", ec_family, "curve family: 11, 14, 15 or 19");
    ec->add_option("--D", ec_d, "twist discriminant (negative)");
    ec->add_flag("--indicator", ec_indicator,
                 "mod-p Selmer indicator (families 11 and 19)");
    ec->add_flag("--json", ec_json, "JSON output");
    ec->add_option("--pmax", ec_pmax, "largest prime printed in the a_p table");
    ec->add_option("--a", ec_a, "directly supplied curve: a");
    ec->add_option("--b", ec_b, "directly supplied curve: b");
    ec->add_option("--conductor", ec_n, "directly supplied curve: conductor");

    std::vector<std::string> args = preprocess(argc, argv);
    std::reverse(args.begin(), args.end()); // CLI11 parses back-to-front
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (classnum->parsed()) return cmd_classnum(cn_d);
        if (tracecmd->parsed()) {
            std::optional<int> digits;
            if (tr_digits > 0) digits = tr_digits;
            return cmd_trace(tr_d, digits, tr_json);
        }
        if (jc->parsed()) return cmd_jcoeffs(jc_n, jc_out);
        if (scan->parsed()) {
            if (scan_check != "thm2" && scan_check != "none") {
                std::cerr << "error: --check must be thm2 or none\n";
                return 1;
            }
            sopts.check_thm2 = scan_check == "thm2";
            if (scan_nocache) {
                sopts.cache_dir.clear();
            } else if (!scan_cache_dir.empty()) {
                sopts.cache_dir = scan_cache_dir;
            } else if (const char* env = std::getenv("ONAN_CACHE_DIR")) {
                sopts.cache_dir = env;
            }
            if (scan_resume && sopts.cache_dir.empty()) {
                std::cerr << "error: --resume needs a cache directory "
                             "(--cache-dir or $ONAN_CACHE_DIR)\n";
                return 1;
            }
            return cmd_scan(sopts, scan_out, scan_csv);
        }
        if (ec->parsed()) {
            bool family_mode = ec_family != 0 || ec_d != 0;
            bool direct_mode =
                !ec_a.empty() || !ec_b.empty() || !ec_n.empty();
            if (family_mode == direct_mode) {
                std::cerr << "error: give either --family and --D, or --a, "
                             "--b and --conductor\n";
                return 1;
            }
            if (family_mode) {
                if (ec_family == 0 || ec_d == 0) {
                    std::cerr << "error: --family and --D are both required\n";
                    return 1;
                }
                return cmd_ec_family(ec_family, ec_d, ec_indicator, ec_json,
                                     ec_pmax);
            }
            if (ec_a.empty() || ec_n.empty()) {
                std::cerr << "error: --a, --b and --conductor are all "
                             "required for a direct curve\n";
                return 1;
            }
            if (ec_indicator) {
                std::cerr << "error: --indicator needs a family curve\n";
                return 1;
            }
            return cmd_ec_direct(ec_a, ec_b.empty() ? "0" : ec_b, ec_n,
                                 ec_json, ec_pmax);
        }
    } catch (const onan::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "computation error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
