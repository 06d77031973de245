// Command-line front end: transforms, ratio grids, equality and
// identification verdicts, obstruction tables, preset pairs and the
// exponential-family solvers, with deterministic text/JSON/CSV output.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "laprat/counterex.hpp"
#include "laprat/dsl.hpp"
#include "laprat/errors.hpp"
#include "laprat/identify.hpp"
#include "laprat/laplace.hpp"
#include "laprat/ratio.hpp"
#include "laprat/series.hpp"

using json = nlohmann::json;  // object keys are sorted, output deterministic
using namespace laprat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitNumeric = 4;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// FNV-1a over the canonical input description.
std::string digest(const std::string& s) {
    unsigned long long h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

double ident_tol() {
    if (const char* env = std::getenv("LAPLACE_IDENT_TOL")) {
        char* end = nullptr;
        double v = std::strtod(env, &end);
        if (end != env && v > 0.0) return v;
    }
    return kDefaultTol;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(ParseErrorKind::Syntax, {}, "cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PiecewiseExpPoly load_fn(const std::string& path) { return parse(read_file(path)); }

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

struct Grid {
    double lo = 0.0, hi = 0.0;
    int steps = 0;
};

Grid parse_grid(const std::string& s) {
    Grid g;
    char colon1 = 0, colon2 = 0;
    std::istringstream ss(s);
    if (!(ss >> g.lo >> colon1 >> g.hi >> colon2 >> g.steps) || colon1 != ':' ||
        colon2 != ':' || g.steps < 1 || !(g.hi > g.lo))
        throw CLI::ValidationError("--grid", "expected LO:HI:STEPS with HI > LO, STEPS >= 1");
    return g;
}

json atom_json(const TransformAtom& a) {
    json j;
    j["delay"] = a.delay;
    j["num"] = a.num.c;
    j["den"] = a.den.c;
    return j;
}

std::string cond_name(CondStatus s) {
    switch (s) {
        case CondStatus::Holds: return "holds";
        case CondStatus::Fails: return "fails";
        case CondStatus::Indeterminate: return "indeterminate";
        default: return "not_checked";
    }
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Equal: return "equal";
        case Verdict::Unequal: return "unequal";
        default: return "indeterminate";
    }
}

std::string outcome_name(IdentOutcome o) {
    switch (o) {
        case IdentOutcome::Identified: return "identified";
        case IdentOutcome::IdentifiedUpToSign: return "identified_up_to_sign";
        case IdentOutcome::NotCovered: return "not_covered";
        default: return "assumption_violated";
    }
}

// Deterministic text rendering of the envelope: "path: value" lines.
void render_text(const json& j, const std::string& prefix, std::ostream& os) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            render_text(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
    } else if (j.is_array()) {
        size_t i = 0;
        for (const auto& v : j) render_text(v, prefix + "[" + std::to_string(i++) + "]", os);
        if (j.empty()) os << prefix << ": []\n";
    } else if (j.is_number_float()) {
        os << prefix << ": " << fmt17(j.get<double>()) << "\n";
    } else if (j.is_string()) {
        os << prefix << ": " << j.get<std::string>() << "\n";
    } else {
        os << prefix << ": " << j.dump() << "\n";
    }
}

// JSON with every float printed at 17 significant digits (dump once with the
// numbers replaced by canonical strings would change types; instead rely on
// nlohmann's round-trip-exact output and normalize via re-parse for byte
// stability).
void emit(const std::string& command, const std::string& input_desc, json result,
          const json& warnings, bool as_json, const std::string& csv_path,
          const std::vector<std::vector<double>>& csv_rows,
          const std::vector<std::string>& csv_header) {
    json env;
    env["command"] = command;
    env["inputs_digest"] = digest(command + "|" + input_desc);
    env["result"] = std::move(result);
    env["warnings"] = warnings;
    if (as_json)
        std::cout << env.dump(2) << "\n";
    else
        render_text(env, "", std::cout);
    if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw ParseError(ParseErrorKind::Syntax, {}, "cannot write " + csv_path);
        for (size_t i = 0; i < csv_header.size(); ++i)
            out << (i ? "," : "") << csv_header[i];
        out << "\n";
        for (const auto& row : csv_rows) {
            for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt17(row[i]);
            out << "\n";
        }
    }
}

struct Options {
    bool as_json = false;
    std::string csv_path;
};

int run(int argc, char** argv) {
    CLI::App app{"Laplace-transform power-ratio toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_flag("--json", opt.as_json, "machine-readable output");
    app.add_option("--csv", opt.csv_path, "write grid/table values as CSV");

    // transform FILE [--power K] [--at L1,L2,...] [--asymptotic N]
    auto* cmd_transform = app.add_subcommand("transform", "closed-form Laplace transform");
    std::string t_file, t_at;
    int t_power = 1, t_asym = -1;
    cmd_transform->add_option("file", t_file, "function file")->required();
    cmd_transform->add_option("--power", t_power, "transform the K-th power")
        ->check(CLI::PositiveNumber);
    cmd_transform->add_option("--at", t_at, "evaluate at lambda values (comma list)");
    cmd_transform->add_option("--asymptotic", t_asym, "asymptotic coefficients up to order N");

    // ratio FILE -n N -m M --grid LO:HI:STEPS
    auto* cmd_ratio = app.add_subcommand("ratio", "ratio of transform powers on a grid");
    std::string r_file, r_grid;
    int r_n = 2, r_m = 1;
    cmd_ratio->add_option("file", r_file)->required();
    cmd_ratio->add_option("-n", r_n)->required();
    cmd_ratio->add_option("-m", r_m)->required();
    cmd_ratio->add_option("--grid", r_grid, "LO:HI:STEPS")->required();

    // equal FILE_P FILE_Q -n N -m M [--tol T] [--conv-oracle X1,...]
    auto* cmd_equal = app.add_subcommand("equal", "decide equality of power ratios");
    std::string e_p, e_q, e_conv;
    int e_n = 2, e_m = 1;
    double e_tol = ident_tol();
    cmd_equal->add_option("file_p", e_p)->required();
    cmd_equal->add_option("file_q", e_q)->required();
    cmd_equal->add_option("-n", e_n)->required();
    cmd_equal->add_option("-m", e_m)->required();
    cmd_equal->add_option("--tol", e_tol);
    cmd_equal->add_option("--conv-oracle", e_conv, "convolution residuals at x values");

    // identify FILE_P [FILE_Q] -n N -m M [--theorem 1|2|auto]
    auto* cmd_identify = app.add_subcommand("identify", "theorem-based identifiability");
    std::string i_p, i_q, i_thm = "auto";
    int i_n = 2, i_m = 1;
    cmd_identify->add_option("file_p", i_p)->required();
    cmd_identify->add_option("file_q", i_q);
    cmd_identify->add_option("-n", i_n)->required();
    cmd_identify->add_option("-m", i_m)->required();
    cmd_identify->add_option("--theorem", i_thm)->check(CLI::IsMember({"1", "2", "auto"}));

    // obstruction FILE_P FILE_Q -n N -m M [--order N]
    auto* cmd_obstruction = app.add_subcommand("obstruction", "series obstruction table");
    std::string o_p, o_q;
    int o_n = 2, o_m = 1, o_order = kDefaultLedgerOrder;
    cmd_obstruction->add_option("file_p", o_p)->required();
    cmd_obstruction->add_option("file_q", o_q)->required();
    cmd_obstruction->add_option("-n", o_n)->required();
    cmd_obstruction->add_option("-m", o_m)->required();
    cmd_obstruction->add_option("--order", o_order)->check(CLI::NonNegativeNumber);

    // preset FAMILY [--c C] [--a A] [--T T] [-n N] [-m M] [--emit DIR]
    auto* cmd_preset = app.add_subcommand("preset", "build a counterexample pair");
    std::string p_family, p_emit;
    std::optional<double> p_c, p_a, p_T;
    std::optional<int> p_n, p_m;
    cmd_preset->add_option("family", p_family)->required();
    cmd_preset->add_option("--c", p_c);
    cmd_preset->add_option("--a", p_a);
    cmd_preset->add_option("--T", p_T);
    cmd_preset->add_option("-n", p_n);
    cmd_preset->add_option("-m", p_m);
    cmd_preset->add_option("--emit", p_emit, "write <family>_p.fn and <family>_q.fn here");

    // solve-c -n N -m M --a A --T T
    auto* cmd_solvec = app.add_subcommand("solve-c", "roots of c^n - c^m = e^{-naT} - e^{-maT}");
    int s_n = 2, s_m = 1;
    double s_a = 1.0, s_T = 1.0;
    cmd_solvec->add_option("-n", s_n)->required();
    cmd_solvec->add_option("-m", s_m)->required();
    cmd_solvec->add_option("--a", s_a)->required();
    cmd_solvec->add_option("--T", s_T)->required();

    // classify -n N -m M --a A
    auto* cmd_classify = app.add_subcommand("classify", "family of the exponential's partners");
    int c_n = 2, c_m = 1;
    double c_a = 1.0;
    cmd_classify->add_option("-n", c_n)->required();
    cmd_classify->add_option("-m", c_m)->required();
    cmd_classify->add_option("--a", c_a)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    json warnings = json::array();
    std::vector<std::vector<double>> csv_rows;
    std::vector<std::string> csv_header;

    if (cmd_transform->parsed()) {
        std::string text = read_file(t_file);
        PiecewiseExpPoly f = parse(text);
        PiecewiseExpPoly fk = pow(f, t_power);
        TransformExpr T = transform(fk);
        json res;
        res["sigma"] = std::isinf(T.sigma) ? json("-inf") : json(T.sigma);
        res["atoms"] = json::array();
        for (const auto& a : T.atoms) res["atoms"].push_back(atom_json(a));
        std::string desc = text + "|power=" + std::to_string(t_power);
        if (!t_at.empty()) {
            res["values"] = json::array();
            csv_header = {"lambda", "value"};
            for (double lam : parse_list(t_at)) {
                double v = eval_transform(T, lam);
                res["values"].push_back({{"lambda", lam}, {"value", v}});
                csv_rows.push_back({lam, v});
            }
            desc += "|at=" + t_at;
        }
        if (t_asym >= 0) {
            res["asymptotic"] = asymptotic_coeffs(T, t_asym);
            desc += "|asymptotic=" + std::to_string(t_asym);
        }
        emit("transform", desc, res, warnings, opt.as_json, opt.csv_path, csv_rows,
             csv_header);
        return kExitOk;
    }

    if (cmd_ratio->parsed()) {
        std::string text = read_file(r_file);
        PiecewiseExpPoly f = parse(text);
        Grid g = parse_grid(r_grid);
        json res;
        res["n"] = r_n;
        res["m"] = r_m;
        res["values"] = json::array();
        csv_header = {"lambda", "H"};
        for (int i = 0; i < g.steps; ++i) {
            double lam = g.lo + (g.hi - g.lo) * i / std::max(g.steps - 1, 1);
            double h = ratio_H(f, r_n, r_m, lam);
            res["values"].push_back({{"lambda", lam}, {"H", h}});
            csv_rows.push_back({lam, h});
        }
        emit("ratio",
             text + "|n=" + std::to_string(r_n) + "|m=" + std::to_string(r_m) + "|grid=" +
                 r_grid,
             res, warnings, opt.as_json, opt.csv_path, csv_rows, csv_header);
        return kExitOk;
    }

    if (cmd_equal->parsed()) {
        std::string pt = read_file(e_p), qt = read_file(e_q);
        PiecewiseExpPoly p = parse(pt), q = parse(qt);
        EqualityReport rep = h_equal(p, q, e_n, e_m, e_tol);
        json res;
        res["verdict"] = verdict_name(rep.verdict);
        res["max_exact_residual"] = rep.max_exact_residual;
        res["max_grid_residual"] = rep.max_grid_residual;
        res["tol"] = e_tol;
        res["exact_residuals"] = json::array();
        for (const auto& [delay, r] : rep.exact_residuals)
            res["exact_residuals"].push_back({{"delay", delay}, {"residual", r}});
        if (rep.witness_lambda) res["witness_lambda"] = *rep.witness_lambda;
        res["assumptions"] = {{"a1_support_at_zero", rep.assumptions.a1_ok},
                              {"a2_coprime", rep.assumptions.a2_ok},
                              {"a3_ordered", rep.assumptions.a3_ok}};
        if (!rep.assumptions.a1_ok)
            warnings.push_back("support does not reach down to 0; equality is still decided");
        std::string desc = pt + "|" + qt + "|n=" + std::to_string(e_n) + "|m=" +
                           std::to_string(e_m) + "|tol=" + fmt17(e_tol);
        if (!e_conv.empty()) {
            auto xs = parse_list(e_conv);
            auto rs = conv_residual(p, q, e_n, e_m, xs);
            res["conv_residuals"] = json::array();
            csv_header = {"x", "residual"};
            for (size_t i = 0; i < xs.size(); ++i) {
                res["conv_residuals"].push_back({{"x", xs[i]}, {"residual", rs[i]}});
                csv_rows.push_back({xs[i], rs[i]});
            }
            desc += "|conv=" + e_conv;
        }
        emit("equal", desc, res, warnings, opt.as_json, opt.csv_path, csv_rows, csv_header);
        return rep.verdict == Verdict::Equal ? kExitOk : kExitNegative;
    }

    if (cmd_identify->parsed()) {
        std::string pt = read_file(i_p);
        PiecewiseExpPoly p = parse(pt);
        std::optional<PiecewiseExpPoly> q;
        std::string qt;
        if (!i_q.empty()) {
            qt = read_file(i_q);
            q = parse(qt);
        }
        std::string which = i_thm;
        if (which == "auto") which = std::abs(p(0.0)) <= 1e-9 ? "2" : "1";
        IdentVerdict v = which == "1" ? check_theorem1(p, q, i_n, i_m)
                                      : check_theorem2(p, q, i_n, i_m);
        json res;
        res["theorem"] = which;
        res["verdict"] = outcome_name(v.verdict);
        if (v.matched_condition) res["matched_condition"] = *v.matched_condition;
        res["conditions"] = json::array();
        for (auto c : v.conditions) res["conditions"].push_back(cond_name(c));
        res["witnesses"] = json::array();
        for (auto [t, val] : v.witnesses) res["witnesses"].push_back({{"t", t}, {"value", val}});
        if (!v.class_constraints_on_q.empty())
            res["class_constraints_on_q"] = v.class_constraints_on_q;
        res["normalized"] = v.normalized;
        if (v.normalized) res["normalization"] = v.normalization;
        emit("identify",
             pt + "|" + qt + "|n=" + std::to_string(i_n) + "|m=" + std::to_string(i_m) +
                 "|theorem=" + which,
             res, warnings, opt.as_json, opt.csv_path, csv_rows, csv_header);
        return (v.verdict == IdentOutcome::Identified ||
                v.verdict == IdentOutcome::IdentifiedUpToSign)
                   ? kExitOk
                   : kExitNegative;
    }

    if (cmd_obstruction->parsed()) {
        std::string pt = read_file(o_p), qt = read_file(o_q);
        PiecewiseExpPoly p = parse(pt), q = parse(qt);
        ObstructionLedger led = obstruction_for_pair(p, q, o_n, o_m, o_order);
        json res;
        res["T"] = led.T;
        res["n"] = led.n;
        res["m"] = led.m;
        res["d"] = led.d;
        res["d_scale"] = led.d_scale;
        csv_header = {"i", "d", "d_scale"};
        for (size_t i = 0; i < led.d.size(); ++i)
            csv_rows.push_back({static_cast<double>(i), led.d[i], led.d_scale[i]});
        double worst = 0.0;
        for (size_t i = 0; i < led.d.size(); ++i)
            worst = std::max(worst, std::abs(led.d[i]) / (1.0 + led.d_scale[i]));
        res["max_relative_d"] = worst;
        emit("obstruction",
             pt + "|" + qt + "|n=" + std::to_string(o_n) + "|m=" + std::to_string(o_m) +
                 "|order=" + std::to_string(o_order),
             res, warnings, opt.as_json, opt.csv_path, csv_rows, csv_header);
        return kExitOk;
    }

    if (cmd_preset->parsed()) {
        auto fam = family_from_string(p_family);
        if (!fam) throw CLI::ValidationError("family", "unknown family: " + p_family);
        PresetId id;
        id.family = *fam;
        if (p_c) id.params["c"] = *p_c;
        if (p_a) id.params["a"] = *p_a;
        if (p_T) id.params["T"] = *p_T;
        if (p_n) id.params["n"] = *p_n;
        if (p_m) id.params["m"] = *p_m;
        PresetPair pair = gen_preset(id);
        std::string ptext = format(pair.p), qtext = format(pair.q);
        json res;
        res["family"] = family_to_string(*fam);
        res["n"] = pair.n;
        res["m"] = pair.m;
        res["p"] = ptext;
        res["q"] = qtext;
        std::string desc = family_to_string(*fam);
        for (const auto& [k, v] : id.params) desc += "|" + k + "=" + fmt17(v);
        if (!p_emit.empty()) {
            std::string base = p_emit + "/" + family_to_string(*fam);
            for (auto [suffix, text] :
                 {std::pair{std::string{"_p.fn"}, ptext}, {std::string{"_q.fn"}, qtext}}) {
                std::ofstream out(base + suffix, std::ios::binary);
                if (!out)
                    throw ParseError(ParseErrorKind::Syntax, {},
                                     "cannot write " + base + suffix);
                out << text << "\n";
            }
            res["emitted"] = {base + "_p.fn", base + "_q.fn"};
        }
        emit("preset", desc, res, warnings, opt.as_json, opt.csv_path, csv_rows, csv_header);
        return kExitOk;
    }

    if (cmd_solvec->parsed()) {
        auto roots = solve_c(s_n, s_m, s_a, s_T);
        json res;
        res["n"] = s_n;
        res["m"] = s_m;
        res["a"] = s_a;
        res["T"] = s_T;
        res["roots"] = json::array();
        csv_header = {"value", "trivial", "multiplicity"};
        for (const auto& r : roots) {
            res["roots"].push_back({{"value", r.value},
                                    {"trivial", r.trivial},
                                    {"multiplicity", r.multiplicity}});
            csv_rows.push_back(
                {r.value, r.trivial ? 1.0 : 0.0, static_cast<double>(r.multiplicity)});
        }
        emit("solve-c",
             "n=" + std::to_string(s_n) + "|m=" + std::to_string(s_m) + "|a=" + fmt17(s_a) +
                 "|T=" + fmt17(s_T),
             res, warnings, opt.as_json, opt.csv_path, csv_rows, csv_header);
        return kExitOk;
    }

    if (cmd_classify->parsed()) {
        FamilyClassification fc = family_classify(c_n, c_m, c_a);
        SpecialTimes st = special_times(c_n, c_m, c_a);
        json res;
        res["n"] = c_n;
        res["m"] = c_m;
        res["a"] = c_a;
        switch (fc.kase) {
            case FamilyCase::SingletonF: res["case"] = "singleton"; break;
            case FamilyCase::ExpOnly: res["case"] = "exp_family_only"; break;
            case FamilyCase::ExpPlusNegConstTail:
                res["case"] = "exp_family_plus_negative_constant_tail";
                break;
            case FamilyCase::ExpPlusPosConstTail:
                res["case"] = "exp_family_plus_positive_constant_tail";
                break;
        }
        res["members"] = fc.members;
        res["includes_negatives"] = fc.includes_negatives;
        res["b0"] = st.b0;
        if (st.T1) res["T1"] = *st.T1;
        if (st.T2) res["T2"] = *st.T2;
        emit("classify",
             "n=" + std::to_string(c_n) + "|m=" + std::to_string(c_m) + "|a=" + fmt17(c_a),
             res, warnings, opt.as_json, opt.csv_path, csv_rows, csv_header);
        return kExitOk;
    }

    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ParseError& e) {
        std::cerr << "parse error (" << e.span.line << ":" << e.span.column
                  << "): " << e.what() << "\n";
        return kExitInput;
    } catch (const BadParams& e) {
        std::cerr << "bad parameters: " << e.what() << "\n";
        return kExitInput;
    } catch (const AssumptionViolated& e) {
        std::cerr << "assumption violated: " << e.what() << "\n";
        return kExitInput;
    } catch (const BadNormalization& e) {
        std::cerr << "bad normalization: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const IdenticalFunctions& e) {
        std::cerr << "functions are identical: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const DivisionByZero& e) {
        std::cerr << "division by zero: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const NonVanishingHead& e) {
        std::cerr << "non-vanishing head: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
