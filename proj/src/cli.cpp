#include "fluted/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "fluted/errors.hpp"
#include "fluted/fl3.hpp"
#include "fluted/generators.hpp"
#include "fluted/model.hpp"
#include "fluted/normal_form.hpp"
#include "fluted/reducer.hpp"
#include "fluted/text_io.hpp"

namespace fluted::cli {

namespace {

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kCap = 3 };

struct Io {
    std::ostream& out;
    std::ostream& err;
    std::istream& in;
    bool stdin_used = false;

    std::string slurp(const std::string& path) {
        if (path == "-") {
            if (stdin_used) throw Error("standard input can only be read once");
            stdin_used = true;
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
        }
        std::ifstream f(path);
        if (!f) throw Error("cannot open '" + path + "'");
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }

    // "-" means the regular output stream
    void emit(const std::string& path, const std::string& text) {
        if (path == "-") {
            out << text;
            return;
        }
        std::ofstream f(path);
        if (!f) throw Error("cannot write '" + path + "'");
        f << text;
    }
};

Formula read_sentence(Io& io, const std::string& path) { return parse_formula(io.slurp(path)); }

std::string render_conjuncts(const std::vector<LabeledConjunct>& cs, bool tptp) {
    std::string text;
    if (tptp) {
        for (const auto& c : cs) {
            std::string name;
            for (char ch : c.label) name += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
            text += render_formula_tptp(c.formula, name) + "\n";
        }
        return text;
    }
    for (std::size_t i = 0; i < cs.size(); ++i) {
        text += "% " + cs[i].label + "\n";
        text += (i ? "& " : "") + render_formula(cs[i].formula) + "\n";
    }
    return text;
}

NormalForm branch_nf(const Formula& f, std::size_t branch, std::map<std::string, bool>* assignment = nullptr) {
    auto branches = eliminate_propositions(normalize(f));
    if (branch >= branches.size())
        throw Error("branch " + std::to_string(branch) + " out of range; there are " + std::to_string(branches.size()));
    if (assignment) *assignment = branches[branch].assignment;
    return std::move(branches[branch].nf);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
    Io io{out, err, in};
    CLI::App app{"Satisfiability for the fluted fragment of first-order logic", "fluted"};
    app.require_subcommand(1);
    app.fallthrough();

    DecideOptions dopts;
    std::string model_out;
    app.add_option("--domain-cap", dopts.fl3.domain_cap, "largest domain tried by bounded search")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--type-cap", dopts.fl3.type_cap, "viable 2-types the connector strategy enumerates over")
        ->capture_default_str();
    app.add_option("--subset-cap", dopts.fl3.subset_cap, "connector candidates passed to the SAT encoding")
        ->capture_default_str();
    app.add_option("--jobs", dopts.jobs, "proposition branches decided in parallel")->capture_default_str();

    std::string file = "-";
    auto add_file = [&](CLI::App* sub) { sub->add_option("FILE", file, "formula file, - for stdin")->capture_default_str(); };

    auto* check = app.add_subcommand("check", "report whether the sentence is fluted");
    add_file(check);

    auto* norm = app.add_subcommand("normalize", "print the normal form, one conjunct per line");
    add_file(norm);

    auto* dec = app.add_subcommand("decide", "decide satisfiability");
    add_file(dec);
    std::string strategy = "auto";
    dec->add_option("--strategy", strategy, "connector, bounded or auto")
        ->check(CLI::IsMember({"connector", "bounded", "auto"}))
        ->capture_default_str();
    dec->add_option("--model", model_out, "write the model here when SAT (- for stdout)");

    std::size_t branch = 0;
    auto* red = app.add_subcommand("reduce", "print the normal form after removing the highest-arity predicates");
    add_file(red);
    red->add_option("--branch", branch, "proposition branch")->capture_default_str();

    int max_size = 0;
    auto* find = app.add_subcommand("find-model", "search for a minimum-size model by grounding");
    add_file(find);
    find->add_option("--max", max_size, "largest domain size")->required()->check(CLI::PositiveNumber);
    find->add_option("--model", model_out, "write the model here instead of standard output");

    std::string model_in;
    auto* eval = app.add_subcommand("eval", "evaluate a sentence in a structure");
    add_file(eval);
    eval->add_option("--model", model_in, "structure file")->required();

    auto* lift = app.add_subcommand("lift", "turn a model of the reduced normal form into one of the sentence");
    add_file(lift);
    lift->add_option("--model", model_in, "model of the reduced normal form")->required();
    lift->add_option("--branch", branch, "proposition branch")->capture_default_str();
    std::string lift_out = "-";
    lift->add_option("--out", lift_out, "where to write the lifted model")->capture_default_str();

    auto* gen = app.add_subcommand("generate", "lower-bound sentences and their canonical models");
    gen->require_subcommand(1);
    int gm = 1, gn = 1;
    bool tptp = false;
    std::string system_file;
    auto gen_params = [&](CLI::App* sub, bool tiling) {
        sub->add_option("--m", gm, "level count")->required()->check(CLI::PositiveNumber);
        sub->add_option("--n", gn, "bits of the 1-integers")->required()->check(CLI::PositiveNumber);
        if (tiling) sub->add_option("--system", system_file, "tiling system file")->required();
    };
    auto* gphi = gen->add_subcommand("phi", "sentence whose models have at least tower(m,n) elements");
    gen_params(gphi, false);
    gphi->add_flag("--tptp", tptp, "TPTP syntax");
    auto* gtil = gen->add_subcommand("tiling", "sentence satisfiable iff the system tiles the tower(m,n) torus");
    gen_params(gtil, true);
    gtil->add_flag("--tptp", tptp, "TPTP syntax");
    auto* gmod = gen->add_subcommand("model", "canonical model of a generated sentence");
    gmod->require_subcommand(1);
    auto* gmphi = gmod->add_subcommand("phi", "canonical model of the phi sentence");
    gen_params(gmphi, false);
    auto* gmtil = gmod->add_subcommand("tiling", "canonical model of the tiling sentence");
    gen_params(gmtil, true);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(std::move(rev));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*check) {
            Formula f = read_sentence(io, file);
            FlutedReport rep = fluted_status(f);
            out << "width: " << rep.width << "\n";
            if (rep.level) out << "level: " << *rep.level << "\n";
            for (const auto& v : rep.violations)
                out << "violation at " << (v.path.empty() ? "root" : v.path) << ": " << v.reason << "\n";
            out << "RESULT: " << (rep.is_fluted ? "FLUTED" : "NOT-FLUTED") << "\n";
            return rep.is_fluted ? kOk : kNegative;
        }
        if (*norm) {
            out << render_normal_form(normalize(read_sentence(io, file)));
            return kOk;
        }
        if (*dec) {
            Formula f = read_sentence(io, file);
            dopts.fl3.strategy = parse_strategy(strategy);
            DecideResult r = decide(f, dopts);
            out << "strategy: " << to_string(r.strategy) << "\n";
            out << "levels:";
            for (int l : r.levels) out << " " << l;
            out << "\nbranches: " << r.branches << "\n";
            if (r.sat && !model_out.empty()) io.emit(model_out, render_structure(*r.model));
            out << "RESULT: " << (r.sat ? "SAT" : "UNSAT") << "\n";
            return r.sat ? kOk : kNegative;
        }
        if (*red) {
            NormalForm nf = branch_nf(read_sentence(io, file), branch);
            out << render_normal_form(reduce_once(nf, dopts.reduce));
            return kOk;
        }
        if (*find) {
            Formula f = read_sentence(io, file);
            SearchLimits lim;
            lim.domain_cap = std::max(dopts.fl3.domain_cap, max_size);
            ModelSearch r = find_model_upto(f, max_size, lim);
            if (r.model) {
                io.emit(model_out.empty() ? "-" : model_out, render_structure(*r.model));
                out << "RESULT: SAT\n";
                return kOk;
            }
            out << "RESULT: NO-MODEL-UPTO(" << r.searched_upto << ")\n";
            return kNegative;
        }
        if (*eval) {
            Structure s = parse_structure(io.slurp(model_in));
            Formula f = read_sentence(io, file);
            FlutedReport rep = fluted_status(f);
            if (!rep.level || *rep.level != 0) throw UnboundVariable("eval needs a sentence");
            bool v = evaluate(s, f);
            out << "RESULT: " << (v ? "TRUE" : "FALSE") << "\n";
            return v ? kOk : kNegative;
        }
        if (*lift) {
            Structure reduced = parse_structure(io.slurp(model_in));
            Formula f = read_sentence(io, file);
            std::map<std::string, bool> assignment;
            NormalForm nf = branch_nf(f, branch, &assignment);
            Structure m = lift_model(nf, reduced);
            for (const auto& [name, value] : assignment) {
                m.declare(name, 0);
                if (value) m.set(name, {});
            }
            Signature sig = infer_signature(f);
            m.retain([&](const std::string& name) { return sig.contains(name); });
            for (const auto& p : sig.predicates()) m.declare(p.name, p.arity);
            io.emit(lift_out, render_structure(m));
            bool v = evaluate(m, f);
            out << "RESULT: " << (v ? "TRUE" : "FALSE") << "\n";
            return v ? kOk : kNegative;
        }
        if (*gphi) {
            Generated g = gen_phi(gm, gn);
            out << render_conjuncts(g.conjuncts, tptp);
            return kOk;
        }
        if (*gtil) {
            TilingSystem t = parse_tiling_system(io.slurp(system_file));
            Generated g = gen_tiling(gm, gn, t);
            out << render_conjuncts(g.conjuncts, tptp);
            return kOk;
        }
        if (*gmphi) {
            out << render_structure(canonical_phi_model(gm, gn));
            return kOk;
        }
        if (*gmtil) {
            TilingSystem t = parse_tiling_system(io.slurp(system_file));
            std::uint64_t side = tower(gm, static_cast<std::uint64_t>(gn));
            if (side > 64) throw CapExceeded("torus side " + std::to_string(side) + " is beyond the tiling search");
            auto tiling = find_tiling(t, static_cast<int>(side));
            if (!tiling) {
                err << "the system does not tile the " << side << "x" << side << " torus\n";
                return kNegative;
            }
            out << render_structure(canonical_tiling_model(gm, gn, t, *tiling));
            return kOk;
        }
    } catch (const CapExceeded& e) {
        err << "cap exceeded: " << e.what() << "\n";
        return kCap;
    } catch (const Overflow& e) {
        err << "cap exceeded: " << e.what() << "\n";
        return kCap;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace fluted::cli
