#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cubic/class_group.hpp"
#include "cubic/densities.hpp"
#include "cubic/errors.hpp"
#include "cubic/field.hpp"
#include "cubic/oracle.hpp"
#include "cubic/selmer.hpp"
#include "cubic/survey.hpp"

using namespace cubic;

namespace {

std::string show(const Rational& q) { return to_string(q) + " (" + to_decimal(q, 12) + ")"; }

SignatureFilter filter_of(const std::string& s) {
    if (s == "real") return SignatureFilter::TotallyReal;
    if (s == "complex") return SignatureFilter::Complex;
    return SignatureFilter::Both;
}

Signature signature_of_name(const std::string& s) {
    if (s == "real") return Signature::TotallyReal;
    if (s == "complex") return Signature::Complex;
    throw std::invalid_argument("signature must be real or complex");
}

void print_invariants(const BinaryCubicForm& input, const PrimeSet& S, bool narrow) {
    BinaryCubicForm f = reduce(input);
    if (!is_maximal(f)) throw std::invalid_argument(to_string(input) + " is not maximal");
    NumberField K(f);
    PrimeSet primes = S;
    for (i64 p : {2, 3}) primes.push_back(p);
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    ClassGroupComputation C(K, primes);
    std::map<i64, SplittingType> split;
    for (i64 p : primes) split[p] = splitting_type(K.ring(), p);
    std::cout << "form " << to_string(f) << "  disc " << K.disc() << "  " << to_string(K.signature()) << "\n";
    std::cout << "  Cl    " << divisors_string(C.class_group().divisors) << "\n";
    if (narrow) std::cout << "  Cl+   " << divisors_string(C.narrow_class_group().divisors) << "\n";
    std::cout << "  Cl_S  " << divisors_string(C.s_quotient(C.class_group(), S).divisors) << "\n";
    if (narrow) std::cout << "  Cl+_S " << divisors_string(C.s_quotient(C.narrow_class_group(), S).divisors) << "\n";
    std::cout << "  nu_S  " << nu_S(split, S) << "\n";
    std::cout << "  |Sel| formula " << selmer_size_formula(C, S);
    try {
        std::cout << "  exact sequence " << selmer_size_exact_sequence(C, S) << "  direct 2^"
                  << C.selmer_direct_dim(S) << "\n";
    } catch (const SaturationError& e) {
        std::cout << "  saturation failure: " << e.what() << "\n";
    }
    KInputs in = k_inputs(C);
    std::cout << "  K_2n 2-ranks (n = 0,1,2,3 mod 4):";
    for (int n = 4; n <= 7; ++n) std::cout << " " << k_rank(in, n).rank;
    std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cubic field statistics: enumeration, class groups, Selmer and K-group data, predictions"};
    app.require_subcommand(1);

    // enumerate
    auto* en = app.add_subcommand("enumerate", "list cubic fields by discriminant");
    i64 en_max = 1000;
    std::string en_sig = "both";
    bool en_cyclic = false;
    unsigned en_threads = 1;
    en->add_option("--max-disc", en_max, "bound X (|D| < X)")->required();
    en->add_option("--signature", en_sig)->check(CLI::IsMember({"real", "complex", "both"}));
    en->add_flag("--include-cyclic", en_cyclic);
    en->add_option("--threads", en_threads);

    // invariants
    auto* inv = app.add_subcommand("invariants", "class groups, S-quotients, Selmer sizes and K-ranks");
    std::string inv_s;
    bool inv_narrow = false;
    std::vector<std::string> inv_forms;
    i64 inv_max = 0;
    inv->add_option("--s", inv_s, "primes, e.g. 2,3");
    inv->add_flag("--narrow", inv_narrow);
    inv->add_option("--form", inv_forms, "a,b,c,d (repeatable)");
    inv->add_option("--max-disc", inv_max, "every field with |D| < X");

    // survey
    auto* sv = app.add_subcommand("survey", "run a survey from a JSON config");
    std::string sv_config, sv_json, sv_csv;
    int sv_threads = 0;
    sv->add_option("--config", sv_config)->required()->check(CLI::ExistingFile);
    sv->add_option("--json", sv_json, "write the JSON report here (default: stdout)");
    sv->add_option("--csv", sv_csv, "write the CSV report here");
    sv->add_option("--threads", sv_threads, "override the config");

    // predict
    auto* pr = app.add_subcommand("predict", "predicted averages");
    std::string pr_thm, pr_s, pr_sig = "real";
    bool pr_plus = false;
    int pr_r = 0, pr_nu = -1;
    pr->add_option("--theorem", pr_thm)->required()->check(
        CLI::IsMember({"1.1", "1.2", "1.4", "1.5", "1.6", "5.2", "5.3", "5.4", "5.5", "cor1.3"}));
    pr->add_option("--s", pr_s);
    pr->add_option("--signature", pr_sig)->check(CLI::IsMember({"real", "complex"}));
    pr->add_flag("--plus", pr_plus, "narrow class group");
    pr->add_option("--r", pr_r, "sum of (r_p - 1) for conditioned averages");
    pr->add_option("--nu", pr_nu, "fixed value of nu_S");

    // masses
    auto* ms = app.add_subcommand("masses", "local masses at a prime");
    i64 ms_p = 2;
    ms->add_option("--p", ms_p)->required();

    // verify-oracle
    auto* vo = app.add_subcommand("verify-oracle", "compare the relation method with the exhaustive oracle");
    i64 vo_max = 2000;
    vo->add_option("--max-disc", vo_max)->required();

    // kgroups
    auto* kg = app.add_subcommand("kgroups", "average size of K_2n(O_K)[2]");
    int kg_n = 0;
    std::string kg_sig = "both";
    kg->add_option("--n-mod-4", kg_n)->required()->check(CLI::Range(0, 3));
    kg->add_option("--signature", kg_sig)->check(CLI::IsMember({"real", "complex", "both"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*en) {
            for (const auto& r : enumerate(en_max, filter_of(en_sig), en_cyclic, en_threads)) std::cout << serialize(r) << "\n";
        } else if (*inv) {
            PrimeSet S = parse_prime_set(inv_s);
            for (const auto& s : inv_forms) print_invariants(parse_form(s), S, inv_narrow);
            if (inv_max > 0) {
                EnumerateOptions opt;
                opt.max_abs_disc = inv_max;
                for (const auto& f : enumerate_forms(opt)) print_invariants(f, S, inv_narrow);
            }
        } else if (*sv) {
            SurveyConfig cfg = load_config(sv_config);
            if (sv_threads > 0) cfg.threads = static_cast<unsigned>(sv_threads);
            SurveyReport rep = run_survey(cfg);
            if (sv_json.empty()) {
                std::cout << report_json(rep);
            } else {
                std::ofstream(sv_json) << report_json(rep);
            }
            if (!sv_csv.empty()) std::ofstream(sv_csv) << report_csv(rep);
            if (!rep.complete) return 2;
        } else if (*pr) {
            const PrimeSet S = parse_prime_set(pr_s);
            const Signature sig = signature_of_name(pr_sig);
            if (pr_thm == "1.1") {
                std::cout << show(predict_cl_avg(sig, pr_plus, {})) << "\n";
            } else if (pr_thm == "1.2") {
                std::cout << show(predict_cl_avg(sig, pr_plus, S)) << "\n";
            } else if (pr_thm == "1.4") {
                std::cout << show(predict_cl_avg_conditioned(sig, pr_plus, pr_r)) << "\n";
            } else if (pr_thm == "1.5") {
                std::cout << show(predict_selmer_avg(sig, S)) << "\n";
            } else if (pr_thm == "1.6") {
                for (int n = 0; n < 4; ++n) std::cout << "n = " << n << " mod 4: " << show(predict_kgroup_avg(sig, n)) << "\n";
            } else if (pr_thm == "5.2") {
                std::cout << show(predict_2nu_avg(S)) << "\n";
            } else if (pr_thm == "5.3") {
                std::cout << show(predict_cl_avg_fixed_nu(sig, pr_plus, static_cast<int>(S.size()), pr_nu)) << "\n";
            } else if (pr_thm == "5.4") {
                std::cout << show(predict_fixed_nu(sig, pr_plus, static_cast<int>(S.size()), pr_nu)) << "\n";
            } else if (pr_thm == "5.5") {
                std::cout << show(predict_2nu_cl_avg(sig, pr_plus, S)) << "\n";
            } else {
                std::cout << show(predict_cor13_bound(S)) << "\n";
            }
        } else if (*ms) {
            const i64 p = ms_p;
            std::cout << "total      " << show(mu_total(p)) << "\n";
            for (int r = 1; r <= 3; ++r) {
                std::cout << "r = " << r << "      " << show(mass_sigma_r(p, r));
                if (p > 3) std::cout << "   enumerated " << to_string(mass_tame_bruteforce(p, r));
                std::cout << "\n";
            }
            for (const auto& t : all_descriptors()) std::cout << "  " << to_string(t) << "  " << show(mass_descriptor(p, t)) << "\n";
            std::cout << "tilde mass " << show(tilde_mass_all(p)) << "\n";
            std::cout << "tilde ratio " << show(tilde_ratio_all(p)) << "\n";
        } else if (*vo) {
            EnumerateOptions opt;
            opt.max_abs_disc = vo_max;
            std::size_t n = 0, bad = 0;
            for (const auto& f : enumerate_forms(opt)) {
                NumberField K(f);
                ClassGroupComputation C(K);
                ClassGroupOracle O(K, {2, 3}, std::max<i64>(vo_max, ClassGroupOracle::default_threshold));
                bool ok = true;
                for (const PrimeSet& S : {PrimeSet{}, PrimeSet{2}, PrimeSet{2, 3}}) {
                    ok = ok && C.s_quotient(C.class_group(), S) == O.s_quotient(O.class_group(), S);
                    ok = ok && C.s_quotient(C.narrow_class_group(), S) == O.s_quotient(O.narrow_class_group(), S);
                }
                ++n;
                if (!ok) {
                    ++bad;
                    std::cout << "mismatch " << K.disc() << " " << to_string(f) << "\n";
                }
            }
            std::cout << n << " fields, " << bad << " mismatches\n";
            return bad ? 1 : 0;
        } else if (*kg) {
            if (kg_sig != "complex") std::cout << "real    " << show(predict_kgroup_avg(Signature::TotallyReal, kg_n)) << "\n";
            if (kg_sig != "real") std::cout << "complex " << show(predict_kgroup_avg(Signature::Complex, kg_n)) << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
