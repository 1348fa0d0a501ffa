// Command-line front end: bound computations, verification suites,
// Monte-Carlo sampler runs, decay curves, and family inspection.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rectbound/bounds.hpp"
#include "rectbound/directproduct.hpp"
#include "rectbound/family.hpp"
#include "rectbound/json_io.hpp"
#include "rectbound/suites.hpp"

using nlohmann::json;
using namespace rectbound;

namespace {

constexpr const char* kSchemaVersion = "1";

// JSON config files: a flat object of option name -> value
class JsonConfig : public CLI::Config {
  public:
    std::string to_config(const CLI::App* app, bool default_also, bool,
                          std::string) const override {
        json j = json::object();
        for (const CLI::Option* opt : app->get_options({})) {
            if (!opt->get_configurable() || opt->get_lnames().empty()) continue;
            if (!opt->get_default_str().empty() || default_also) {
                if (opt->count() == 1)
                    j[opt->get_lnames()[0]] = opt->results().at(0);
                else if (opt->count() == 0 && default_also)
                    j[opt->get_lnames()[0]] = opt->get_default_str();
            }
        }
        return j.dump(2) + "\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        json j;
        try {
            input >> j;
        } catch (const json::parse_error& e) {
            throw CLI::ConfigError(e.what());
        }
        if (!j.is_object()) throw CLI::ConfigError("config must be a JSON object");
        std::vector<CLI::ConfigItem> out;
        for (const auto& [key, value] : j.items()) {
            CLI::ConfigItem item;
            item.name = key;
            if (value.is_string())
                item.inputs.push_back(value.get<std::string>());
            else
                item.inputs.push_back(value.dump());
            out.push_back(std::move(item));
        }
        return out;
    }
};

// flags > config file > defaults; the effective values are echoed into
// every output document
struct RunConfig {
    std::string command;
    std::string family = "AND";
    int n = 1;
    int z = 1;
    double eps = -1.0;
    double delta = 0.0;
    double eps_prime = 0.3;
    double c = 1.0;
    double reduced_delta = 0.0;
    long long reduced_T = 0;
    int reduced_k = 0;
    long long trials = 0;
    int t = 4;
    double budget = 0.5;
    uint64_t seed = 1;
    std::string suite = "all";
    std::string out;
    std::string format = "json";

    json to_json() const {
        return json{{"command", command},
                    {"family", family},
                    {"n", n},
                    {"z", z},
                    {"eps", eps},
                    {"delta", delta},
                    {"eps_prime", eps_prime},
                    {"c", c},
                    {"reduced_delta", reduced_delta},
                    {"reduced_T", reduced_T},
                    {"reduced_k", reduced_k},
                    {"trials", trials},
                    {"t", t},
                    {"budget", budget},
                    {"seed", seed},
                    {"suite", suite},
                    {"format", format}};
    }
};

void emit(const RunConfig& cfg, const json& doc_in) {
    json doc = doc_in;
    doc["schema_version"] = kSchemaVersion;
    doc["config"] = cfg.to_json();
    std::string text = doc.dump(2) + "\n";
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file " + cfg.out);
        f << text;
    }
}

void emit_text(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file " + cfg.out);
        f << text;
    }
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

json rect_json(const Rectangle& r) {
    return json{{"rows", r.rows}, {"cols", r.cols}};
}

int cmd_bound(const RunConfig& cfg, const std::string& sub) {
    FamilyInstance fam = make_family(cfg.family, cfg.n);
    if (cfg.eps < 0.0) {
        std::cerr << "bound: --eps is required\n";
        return 2;
    }
    json result;
    if (sub == "rec") {
        auto r = lrec(fam.relation, fam.distribution, cfg.z, cfg.eps);
        result = {{"value", r.value},
                  {"infinite", r.infinite},
                  {"witness", rect_json(r.witness)},
                  {"witness_error", r.witness_error}};
    } else if (sub == "srec-entropy") {
        auto r = srec_entropy(fam.relation, fam.distribution, cfg.z, cfg.eps,
                              cfg.delta);
        result = {{"value", r.value},
                  {"infinite", r.infinite},
                  {"g_distance", r.g_distance},
                  {"witness_g", relation_to_json(r.witness_g)}};
    } else {
        auto r = srec_lp(fam.relation, cfg.z, cfg.eps);
        result = {{"primal_value", r.primal_value},
                  {"log_value", r.log_value},
                  {"gap", r.gap},
                  {"rectangles_generated", r.rectangles_generated},
                  {"dual_lambda", r.dual_lambda},
                  {"dual_phi", r.dual_phi}};
    }
    emit(cfg, json{{"result", result}});
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    SuiteOptions opt;
    opt.family = cfg.family;
    opt.n = cfg.n;
    opt.eps = cfg.eps < 0.0 ? 0.3 : cfg.eps;
    opt.seed = cfg.seed;
    if (cfg.trials > 0) opt.trials = cfg.trials;
    auto results = run_suites(cfg.suite, opt);
    bool all = true;
    std::ostringstream table;
    json jres = json::array();
    for (const auto& sr : results) {
        json jsuite{{"suite", sr.name}, {"pass", sr.all_pass()},
                    {"items", json::array()}};
        for (const auto& it : sr.items) {
            table << (it.pass ? "PASS" : "FAIL") << "  " << sr.name << ": "
                  << it.label;
            if (!it.detail.empty()) table << "  [" << it.detail << "]";
            table << "\n";
            jsuite["items"].push_back({{"label", it.label},
                                       {"pass", it.pass},
                                       {"detail", it.detail}});
            all = all && it.pass;
        }
        jres.push_back(jsuite);
    }
    std::cout << table.str();
    if (!cfg.out.empty()) emit(cfg, json{{"result", jres}});
    return all ? 0 : 1;
}

int cmd_sampler(const RunConfig& cfg, bool verify_only) {
    if (!verify_only && cfg.trials <= 0) {
        std::cerr << "sampler run: --trials must be positive\n";
        return 2;
    }
    FamilyInstance fam = make_family(cfg.family, cfg.n);
    ProtocolTree tree = relation_tree(fam.relation);
    TranscriptFactorization fac = factorize(tree, fam.distribution);
    double eps = cfg.eps < 0.0 ? 0.3 : cfg.eps;
    ConfigOverrides ov;
    if (cfg.reduced_delta > 0.0) {
        ov.Delta = cfg.reduced_delta;
        ov.reduced = true;
    }
    if (cfg.reduced_T > 0) {
        ov.T = cfg.reduced_T;
        ov.reduced = true;
    }
    if (cfg.reduced_k > 0) {
        ov.k = cfg.reduced_k;
        ov.reduced = true;
    }
    SamplerConfig scfg = make_config(cfg.c, eps, 1.0, fac.m_size, ov);
    DerivedTables der = derived_quantities(fac);
    json result{{"parameters",
                 {{"Delta", scfg.Delta},
                  {"T", scfg.T},
                  {"k", scfg.k},
                  {"reduced", scfg.reduced}}}};
    if (verify_only) {
        auto pre = check_main_lemma_preconditions(fac, der, scfg);
        result["preconditions"] = {{"ok", pre.ok},
                                   {"input_divergence", pre.relent_xy_p},
                                   {"info_budget", pre.info_budget}};
        if (pre.ok) {
            GoodSets gs = good_sets(fac, der, scfg);
            result["good_sets"] = {{"p_g1", gs.p_g1},
                                   {"p_g2", gs.p_g2},
                                   {"p_g12", gs.p_g12},
                                   {"claim_g1", gs.claim_g1},
                                   {"claim_g2", gs.claim_g2},
                                   {"claim_g12", gs.claim_g12},
                                   {"inclusion", gs.claim_inclusion}};
            IdealizedOutcome io = idealized_outcome(fac, der, scfg);
            result["idealized"] = {{"C", io.C},
                                   {"l1_xym", io.l1_xym},
                                   {"l1_outputs", io.l1_outputs},
                                   {"bound_ok", io.bound_ok}};
        }
        emit(cfg, json{{"result", result}});
        bool ok = pre.ok;
        return ok ? 0 : 1;
    }
    SamplerReport rep = run_monte_carlo(fac, scfg, cfg.trials, cfg.seed);
    auto est = [](const Estimate& e) {
        return json{{"value", e.value},
                    {"std_error", e.std_error},
                    {"trials", e.trials},
                    {"defined", e.defined}};
    };
    result["report"] = {{"trials", rep.trials},
                        {"seed", rep.seed},
                        {"pr_agree", est(rep.pr_agree)},
                        {"pr_E", est(rep.pr_E)},
                        {"pr_Bc_given_E", est(rep.pr_Bc_given_E)},
                        {"pr_H", est(rep.pr_H)},
                        {"pr_alice_nonempty", est(rep.pr_alice_nonempty)},
                        {"h_events", rep.h_events},
                        {"hist_l1", rep.hist_l1},
                        {"hist_l1_threshold", rep.hist_l1_threshold},
                        {"hist_ok", rep.hist_ok}};
    emit(cfg, json{{"result", result}});
    return 0;
}

int cmd_decay(const RunConfig& cfg) {
    if (cfg.trials <= 0) {
        std::cerr << "decay: --trials must be positive\n";
        return 2;
    }
    FamilyInstance fam = make_family(cfg.family, cfg.n);
    ProtocolTree tree = relation_tree(fam.relation);
    auto curve = decay_experiment(fam.relation, fam.distribution, tree, cfg.t,
                                  cfg.budget, cfg.trials, cfg.seed);
    if (cfg.format == "csv") {
        std::ostringstream csv;
        csv << "t,successes,trials,estimate,std_error\n";
        for (const auto& pt : curve) {
            long long successes =
                static_cast<long long>(std::llround(pt.success * pt.trials));
            csv << pt.t << "," << successes << "," << pt.trials << ","
                << pt.success << "," << pt.std_error << "\n";
        }
        emit_text(cfg, csv.str());
        return 0;
    }
    json points = json::array();
    for (const auto& pt : curve) {
        long long successes =
            static_cast<long long>(std::llround(pt.success * pt.trials));
        points.push_back({{"t", pt.t},
                          {"successes", successes},
                          {"trials", pt.trials},
                          {"estimate", pt.success},
                          {"std_error", pt.std_error}});
    }
    emit(cfg, json{{"result", {{"points", points}}}});
    return 0;
}

int cmd_family(const RunConfig& cfg, bool list_only) {
    if (list_only) {
        json names = family_names();
        emit(cfg, json{{"result", {{"families", names}}}});
        return 0;
    }
    FamilyInstance fam = make_family(cfg.family, cfg.n);
    emit(cfg, json{{"result",
                    {{"relation", relation_to_json(fam.relation)},
                     {"distribution", distribution_to_json(fam.distribution)}}}});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"smooth rectangle bound toolkit"};
    app.require_subcommand(1);
    app.fallthrough(true);
    RunConfig cfg;

    app.set_config("--config")->configurable(false);
    app.config_formatter(std::make_shared<JsonConfig>());

    // one flat option namespace on the root: subcommands see these through
    // fallthrough, and flat JSON config keys bind to them directly
    app.add_option("--seed", cfg.seed, "master 64-bit seed");
    app.add_option("--out", cfg.out, "output file (default: stdout)")
        ->configurable(false);
    app.add_option("--format", cfg.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--family", cfg.family, "family name");
    app.add_option("--n", cfg.n, "bits per player")->check(CLI::Range(1, 6));
    app.add_option("--z", cfg.z, "target answer");
    app.add_option("--eps", cfg.eps, "error parameter");
    app.add_option("--delta", cfg.delta, "smoothing distance");
    app.add_option("--suite", cfg.suite, "suite name or 'all'");
    app.add_option("--trials", cfg.trials, "randomized/Monte-Carlo trials");
    app.add_option("--c", cfg.c, "information budget");
    app.add_option("--reduced-delta", cfg.reduced_delta,
                   "reduced Delta override");
    app.add_option("--reduced-T", cfg.reduced_T, "reduced T override");
    app.add_option("--reduced-k", cfg.reduced_k, "reduced k override");
    app.add_option("--t", cfg.t, "largest t")->check(CLI::Range(1, 32));
    app.add_option("--budget", cfg.budget, "budgeted coordinate fraction");

    CLI::App* bound = app.add_subcommand("bound", "rectangle bounds");
    bound->require_subcommand(1);
    for (const char* s : {"rec", "srec-entropy", "srec-lp"}) {
        CLI::App* b = bound->add_subcommand(s);
        b->callback([&cfg, s] { cfg.command = std::string("bound ") + s; });
    }

    CLI::App* verify = app.add_subcommand("verify", "lemma/claim suites");
    verify->callback([&cfg] { cfg.command = "verify"; });

    CLI::App* sampler = app.add_subcommand("sampler", "correlated sampling");
    sampler->require_subcommand(1);
    for (const char* s : {"run", "verify"}) {
        CLI::App* sc = sampler->add_subcommand(s);
        sc->callback(
            [&cfg, s] { cfg.command = std::string("sampler ") + s; });
    }

    CLI::App* decay = app.add_subcommand("decay", "success-vs-t curve");
    decay->callback([&cfg] { cfg.command = "decay"; });

    CLI::App* family = app.add_subcommand("family", "built-in families");
    family->require_subcommand(1);
    CLI::App* flist = family->add_subcommand("list");
    flist->callback([&cfg] { cfg.command = "family list"; });
    CLI::App* fdump = family->add_subcommand("dump");
    fdump->callback([&cfg] { cfg.command = "family dump"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cfg.command.rfind("bound ", 0) == 0)
            return cmd_bound(cfg, cfg.command.substr(6));
        if (cfg.command == "verify") return cmd_verify(cfg);
        if (cfg.command == "sampler run") return cmd_sampler(cfg, false);
        if (cfg.command == "sampler verify") return cmd_sampler(cfg, true);
        if (cfg.command == "decay") return cmd_decay(cfg);
        if (cfg.command == "family list") return cmd_family(cfg, true);
        if (cfg.command == "family dump") return cmd_family(cfg, false);
        std::cerr << "no command selected\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
