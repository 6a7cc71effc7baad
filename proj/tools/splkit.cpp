// splkit — command-line front end for the delta-oriented product-line toolkit.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "splkit/analysis.hpp"
#include "splkit/generation.hpp"
#include "splkit/model.hpp"
#include "splkit/oracle.hpp"
#include "splkit/refactor.hpp"
#include "splkit/syntax.hpp"

namespace {

using nlohmann::json;
using namespace splkit;

struct CliConfig {
    bool json_out = false;
    std::string in_file, in_file2, out_file;
    std::string direction = "inc";
    bool cleanup = false;
    std::string product_csv, keep_text;
    std::uint64_t seed = 0;
    int count = 100;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ProductLine load_spl(const std::string& path) {
    try {
        return parse_spl(slurp(path));
    } catch (const ParseError& e) {
        throw UsageError(path + ":" + std::to_string(e.line) + ":" + std::to_string(e.col) +
                         ": error: " + e.what());
    }
}

void write_out(const CliConfig& cfg, const std::string& text) {
    if (cfg.out_file.empty() || cfg.out_file == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out_file, std::ios::binary);
    if (!out) throw UsageError("cannot write file: " + cfg.out_file);
    out << text;
}

std::string product_str(const Product& p) {
    std::string s = "{";
    bool first = true;
    for (const auto& f : p) {
        s += (first ? "" : ", ") + f;
        first = false;
    }
    return s + "}";
}

json product_json(const Product& p) { return json(std::vector<std::string>(p.begin(), p.end())); }

void emit(const CliConfig& cfg, const json& doc, const std::string& text) {
    if (cfg.json_out)
        std::cout << doc.dump(2) << "\n";
    else
        std::cout << text;
}

// --- subcommands -----------------------------------------------------------

int cmd_check(const CliConfig& cfg) {
    const ProductLine pl = load_spl(cfg.in_file);
    const UnambiguityReport rep = check_unambiguity(pl);
    json doc{{"command", "check"},
             {"ok", rep.ok()},
             {"features", pl.features.size()},
             {"deltas", pl.deltas.size()},
             {"partitions", pl.order.size()},
             {"findings", json::array()}};
    std::string text;
    if (rep.ok()) {
        text = "ok: " + std::to_string(pl.features.size()) + " features, " +
               std::to_string(pl.deltas.size()) + " deltas, " + std::to_string(pl.order.size()) +
               " order partitions\n";
    } else {
        text = "ambiguous: " + std::to_string(rep.findings.size()) + " finding(s)\n";
        for (const auto& f : rep.findings) {
            doc["findings"].push_back(json{{"partition", f.partition},
                                           {"first", f.d1},
                                           {"second", f.d2},
                                           {"ref1", f.r1.str()},
                                           {"ref2", f.r2.str()}});
            text += "  partition #" + std::to_string(f.partition) + ": " + f.d1 + " (" +
                    f.r1.str() + ") overlaps " + f.d2 + " (" + f.r2.str() + ")\n";
        }
    }
    emit(cfg, doc, text);
    return rep.ok() ? 0 : 1;
}

int cmd_products(const CliConfig& cfg) {
    const ProductLine pl = load_spl(cfg.in_file);
    const std::vector<Product> products = enumerate_products(pl);
    json doc{{"command", "products"}, {"count", products.size()}, {"products", json::array()}};
    std::string text;
    for (const auto& p : products) {
        doc["products"].push_back(product_json(p));
        text += product_str(p) + "\n";
    }
    emit(cfg, doc, text);
    return 0;
}

Product parse_product_csv(const std::string& csv) {
    Product p;
    std::string item;
    std::istringstream ss(csv);
    while (std::getline(ss, item, ',')) {
        const auto a = item.find_first_not_of(" \t");
        if (a == std::string::npos) continue;
        const auto b = item.find_last_not_of(" \t");
        p.insert(item.substr(a, b - a + 1));
    }
    return p;
}

int cmd_generate(const CliConfig& cfg) {
    const ProductLine pl = load_spl(cfg.in_file);
    const Product product = parse_product_csv(cfg.product_csv);
    try {
        const Program prog = generate_variant(pl, product);
        emit(cfg,
             json{{"command", "generate"},
                  {"product", product_json(product)},
                  {"program", print_program(prog)}},
             print_program(prog));
        return 0;
    } catch (const ApplyError& e) {
        // A valid product whose generation trips over a delta operation is an
        // analysis finding, not a usage error.
        if (cfg.json_out)
            std::cout << json{{"command", "generate"},
                              {"product", product_json(product)},
                              {"error", e.what()},
                              {"kind", to_string(e.kind)},
                              {"ref", e.ref.str()}}
                             .dump(2)
                      << "\n";
        std::cerr << "generation failed: " << e.what() << "\n";
        return 1;
    }
}

int cmd_classify(const CliConfig& cfg) {
    const ProductLine pl = load_spl(cfg.in_file);
    const ClassificationReport rep = classify(pl);
    json classes = json::object(), evidence = json::object();
    std::string text;
    for (const auto& slug : kClassificationSlugs) {
        const bool yes = rep.flag(slug);
        classes[slug] = yes;
        evidence[slug] = json::array();
        text += slug + ": " + (yes ? "yes" : "no");
        const auto& vs = rep.evidence.at(slug);
        for (const auto& v : vs)
            evidence[slug].push_back(json{{"delta", v.delta},
                                          {"op", to_string(v.op)},
                                          {"ref", v.ref.str()},
                                          {"why", v.why}});
        if (!yes)
            text += " (" + vs.front().delta + ": " + to_string(vs.front().op) + " " +
                    vs.front().ref.str() + ")";
        text += "\n";
    }
    emit(cfg, json{{"command", "classify"}, {"classes", classes}, {"evidence", evidence}}, text);
    return 0;
}

int cmd_refactor(const CliConfig& cfg) {
    const ProductLine pl = load_spl(cfg.in_file);
    ProductLine out = cfg.direction == "inc" ? refactor_increasing(pl) : refactor_decreasing(pl);
    if (cfg.cleanup) out = remove_empty_deltas(out);
    const std::string text = print_spl(out);
    write_out(cfg, text);
    if (cfg.json_out) {
        json doc{{"command", "refactor"}, {"direction", cfg.direction}, {"cleanup", cfg.cleanup}};
        if (cfg.out_file.empty() || cfg.out_file == "-")
            doc["spl"] = text;
        else
            doc["output"] = cfg.out_file;
        std::cout << doc.dump(2) << "\n";
    }
    return 0;
}

int cmd_project(const CliConfig& cfg) {
    const ProductLine pl = load_spl(cfg.in_file);
    const Formula keep = parse_formula(cfg.keep_text, pl.features);
    const ProductLine out = project(pl, keep);
    std::set<std::string> kept;
    for (const auto& d : out.deltas) kept.insert(d.name);
    json dropped = json::array();
    for (const auto& d : pl.deltas)
        if (!kept.count(d.name)) dropped.push_back(d.name);
    const std::string text = print_spl(out);
    write_out(cfg, text);
    if (cfg.json_out) {
        json doc{{"command", "project"}, {"keep", print_formula(keep)}, {"dropped", dropped}};
        if (cfg.out_file.empty() || cfg.out_file == "-")
            doc["spl"] = text;
        else
            doc["output"] = cfg.out_file;
        std::cout << doc.dump(2) << "\n";
    }
    return 0;
}

int cmd_equiv(const CliConfig& cfg) {
    const ProductLine a = load_spl(cfg.in_file);
    const ProductLine b = load_spl(cfg.in_file2);
    const EquivalenceVerdict v = check_equivalence(a, b);
    json doc{{"command", "equiv"},
             {"equivalent", v.equivalent},
             {"products_compared", v.products_compared},
             {"witnesses", json::array()}};
    std::string text = (v.equivalent ? "equivalent (" : "not equivalent (") +
                       std::to_string(v.products_compared) + " products compared)\n";
    for (const auto& w : v.witnesses) {
        doc["witnesses"].push_back(json{{"product", product_json(w.product)}, {"detail", w.detail}});
        text += "  " + product_str(w.product) + ": " + w.detail + "\n";
    }
    emit(cfg, doc, text);
    return v.equivalent ? 0 : 1;
}

// Rotating weight profiles so the corpus exercises every classification
// branch: mixed, adds/removes only, wraps-heavy, voids-heavy.
RandomSplSpec fuzz_spec(std::uint64_t seed) {
    RandomSplSpec spec;
    spec.seed = seed;
    switch (seed % 4) {
        case 1:
            spec.w_modify_plain = spec.w_modify_wrap = spec.w_modify_void = spec.w_modify_extends = 0;
            break;
        case 2:
            spec.w_modify_plain = spec.w_modify_void = spec.w_modify_extends = 0;
            spec.w_modify_wrap = 4;
            break;
        case 3:
            spec.w_modify_plain = spec.w_modify_wrap = spec.w_modify_extends = 0;
            spec.w_modify_void = 4;
            break;
        default:
            break;
    }
    return spec;
}

int cmd_fuzz(const CliConfig& cfg) {
    const bool run_inc = cfg.direction == "inc" || cfg.direction == "both";
    const bool run_dec = cfg.direction == "dec" || cfg.direction == "both";
    for (int i = 0; i < cfg.count; ++i) {
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
        const ProductLine pl = generate_random_spl(fuzz_spec(seed));
        for (int dir = 0; dir < 2; ++dir) {
            if (dir == 0 && !run_inc) continue;
            if (dir == 1 && !run_dec) continue;
            const char* tag = dir == 0 ? "inc" : "dec";
            const ProductLine ref = dir == 0 ? refactor_increasing(pl) : refactor_decreasing(pl);
            const ClassificationReport rep = classify(ref);
            std::string fail;
            if (dir == 0 && !rep.pseudo_increasing)
                fail = "output is not pseudo-increasing";
            else if (dir == 1 && !rep.readd_pseudo_decreasing)
                fail = "output is not readd-pseudo-decreasing";
            if (fail.empty()) {
                const EquivalenceVerdict v = check_equivalence(pl, ref);
                if (!v.equivalent)
                    fail = "not equivalent: " + product_str(v.witnesses.front().product) + ": " +
                           v.witnesses.front().detail;
            }
            if (!fail.empty()) {
                emit(cfg,
                     json{{"command", "fuzz"},
                          {"count", cfg.count},
                          {"ok", false},
                          {"failing_seed", seed},
                          {"direction", tag},
                          {"detail", fail}},
                     "fuzz: seed " + std::to_string(seed) + " FAIL [" + tag + "] " + fail + "\n");
                return 1;
            }
        }
    }
    emit(cfg,
         json{{"command", "fuzz"}, {"count", cfg.count}, {"ok", true}},
         "fuzz: " + std::to_string(cfg.count) + " seed(s) ok [" + cfg.direction + "]\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CliConfig cfg;
    if (const char* env = std::getenv("SPLKIT_FORMAT")) cfg.json_out = std::string(env) == "json";

    CLI::App app{"splkit — delta-oriented product-line toolkit"};
    app.require_subcommand(1);
    app.add_flag("--json,!--text", cfg.json_out,
                 "emit one structured document (default from SPLKIT_FORMAT)");

    auto* check = app.add_subcommand("check", "validate a product line and check unambiguity");
    check->add_option("file", cfg.in_file, "product-line file")->required();

    auto* products = app.add_subcommand("products", "list all valid products");
    products->add_option("file", cfg.in_file, "product-line file")->required();

    auto* generate = app.add_subcommand("generate", "generate the variant for one product");
    generate->add_option("file", cfg.in_file, "product-line file")->required();
    generate->add_option("--product", cfg.product_csv, "comma-separated feature names")->required();

    auto* classify_cmd = app.add_subcommand("classify", "report the monotonicity classes");
    classify_cmd->add_option("file", cfg.in_file, "product-line file")->required();

    auto* refactor = app.add_subcommand("refactor", "refactor into monotonic form");
    refactor->add_option("file", cfg.in_file, "product-line file")->required();
    refactor->add_option("--direction", cfg.direction, "inc or dec")
        ->check(CLI::IsMember({"inc", "dec"}))
        ->required();
    refactor->add_flag("--cleanup", cfg.cleanup, "drop empty delta modules afterwards");
    refactor->add_option("-o,--output", cfg.out_file, "output file (default stdout)");

    auto* project_cmd = app.add_subcommand("project", "restrict to products satisfying a formula");
    project_cmd->add_option("file", cfg.in_file, "product-line file")->required();
    project_cmd->add_option("--keep", cfg.keep_text, "feature formula to conjoin")->required();
    project_cmd->add_option("-o,--output", cfg.out_file, "output file (default stdout)");

    auto* equiv = app.add_subcommand("equiv", "compare two product lines product by product");
    equiv->add_option("file1", cfg.in_file, "first product-line file")->required();
    equiv->add_option("file2", cfg.in_file2, "second product-line file")->required();

    auto* fuzz = app.add_subcommand("fuzz", "random differential test of the refactorings");
    fuzz->add_option("--count", cfg.count, "number of seeds")->check(CLI::PositiveNumber);
    fuzz->add_option("--seed", cfg.seed, "first seed");
    fuzz->add_option("--direction", cfg.direction, "inc, dec or both")
        ->check(CLI::IsMember({"inc", "dec", "both"}));

    fuzz->parse_complete_callback([&] {
        if (!fuzz->count("--direction")) cfg.direction = "both";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (check->parsed()) return cmd_check(cfg);
        if (products->parsed()) return cmd_products(cfg);
        if (generate->parsed()) return cmd_generate(cfg);
        if (classify_cmd->parsed()) return cmd_classify(cfg);
        if (refactor->parsed()) return cmd_refactor(cfg);
        if (project_cmd->parsed()) return cmd_project(cfg);
        if (equiv->parsed()) return cmd_equiv(cfg);
        if (fuzz->parsed()) return cmd_fuzz(cfg);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SplError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
