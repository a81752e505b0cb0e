// Command line front end: table parsing, invariants, classification,
// isomorphism queries, canonical forms, derivation replays and the full
// verification run. Exit codes: 0 all checks passed (probabilistic records
// allowed), 1 a check failed or the classification found a genuine anomaly,
// 2 usage or input error.

#include "leibniz/bilinear_forms.hpp"
#include "leibniz/catalog.hpp"
#include "leibniz/classifier.hpp"
#include "leibniz/proof_replay.hpp"
#include "leibniz/split.hpp"
#include "leibniz/table_io.hpp"
#include "leibniz/verify_paper.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace leibniz;
using GQ = GaussianRational;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

TableFormat detect_format(const std::string& path, const std::string& text,
                          const std::string& requested) {
    if (requested == "dsl") return TableFormat::dsl;
    if (requested == "json") return TableFormat::json;
    if (path.size() > 5 && path.compare(path.size() - 5, 5, ".json") == 0) return TableFormat::json;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '{' ? TableFormat::json : TableFormat::dsl;
    }
    return TableFormat::dsl;
}

TableDocument load_table(const std::string& path, const std::string& format) {
    std::string text = read_file(path);
    return parse_table(text, detect_format(path, text, format));
}

std::uint64_t env_seed() {
    if (const char* v = std::getenv("LEIBNIZ_SEED")) return std::strtoull(v, nullptr, 10);
    return 0;
}

ClassId parse_class_id(const std::string& name, const std::string& param_text) {
    std::string digits = name;
    if (!digits.empty() && (digits[0] == 'A' || digits[0] == 'a')) digits.erase(0, 1);
    int index = std::atoi(digits.c_str());
    if (index < 1 || index > 25) throw error("unknown catalog class '" + name + "'");
    ClassId id{index};
    if (!param_text.empty()) {
        auto lit = parse_scalar_text(param_text);
        if (!lit || !lit->rational)
            throw error("parameter must be an exact scalar literal, got '" + param_text + "'");
        id.param = lit->exact;
    } else if (is_parametric(index)) {
        id.param = default_param_grid(index)[1];
        std::cerr << "note: " << class_spec(index).name << " takes a parameter; using "
                  << format_scalar(*id.param) << " (pass --param to choose)\n";
    }
    return id;
}

void print_fingerprint(const Fingerprint& fp) {
    std::cout << "lower central series dims: ";
    for (std::size_t i = 0; i < fp.lcs_dims.size(); ++i)
        std::cout << (i ? ", " : "") << fp.lcs_dims[i];
    std::cout << "\n";
    if (fp.nilpotency_class)
        std::cout << "nilpotent of class " << *fp.nilpotency_class << "\n";
    else
        std::cout << "not nilpotent\n";
    std::cout << "dim Leib(A) = " << fp.dim_leib << (fp.lie ? "  (Lie algebra)" : "") << "\n";
    std::cout << "centers: dim Z^l = " << fp.dim_zl << ", dim Z^r = " << fp.dim_zr
              << ", dim Z = " << fp.dim_z << "\n";
}

int run_check(const std::string& path, const std::string& format) {
    auto doc = load_table(path, format);
    if (doc.exact && doc.exact_table) {
        auto rep = leibniz_defect(*doc.exact_table);
        if (rep.value == 0.0) {
            std::cout << "left Leibniz identity holds exactly\n";
            return 0;
        }
        std::cout << "Leibniz defect " << rep.value << " at basis triple ("
                  << rep.worst_triple[0] + 1 << "," << rep.worst_triple[1] + 1 << ","
                  << rep.worst_triple[2] + 1 << ")\n";
        return 1;
    }
    auto rep = leibniz_defect(doc.approx_table);
    bool ok = within_tol(rep.value, Tolerances::residual, std::max(1.0, doc.approx_table.max_abs()));
    std::cout << "Leibniz defect " << rep.value << (ok ? " (within tolerance)\n" : "\n");
    return ok ? 0 : 1;
}

template <class K>
int run_invariants_on(const StructureTable<K>& t) {
    auto rep = leibniz_defect(t);
    std::cout << "Leibniz defect: " << rep.value << "\n";
    if (!is_leibniz(t)) {
        std::cout << "not a Leibniz algebra; invariants below describe the raw table\n";
    }
    auto series = lower_central_series(t);
    auto [zl, zr, z] = centers(t);
    Fingerprint fp;
    fp.n = t.dim();
    fp.lcs_dims = series.dims;
    fp.nilpotency_class = series.nilpotency_class;
    fp.dim_leib = leib_ideal(t).dim();
    fp.dim_zl = zl.dim();
    fp.dim_zr = zr.dim();
    fp.dim_z = z.dim();
    fp.lie = fp.dim_leib == 0;
    print_fingerprint(fp);
    return 0;
}

int run_classify(const std::string& path, const std::string& format, const SolverConfig& solver) {
    auto doc = load_table(path, format);
    try {
        ClassificationResult res = doc.exact && doc.exact_table
                                       ? classify(*doc.exact_table, solver)
                                       : classify(doc.approx_table, solver);
        std::cout << "isomorphic to " << res.class_name() << "\n";
        std::cout << "witness (input basis -> catalog basis):\n";
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j)
                std::cout << (j ? "  " : "  [") << format_scalar(res.witness.p(i, j));
            std::cout << "]\n";
        }
        std::cout << "witness residual " << res.witness.residual
                  << (res.witness.exact_certified ? " (certified exactly)" : "") << "\n";
        return 0;
    } catch (const is_lie_error&) {
        std::cout << "input is a Lie algebra; the catalog covers non-Lie algebras only\n";
        return 0;
    } catch (const not_nilpotent_error&) {
        std::cout << "input is not nilpotent\n";
        return 0;
    } catch (const is_split_error& e) {
        std::cout << "input splits as a direct sum of two nontrivial ideals (dims "
                  << e.split.ideal_a.dim() << " + " << e.split.ideal_b.dim() << ")\n";
        return 0;
    } catch (const unclassified_error& e) {
        std::cout << "UNCLASSIFIED: " << e.what() << "\n";
        std::cout << "this contradicts the completeness of the catalog and is a finding\n";
        return 1;
    }
}

int run_iso(const std::string& path_a, const std::string& path_b, const std::string& format,
            const SolverConfig& solver) {
    auto a = load_table(path_a, format);
    auto b = load_table(path_b, format);
    IsoVerdict verdict;
    if (a.exact && a.exact_table && b.exact && b.exact_table)
        verdict = find_isomorphism(*a.exact_table, *b.exact_table, solver);
    else
        verdict = find_isomorphism(a.approx_table, b.approx_table, solver);

    switch (verdict.kind) {
    case IsoVerdict::Kind::witness: {
        const auto& w = *verdict.witness;
        std::cout << "isomorphic; witness P with P c1_ij = [P e_i, P e_j]:\n";
        for (int i = 0; i < w.p.rows(); ++i) {
            for (int j = 0; j < w.p.cols(); ++j)
                std::cout << (j ? "  " : "  [") << format_scalar(w.p(i, j));
            std::cout << "]\n";
        }
        std::cout << "residual " << w.residual << (w.exact_certified ? " (certified exactly)" : "")
                  << "\n";
        return 0;
    }
    case IsoVerdict::Kind::distinguished: {
        std::cout << "not isomorphic; invariants differ:";
        for (const auto& f : verdict.distinguished_by) std::cout << " " << f;
        std::cout << "\n";
        return 0;
    }
    case IsoVerdict::Kind::probably_not:
        std::cout << "probably not isomorphic: invariants agree but no witness in "
                  << verdict.restarts_exhausted << " restarts\n";
        return 0;
    }
    return 0;
}

int run_canon_form(const std::string& path) {
    auto doc = parse_matrix2(read_file(path));
    if (doc.exact && doc.exact_m) {
        try {
            auto res = congruence_canonical(*doc.exact_m);
            std::cout << "canonical form " << label_name(res.label);
            if (res.param) std::cout << " with c = " << format_scalar(*res.param);
            std::cout << " (exact)\n";
            std::cout << "witness P (P^T M P = canonical):\n";
            for (int i = 0; i < 2; ++i)
                std::cout << "  [" << format_scalar(res.p(i, 0)) << "  "
                          << format_scalar(res.p(i, 1)) << "]\n";
            return 0;
        } catch (const needs_radicals&) {
            std::cout << "exact witness needs radicals; switching to the approximate backend\n";
        }
    }
    auto res = congruence_canonical(doc.approx_m);
    std::cout << "canonical form " << label_name(res.label);
    if (res.param) std::cout << " with c = " << format_scalar(*res.param);
    std::cout << "\nwitness P (P^T M P = canonical):\n";
    for (int i = 0; i < 2; ++i)
        std::cout << "  [" << format_scalar(res.p(i, 0)) << "  " << format_scalar(res.p(i, 1))
                  << "]\n";
    return 0;
}

int run_replay(const std::string& theorem, int samples, std::uint64_t seed) {
    Report report;
    report.seed = seed;
    const auto& cases = proof_cases();
    Rng seeds(seed, 0x52504cULL);
    int shown = 0;
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        const auto& pc = cases[ci];
        if (!theorem.empty() && theorem != pc.theorem) continue;
        ++shown;
        Rng rng(seed, 0x52504c41ULL + ci);
        double worst = 0.0;
        int passed = 0, skipped = 0;
        std::string detail;
        for (int s = 0; s < samples; ++s) {
            auto outcome = proof_replay(pc, pc.sample(rng));
            if (outcome.skipped) {
                ++skipped;
                continue;
            }
            if (!outcome.ok) {
                detail = outcome.detail;
                break;
            }
            ++passed;
            worst = std::max(worst, outcome.deviation);
        }
        if (passed == samples)
            report.pass("replay/" + pc.label, std::to_string(samples) + " samples", worst);
        else if (!detail.empty())
            report.fail("replay/" + pc.label, detail);
        else
            report.add("replay/" + pc.label, CheckRecord::Status::skip,
                       std::to_string(skipped) + " skipped");
    }
    if (!shown) {
        std::cerr << "no derivation cases for theorem '" << theorem << "'\n";
        return 2;
    }
    std::cout << report.text();
    return report.exit_code();
}

int run_catalog_dump() {
    auto arr = nlohmann::json::array();
    for (const auto& id : default_instances()) {
        nlohmann::json entry;
        entry["id"] = id.str();
        entry["class"] = class_spec(id.index).name;
        entry["theorem"] = class_spec(id.index).theorem;
        if (id.param) entry["param"] = format_scalar(*id.param);
        entry["table"] = nlohmann::json::parse(
            emit_table(TableDocument::from(instantiate(id)), TableFormat::json));
        arr.push_back(entry);
    }
    std::cout << arr.dump(2) << "\n";
    return 0;
}

int run_catalog_show(const std::string& name, const std::string& param) {
    auto id = parse_class_id(name, param);
    std::cout << emit_table(TableDocument::from(instantiate(id)), TableFormat::dsl);
    return 0;
}

std::map<std::string, StructureTable<GQ>> load_table_override(const std::string& path) {
    std::map<std::string, StructureTable<GQ>> out;
    auto arr = nlohmann::json::parse(read_file(path));
    for (const auto& entry : arr) {
        auto doc = parse_table(entry.at("table").dump(), TableFormat::json);
        if (!doc.exact_table) throw error("catalog override tables must be exact");
        out.emplace(entry.at("id").get<std::string>(), *doc.exact_table);
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"classification toolkit for 4-dimensional non-Lie nilpotent Leibniz algebras"};
    app.require_subcommand(1);
    app.fallthrough(); // global --seed / --serial may follow the subcommand

    std::uint64_t seed = env_seed();
    app.add_option("--seed", seed, "master seed for all randomized searches");
    bool serial = false;
    app.add_flag("--serial", serial, "run sweeps on the serial reference path");

    std::string format = "auto";
    std::string file_a, file_b, param_text, json_out, grid = "default", theorem, tables_path;
    int count = 1000, samples = 25;

    auto* check = app.add_subcommand("check", "parse a table and test the Leibniz identity");
    check->add_option("file", file_a)->required();
    check->add_option("--format", format)->check(CLI::IsMember({"auto", "dsl", "json"}));

    auto* invariants = app.add_subcommand("invariants", "series, centers and Leib ideal dims");
    invariants->add_option("file", file_a)->required();
    invariants->add_option("--format", format)->check(CLI::IsMember({"auto", "dsl", "json"}));

    auto* classify_cmd = app.add_subcommand("classify", "match a table to a catalog class");
    classify_cmd->add_option("file", file_a)->required();
    classify_cmd->add_option("--format", format)->check(CLI::IsMember({"auto", "dsl", "json"}));

    auto* iso = app.add_subcommand("iso", "decide isomorphism of two tables");
    iso->add_option("fileA", file_a)->required();
    iso->add_option("fileB", file_b)->required();
    iso->add_option("--format", format)->check(CLI::IsMember({"auto", "dsl", "json"}));

    auto* canon = app.add_subcommand("canon-form", "congruence canonical form of a 2x2 matrix");
    canon->add_option("file", file_a)->required();

    auto* catalog = app.add_subcommand("catalog", "catalog access");
    auto* dump = catalog->add_subcommand("dump", "emit every class table as JSON");
    auto* show = catalog->add_subcommand("show", "emit one class table");
    show->add_option("id", file_a, "class id, e.g. A7")->required();
    show->add_option("--param", param_text, "family parameter (exact literal)");
    catalog->require_subcommand(1);
    (void)dump;

    auto* replay = app.add_subcommand("replay", "replay the derivation base changes");
    replay->add_option("--theorem", theorem, "restrict to one source theorem, e.g. 2.4");
    replay->add_option("--samples", samples, "admissible samples per case");

    auto* verify = app.add_subcommand("verify-paper", "the full verification run");
    verify->add_option("--grid", grid)->check(CLI::IsMember({"default", "smoke"}));
    verify->add_option("--json", json_out, "also write the report as JSON to this path");
    verify->add_option("--tables", tables_path, "audit catalog tables from a dump file");

    auto* fuzz = app.add_subcommand("fuzz", "classify random conjugates of catalog instances");
    fuzz->add_option("--count", count)->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    SolverConfig solver;
    solver.seed = seed;
    if (serial) solver.policy = RunPolicy::serial;

    try {
        if (*check) return run_check(file_a, format);
        if (*invariants) {
            auto doc = load_table(file_a, format);
            return doc.exact && doc.exact_table ? run_invariants_on(*doc.exact_table)
                                                : run_invariants_on(doc.approx_table);
        }
        if (*classify_cmd) return run_classify(file_a, format, solver);
        if (*iso) return run_iso(file_a, file_b, format, solver);
        if (*canon) return run_canon_form(file_a);
        if (*catalog) {
            if (*show) return run_catalog_show(file_a, param_text);
            return run_catalog_dump();
        }
        if (*replay) return run_replay(theorem, samples, seed);
        if (*verify) {
            VerifyConfig cfg;
            cfg.seed = seed;
            cfg.grid = grid;
            cfg.solver = solver;
            if (!tables_path.empty()) cfg.table_override = load_table_override(tables_path);
            auto report = verify_paper(cfg);
            std::cout << report.text();
            if (!json_out.empty()) {
                std::ofstream out(json_out, std::ios::binary);
                out << report.json();
            }
            return report.exit_code();
        }
        if (*fuzz) {
            auto report = fuzz_roundtrip(count, seed, solver);
            std::cout << report.text();
            return report.exit_code();
        }
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const unknown_basis_name& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const duplicate_entry& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
