#include "leibniz/table_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <sstream>

namespace leibniz {

namespace {

using GQ = GaussianRational;

std::vector<std::string> default_basis(int n) {
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

int name_index(const std::vector<std::string>& basis, const std::string& name, int line) {
    auto it = std::find(basis.begin(), basis.end(), name);
    if (it == basis.end()) throw unknown_basis_name(name, line);
    return static_cast<int>(it - basis.begin());
}

std::vector<std::string> tokens_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

struct TermAccumulator {
    bool exact_ok = true;
    std::map<int, GQ> exact;
    std::map<int, Cplx> approx;

    void add(int k, const ScalarLiteral& lit, bool negate) {
        if (lit.rational) {
            GQ v = negate ? -lit.exact : lit.exact;
            exact[k] += v;
        } else {
            exact_ok = false;
        }
        approx[k] += negate ? -lit.approx : lit.approx;
    }
};

TableDocument parse_table_dsl(const std::string& text) {
    TableDocument doc;
    doc.dim = 0;
    bool backend_seen = false, basis_seen = false;
    std::vector<std::pair<std::pair<int, int>, TermAccumulator>> entries;
    std::vector<std::pair<int, int>> seen;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.resize(hash);
        auto toks = tokens_of(raw);
        if (toks.empty()) continue;

        if (toks[0] == "dim") {
            if (toks.size() != 2) throw parse_error("expected 'dim N'", line_no, 1);
            doc.dim = std::atoi(toks[1].c_str());
            if (doc.dim < 1 || doc.dim > kMaxDim)
                throw parse_error("dimension out of range", line_no, 5);
            continue;
        }
        if (toks[0] == "backend") {
            if (toks.size() != 2 || (toks[1] != "exact" && toks[1] != "approx"))
                throw parse_error("expected 'backend exact|approx'", line_no, 1);
            doc.exact = toks[1] == "exact";
            backend_seen = true;
            continue;
        }
        if (toks[0] == "basis") {
            if (doc.dim == 0) throw parse_error("'basis' before 'dim'", line_no, 1);
            if (static_cast<int>(toks.size()) != doc.dim + 1)
                throw parse_error("basis must list exactly dim names", line_no, 1);
            doc.basis.assign(toks.begin() + 1, toks.end());
            for (std::size_t i = 0; i < doc.basis.size(); ++i)
                for (std::size_t j = i + 1; j < doc.basis.size(); ++j)
                    if (doc.basis[i] == doc.basis[j])
                        throw parse_error("basis names must be unique", line_no, 1);
            basis_seen = true;
            continue;
        }

        // bracket line: [l,r] = term (+|- term)*
        if (toks[0][0] != '[')
            throw parse_error("expected 'dim', 'backend', 'basis' or a bracket line", line_no, 1);
        if (doc.dim == 0) throw parse_error("bracket line before 'dim'", line_no, 1);
        if (doc.basis.empty()) doc.basis = default_basis(doc.dim);

        // the [l,r] head may be split across tokens; re-join up to ']'
        std::string head = toks[0];
        std::size_t tok_idx = 1;
        while (head.find(']') == std::string::npos && tok_idx < toks.size())
            head += toks[tok_idx++];
        auto close = head.find(']');
        auto comma = head.find(',');
        if (close == std::string::npos || comma == std::string::npos || comma > close)
            throw parse_error("malformed bracket head", line_no, 1);
        std::string lname = head.substr(1, comma - 1);
        std::string rname = head.substr(comma + 1, close - comma - 1);
        int li = name_index(doc.basis, lname, line_no);
        int ri = name_index(doc.basis, rname, line_no);
        for (auto [a, b] : seen)
            if (a == li && b == ri) throw duplicate_entry(lname, rname, line_no);
        seen.emplace_back(li, ri);

        std::string rest = head.substr(close + 1);
        std::vector<std::string> expr = tokens_of(rest);
        for (; tok_idx < toks.size(); ++tok_idx) expr.push_back(toks[tok_idx]);
        if (expr.empty() || expr[0] != "=")
            throw parse_error("expected '=' after the bracket head", line_no, 1);
        expr.erase(expr.begin());
        if (expr.empty()) throw parse_error("empty right-hand side", line_no, 1);

        TermAccumulator acc;
        bool negate = false;
        std::optional<ScalarLiteral> pending;
        for (const auto& tok : expr) {
            if (tok == "+" || tok == "-") {
                if (pending) throw parse_error("dangling coefficient", line_no, 1);
                negate = tok == "-";
                continue;
            }
            auto basis_it = std::find(doc.basis.begin(), doc.basis.end(), tok);
            if (basis_it != doc.basis.end()) {
                int k = static_cast<int>(basis_it - doc.basis.begin());
                ScalarLiteral one;
                one.rational = true;
                one.exact = GQ(1);
                one.approx = Cplx{1.0, 0.0};
                acc.add(k, pending ? *pending : one, negate);
                pending.reset();
                negate = false;
                continue;
            }
            if (pending) throw parse_error("two coefficients in a row", line_no, 1);
            auto lit = parse_scalar_text(tok);
            if (!lit) throw parse_error("cannot parse scalar '" + tok + "'", line_no, 1);
            pending = *lit;
        }
        if (pending) throw parse_error("coefficient without a basis name", line_no, 1);
        entries.push_back({{li, ri}, std::move(acc)});
    }

    if (doc.dim == 0) throw parse_error("missing 'dim' header", line_no ? line_no : 1, 1);
    if (doc.basis.empty()) doc.basis = default_basis(doc.dim);
    (void)backend_seen;
    (void)basis_seen;

    doc.approx_table = StructureTable<Cplx>(doc.dim);
    StructureTable<GQ> exact_t(doc.dim);
    bool exact_ok = true;
    for (auto& [key, acc] : entries) {
        exact_ok = exact_ok && acc.exact_ok;
        for (auto& [k, v] : acc.approx) doc.approx_table.c(key.first, key.second)[k] += v;
        if (acc.exact_ok)
            for (auto& [k, v] : acc.exact) exact_t.c(key.first, key.second)[k] += v;
    }
    if (doc.exact) {
        if (!exact_ok)
            throw parse_error("approximate literal in a table declared 'backend exact'", 1, 1);
        doc.exact_table = std::move(exact_t);
    }
    return doc;
}

TableDocument parse_table_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(e.what(), 1, 1);
    }
    TableDocument doc;
    try {
        doc.dim = j.at("dim").get<int>();
        if (doc.dim < 1 || doc.dim > kMaxDim) throw parse_error("dimension out of range", 1, 1);
        std::string backend = j.value("backend", "exact");
        doc.exact = backend == "exact";
        if (j.contains("basis"))
            doc.basis = j.at("basis").get<std::vector<std::string>>();
        else
            doc.basis = default_basis(doc.dim);
        if (static_cast<int>(doc.basis.size()) != doc.dim)
            throw parse_error("basis size does not match dim", 1, 1);

        doc.approx_table = StructureTable<Cplx>(doc.dim);
        StructureTable<GQ> exact_t(doc.dim);
        bool exact_ok = true;
        std::vector<std::pair<int, int>> seen;
        for (const auto& entry : j.value("brackets", nlohmann::json::array())) {
            std::string l = entry.at("l").get<std::string>();
            std::string r = entry.at("r").get<std::string>();
            int li = name_index(doc.basis, l, 1);
            int ri = name_index(doc.basis, r, 1);
            for (auto [a, b] : seen)
                if (a == li && b == ri) throw duplicate_entry(l, r, 1);
            seen.emplace_back(li, ri);
            for (const auto& [key, val] : entry.at("v").items()) {
                int k = name_index(doc.basis, key, 1);
                auto lit = parse_scalar_text(val.get<std::string>());
                if (!lit) throw parse_error("cannot parse scalar '" + val.get<std::string>() + "'", 1, 1);
                doc.approx_table.c(li, ri)[k] += lit->approx;
                if (lit->rational)
                    exact_t.c(li, ri)[k] += lit->exact;
                else
                    exact_ok = false;
            }
        }
        if (doc.exact) {
            if (!exact_ok)
                throw parse_error("approximate literal in a table declared 'backend exact'", 1, 1);
            doc.exact_table = std::move(exact_t);
        }
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(e.what(), 1, 1);
    }
    return doc;
}

template <class K>
std::vector<std::pair<int, std::string>> term_strings(const Vector<K>& v) {
    std::vector<std::pair<int, std::string>> out;
    for (int k = 0; k < static_cast<int>(v.size()); ++k)
        if (!scalar_ops<K>::is_zero(v[k], 0.0)) out.emplace_back(k, format_scalar(v[k]));
    return out;
}

template <class K>
void emit_dsl_entries(std::ostringstream& out, const StructureTable<K>& t,
                      const std::vector<std::string>& basis) {
    const K one = scalar_ops<K>::one();
    const K minus_one = -one;
    for (int i = 0; i < t.dim(); ++i)
        for (int j = 0; j < t.dim(); ++j) {
            auto terms = term_strings(t.c(i, j));
            if (terms.empty()) continue;
            out << "[" << basis[i] << "," << basis[j] << "] =";
            bool first = true;
            for (auto& [k, str] : terms) {
                const K& coeff = t.c(i, j)[k];
                if (coeff == one) {
                    out << (first ? " " : " + ") << basis[k];
                } else if (coeff == minus_one) {
                    out << (first ? " -" : " - ") << basis[k];
                } else if (!first && str.size() && str[0] == '-') {
                    out << " - " << str.substr(1) << " " << basis[k];
                } else {
                    out << (first ? " " : " + ") << str << " " << basis[k];
                }
                first = false;
            }
            out << "\n";
        }
}

} // namespace

TableDocument TableDocument::from(const StructureTable<GQ>& t) {
    TableDocument doc;
    doc.dim = t.dim();
    doc.exact = true;
    doc.basis = default_basis(t.dim());
    doc.exact_table = t;
    doc.approx_table = to_approx(t);
    return doc;
}

TableDocument TableDocument::from(const StructureTable<Cplx>& t) {
    TableDocument doc;
    doc.dim = t.dim();
    doc.exact = false;
    doc.basis = default_basis(t.dim());
    doc.approx_table = t;
    return doc;
}

TableDocument parse_table(const std::string& text, TableFormat format) {
    return format == TableFormat::dsl ? parse_table_dsl(text) : parse_table_json(text);
}

std::string emit_table(const TableDocument& doc, TableFormat format) {
    if (format == TableFormat::dsl) {
        std::ostringstream out;
        out << "dim " << doc.dim << "\n";
        out << "backend " << (doc.exact ? "exact" : "approx") << "\n";
        if (doc.basis != default_basis(doc.dim)) {
            out << "basis";
            for (const auto& name : doc.basis) out << " " << name;
            out << "\n";
        }
        if (doc.exact && doc.exact_table)
            emit_dsl_entries(out, *doc.exact_table, doc.basis);
        else
            emit_dsl_entries(out, doc.approx_table, doc.basis);
        return out.str();
    }

    nlohmann::json j;
    j["dim"] = doc.dim;
    j["backend"] = doc.exact ? "exact" : "approx";
    j["basis"] = doc.basis;
    auto brackets = nlohmann::json::array();
    auto push_entries = [&](const auto& table) {
        for (int i = 0; i < doc.dim; ++i)
            for (int j2 = 0; j2 < doc.dim; ++j2) {
                auto terms = term_strings(table.c(i, j2));
                if (terms.empty()) continue;
                nlohmann::json entry;
                entry["l"] = doc.basis[i];
                entry["r"] = doc.basis[j2];
                nlohmann::json vals;
                for (auto& [k, str] : terms) vals[doc.basis[k]] = str;
                entry["v"] = vals;
                brackets.push_back(entry);
            }
    };
    if (doc.exact && doc.exact_table)
        push_entries(*doc.exact_table);
    else
        push_entries(doc.approx_table);
    j["brackets"] = brackets;
    return j.dump(2) + "\n";
}

MatrixDocument parse_matrix2(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::vector<ScalarLiteral> lits;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.resize(hash);
        for (const auto& tok : tokens_of(raw)) {
            auto lit = parse_scalar_text(tok);
            if (!lit) throw parse_error("cannot parse scalar '" + tok + "'", line_no, 1);
            lits.push_back(*lit);
        }
    }
    if (lits.size() != 4) throw parse_error("expected exactly 4 scalars", line_no ? line_no : 1, 1);
    MatrixDocument doc;
    doc.exact = std::all_of(lits.begin(), lits.end(), [](const auto& l) { return l.rational; });
    if (doc.exact) {
        Matrix<GQ> m(2, 2);
        for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = lits[i].exact;
        doc.exact_m = std::move(m);
    }
    for (int i = 0; i < 4; ++i) doc.approx_m(i / 2, i % 2) = lits[i].approx;
    return doc;
}

} // namespace leibniz
