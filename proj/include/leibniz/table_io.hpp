#ifndef LEIBNIZ_TABLE_IO_HPP
#define LEIBNIZ_TABLE_IO_HPP

#include "leibniz/structure_table.hpp"

#include <string>
#include <vector>

namespace leibniz {

struct parse_error : error {
    parse_error(const std::string& what, int line, int col)
        : error("line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + what),
          line(line),
          col(col) {}
    int line, col;
};
struct unknown_basis_name : error {
    unknown_basis_name(const std::string& name, int line)
        : error("line " + std::to_string(line) + ": unknown basis name '" + name + "'") {}
};
struct duplicate_entry : error {
    duplicate_entry(const std::string& l, const std::string& r, int line)
        : error("line " + std::to_string(line) + ": duplicate bracket [" + l + "," + r + "]") {}
};

enum class TableFormat { dsl, json };

// A structure table plus its serialization metadata. Omitted brackets are
// zero; the exact table is present exactly when the backend tag says so.
struct TableDocument {
    int dim = 0;
    bool exact = true;
    std::vector<std::string> basis;
    std::optional<StructureTable<GaussianRational>> exact_table;
    StructureTable<Cplx> approx_table{1};

    static TableDocument from(const StructureTable<GaussianRational>& t);
    static TableDocument from(const StructureTable<Cplx>& t);
};

TableDocument parse_table(const std::string& text, TableFormat format);
std::string emit_table(const TableDocument& doc, TableFormat format);

// 2x2 matrix file for the canonical-form command: two lines of two scalar
// literals each; backend inferred from the literals.
struct MatrixDocument {
    bool exact = true;
    std::optional<Matrix<GaussianRational>> exact_m;
    Matrix<Cplx> approx_m{2, 2};
};
MatrixDocument parse_matrix2(const std::string& text);

} // namespace leibniz

#endif
