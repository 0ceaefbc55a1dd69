#pragma once

#include "qmin/rational.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace qmin {

/// One regression row: "<name> <kind> <file> [args] <cmp> <expected> [tol]".
struct TableRow {
    std::string name;
    std::string kind;
    std::string file;
    std::vector<std::string> args;
    /// eq | le | ge | approx
    std::string cmp;
    std::string expected;
    std::string tolerance;
};

struct RowResult {
    TableRow row;
    bool pass = false;
    /// Rendered value ("p/q (decimal)" or plain text), or the error message.
    std::string value;
};

/// Throws ParseError on malformed lines.
std::vector<TableRow> read_table(const std::filesystem::path& path);

/// Evaluates one row; instance files are resolved against `data_dir`.
/// Errors while evaluating count as failures.
RowResult run_row(const TableRow& row, const std::filesystem::path& data_dir, int digits);

/// Kinds understood by run_row.
std::vector<std::string> table_kinds();

}  // namespace qmin
