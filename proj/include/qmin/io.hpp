#pragma once

#include "qmin/model.hpp"
#include "qmin/normalize.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmin {

/// Malformed text or an unreadable file.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Lines "interval <id> <lo> <hi> <cost>", "dist <id> <b0> <m0> <b1> ... <bm>",
/// "atom <id> <x> <mass>"; '#' starts a comment. Omitted dists are uniform.
RawInstance parse_instance(std::istream& in, const std::string& source = "<input>");
RawInstance read_instance_file(const std::filesystem::path& path);

/// Atom-free, sorted instance; InvalidInstance on structural problems.
Instance to_instance(const RawInstance& raw);

/// For each raw position, the id the interval gets in to_instance(raw).
std::vector<IntervalId> sorted_ids(const RawInstance& raw);

/// Lines "value <id> <v>" keyed by the ids used in the instance file.
Realization parse_realization(std::istream& in, const RawInstance& raw, const std::string& source = "<input>");
Realization read_realization_file(const std::filesystem::path& path, const RawInstance& raw);

/// Canonical text: intervals by id, a dist line only for non-uniform distributions.
std::string format_instance(const Instance& instance);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace qmin
