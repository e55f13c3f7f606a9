#ifndef SBNMF_TEXT_IO_HPP
#define SBNMF_TEXT_IO_HPP

#include <string>
#include <string_view>

#include "sbnmf/dataset.hpp"
#include "sbnmf/network.hpp"

namespace sbn {

// Line-based text formats, UTF-8 with '\n' line endings. Parsers reject
// anything off-format with a ParseError naming line and column.
//
// Network:
//   SBN 1
//   N <n_nodes>
//   H <i> <bias>            one per node, i ascending
//   J <i> <j> <weight>      zero or more, j < i, sorted by (i, j)
//
// Evidence: one "<node-index> <0|1>" per line.
//
// Dataset:
//   BITMAP 1
//   <rows> <cols> <count>
//   count lines of rows*cols characters from {0, 1}, row-major

SigmoidBeliefNetwork parse_network(std::string_view text);

/// Canonical text; numbers use the shortest decimal that reparses exactly.
std::string emit_network(const SigmoidBeliefNetwork& net);

Evidence parse_evidence(std::string_view text);
std::string emit_evidence(const Evidence& evidence);

BitmapDataset parse_dataset(std::string_view text);
std::string emit_dataset(const BitmapDataset& data);

/// Shortest round-trip decimal for a double ("C" locale semantics).
std::string format_real(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace sbn

#endif  // SBNMF_TEXT_IO_HPP
