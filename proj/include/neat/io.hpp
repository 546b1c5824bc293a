#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "neat/enrich.hpp"
#include "neat/graph.hpp"

namespace neat {

// Edge-list TSV: one edge per line, `from<TAB>to`, optional third column
// `d`/`u` honored only when kind=Mixed (a missing third column means `d`).
// Lines starting with '#' and blank lines are ignored. Parse errors carry
// the 1-based line number.
std::vector<EdgeRow> read_edge_tsv(std::istream& in, NetworkKind kind);
std::vector<EdgeRow> read_edge_tsv_file(const std::string& path, NetworkKind kind);

struct GmtSet {
    std::string name;
    std::string description;
    std::vector<std::string> members;
};

// GMT: `name<TAB>description<TAB>member...`; duplicate set names are an
// error, duplicate members within a set are collapsed.
std::vector<GmtSet> read_gmt(std::istream& in);
std::vector<GmtSet> read_gmt_file(const std::string& path);

// Results TSV. Canonical columns, then a display rendering of log10_p that
// uses the `<-300` sentinel for extreme values:
//   set_a set_b direction n_ab mu0 p log10_p adj_p call flags log10_p_disp
// Doubles are serialized with 17 significant digits; absent values as NA.
void write_results_tsv(std::ostream& out, const std::vector<EnrichmentResult>& results);

std::string format_double(double v);  // %.17g, "NA" for NaN

}  // namespace neat
