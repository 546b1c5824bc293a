#include "neat/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace neat {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

[[noreturn]] void parse_fail(const char* what, std::size_t lineno, const std::string& detail) {
    throw BadInput(std::string(what) + " parse error at line " + std::to_string(lineno) +
                   (detail.empty() ? "" : ": " + detail));
}

std::string chomp(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

std::vector<EdgeRow> read_edge_tsv(std::istream& in, NetworkKind kind) {
    std::vector<EdgeRow> rows;
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = chomp(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_tabs(line);
        if (fields.size() < 2 || fields.size() > 3)
            parse_fail("edge list", lineno, "expected 2 or 3 tab-separated columns");
        if (fields[0].empty() || fields[1].empty())
            parse_fail("edge list", lineno, "empty node name");
        EdgeRow row{fields[0], fields[1], false};
        if (fields.size() == 3 && kind == NetworkKind::Mixed) {
            if (fields[2] == "u")
                row.undirected = true;
            else if (fields[2] != "d")
                parse_fail("edge list", lineno, "third column must be 'd' or 'u'");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<EdgeRow> read_edge_tsv_file(const std::string& path, NetworkKind kind) {
    std::ifstream in(path);
    if (!in) throw BadInput("cannot open network file '" + path + "'");
    return read_edge_tsv(in, kind);
}

std::vector<GmtSet> read_gmt(std::istream& in) {
    std::vector<GmtSet> sets;
    std::unordered_set<std::string> names;
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = chomp(raw);
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_tabs(line);
        if (fields.size() < 2) parse_fail("GMT", lineno, "expected name, description, members");
        if (fields[0].empty()) parse_fail("GMT", lineno, "empty set name");
        if (!names.insert(fields[0]).second)
            parse_fail("GMT", lineno, "duplicate set name '" + fields[0] + "'");
        GmtSet set;
        set.name = std::move(fields[0]);
        set.description = std::move(fields[1]);
        std::unordered_set<std::string> seen;
        for (std::size_t i = 2; i < fields.size(); ++i) {
            if (fields[i].empty()) continue;
            if (seen.insert(fields[i]).second) set.members.push_back(std::move(fields[i]));
        }
        sets.push_back(std::move(set));
    }
    return sets;
}

std::vector<GmtSet> read_gmt_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadInput("cannot open gene set file '" + path + "'");
    return read_gmt(in);
}

std::string format_double(double v) {
    if (std::isnan(v)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string format_log10_disp(double log10_p) {
    if (std::isnan(log10_p)) return "NA";
    if (log10_p < -300.0) return "<-300";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", log10_p);
    return buf;
}

}  // namespace

void write_results_tsv(std::ostream& out, const std::vector<EnrichmentResult>& results) {
    out << "set_a\tset_b\tdirection\tn_ab\tmu0\tp\tlog10_p\tadj_p\tcall\tflags\tlog10_p_disp\n";
    for (const EnrichmentResult& r : results) {
        out << r.set_a << '\t' << r.set_b << '\t' << to_string(r.direction) << '\t' << r.n_ab
            << '\t' << format_double(r.mu0) << '\t' << format_double(r.p) << '\t'
            << format_double(r.log10_p) << '\t' << format_double(r.adj_p) << '\t'
            << to_string(r.call) << '\t' << (r.flags.empty() ? "-" : r.flags) << '\t'
            << format_log10_disp(r.log10_p) << '\n';
    }
}

}  // namespace neat
