#pragma once

// Hypergraph from a table: rows are vertices, every (categorical column, value)
// and every (numeric column, bin) group becomes one hyperedge.  Groups with a
// single row are dropped, as are all groups of a constant numeric column.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qdsfm/applications/hypergraph.hpp"
#include "qdsfm/error.hpp"

namespace qdsfm {

enum class ColumnKind { Categorical, Numeric, Ignore };

enum class Binning { EqualWidth, EqualFrequency };

struct ColumnSpec
{
    std::string name;
    ColumnKind kind = ColumnKind::Categorical;
};

struct TableSchema
{
    std::vector<ColumnSpec> columns;
    /// Cell values treated as missing; such cells join no hyperedge.
    std::set<std::string> missing{"", "?", "NA"};
    std::size_t bins = 10;
    Binning binning = Binning::EqualWidth;
    /// Whether the first CSV row names the columns (callers drop it).
    bool has_header = true;
};

using Table = std::vector<std::vector<std::string>>;

/// Comma-separated rows with double-quote escaping; CR/LF line endings.
inline Table read_csv(std::istream& in)
{
    Table rows;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false;
    bool any = false;
    char ch;
    auto end_row = [&] {
        row.push_back(std::move(cell));
        cell.clear();
        rows.push_back(std::move(row));
        row.clear();
        any = false;
    };
    while (in.get(ch)) {
        if (quoted) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    in.get(ch);
                    cell += '"';
                } else {
                    quoted = false;
                }
            } else {
                cell += ch;
            }
            continue;
        }
        if (ch == '"') {
            quoted = true;
            any = true;
        } else if (ch == ',') {
            row.push_back(std::move(cell));
            cell.clear();
            any = true;
        } else if (ch == '\n') {
            end_row();
        } else if (ch != '\r') {
            cell += ch;
            any = true;
        }
    }
    if (any || !cell.empty() || !row.empty()) end_row();
    return rows;
}

struct IngestResult
{
    Hypergraph hypergraph;
    /// Human-readable notes on dropped columns.
    std::vector<std::string> notes;
};

namespace detail {

inline bool parse_double(const std::string& s, double& out)
{
    const char* b = s.data();
    const char* e = s.data() + s.size();
    while (b < e && *b == ' ') ++b;
    auto [ptr, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && ptr == e && std::isfinite(out);
}

}  // namespace detail

inline IngestResult ingest_tabular_dataset(const Table& rows, const TableSchema& schema)
{
    if (schema.bins < 1) throw InvalidArgument("binning needs at least one bin");
    IngestResult out;
    out.hypergraph.n = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != schema.columns.size())
            throw InvalidArgument("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                                  " cells, schema has " + std::to_string(schema.columns.size()));
    }

    auto emit = [&](const std::vector<std::vector<std::size_t>>& groups) {
        for (const auto& g : groups) {
            if (g.size() < 2) continue;
            Hyperedge h;
            h.members = g;
            out.hypergraph.edges.push_back(std::move(h));
        }
    };

    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        const auto& col = schema.columns[c];
        if (col.kind == ColumnKind::Ignore) continue;
        if (col.kind == ColumnKind::Categorical) {
            // groups in order of first appearance
            std::map<std::string, std::size_t> slot;
            std::vector<std::vector<std::size_t>> groups;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const auto& v = rows[i][c];
                if (schema.missing.count(v)) continue;
                auto [it, fresh] = slot.emplace(v, groups.size());
                if (fresh) groups.emplace_back();
                groups[it->second].push_back(i);
            }
            emit(groups);
            continue;
        }

        std::vector<std::pair<double, std::size_t>> values;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            double v;
            if (schema.missing.count(rows[i][c]) || !detail::parse_double(rows[i][c], v)) continue;
            values.emplace_back(v, i);
        }
        if (values.empty()) {
            out.notes.push_back("column '" + col.name + "' has no numeric values; dropped");
            continue;
        }
        auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
        const double lo = lo_it->first;
        const double hi = hi_it->first;
        if (!(hi > lo)) {
            out.notes.push_back("column '" + col.name + "' is constant; single bin dropped");
            continue;
        }
        std::vector<std::vector<std::size_t>> groups(schema.bins);
        if (schema.binning == Binning::EqualWidth) {
            for (auto [v, i] : values) {
                auto b = static_cast<std::size_t>(std::floor((v - lo) / (hi - lo) * static_cast<double>(schema.bins)));
                groups[std::min(b, schema.bins - 1)].push_back(i);
            }
        } else {
            auto sorted = values;
            std::stable_sort(sorted.begin(), sorted.end(),
                             [](const auto& x, const auto& y) { return x.first < y.first; });
            // equal values share the bin of their first rank
            std::size_t first_rank = 0;
            for (std::size_t r = 0; r < sorted.size(); ++r) {
                if (r > 0 && sorted[r].first != sorted[r - 1].first) first_rank = r;
                const std::size_t b = first_rank * schema.bins / sorted.size();
                groups[b].push_back(sorted[r].second);
            }
        }
        for (auto& g : groups) std::sort(g.begin(), g.end());
        emit(groups);
    }
    return out;
}

}  // namespace qdsfm
