#include "proxcert/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace proxcert {

const char* const kTraceHeader =
    "k,t_k,theta_k,f_x,f_y,norm_g,norm_gphi,norm_gpsi,lhs,rhs_conj,rhs_dist,S_k,R_k";

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    // from_chars is locale-independent and accepts subnormals, unlike stod.
    double v = 0.0;
    const char* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc() || ptr != end)
        throw std::invalid_argument("trace csv: malformed number '" + s + "'");
    return v;
}

std::vector<TraceRow> make_trace_rows(const Trace& trace, const BoundReport* primary) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<TraceRow> rows;
    rows.reserve(trace.records.size());
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const IterateRecord& r = trace.records[i];
        TraceRow row;
        row.k = r.k;
        row.t = r.t;
        row.theta = r.theta;
        row.f_x = r.f_x_next;
        row.f_y = r.f_y;
        row.norm_g = r.g.norm();
        row.norm_gphi = r.g_phi.norm();
        row.norm_gpsi = r.g_psi.norm();
        if (primary && i < primary->rows.size()) {
            const CertificateRow& c = primary->rows[i];
            row.lhs = c.lhs;
            row.rhs_conj = c.rhs_conj;
            row.rhs_dist = c.rhs_dist;
            row.S = c.S;
            row.R = c.R;
        } else {
            row.lhs = row.rhs_conj = row.rhs_dist = row.S = row.R = nan;
        }
        rows.push_back(row);
    }
    return rows;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
    out << kTraceHeader << "\n";
    for (const TraceRow& r : rows) {
        out << r.k;
        for (double v : {r.t, r.theta, r.f_x, r.f_y, r.norm_g, r.norm_gphi, r.norm_gpsi, r.lhs,
                         r.rhs_conj, r.rhs_dist, r.S, r.R})
            out << ',' << format_double(v);
        out << "\n";
    }
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kTraceHeader)
        throw std::invalid_argument("trace csv: missing or unexpected header");
    std::vector<TraceRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 13)
            throw std::invalid_argument("trace csv: line " + std::to_string(lineno) + " has " +
                                        std::to_string(cells.size()) + " fields, expected 13");
        TraceRow r;
        try {
            std::size_t pos = 0;
            r.k = std::stoi(cells[0], &pos);
            if (pos != cells[0].size()) throw std::invalid_argument("k");
        } catch (const std::exception&) {
            throw std::invalid_argument("trace csv: bad k on line " + std::to_string(lineno));
        }
        double* fields[] = {&r.t,      &r.theta,    &r.f_x,      &r.f_y,    &r.norm_g,
                            &r.norm_gphi, &r.norm_gpsi, &r.lhs, &r.rhs_conj, &r.rhs_dist,
                            &r.S,      &r.R};
        for (std::size_t j = 0; j < 12; ++j) *fields[j] = parse_double(cells[j + 1]);
        rows.push_back(r);
    }
    return rows;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << content;
        if (!out) throw std::runtime_error("write failed for " + path);
    }
    std::filesystem::rename(tmp, path);
}

void write_trace_file(const std::string& path, const std::vector<TraceRow>& rows) {
    std::ostringstream os;
    write_trace_csv(os, rows);
    write_file_atomic(path, os.str());
}

std::vector<TraceRow> read_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open trace " + path);
    return read_trace_csv(in);
}

BoundReport recheck_rows(const std::vector<TraceRow>& rows, const BoundTolerance& tol) {
    BoundReport report;
    BoundCheck conj("rows.conjugate"), dist("rows.distance");
    for (const TraceRow& r : rows) {
        if (std::isnan(r.lhs)) continue;
        if (!std::isnan(r.rhs_conj)) conj.add(r.k, r.lhs, r.rhs_conj, tol);
        if (!std::isnan(r.rhs_dist)) dist.add(r.k, r.lhs, r.rhs_dist, tol);
    }
    for (BoundCheck* c : {&conj, &dist})
        if (!c->points().empty()) report.checks.push_back(std::move(*c));
    return report;
}

}  // namespace proxcert
