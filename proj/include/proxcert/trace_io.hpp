#pragma once

#include "proxcert/certificates.hpp"
#include "proxcert/solver.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace proxcert {

/// One CSV row per step k: t_k and theta_k are the step parameters, f_x is
/// f(x_{k+1}), f_y is f(y_k), the norms are of g_k and its split, and the
/// certificate columns hold the state after step k is consumed.
struct TraceRow {
    int k = 0;
    double t = 0.0;
    double theta = 0.0;
    double f_x = 0.0;
    double f_y = 0.0;
    double norm_g = 0.0;
    double norm_gphi = 0.0;
    double norm_gpsi = 0.0;
    double lhs = 0.0;
    double rhs_conj = 0.0;
    double rhs_dist = 0.0;
    double S = 0.0;
    double R = 0.0;
};

extern const char* const kTraceHeader;

/// 17 significant digits; "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double v);
/// Inverse of format_double. Throws std::invalid_argument on malformed input.
double parse_double(const std::string& s);

/// Rows for a trace; certificate columns come from `primary` (NaN when it has
/// no row for a step).
std::vector<TraceRow> make_trace_rows(const Trace& trace, const BoundReport* primary);

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);
std::vector<TraceRow> read_trace_csv(std::istream& in);

void write_trace_file(const std::string& path, const std::vector<TraceRow>& rows);
std::vector<TraceRow> read_trace_file(const std::string& path);

/// Checks that need only the CSV columns: lhs <= rhs_conj and lhs <= rhs_dist.
BoundReport recheck_rows(const std::vector<TraceRow>& rows, const BoundTolerance& tol);

/// Writes to a temporary sibling and renames over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace proxcert
