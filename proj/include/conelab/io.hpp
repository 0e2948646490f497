#pragma once

#include "conelab/competitor.hpp"
#include "conelab/fourier.hpp"
#include "conelab/minimize.hpp"
#include "conelab/polar_grid.hpp"
#include "conelab/polygon.hpp"
#include "conelab/scan.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace conelab {

/// Shortest decimal form that parses back to the identical double; the one
/// float formatter used by every writer, so reruns are byte-identical.
std::string format_double(double value);

/// Ordered key = value lines rendered as the '#' comment block at the top
/// of every output file, recording the configuration that produced it.
/// Insertion order is preserved; setting an existing key overwrites in
/// place.
class HeaderBlock {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, const char* value);
    void set(const std::string& key, double value);
    void set(const std::string& key, long long value);

    /// nullptr when absent.
    const std::string* find(const std::string& key) const;

    const std::vector<std::pair<std::string, std::string>>& entries() const {
        return entries_;
    }

    /// One "# key = value\n" line per entry.
    std::string render() const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

/// key = value pairs from INI-style text, in file order: blank lines and
/// full-line '#' or ';' comments are skipped, and a "[section]" line
/// prefixes subsequent keys with "section.".  Repeated keys are kept; the
/// consumer decides (config_from_entries keeps the last).  Throws
/// config_error on a non-comment line without '='.
std::vector<std::pair<std::string, std::string>> parse_ini(const std::string& text);
std::vector<std::pair<std::string, std::string>> parse_ini_file(
    const std::filesystem::path& path);

/// Writes content through a temporary file in the target directory plus a
/// rename, so a reader never observes a partial file.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string read_text_file(const std::filesystem::path& path);

/// Grid field as CSV, one row per node (columns i,j,r,theta,value; the
/// vertex appears once as i=0,j=0).  The header gains cone_length, n_r,
/// n_theta and radius so read_field_csv can rebuild the grid; values round
/// trip losslessly.
void write_field_csv(const std::filesystem::path& path, const ScalarField& u,
                     HeaderBlock header = {});
ScalarField read_field_csv(const std::filesystem::path& path);

/// Monotone scan as CSV (columns r,value,violation_flag); the flag marks
/// the left endpoint of every tolerance-exceeding decrease.
void write_scan_csv(const std::filesystem::path& path, const MonotoneScan& scan,
                    HeaderBlock header = {});

/// Harmonic coefficient list as CSV (columns k,a_k,b_k).
void write_coefficients_csv(const std::filesystem::path& path,
                            const FourierHarmonic& h, HeaderBlock header = {});

/// Coefficient rows in any order; missing k are zero.  Returns the list
/// indexed by k, ready for FourierHarmonic{cone, coefficients}.
std::vector<std::array<double, 2>> read_coefficients_csv(
    const std::filesystem::path& path);

/// Polygon vertex lists as CSV (columns loop,x,y), loops and vertices in
/// storage order.
void write_polygon_csv(const std::filesystem::path& path, const PolygonSet& set,
                       HeaderBlock header = {});

/// Iteration trace as JSON: the header entries under "config", one record
/// per step (k, F, t, a, b, bound, envelope, recurrence_ok, extent, area)
/// plus the grid step and the recurrence verdict.
void write_trace_json(const std::filesystem::path& path,
                      const CompetitorTrace& trace, HeaderBlock header = {});

/// Convergence table as CSV (columns k,F,bound,envelope): the bound column
/// is the recurrence bound on F_k induced by F_{k-1} (the a priori value 2
/// at k = 0), envelope the closed-form 6/(3+2k).
void write_trace_csv(const std::filesystem::path& path,
                     const CompetitorTrace& trace, HeaderBlock header = {});

/// Minimizer run as a directory: field.csv, free_boundary.csv (columns
/// r,theta, polylines separated by blank lines) and summary.json carrying
/// the energy, vertex distance, certificate flag, sweep count and the
/// problem data needed to reload the run.
void write_minimizer_result(const std::filesystem::path& dir,
                            const MinimizerResult& result,
                            const ProblemSpec& spec, HeaderBlock header = {});

/// Scan line plot as one self-contained SVG, flagged decreases marked in
/// red.  Purely optional output; nothing reads it back.
void write_scan_svg(const std::filesystem::path& path, const MonotoneScan& scan,
                    const std::string& title);

} // namespace conelab
