#pragma once

#include <map>
#include <string>
#include <vector>

#include "qsp/chebyshev.hpp"

namespace qsp {

/// One solved part of a phase-factor file: the full symmetric phase list
/// plus the scaled target series it encodes and the achieved diagnostics.
struct PhaseFilePart {
    std::string label;
    Parity parity = Parity::none;
    int degree = 0;
    std::vector<double> phases;
    std::vector<double> target_coeffs;
    double max_node_error = 0.0;
    double linf_error_vs_function = 0.0;
    long iterations = 0;
    double wall_time_seconds = 0.0;
    bool converged = true;
};

/// Self-describing JSON document holding phases for one CLI run.  Doubles
/// are written with 17 significant digits so values round-trip bit-exactly.
struct PhaseFileV1 {
    int version = 1;
    std::string target_kind;  ///< hamsim | eigenfilter | matinv | custom
    std::string method;       ///< matinv approximation method, empty otherwise
    std::map<std::string, double> target_params;
    double scale_divisor = 1.0;
    bool failed = false;
    std::vector<PhaseFilePart> parts;
};

/// Decimal with 17 significant digits; parses back to the identical double.
std::string format_double(double v);

/// Write-temp-then-rename, so readers never observe a partial file.
void write_phase_file(const std::string& path, const PhaseFileV1& file);

/// Throws std::runtime_error on unreadable or structurally invalid files.
PhaseFileV1 read_phase_file(const std::string& path);

/// Coefficient text format: header line "parity: even|odd", then one decimal
/// coefficient per line, index implied.
ChebSeries read_coeff_file(const std::string& path);
void write_coeff_file(const std::string& path, const ChebSeries& series);

}  // namespace qsp
