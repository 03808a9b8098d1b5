#pragma once

// Grid scans of the slice half-plane {x + Jy : y >= 0}: the smallest
// singular value of the assembled system matrix is the invertibility
// margin charting the S-spectrum with boundary conditions. Nodes are
// independent; results are identical regardless of evaluation order.

#include <string>
#include <vector>

#include "cliffspec/boundary.hpp"

namespace cliffspec {

struct ScanGrid {
    double x_lo = 0;
    double x_hi = 1;
    double y_hi = 1;   // y ranges over [0, y_hi]; the lower half-plane is redundant
    int nx = 2;
    int ny = 2;
    Paravector j = Paravector::unit(2, 1);

    double x_at(int i) const { return nx == 1 ? x_lo : x_lo + (x_hi - x_lo) * i / (nx - 1); }
    double y_at(int k) const { return ny == 1 ? 0.0 : y_hi * k / (ny - 1); }
};

struct SpectrumMap {
    ScanGrid grid;
    double threshold = 1e-6;           // relative to the largest sigma_min on the grid
    double sigma_max_global = 0;
    Eigen::MatrixXd sigma_min;         // (ny x nx), row k = y level k
    std::vector<std::uint8_t> in_spectrum;  // row-major, y-major order

    bool classified(int k, int i) const {
        return in_spectrum[static_cast<std::size_t>(k) * grid.nx + i] != 0;
    }
};

/// sigma_min(M(x + Jy)) at every grid node. Singular nodes are recorded,
/// never thrown. Deterministic for fixed inputs and any thread count.
SpectrumMap scan(const CliffordOperator& T, const BoundarySpec& spec, const ScanGrid& grid,
                 double threshold = 1e-6, int threads = 1);

struct AxialSymmetryReport {
    struct Point {
        double x = 0;
        double y = 0;
        double sigma_ref = 0;
        double max_rel_dev = 0;
    };
    std::vector<Point> points;
    double worst_rel_dev = 0;
};

/// sigma_min at x + Jy for every sampled J; the margin depends on s only
/// through (s_0, |s|^2), so deviations are pure rounding.
AxialSymmetryReport axial_symmetry_check(const CliffordOperator& T, const BoundarySpec& spec,
                                         const std::vector<std::pair<double, double>>& points,
                                         const std::vector<Paravector>& j_samples);

/// CSV with header "x,y,sigma_min,in_spectrum", y-major row order,
/// 17 significant digits. Throws IoError with path context.
void emit_csv(const SpectrumMap& map, const std::string& path);

struct ScanCsvRow {
    double x = 0;
    double y = 0;
    double sigma_min = 0;
    int in_spectrum = 0;
};

/// Round-trip reader for the scan CSV.
std::vector<ScanCsvRow> read_scan_csv(const std::string& path);

} // namespace cliffspec
