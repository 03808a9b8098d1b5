#include "cliffspec/spectrum.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "cliffspec/serialize.hpp"

namespace cliffspec {

SpectrumMap scan(const CliffordOperator& T, const BoundarySpec& spec, const ScanGrid& grid,
                 double threshold, int threads) {
    if (grid.nx < 2 || grid.ny < 2) throw ConfigError("scan: grid needs nx, ny >= 2");
    if (grid.j.n() != T.n()) throw DimensionMismatch("scan: J dimension mismatch");
    spec.validate();

    SpectrumMap map;
    map.grid = grid;
    map.threshold = threshold;
    map.sigma_min = Eigen::MatrixXd::Zero(grid.ny, grid.nx);

    const int total = grid.nx * grid.ny;
    auto worker = [&](int begin, int end) {
        for (int idx = begin; idx < end; ++idx) {
            const int k = idx / grid.nx;
            const int i = idx % grid.nx;
            const Paravector s = slice_compose(T.n(), grid.x_at(i), grid.y_at(k), grid.j);
            map.sigma_min(k, i) = singular_extent(assembled_matrix(T, s, spec)).first;
        }
    };

    const int nthreads = std::max(1, threads);
    if (nthreads == 1) {
        worker(0, total);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (total + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            const int begin = t * chunk;
            const int end = std::min(total, begin + chunk);
            if (begin < end) pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    map.sigma_max_global = map.sigma_min.maxCoeff();
    map.in_spectrum.assign(static_cast<std::size_t>(total), 0);
    for (int k = 0; k < grid.ny; ++k)
        for (int i = 0; i < grid.nx; ++i)
            map.in_spectrum[static_cast<std::size_t>(k) * grid.nx + i] =
                (map.sigma_min(k, i) <= threshold * map.sigma_max_global) ? 1 : 0;
    return map;
}

AxialSymmetryReport axial_symmetry_check(const CliffordOperator& T, const BoundarySpec& spec,
                                         const std::vector<std::pair<double, double>>& points,
                                         const std::vector<Paravector>& j_samples) {
    if (j_samples.empty()) throw ConfigError("axial_symmetry_check: no J samples");
    AxialSymmetryReport report;
    for (const auto& [x, y] : points) {
        AxialSymmetryReport::Point pt;
        pt.x = x;
        pt.y = y;
        bool first = true;
        for (const auto& j : j_samples) {
            const Paravector s = slice_compose(T.n(), x, y, j);
            const double sigma = singular_extent(assembled_matrix(T, s, spec)).first;
            if (first) {
                pt.sigma_ref = sigma;
                first = false;
            } else {
                const double dev = std::abs(sigma - pt.sigma_ref) / std::max(pt.sigma_ref, 1e-300);
                pt.max_rel_dev = std::max(pt.max_rel_dev, dev);
            }
        }
        report.worst_rel_dev = std::max(report.worst_rel_dev, pt.max_rel_dev);
        report.points.push_back(pt);
    }
    return report;
}

void emit_csv(const SpectrumMap& map, const std::string& path) {
    if (path.empty()) throw IoError("emit_csv: empty output path");
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("emit_csv: cannot open '" + path + "'");
    out << "x,y,sigma_min,in_spectrum\n";
    for (int k = 0; k < map.grid.ny; ++k)
        for (int i = 0; i < map.grid.nx; ++i)
            out << format_g17(map.grid.x_at(i)) << ',' << format_g17(map.grid.y_at(k)) << ','
                << format_g17(map.sigma_min(k, i)) << ',' << (map.classified(k, i) ? 1 : 0) << '\n';
    if (!out) throw IoError("emit_csv: write failed for '" + path + "'");
}

std::vector<ScanCsvRow> read_scan_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_scan_csv: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != "x,y,sigma_min,in_spectrum")
        throw IoError("read_scan_csv: bad header in '" + path + "'");
    std::vector<ScanCsvRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        ScanCsvRow row;
        char c1, c2, c3;
        if (!(ss >> row.x >> c1 >> row.y >> c2 >> row.sigma_min >> c3 >> row.in_spectrum) ||
            c1 != ',' || c2 != ',' || c3 != ',')
            throw IoError("read_scan_csv: bad row in '" + path + "': " + line);
        rows.push_back(row);
    }
    return rows;
}

} // namespace cliffspec
