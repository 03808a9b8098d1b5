#pragma once

// Example operators: the gradient operator with nonconstant coefficients
// discretized on 1D/2D grids under Dirichlet or Robin-like boundary
// conditions, plus synthetic operators with known singular loci.
//
// Stencils are centered in the interior and one-sided second-order at the
// ends, so T is a square matrix on the full grid and T^2, T^3 are plain
// powers; the boundary conditions live entirely in the constraint rows.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cliffspec/boundary.hpp"

namespace cliffspec {

enum class BcKind { dirichlet, robin };

using Coefficient = std::function<double(double)>;

Coefficient preset_constant(double c);
Coefficient preset_linear(double a, double b);
/// 1 + gaussian bump, strictly positive.
Coefficient preset_bump(double center, double width);

struct GradientModel {
    int dimension = 1;          // spatial dimension d
    int n = 2;                  // algebra dimension
    std::vector<int> sizes;     // nodes per direction
    double h = 0;               // mesh width
    BcKind bc = BcKind::dirichlet;
    double alpha = 1.0;         // Robin parameter
    CliffordOperator T = CliffordOperator::zero(2, 1);
    BoundarySpec spec;
    std::string name;
};

/// 1D gradient e_1 a(x) d/dx on m_total nodes over [0, (m_total-1) h];
/// constraints replace the first and last node rows.
GradientModel gradient_1d(int m_total, double h, const Coefficient& a, BcKind bc,
                          double alpha = 1.0, int n_algebra = 2);

/// 2D gradient e_1 a_1 d/dx + e_2 a_2 d/dy on an nx x ny tensor grid;
/// all edge nodes carry constraints. Coefficient a_i is sampled on the
/// i-th coordinate of each node.
GradientModel gradient_2d(int nx, int ny, double h, const Coefficient& a1, const Coefficient& a2,
                          BcKind bc, double alpha = 1.0, int n_algebra = 2);

/// 1D difference matrix: centered interior rows, one-sided second-order
/// end rows.
Eigen::MatrixXd difference_matrix_1d(int m, double h);

struct KnownAnswer {
    std::string name;
    CliffordOperator T;
    BoundarySpec spec;
    /// Singular loci as slice coordinates (x, y).
    std::vector<std::pair<double, double>> loci;
};

/// Operators with analytically known S-spectra: left multiplications with
/// locus [p], the zero operator with locus {0}, and a block composition.
std::vector<KnownAnswer> known_answer_suite();

} // namespace cliffspec
