// Finite-difference transmission solver on duplicated-interface grids.
//
// Unknown layout: region-major, one unknown per node, interface radii
// appearing twice (last node of the left region, first node of the right).
// Row budget per region of n nodes: n - 2 interior equations plus one row
// contributed by each end node (boundary condition or interface condition),
// which makes the global matrix square.

#include "indefla/oracle.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cmath>
#include <limits>

#include "indefla/errors.hpp"

namespace indefla {

namespace {

using Cx = std::complex<double>;
using Sparse = Eigen::SparseMatrix<Cx>;
using Triplet = Eigen::Triplet<Cx>;

void validate_points(std::size_t n_points) {
    if (n_points < 9) {
        throw Error(ErrorCode::validation_error,
                    "finite-difference grids need at least 9 nodes per region");
    }
}

}  // namespace

RadialGrid make_transmission_grid(const AnnularGeometry& g, const Contrast& c,
                                  const SourceSpec& s, int m, std::complex<double> h,
                                  std::size_t n_points) {
    validate_points(n_points);
    const Cx inner_coef{-c.mu, c.delta};
    const Cx annulus_coef{1.0, c.delta};
    const Cx outer_coef{-c.mu, c.delta};

    RadialGrid grid;
    grid.m = m;
    auto push = [&](double lo, double hi, Cx coef, Cx source) {
        if (!(hi > lo)) return;
        GridRegion region;
        region.lo = lo;
        region.hi = hi;
        region.coefficient = coef;
        region.source = source;
        region.n = n_points;
        region.offset = grid.total_nodes;
        grid.total_nodes += n_points;
        grid.regions.push_back(region);
    };
    push(0.0, g.r_i, inner_coef, Cx{});
    push(g.r_i, g.r_e, annulus_coef, Cx{});
    push(g.r_e, s.a, outer_coef, Cx{});
    push(s.a, s.b, outer_coef, h);
    push(s.b, g.R, outer_coef, Cx{});
    return grid;
}

RadialGrid make_single_region_grid(double lo, double hi, std::complex<double> coefficient,
                                   std::complex<double> source, int m, std::size_t n_points) {
    validate_points(n_points);
    if (!(hi > lo)) {
        throw Error(ErrorCode::validation_error, "grid region must have positive length");
    }
    RadialGrid grid;
    grid.m = m;
    GridRegion region;
    region.lo = lo;
    region.hi = hi;
    region.coefficient = coefficient;
    region.source = source;
    region.n = n_points;
    region.offset = 0;
    grid.regions.push_back(region);
    grid.total_nodes = n_points;
    return grid;
}

std::vector<std::complex<double>> fd_transmission_solve(const RadialGrid& grid) {
    if (grid.regions.empty()) {
        throw Error(ErrorCode::validation_error, "empty grid");
    }
    const std::size_t N = grid.total_nodes;
    const double mm = static_cast<double>(grid.m) * static_cast<double>(grid.m);

    std::vector<Triplet> trip;
    trip.reserve(5 * N);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(N));
    std::size_t row = 0;

    auto add = [&](std::size_t r, std::size_t col, Cx v) {
        trip.emplace_back(static_cast<int>(r), static_cast<int>(col), v);
    };

    for (std::size_t k = 0; k < grid.regions.size(); ++k) {
        const GridRegion& reg = grid.regions[k];
        const double h = reg.spacing();
        const Cx c = reg.coefficient;

        // --- left end node -------------------------------------------------
        const std::size_t first = reg.offset;
        if (k == 0) {
            if (reg.lo == 0.0) {
                if (grid.m != 0) {
                    add(row, first, Cx{1.0, 0.0});  // u(0) = 0
                } else {
                    // u'(0) = 0 with a second-order one-sided stencil
                    add(row, first, Cx{-3.0, 0.0});
                    add(row, first + 1, Cx{4.0, 0.0});
                    add(row, first + 2, Cx{-1.0, 0.0});
                }
            } else {
                add(row, first, Cx{1.0, 0.0});  // Dirichlet at an inner boundary
            }
            rhs(static_cast<Eigen::Index>(row)) = Cx{};
            ++row;
        } else {
            // flux continuity with the previous region, written at this node:
            //   c_prev u'(r*-) - c u'(r*+) = 0, one-sided second order
            const GridRegion& prev = grid.regions[k - 1];
            const double hp = prev.spacing();
            const std::size_t last = prev.offset + prev.n - 1;
            const Cx cp = prev.coefficient;
            add(row, last, cp * Cx{3.0 / (2.0 * hp), 0.0});
            add(row, last - 1, cp * Cx{-4.0 / (2.0 * hp), 0.0});
            add(row, last - 2, cp * Cx{1.0 / (2.0 * hp), 0.0});
            add(row, first, -c * Cx{-3.0 / (2.0 * h), 0.0});
            add(row, first + 1, -c * Cx{4.0 / (2.0 * h), 0.0});
            add(row, first + 2, -c * Cx{-1.0 / (2.0 * h), 0.0});
            rhs(static_cast<Eigen::Index>(row)) = Cx{};
            ++row;
        }

        // --- interior nodes -------------------------------------------------
        for (std::size_t j = 1; j + 1 < reg.n; ++j) {
            const double r = reg.node(j);
            const double inv_h2 = 1.0 / (h * h);
            const double inv_2hr = 1.0 / (2.0 * h * r);
            // -c (u'' + u'/r - m^2 u/r^2) = g
            add(row, first + j - 1, -c * Cx{inv_h2 - inv_2hr, 0.0});
            add(row, first + j, -c * Cx{-2.0 * inv_h2 - mm / (r * r), 0.0});
            add(row, first + j + 1, -c * Cx{inv_h2 + inv_2hr, 0.0});
            rhs(static_cast<Eigen::Index>(row)) = reg.source;
            ++row;
        }

        // --- right end node -------------------------------------------------
        const std::size_t last = reg.offset + reg.n - 1;
        if (k + 1 == grid.regions.size()) {
            add(row, last, Cx{1.0, 0.0});  // Dirichlet at R
            rhs(static_cast<Eigen::Index>(row)) = Cx{};
            ++row;
        } else {
            // value continuity with the next region
            const GridRegion& next = grid.regions[k + 1];
            add(row, last, Cx{1.0, 0.0});
            add(row, next.offset, Cx{-1.0, 0.0});
            rhs(static_cast<Eigen::Index>(row)) = Cx{};
            ++row;
        }
    }

    Sparse A(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();

    Eigen::SparseLU<Sparse> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success) {
        throw Error(ErrorCode::singular_discrete_system,
                    "discrete transmission system is singular on this grid");
    }
    Eigen::VectorXcd x = lu.solve(rhs);
    if (lu.info() != Eigen::Success) {
        throw Error(ErrorCode::singular_discrete_system,
                    "discrete transmission solve failed");
    }

    std::vector<Cx> values(N);
    for (std::size_t i = 0; i < N; ++i) {
        const Cx v = x(static_cast<Eigen::Index>(i));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw Error(ErrorCode::singular_discrete_system,
                        "discrete transmission solve produced non-finite values");
        }
        values[i] = v;
    }
    return values;
}

std::vector<std::complex<double>> sample_on_grid(
    const RadialGrid& grid, const std::function<std::complex<double>(double)>& profile) {
    std::vector<Cx> values(grid.total_nodes);
    for (const GridRegion& reg : grid.regions) {
        for (std::size_t j = 0; j < reg.n; ++j) {
            values[reg.offset + j] = profile(reg.node(j));
        }
    }
    return values;
}

FdResidualReport fd_residual(const RadialGrid& grid,
                             const std::vector<std::complex<double>>& values) {
    if (values.size() != grid.total_nodes) {
        throw Error(ErrorCode::validation_error,
                    "field sample count does not match the grid");
    }
    FdResidualReport rep;
    const double mm = static_cast<double>(grid.m) * static_cast<double>(grid.m);
    double max_scale = 0.0;
    for (const GridRegion& reg : grid.regions) {
        const double h = reg.spacing();
        const Cx c = reg.coefficient;
        const double ac = std::abs(c);
        for (std::size_t j = 1; j + 1 < reg.n; ++j) {
            const double r = reg.node(j);
            const double inv_h2 = 1.0 / (h * h);
            const double inv_2hr = 1.0 / (2.0 * h * r);
            const Cx um = values[reg.offset + j - 1];
            const Cx u0 = values[reg.offset + j];
            const Cx up = values[reg.offset + j + 1];
            const Cx defect = -c * (um * Cx{inv_h2 - inv_2hr, 0.0} +
                                    u0 * Cx{-2.0 * inv_h2 - mm / (r * r), 0.0} +
                                    up * Cx{inv_h2 + inv_2hr, 0.0}) -
                              reg.source;
            const double scale = ac * (std::abs(um) * std::abs(inv_h2 - inv_2hr) +
                                       std::abs(u0) * (2.0 * inv_h2 + mm / (r * r)) +
                                       std::abs(up) * (inv_h2 + inv_2hr)) +
                                 std::abs(reg.source);
            rep.raw = std::max(rep.raw, std::abs(defect));
            max_scale = std::max(max_scale, scale);
        }
    }
    rep.normalized = rep.raw / (max_scale + std::numeric_limits<double>::min());
    return rep;
}

std::vector<double> fd_convergence_orders(const AnnularGeometry& g, const Contrast& c,
                                          const SourceSpec& s, int m, std::complex<double> h,
                                          const std::vector<std::size_t>& node_counts) {
    if (node_counts.size() < 3) {
        throw Error(ErrorCode::validation_error,
                    "a convergence study needs at least three grids");
    }
    for (std::size_t i = 1; i < node_counts.size(); ++i) {
        if (node_counts[i] != 2 * node_counts[i - 1] - 1) {
            throw Error(ErrorCode::validation_error,
                        "each grid must double the previous one (n -> 2n - 1)");
        }
    }

    std::vector<RadialGrid> grids;
    std::vector<std::vector<Cx>> fields;
    grids.reserve(node_counts.size());
    for (std::size_t n : node_counts) {
        grids.push_back(make_transmission_grid(g, c, s, m, h, n));
        fields.push_back(fd_transmission_solve(grids.back()));
    }

    // successive sup differences on shared nodes (coarse node j = fine 2j)
    std::vector<double> sup_diffs;
    for (std::size_t k = 0; k + 1 < fields.size(); ++k) {
        double sup = 0.0;
        for (std::size_t reg = 0; reg < grids[k].regions.size(); ++reg) {
            const GridRegion& coarse = grids[k].regions[reg];
            const GridRegion& fine = grids[k + 1].regions[reg];
            for (std::size_t j = 0; j < coarse.n; ++j) {
                const Cx diff = fields[k][coarse.offset + j] - fields[k + 1][fine.offset + 2 * j];
                sup = std::max(sup, std::abs(diff));
            }
        }
        sup_diffs.push_back(sup);
    }

    std::vector<double> orders;
    for (std::size_t k = 0; k + 1 < sup_diffs.size(); ++k) {
        if (sup_diffs[k + 1] == 0.0) {
            orders.push_back(std::numeric_limits<double>::infinity());
        } else {
            orders.push_back(std::log2(sup_diffs[k] / sup_diffs[k + 1]));
        }
    }
    return orders;
}

}  // namespace indefla
