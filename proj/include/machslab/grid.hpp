// Slab domain T^{d-1} x (-1,1): tangential Fourier collocation, wall-normal
// Legendre-Gauss-Lobatto collocation, and the scalar/vector field carriers.
#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "machslab/error.hpp"

namespace machslab {

class SlabGrid;
using GridPtr = std::shared_ptr<const SlabGrid>;

/// Physical coordinates of one node; entries past dim are zero.
using Point = std::array<double, 3>;

class SlabGrid {
public:
    /// Validates and builds the grid. Tangential counts must be even and >= 8,
    /// the normal count odd and >= 9.
    static GridPtr build(int dim, std::vector<int> n_tangential, int n_normal,
                         double period = 2.0 * std::numbers::pi);

    int dim() const { return dim_; }
    int normal_axis() const { return dim_ - 1; }
    int n_tangential(int axis) const { return extents_[static_cast<std::size_t>(axis)]; }
    int n_normal() const { return extents_.back(); }
    int extent(int axis) const { return extents_[static_cast<std::size_t>(axis)]; }
    const std::vector<int>& extents() const { return extents_; }
    double period() const { return period_; }
    std::size_t size() const { return size_; }
    /// Number of tangential pencils (product of tangential extents).
    std::size_t n_pencils() const { return size_ / static_cast<std::size_t>(n_normal()); }

    std::span<const double> nodes_normal() const { return nodes_normal_; }
    std::span<const double> nodes_tangential(int axis) const {
        return nodes_tan_[static_cast<std::size_t>(axis)];
    }
    std::span<const double> normal_weights() const { return weights_normal_; }
    std::span<const double> quad_weights() const { return quad_weights_; }

    Point point(std::size_t index) const;
    /// Multi-index of a flat index (normal index last).
    std::array<int, 3> unflatten(std::size_t index) const;
    std::size_t flatten(const std::array<int, 3>& idx) const;

    bool is_wall(std::size_t index) const {
        const auto k = index % static_cast<std::size_t>(n_normal());
        return k == 0 || k + 1 == static_cast<std::size_t>(n_normal());
    }

    /// First-derivative collocation matrix along an axis.
    const Eigen::MatrixXd& diff_matrix(int axis) const { return diff_[static_cast<std::size_t>(axis)]; }
    /// 2/3-rule truncation operator along a tangential axis (|m| <= (N-1)/3 kept).
    const Eigen::MatrixXd& dealias_matrix(int axis) const { return dealias_[static_cast<std::size_t>(axis)]; }
    /// Orthonormal real Fourier basis (columns) for a tangential axis.
    const Eigen::MatrixXd& fourier_basis(int axis) const { return basis_[static_cast<std::size_t>(axis)]; }
    /// Eigenvalues of diff_matrix(axis)^2 for each fourier_basis column.
    const Eigen::VectorXd& fourier_eigenvalues(int axis) const { return basis_eval_[static_cast<std::size_t>(axis)]; }
    /// Signed wavenumber index of each fourier_basis column.
    const std::vector<int>& fourier_modes(int axis) const { return basis_mode_[static_cast<std::size_t>(axis)]; }
    int dealias_cutoff(int axis) const { return (n_tangential(axis) - 1) / 3; }
    double wavenumber_unit() const { return 2.0 * std::numbers::pi / period_; }

    /// Smallest node spacing over all axes (CFL length).
    double min_spacing() const;
    /// Measure of the domain, 2 L^{d-1}.
    double measure() const;

    bool same_shape(const SlabGrid& other) const {
        return dim_ == other.dim_ && extents_ == other.extents_ && period_ == other.period_;
    }

private:
    SlabGrid() = default;

    int dim_ = 0;
    std::vector<int> extents_;
    double period_ = 0.0;
    std::size_t size_ = 0;
    std::vector<std::vector<double>> nodes_tan_;
    std::vector<double> nodes_normal_;
    std::vector<double> weights_normal_;
    std::vector<double> quad_weights_;
    std::vector<Eigen::MatrixXd> diff_;
    std::vector<Eigen::MatrixXd> dealias_;
    std::vector<Eigen::MatrixXd> basis_;
    std::vector<Eigen::VectorXd> basis_eval_;
    std::vector<std::vector<int>> basis_mode_;
};

/// Legendre-Gauss-Lobatto nodes (ascending) and weights on [-1,1].
void lgl_nodes_weights(int n_points, std::vector<double>& nodes, std::vector<double>& weights);

/// Real samples of a scalar quantity on a SlabGrid.
class Field {
public:
    Field() = default;
    explicit Field(GridPtr grid, double value = 0.0);
    Field(GridPtr grid, Eigen::ArrayXd values);

    static Field sample(GridPtr grid, const std::function<double(const Point&)>& fn);

    const SlabGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    bool empty() const { return !grid_; }
    std::size_t size() const { return static_cast<std::size_t>(values_.size()); }

    Eigen::ArrayXd& array() { return values_; }
    const Eigen::ArrayXd& array() const { return values_; }
    std::span<double> values() { return {values_.data(), size()}; }
    std::span<const double> values() const { return {values_.data(), size()}; }
    double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
    double& operator[](std::size_t i) { return values_[static_cast<Eigen::Index>(i)]; }

    bool all_finite() const { return values_.allFinite(); }
    double max_abs() const { return values_.abs().maxCoeff(); }
    double min() const { return values_.minCoeff(); }
    double max() const { return values_.maxCoeff(); }
    /// Largest |value| over the wall nodes x_d = +-1.
    double wall_max_abs() const;
    void zero_walls();

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(const Field& o);
    Field& operator*=(double s);
    Field& operator+=(double s);

private:
    GridPtr grid_;
    Eigen::ArrayXd values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(Field a, const Field& b);
Field operator*(double s, Field a);
Field operator*(Field a, double s);
Field operator+(Field a, double s);
Field operator+(double s, Field a);
Field operator-(Field a);

/// d Fields sharing one grid (the velocity or magnetic field).
class VecField {
public:
    VecField() = default;
    explicit VecField(GridPtr grid, double value = 0.0);
    explicit VecField(std::vector<Field> components);

    int dim() const { return static_cast<int>(comp_.size()); }
    const SlabGrid& grid() const { return comp_.front().grid(); }
    const GridPtr& grid_ptr() const { return comp_.front().grid_ptr(); }
    Field& operator[](int i) { return comp_[static_cast<std::size_t>(i)]; }
    const Field& operator[](int i) const { return comp_[static_cast<std::size_t>(i)]; }
    std::vector<Field>& components() { return comp_; }
    const std::vector<Field>& components() const { return comp_; }
    /// Normal (wall-facing) component.
    Field& normal() { return comp_.back(); }
    const Field& normal() const { return comp_.back(); }

    bool all_finite() const;
    double max_abs() const;

    VecField& operator+=(const VecField& o);
    VecField& operator-=(const VecField& o);
    VecField& operator*=(double s);

private:
    std::vector<Field> comp_;
};

VecField operator+(VecField a, const VecField& b);
VecField operator-(VecField a, const VecField& b);
VecField operator*(double s, VecField a);
VecField operator*(const Field& f, VecField a);
Field dot(const VecField& a, const VecField& b);
/// Pointwise Euclidean magnitude squared.
Field norm_sq(const VecField& a);
/// 3D cross product.
VecField cross(const VecField& a, const VecField& b);

// ---- spectral operators ----------------------------------------------------

/// Partial derivative along axis (0-based; axis dim-1 is wall-normal).
Field deriv(const Field& f, int axis);
Field deriv(const Field& f, int axis, int order);
/// omega(x_d) = (1 - x_d)(1 + x_d).
Field weight_omega(const GridPtr& grid);
/// (omega d_n) f.
Field omega_deriv(const Field& f);
/// Quadrature of f over the slab.
double integrate(const Field& f);
/// L^2(Omega) norm.
double l2_norm(const Field& f);
double l2_norm(const VecField& f);
/// Tangential 2/3-rule truncation.
Field dealias(const Field& f);
/// Tangential exponential filter sigma(m) = exp(-strength (|m|/(N/2))^order).
Field filter_tangential(const Field& f, int order, double strength);
/// Legendre modal filter along the normal: coefficient j scaled by exp(-strength (j/(N-1))^order).
Field filter_normal(const Field& f, int order, double strength);
/// Keeps tangential modes |m| <= (N-1)/3 and Legendre degrees <= (N_d-1)/3.
Field band_limit(const Field& f);
/// band_limit followed by removal of the linear-in-x_d interpolant of the wall
/// values, so a field vanishing on the walls keeps doing so.
Field band_limit_zero_walls(const Field& f);

/// Applies an N x N matrix along one axis of a flat array laid out like grid.
void apply_along_axis(const SlabGrid& grid, const Eigen::MatrixXd& a, int axis,
                      const double* in, double* out);

}  // namespace machslab
