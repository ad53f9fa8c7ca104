#pragma once

#include "heatmann/errors.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace heatmann {

/// Truncated discrete spectrum of the positive self-adjoint operator Lambda.
///
/// Functions on Omega = (-pi, pi) are represented by their coefficients in the
/// eigenbasis sin(j t), j = 1..N. For the default basis Lambda = (-Laplacian)^{1/2}
/// and lambda_j = j. Every operator in the library is diagonal in this basis,
/// so results are exact on the retained modes.
class SpectralGrid {
public:
    /// lambda_j = j for j = 1..n_modes.
    static std::shared_ptr<const SpectralGrid> laplacian(std::size_t n_modes);

    /// Arbitrary spectrum; must be nonempty, strictly positive and nondecreasing.
    static std::shared_ptr<const SpectralGrid> from_eigenvalues(std::vector<double> eigenvalues);

    std::size_t n_modes() const noexcept { return eigenvalues_.size(); }
    std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
    /// lambda_j for 1-based mode j.
    double eigenvalue(std::size_t mode) const { return eigenvalues_.at(mode - 1); }
    /// Smallest eigenvalue (the infimum of the spectrum).
    double min_eigenvalue() const noexcept { return eigenvalues_.front(); }

    bool operator==(const SpectralGrid& other) const = default;

private:
    explicit SpectralGrid(std::vector<double> eigenvalues);
    std::vector<double> eigenvalues_;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

/// Same pointer or identical spectra.
bool same_grid(const GridPtr& a, const GridPtr& b) noexcept;

/// Immutable coefficient vector; coefficient j multiplies sin(j t) (no 1/sqrt(pi)).
class CoefVec {
public:
    CoefVec(GridPtr grid, std::vector<double> coef);

    static CoefVec zeros(GridPtr grid);
    static CoefVec single_mode(GridPtr grid, std::size_t mode, double value = 1.0);

    const GridPtr& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return coef_.size(); }
    std::span<const double> coef() const noexcept { return coef_; }
    /// Coefficient of 1-based mode j.
    double mode(std::size_t j) const { return coef_.at(j - 1); }
    double operator[](std::size_t index) const noexcept { return coef_[index]; }

    bool operator==(const CoefVec& other) const;

private:
    GridPtr grid_;
    std::vector<double> coef_;
};

/// Throws GridMismatchError unless both vectors share a grid.
void require_same_grid(const CoefVec& a, const CoefVec& b);

CoefVec operator+(const CoefVec& a, const CoefVec& b);
CoefVec operator-(const CoefVec& a, const CoefVec& b);
CoefVec operator*(double alpha, const CoefVec& v);

/// alpha * a + beta * b
CoefVec lincomb(double alpha, const CoefVec& a, double beta, const CoefVec& b);

/// L2 inner product of the coefficient sequences.
double inner(const CoefVec& a, const CoefVec& b);

/// ||v||_s = sqrt(sum_j (1 + lambda_j^2)^s v_j^2). Negative s gives the dual-scale norm.
/// Throws OverflowError naming the first mode where the sum stops being finite.
double hs_norm(const CoefVec& v, double s);

/// Plain l2 norm, i.e. hs_norm(v, 0).
double norm(const CoefVec& v);

using SpectralFunction = std::function<double(double)>;

/// (result)_j = g(lambda_j) v_j. Throws DomainError if g is not finite at some lambda_j.
CoefVec apply_spectral_function(const CoefVec& v, const SpectralFunction& g);

/// Evaluates sum_j v_j sin(j t) at each point; points must lie in (-pi, pi).
std::vector<double> synthesize(const CoefVec& v, std::span<const double> points);

}  // namespace heatmann
