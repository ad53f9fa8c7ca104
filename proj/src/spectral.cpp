#include "heatmann/spectral.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace heatmann {

SpectralGrid::SpectralGrid(std::vector<double> eigenvalues) : eigenvalues_(std::move(eigenvalues)) {}

std::shared_ptr<const SpectralGrid> SpectralGrid::laplacian(std::size_t n_modes) {
    if (n_modes == 0) {
        throw ConfigError("spectral grid needs at least one mode");
    }
    std::vector<double> lambda(n_modes);
    for (std::size_t j = 0; j < n_modes; ++j) {
        lambda[j] = static_cast<double>(j + 1);
    }
    return std::shared_ptr<const SpectralGrid>(new SpectralGrid(std::move(lambda)));
}

std::shared_ptr<const SpectralGrid> SpectralGrid::from_eigenvalues(std::vector<double> eigenvalues) {
    if (eigenvalues.empty()) {
        throw ConfigError("spectral grid needs at least one mode");
    }
    for (std::size_t j = 0; j < eigenvalues.size(); ++j) {
        const double l = eigenvalues[j];
        if (!std::isfinite(l) || l <= 0.0) {
            std::ostringstream msg;
            msg << "eigenvalue of mode " << j + 1 << " must be finite and positive, got " << l;
            throw ConfigError(msg.str());
        }
        if (j > 0 && l < eigenvalues[j - 1]) {
            std::ostringstream msg;
            msg << "eigenvalues must be nondecreasing; mode " << j + 1 << " has " << l
                << " after " << eigenvalues[j - 1];
            throw ConfigError(msg.str());
        }
    }
    return std::shared_ptr<const SpectralGrid>(new SpectralGrid(std::move(eigenvalues)));
}

bool same_grid(const GridPtr& a, const GridPtr& b) noexcept {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

CoefVec::CoefVec(GridPtr grid, std::vector<double> coef) : grid_(std::move(grid)), coef_(std::move(coef)) {
    if (!grid_) {
        throw ConfigError("coefficient vector without a grid");
    }
    if (coef_.size() != grid_->n_modes()) {
        std::ostringstream msg;
        msg << "coefficient vector has " << coef_.size() << " entries but the grid has "
            << grid_->n_modes() << " modes";
        throw GridMismatchError(msg.str());
    }
    for (std::size_t j = 0; j < coef_.size(); ++j) {
        if (!std::isfinite(coef_[j])) {
            std::ostringstream msg;
            msg << "coefficient of mode " << j + 1 << " is not finite";
            throw DomainError(j + 1, msg.str());
        }
    }
}

CoefVec CoefVec::zeros(GridPtr grid) {
    const std::size_t n = grid ? grid->n_modes() : 0;
    return CoefVec(std::move(grid), std::vector<double>(n, 0.0));
}

CoefVec CoefVec::single_mode(GridPtr grid, std::size_t mode, double value) {
    if (!grid || mode == 0 || mode > grid->n_modes()) {
        throw ConfigError("single_mode: mode index out of range");
    }
    std::vector<double> c(grid->n_modes(), 0.0);
    c[mode - 1] = value;
    return CoefVec(std::move(grid), std::move(c));
}

bool CoefVec::operator==(const CoefVec& other) const {
    return same_grid(grid_, other.grid_) && coef_ == other.coef_;
}

void require_same_grid(const CoefVec& a, const CoefVec& b) {
    if (!same_grid(a.grid(), b.grid())) {
        throw GridMismatchError("coefficient vectors live on different spectral grids");
    }
}

CoefVec lincomb(double alpha, const CoefVec& a, double beta, const CoefVec& b) {
    require_same_grid(a, b);
    std::vector<double> out(a.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = alpha * a[j] + beta * b[j];
    }
    return CoefVec(a.grid(), std::move(out));
}

CoefVec operator+(const CoefVec& a, const CoefVec& b) {
    require_same_grid(a, b);
    std::vector<double> out(a.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = a[j] + b[j];
    return CoefVec(a.grid(), std::move(out));
}

CoefVec operator-(const CoefVec& a, const CoefVec& b) {
    require_same_grid(a, b);
    std::vector<double> out(a.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = a[j] - b[j];
    return CoefVec(a.grid(), std::move(out));
}

CoefVec operator*(double alpha, const CoefVec& v) {
    std::vector<double> out(v.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = alpha * v[j];
    return CoefVec(v.grid(), std::move(out));
}

double inner(const CoefVec& a, const CoefVec& b) {
    require_same_grid(a, b);
    double sum = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) sum += a[j] * b[j];
    return sum;
}

double hs_norm(const CoefVec& v, double s) {
    const auto lambda = v.grid()->eigenvalues();
    double sum = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[j] == 0.0) continue;
        const double weight = std::pow(1.0 + lambda[j] * lambda[j], s);
        sum += weight * v[j] * v[j];
        if (!std::isfinite(sum)) {
            std::ostringstream msg;
            msg << "H^" << s << " norm overflows at mode " << j + 1 << " (weight " << weight << ")";
            throw OverflowError(j + 1, msg.str());
        }
    }
    return std::sqrt(sum);
}

double norm(const CoefVec& v) { return hs_norm(v, 0.0); }

CoefVec apply_spectral_function(const CoefVec& v, const SpectralFunction& g) {
    const auto lambda = v.grid()->eigenvalues();
    std::vector<double> out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double gj = g(lambda[j]);
        if (!std::isfinite(gj)) {
            std::ostringstream msg;
            msg << "spectral function is not finite at mode " << j + 1 << " (lambda = " << lambda[j] << ")";
            throw DomainError(j + 1, msg.str());
        }
        out[j] = gj * v[j];
        if (!std::isfinite(out[j])) {
            std::ostringstream msg;
            msg << "spectral function times coefficient overflows at mode " << j + 1;
            throw OverflowError(j + 1, msg.str());
        }
    }
    return CoefVec(v.grid(), std::move(out));
}

std::vector<double> synthesize(const CoefVec& v, std::span<const double> points) {
    std::vector<double> out;
    out.reserve(points.size());
    for (const double t : points) {
        if (!std::isfinite(t) || t <= -std::numbers::pi || t >= std::numbers::pi) {
            std::ostringstream msg;
            msg << "sample point " << t << " lies outside (-pi, pi)";
            throw ConfigError(msg.str());
        }
        double sum = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            sum += v[j] * std::sin(static_cast<double>(j + 1) * t);
        }
        out.push_back(sum);
    }
    return out;
}

}  // namespace heatmann
