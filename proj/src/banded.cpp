#include "convpde/banded.hpp"

#include <algorithm>
#include <cmath>

namespace convpde {

BandedMatrix::BandedMatrix(std::size_t n, std::size_t lower, std::size_t upper)
    : n_(n), kl_(lower), ku_(upper), ldab_(2 * lower + upper + 1) {
    data_.assign(ldab_ * n_, 0.0);
}

double& BandedMatrix::at(std::size_t i, std::size_t j) {
    if (i >= n_ || j >= n_ || !in_band(i, j)) {
        throw std::out_of_range("BandedMatrix::at: entry outside band");
    }
    return data_[j * ldab_ + kl_ + ku_ + i - j];
}

double BandedMatrix::get(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw std::out_of_range("BandedMatrix::get: index out of range");
    if (!in_band(i, j)) return 0.0;
    return data_[j * ldab_ + kl_ + ku_ + i - j];
}

std::vector<double> BandedMatrix::matvec(const std::vector<double>& x) const {
    if (x.size() != n_) throw std::invalid_argument("BandedMatrix::matvec: size mismatch");
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = (i >= kl_) ? i - kl_ : 0;
        const std::size_t j1 = std::min(i + ku_, n_ - 1);
        double s = 0.0;
        for (std::size_t j = j0; j <= j1; ++j) {
            s += data_[j * ldab_ + kl_ + ku_ + i - j] * x[j];
        }
        y[i] = s;
    }
    return y;
}

void BandedMatrix::shift_scale(double alpha, double beta) {
    for (std::size_t j = 0; j < n_; ++j) {
        const std::size_t i0 = (j >= ku_) ? j - ku_ : 0;
        const std::size_t i1 = std::min(j + kl_, n_ - 1);
        for (std::size_t i = i0; i <= i1; ++i) {
            double& a = data_[j * ldab_ + kl_ + ku_ + i - j];
            a *= beta;
            if (i == j) a += alpha;
        }
    }
}

std::vector<std::vector<double>> BandedMatrix::to_dense() const {
    std::vector<std::vector<double>> d(n_, std::vector<double>(n_, 0.0));
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) d[i][j] = get(i, j);
    }
    return d;
}

BandedLU::BandedLU(BandedMatrix m, double pivot_tol) : f_(std::move(m)) {
    const std::size_t n = f_.n_, kl = f_.kl_, ku = f_.ku_, ldab = f_.ldab_;
    const std::size_t kuf = kl + ku;  // upper bandwidth after fill
    auto entry = [&](std::size_t i, std::size_t j) -> double& {
        return f_.data_[j * ldab + kl + ku + i - j];
    };
    pivots_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t imax = std::min(k + kl, n - 1);
        std::size_t p = k;
        double best = std::abs(entry(k, k));
        for (std::size_t i = k + 1; i <= imax; ++i) {
            const double v = std::abs(entry(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (!(best > pivot_tol)) {
            throw LinearSolveError("banded LU: pivot below tolerance at column " +
                                   std::to_string(k));
        }
        pivots_[k] = p;
        const std::size_t jmax = std::min(k + kuf, n - 1);
        if (p != k) {
            for (std::size_t j = k; j <= jmax; ++j) std::swap(entry(k, j), entry(p, j));
        }
        for (std::size_t i = k + 1; i <= imax; ++i) {
            const double mult = entry(i, k) / entry(k, k);
            entry(i, k) = mult;
            for (std::size_t j = k + 1; j <= jmax; ++j) entry(i, j) -= mult * entry(k, j);
        }
    }
}

std::vector<double> BandedLU::solve(const std::vector<double>& rhs) const {
    const std::size_t n = f_.n_, kl = f_.kl_, ku = f_.ku_, ldab = f_.ldab_;
    const std::size_t kuf = kl + ku;
    if (rhs.size() != n) throw std::invalid_argument("BandedLU::solve: size mismatch");
    auto entry = [&](std::size_t i, std::size_t j) -> double {
        return f_.data_[j * ldab + kl + ku + i - j];
    };
    std::vector<double> x = rhs;
    for (std::size_t k = 0; k < n; ++k) {
        if (pivots_[k] != k) std::swap(x[k], x[pivots_[k]]);
        const std::size_t imax = std::min(k + kl, n - 1);
        for (std::size_t i = k + 1; i <= imax; ++i) x[i] -= entry(i, k) * x[k];
    }
    for (std::size_t k = n; k-- > 0;) {
        const std::size_t jmax = std::min(k + kuf, n - 1);
        double s = x[k];
        for (std::size_t j = k + 1; j <= jmax; ++j) s -= entry(k, j) * x[j];
        x[k] = s / entry(k, k);
    }
    return x;
}

}  // namespace convpde
