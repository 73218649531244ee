#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace convpde {

struct LinearSolveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// General banded matrix, LAPACK-style band storage with room for pivot fill.
class BandedMatrix {
public:
    BandedMatrix() = default;
    BandedMatrix(std::size_t n, std::size_t lower, std::size_t upper);

    std::size_t size() const { return n_; }
    std::size_t lower_bandwidth() const { return kl_; }
    std::size_t upper_bandwidth() const { return ku_; }

    bool in_band(std::size_t i, std::size_t j) const {
        return (j + kl_ >= i) && (i + ku_ >= j);
    }

    double& at(std::size_t i, std::size_t j);
    double get(std::size_t i, std::size_t j) const;

    std::vector<double> matvec(const std::vector<double>& x) const;

    /// this := alpha*I + beta*this
    void shift_scale(double alpha, double beta);

    std::vector<std::vector<double>> to_dense() const;

private:
    friend class BandedLU;
    std::size_t n_ = 0, kl_ = 0, ku_ = 0;
    // entry (i,j) lives at data_[j*ldab_ + kl_ + ku_ + i - j]; the extra kl_
    // rows on top hold fill generated by row interchanges during factorization
    std::size_t ldab_ = 0;
    std::vector<double> data_;
};

/// Banded LU with partial pivoting within the band.
class BandedLU {
public:
    explicit BandedLU(BandedMatrix m, double pivot_tol = 1e-14);

    std::vector<double> solve(const std::vector<double>& rhs) const;

private:
    BandedMatrix f_;
    std::vector<std::size_t> pivots_;
};

}  // namespace convpde
