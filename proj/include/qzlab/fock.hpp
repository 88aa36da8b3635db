#pragma once

#include "qzlab/errors.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace qzlab {

using cplx = std::complex<double>;

namespace tol {
inline constexpr double kNorm = 1e-10;
inline constexpr double kHermitian = 1e-12;
inline constexpr double kPsdFloor = -1e-10;
inline constexpr double kZeroNorm = 1e-14;
// Largest admissible norm^2 lost by truncating a coherent state.
inline constexpr double kTruncationLoss = 1e-6;
} // namespace tol

/// Ordered tensor-factor dimensions. The composite basis is row-major with
/// the first factor as the most significant index.
class HilbertSpec {
public:
    explicit HilbertSpec(std::vector<std::size_t> factor_dims);
    static HilbertSpec single(std::size_t dim) { return HilbertSpec({dim}); }

    const std::vector<std::size_t>& factor_dims() const noexcept { return dims_; }
    std::size_t factor_count() const noexcept { return dims_.size(); }
    std::size_t total_dim() const noexcept { return total_; }

    /// Spec of the tensor product this ⊗ other.
    HilbertSpec concat(const HilbertSpec& other) const;

    friend bool operator==(const HilbertSpec&, const HilbertSpec&) = default;

private:
    std::vector<std::size_t> dims_;
    std::size_t total_;
};

/// Complex amplitudes over a HilbertSpec. Construction checks shape and
/// finiteness only; every public operation that returns a state returns a
/// unit-norm one.
class StateVector {
public:
    /// The unit state of the trivial one-dimensional space.
    StateVector() : StateVector(HilbertSpec::single(1), {cplx{1.0, 0.0}}) {}
    StateVector(HilbertSpec spec, std::vector<cplx> amps);

    static StateVector basis(HilbertSpec spec, std::size_t index);

    const HilbertSpec& spec() const noexcept { return spec_; }
    std::span<const cplx> amps() const noexcept { return amps_; }
    std::size_t dim() const noexcept { return amps_.size(); }
    cplx operator[](std::size_t i) const { return amps_[i]; }
    double norm2() const;

    friend bool operator==(const StateVector&, const StateVector&) = default;

private:
    HilbertSpec spec_;
    std::vector<cplx> amps_;
};

struct CoherentState {
    StateVector state;
    // norm^2 captured by the first `dim` Fock amplitudes before renormalizing
    double truncation_fidelity;
};

/// ceil(|a|^2 + 8|a| + 20): keeps the Poisson tail far below the overlap
/// tolerances for every amplitude up to |a|.
std::size_t default_dim(double alpha_magnitude);

/// Truncated, renormalized |alpha>. Throws TruncationError when the first
/// `dim` Fock amplitudes hold less than 1 - 1e-6 of the norm.
CoherentState coherent_state(cplx alpha, std::size_t dim);

/// <a|b>, first argument conjugated.
cplx inner_product(const StateVector& a, const StateVector& b);

/// Untruncated <alpha|beta> = exp(-|alpha|^2/2 - |beta|^2/2 + conj(alpha) beta).
cplx coherent_overlap_closed_form(cplx alpha, cplx beta);

StateVector normalize(const StateVector& s);

StateVector tensor(const StateVector& a, const StateVector& b);

/// Throws InvalidState unless | ||s||^2 - 1 | <= 1e-10.
void require_unit_norm(const StateVector& s, const char* what);

class DensityMatrix {
public:
    /// Validates Hermiticity, unit trace and positivity; throws InvalidState.
    DensityMatrix(HilbertSpec spec, Eigen::MatrixXcd entries);

    const HilbertSpec& spec() const noexcept { return spec_; }
    const Eigen::MatrixXcd& matrix() const noexcept { return rho_; }
    cplx operator()(std::size_t i, std::size_t j) const {
        return rho_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(rho_.rows()); }
    cplx trace() const { return rho_.trace(); }
    double max_off_diagonal() const;

private:
    HilbertSpec spec_;
    Eigen::MatrixXcd rho_;
};

DensityMatrix density_of(const StateVector& s);

/// Reduced density matrix on factor `keep`, contracting every other factor.
DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t keep);

/// Hermitian or general operator, stored dense or as a diagonal.
class Operator {
public:
    static Operator dense(HilbertSpec spec, Eigen::MatrixXcd matrix, bool hermitian = true);
    static Operator diagonal(HilbertSpec spec, std::vector<cplx> entries, bool hermitian = true);
    static Operator projector(const StateVector& target);

    const HilbertSpec& spec() const noexcept { return spec_; }
    bool is_diagonal() const noexcept { return std::holds_alternative<std::vector<cplx>>(rep_); }
    bool is_hermitian() const noexcept { return hermitian_; }

    /// Raw O|s>, not renormalized.
    std::vector<cplx> apply(const StateVector& s) const;
    cplx expectation(const StateVector& s) const;
    Eigen::MatrixXcd to_dense() const;

private:
    Operator(HilbertSpec spec, std::variant<Eigen::MatrixXcd, std::vector<cplx>> rep, bool hermitian);

    HilbertSpec spec_;
    std::variant<Eigen::MatrixXcd, std::vector<cplx>> rep_;
    bool hermitian_;
};

} // namespace qzlab
