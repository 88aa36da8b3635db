#include "qzlab/fock.hpp"

#include "qzlab/kernels.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qzlab {

namespace {

Eigen::Map<const Eigen::VectorXcd> as_eigen(const StateVector& s) {
    return {s.amps().data(), static_cast<Eigen::Index>(s.dim())};
}

void require_same_spec(const HilbertSpec& a, const HilbertSpec& b, const char* what) {
    if (!(a == b)) {
        throw DimensionMismatch(fmt::format("{}: Hilbert spaces differ (dim {} vs {})", what,
                                            a.total_dim(), b.total_dim()));
    }
}

} // namespace

HilbertSpec::HilbertSpec(std::vector<std::size_t> factor_dims) : dims_(std::move(factor_dims)) {
    if (dims_.empty()) {
        throw InvalidFactor("HilbertSpec needs at least one factor");
    }
    total_ = 1;
    for (std::size_t d : dims_) {
        if (d == 0) {
            throw InvalidFactor("HilbertSpec factor dimension must be >= 1");
        }
        total_ *= d;
    }
}

HilbertSpec HilbertSpec::concat(const HilbertSpec& other) const {
    std::vector<std::size_t> dims = dims_;
    dims.insert(dims.end(), other.dims_.begin(), other.dims_.end());
    return HilbertSpec(std::move(dims));
}

StateVector::StateVector(HilbertSpec spec, std::vector<cplx> amps)
    : spec_(std::move(spec)), amps_(std::move(amps)) {
    if (amps_.size() != spec_.total_dim()) {
        throw DimensionMismatch(fmt::format("state has {} amplitudes but the space has dimension {}",
                                            amps_.size(), spec_.total_dim()));
    }
    for (const cplx& a : amps_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw InvalidState("state amplitude is not finite");
        }
    }
}

StateVector StateVector::basis(HilbertSpec spec, std::size_t index) {
    if (index >= spec.total_dim()) {
        throw DimensionMismatch(
            fmt::format("basis index {} out of range for dimension {}", index, spec.total_dim()));
    }
    std::vector<cplx> amps(spec.total_dim(), cplx{0.0, 0.0});
    amps[index] = 1.0;
    return StateVector(std::move(spec), std::move(amps));
}

double StateVector::norm2() const { return kernels::norm2(amps_); }

std::size_t default_dim(double alpha_magnitude) {
    const double a = std::abs(alpha_magnitude);
    return static_cast<std::size_t>(std::ceil(a * a + 8.0 * a + 20.0));
}

CoherentState coherent_state(cplx alpha, std::size_t dim) {
    if (dim == 0) {
        throw DimensionMismatch("coherent_state: dim must be >= 1");
    }
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
        throw InvalidState("coherent_state: alpha is not finite");
    }
    std::vector<cplx> amps(dim, cplx{0.0, 0.0});
    const double mag = std::abs(alpha);
    if (mag == 0.0) {
        amps[0] = 1.0;
    } else {
        // |c_n| = exp(-|a|^2/2 + n ln|a| - ln(n!)/2), arg c_n = n arg(a)
        const double log_mag = std::log(mag);
        const double phase = std::arg(alpha);
        const double half_mean = 0.5 * mag * mag;
        for (std::size_t n = 0; n < dim; ++n) {
            const double nd = static_cast<double>(n);
            const double log_c = -half_mean + nd * log_mag - 0.5 * std::lgamma(nd + 1.0);
            amps[n] = std::polar(std::exp(log_c), nd * phase);
        }
    }
    const double captured = kernels::norm2(amps);
    if (captured < 1.0 - tol::kTruncationLoss) {
        throw TruncationError(
            fmt::format("coherent_state: dim {} keeps only {:.3e} of |alpha={}{:+}i|^2 norm "
                        "(need dim ~ {})",
                        dim, captured, alpha.real(), alpha.imag(), default_dim(mag)),
            captured);
    }
    kernels::scale(amps, 1.0 / std::sqrt(captured));
    return {StateVector(HilbertSpec::single(dim), std::move(amps)), captured};
}

cplx inner_product(const StateVector& a, const StateVector& b) {
    require_same_spec(a.spec(), b.spec(), "inner_product");
    return kernels::dot_conj(a.amps(), b.amps());
}

cplx coherent_overlap_closed_form(cplx alpha, cplx beta) {
    return std::exp(-0.5 * std::norm(alpha) - 0.5 * std::norm(beta) + std::conj(alpha) * beta);
}

StateVector normalize(const StateVector& s) {
    const double norm = std::sqrt(s.norm2());
    if (!(norm > tol::kZeroNorm)) {
        throw ZeroNormError(fmt::format("normalize: norm {:.3e} is below 1e-14", norm));
    }
    std::vector<cplx> amps(s.amps().begin(), s.amps().end());
    kernels::scale(amps, 1.0 / norm);
    return StateVector(s.spec(), std::move(amps));
}

void require_unit_norm(const StateVector& s, const char* what) {
    const double n2 = s.norm2();
    if (!(std::abs(n2 - 1.0) <= tol::kNorm)) {
        throw InvalidState(fmt::format("{}: state is not unit norm (|psi|^2 = {:.17g})", what, n2));
    }
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    require_unit_norm(a, "tensor");
    require_unit_norm(b, "tensor");
    std::vector<cplx> amps(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < b.dim(); ++j) {
            amps[i * b.dim() + j] = a[i] * b[j];
        }
    }
    return StateVector(a.spec().concat(b.spec()), std::move(amps));
}

DensityMatrix::DensityMatrix(HilbertSpec spec, Eigen::MatrixXcd entries)
    : spec_(std::move(spec)), rho_(std::move(entries)) {
    const auto n = static_cast<Eigen::Index>(spec_.total_dim());
    if (rho_.rows() != n || rho_.cols() != n) {
        throw DimensionMismatch(fmt::format("density matrix is {}x{} but the space has dimension {}",
                                            rho_.rows(), rho_.cols(), n));
    }
    if (!rho_.allFinite()) {
        throw InvalidState("density matrix has non-finite entries");
    }
    const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol::kHermitian) {
        throw InvalidState(fmt::format("density matrix is not Hermitian (max deviation {:.3e})", herm));
    }
    const cplx tr = rho_.trace();
    if (std::abs(tr - 1.0) > tol::kNorm) {
        throw InvalidState(fmt::format("density matrix trace is {}{:+}i, expected 1", tr.real(), tr.imag()));
    }
    // Symmetrize away the sub-tolerance anti-Hermitian part before the eigensolve.
    const Eigen::MatrixXcd herm_part = 0.5 * (rho_ + rho_.adjoint());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm_part, Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < tol::kPsdFloor) {
        throw InvalidState(fmt::format("density matrix has negative eigenvalue {:.3e}", min_eig));
    }
}

double DensityMatrix::max_off_diagonal() const {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < rho_.rows(); ++i) {
        for (Eigen::Index j = 0; j < rho_.cols(); ++j) {
            if (i != j) {
                worst = std::max(worst, std::abs(rho_(i, j)));
            }
        }
    }
    return worst;
}

DensityMatrix density_of(const StateVector& s) {
    require_unit_norm(s, "density_of");
    const auto v = as_eigen(s);
    return DensityMatrix(s.spec(), v * v.adjoint());
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t keep) {
    const auto& dims = rho.spec().factor_dims();
    if (dims.size() < 2) {
        throw InvalidFactor("partial_trace: need at least two tensor factors");
    }
    if (keep >= dims.size()) {
        throw InvalidFactor(
            fmt::format("partial_trace: factor {} out of range (have {})", keep, dims.size()));
    }
    // index = (outer * kept + k) * inner + q
    const std::size_t kept = dims[keep];
    const std::size_t outer = std::accumulate(dims.begin(), dims.begin() + static_cast<long>(keep),
                                              std::size_t{1}, std::multiplies<>());
    const std::size_t inner = std::accumulate(dims.begin() + static_cast<long>(keep) + 1, dims.end(),
                                              std::size_t{1}, std::multiplies<>());
    const Eigen::MatrixXcd& full = rho.matrix();
    Eigen::MatrixXcd reduced = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(kept),
                                                      static_cast<Eigen::Index>(kept));
    for (std::size_t i = 0; i < kept; ++i) {
        for (std::size_t j = 0; j < kept; ++j) {
            cplx acc{0.0, 0.0};
            for (std::size_t p = 0; p < outer; ++p) {
                for (std::size_t q = 0; q < inner; ++q) {
                    const auto row = static_cast<Eigen::Index>((p * kept + i) * inner + q);
                    const auto col = static_cast<Eigen::Index>((p * kept + j) * inner + q);
                    acc += full(row, col);
                }
            }
            reduced(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
        }
    }
    return DensityMatrix(HilbertSpec::single(kept), std::move(reduced));
}

Operator::Operator(HilbertSpec spec, std::variant<Eigen::MatrixXcd, std::vector<cplx>> rep, bool hermitian)
    : spec_(std::move(spec)), rep_(std::move(rep)), hermitian_(hermitian) {}

Operator Operator::dense(HilbertSpec spec, Eigen::MatrixXcd matrix, bool hermitian) {
    const auto n = static_cast<Eigen::Index>(spec.total_dim());
    if (matrix.rows() != n || matrix.cols() != n) {
        throw DimensionMismatch("Operator::dense: matrix shape does not match the space");
    }
    if (hermitian && (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > tol::kHermitian) {
        throw InvalidState("Operator::dense: matrix tagged Hermitian is not");
    }
    return Operator(std::move(spec), std::move(matrix), hermitian);
}

Operator Operator::diagonal(HilbertSpec spec, std::vector<cplx> entries, bool hermitian) {
    if (entries.size() != spec.total_dim()) {
        throw DimensionMismatch("Operator::diagonal: entry count does not match the space");
    }
    if (hermitian) {
        for (const cplx& e : entries) {
            if (std::abs(e.imag()) > tol::kHermitian) {
                throw InvalidState("Operator::diagonal: Hermitian diagonal must be real");
            }
        }
    }
    return Operator(std::move(spec), std::move(entries), hermitian);
}

Operator Operator::projector(const StateVector& target) {
    require_unit_norm(target, "Operator::projector");
    const auto v = as_eigen(target);
    Eigen::MatrixXcd p = v * v.adjoint();
    return Operator(target.spec(), std::move(p), true);
}

std::vector<cplx> Operator::apply(const StateVector& s) const {
    require_same_spec(spec_, s.spec(), "Operator::apply");
    std::vector<cplx> out(s.amps().begin(), s.amps().end());
    if (const auto* diag = std::get_if<std::vector<cplx>>(&rep_)) {
        kernels::mul(out, *diag);
    } else {
        const auto& m = std::get<Eigen::MatrixXcd>(rep_);
        Eigen::Map<Eigen::VectorXcd>(out.data(), static_cast<Eigen::Index>(out.size())) = m * as_eigen(s);
    }
    return out;
}

cplx Operator::expectation(const StateVector& s) const {
    const std::vector<cplx> os = apply(s);
    return kernels::dot_conj(s.amps(), os);
}

Eigen::MatrixXcd Operator::to_dense() const {
    if (const auto* diag = std::get_if<std::vector<cplx>>(&rep_)) {
        Eigen::VectorXcd d = Eigen::Map<const Eigen::VectorXcd>(diag->data(), static_cast<Eigen::Index>(diag->size()));
        return d.asDiagonal();
    }
    return std::get<Eigen::MatrixXcd>(rep_);
}

} // namespace qzlab
