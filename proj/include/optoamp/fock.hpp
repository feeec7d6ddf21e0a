// fock.hpp — truncated multimode Fock spaces, sparse mode operators, density matrices

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <iostream>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "optoamp/errors.hpp"

namespace optoamp {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<cplx>;

inline constexpr cplx I_unit{0.0, 1.0};

inline void log_warning(const std::string& msg) { std::clog << "warning: " << msg << '\n'; }

// --------------------------- Hilbert space ----------------------------------

// Tensor product of truncated Fock spaces. The first listed mode is the most
// significant digit of the flat index.
class HilbertSpace {
public:
    HilbertSpace() = default;

    HilbertSpace(std::vector<std::size_t> dims, std::vector<std::string> labels)
        : dims_(std::move(dims)), labels_(std::move(labels)) {
        if (dims_.empty()) throw ConfigError("HilbertSpace: at least one mode required");
        if (labels_.size() != dims_.size())
            throw ConfigError("HilbertSpace: labels and dims differ in length");
        for (std::size_t k = 0; k < dims_.size(); ++k) {
            if (dims_[k] < 2)
                throw ConfigError("HilbertSpace: mode '" + labels_[k] + "' has dimension < 2");
            for (std::size_t j = 0; j < k; ++j)
                if (labels_[j] == labels_[k])
                    throw ConfigError("HilbertSpace: duplicate mode label '" + labels_[k] + "'");
        }
        strides_.assign(dims_.size(), 1);
        for (std::size_t k = dims_.size() - 1; k > 0; --k) strides_[k - 1] = strides_[k] * dims_[k];
        dim_ = strides_[0] * dims_[0];
    }

    std::size_t dim() const { return dim_; }
    std::size_t num_modes() const { return dims_.size(); }
    const std::vector<std::size_t>& dims() const { return dims_; }
    const std::vector<std::string>& labels() const { return labels_; }
    std::size_t mode_dim(std::size_t mode) const { return dims_.at(mode); }
    std::size_t stride(std::size_t mode) const { return strides_.at(mode); }

    bool has_mode(std::string_view label) const {
        return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
    }

    std::size_t mode_index(std::string_view label) const {
        auto it = std::find(labels_.begin(), labels_.end(), label);
        if (it == labels_.end()) throw ConfigError("unknown mode '" + std::string(label) + "'");
        return static_cast<std::size_t>(it - labels_.begin());
    }

    // occupation of `mode` in flat basis state `index`
    std::size_t digit(std::size_t index, std::size_t mode) const {
        return (index / strides_[mode]) % dims_[mode];
    }

    std::size_t flatten(std::span<const std::size_t> occupations) const {
        if (occupations.size() != dims_.size())
            throw ConfigError("flatten: occupation list length mismatch");
        std::size_t idx = 0;
        for (std::size_t k = 0; k < dims_.size(); ++k) {
            if (occupations[k] >= dims_[k]) throw ConfigError("flatten: occupation out of range");
            idx += occupations[k] * strides_[k];
        }
        return idx;
    }

    std::vector<std::size_t> unflatten(std::size_t index) const {
        std::vector<std::size_t> occ(dims_.size());
        for (std::size_t k = 0; k < dims_.size(); ++k) occ[k] = digit(index, k);
        return occ;
    }

    // Same layout with every truncation enlarged by `extra`.
    HilbertSpace enlarged(std::size_t extra) const {
        auto d = dims_;
        for (auto& x : d) x += extra;
        return HilbertSpace(std::move(d), labels_);
    }

    bool operator==(const HilbertSpace& o) const { return dims_ == o.dims_ && labels_ == o.labels_; }

private:
    std::vector<std::size_t> dims_;
    std::vector<std::string> labels_;
    std::vector<std::size_t> strides_;
    std::size_t dim_ = 0;
};

inline HilbertSpace make_space(std::vector<std::size_t> dims, std::vector<std::string> labels) {
    return HilbertSpace(std::move(dims), std::move(labels));
}

// --------------------------- Operators ---------------------------------------

class Operator {
public:
    Operator() = default;

    Operator(HilbertSpace space, SparseMatrix m) : space_(std::move(space)), m_(std::move(m)) {
        const auto d = static_cast<Eigen::Index>(space_.dim());
        if (m_.rows() != d || m_.cols() != d)
            throw ConfigError("Operator: matrix dimension does not match space");
        m_.makeCompressed();
    }

    static Operator zero(const HilbertSpace& s) {
        const auto d = static_cast<Eigen::Index>(s.dim());
        return Operator(s, SparseMatrix(d, d));
    }

    static Operator identity(const HilbertSpace& s) {
        const auto d = static_cast<Eigen::Index>(s.dim());
        SparseMatrix m(d, d);
        m.setIdentity();
        return Operator(s, std::move(m));
    }

    const HilbertSpace& space() const { return space_; }
    const SparseMatrix& matrix() const { return m_; }
    Matrix dense() const { return Matrix(m_); }

    Operator adjoint() const { return Operator(space_, SparseMatrix(m_.adjoint())); }

    double hermiticity_defect() const {
        SparseMatrix diff = m_ - SparseMatrix(m_.adjoint());
        double worst = 0.0;
        for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
            for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
        return worst;
    }

    bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() < tol; }

    Operator& operator+=(const Operator& o) {
        check_same(o);
        m_ = m_ + o.m_;
        return *this;
    }
    Operator& operator-=(const Operator& o) {
        check_same(o);
        m_ = m_ - o.m_;
        return *this;
    }
    Operator& operator*=(cplx s) {
        m_ *= s;
        return *this;
    }

    friend Operator operator+(Operator a, const Operator& b) { return a += b; }
    friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
    friend Operator operator*(cplx s, Operator a) { return a *= s; }
    friend Operator operator*(Operator a, cplx s) { return a *= s; }
    friend Operator operator*(double s, Operator a) { return a *= cplx(s, 0.0); }
    friend Operator operator*(const Operator& a, const Operator& b) {
        a.check_same(b);
        return Operator(a.space_, SparseMatrix(a.m_ * b.m_));
    }

    // [A, B]
    friend Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

private:
    void check_same(const Operator& o) const {
        if (!(space_ == o.space_)) throw ConfigError("Operator: space mismatch");
    }

    HilbertSpace space_;
    SparseMatrix m_;
};

enum class ModeOp { annihilate, create, number, position, parity, identity };

inline ModeOp parse_mode_op(std::string_view s) {
    if (s == "annihilate") return ModeOp::annihilate;
    if (s == "create") return ModeOp::create;
    if (s == "number") return ModeOp::number;
    if (s == "position") return ModeOp::position;
    if (s == "parity") return ModeOp::parity;
    if (s == "identity") return ModeOp::identity;
    throw ConfigError("unknown operator kind '" + std::string(s) + "'");
}

namespace detail {

// single-mode matrices, d x d
inline SparseMatrix local_matrix(std::size_t d, ModeOp kind) {
    const auto n = static_cast<Eigen::Index>(d);
    std::vector<Triplet> t;
    switch (kind) {
    case ModeOp::annihilate:
        for (Eigen::Index k = 1; k < n; ++k) t.emplace_back(k - 1, k, std::sqrt(double(k)));
        break;
    case ModeOp::create:
        for (Eigen::Index k = 1; k < n; ++k) t.emplace_back(k, k - 1, std::sqrt(double(k)));
        break;
    case ModeOp::number:
        for (Eigen::Index k = 1; k < n; ++k) t.emplace_back(k, k, double(k));
        break;
    case ModeOp::position:
        for (Eigen::Index k = 1; k < n; ++k) {
            t.emplace_back(k - 1, k, std::sqrt(double(k)));
            t.emplace_back(k, k - 1, std::sqrt(double(k)));
        }
        break;
    case ModeOp::parity:
        for (Eigen::Index k = 0; k < n; ++k) t.emplace_back(k, k, (k % 2 == 0) ? 1.0 : -1.0);
        break;
    case ModeOp::identity:
        for (Eigen::Index k = 0; k < n; ++k) t.emplace_back(k, k, 1.0);
        break;
    }
    SparseMatrix m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

} // namespace detail

// Lift a single-mode matrix (dense or sparse, d x d) to the full space.
template <class Local>
Operator embed(const HilbertSpace& space, std::size_t mode, const Local& local) {
    const std::size_t d = space.mode_dim(mode);
    if (static_cast<std::size_t>(local.rows()) != d || static_cast<std::size_t>(local.cols()) != d)
        throw ConfigError("embed: local operator dimension does not match mode");
    Eigen::SparseMatrix<cplx, Eigen::ColMajor> loc = Matrix(local).sparseView(0.0, 0.0);
    const std::size_t stride = space.stride(mode);
    std::vector<Triplet> t;
    t.reserve(space.dim() * static_cast<std::size_t>(std::max<Eigen::Index>(1, loc.nonZeros() / Eigen::Index(d))));
    for (std::size_t col = 0; col < space.dim(); ++col) {
        const auto n = static_cast<Eigen::Index>(space.digit(col, mode));
        for (decltype(loc)::InnerIterator it(loc, n); it; ++it) {
            const auto m = static_cast<std::ptrdiff_t>(it.row());
            const auto row = static_cast<std::ptrdiff_t>(col) + (m - n) * static_cast<std::ptrdiff_t>(stride);
            t.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col), it.value());
        }
    }
    const auto D = static_cast<Eigen::Index>(space.dim());
    SparseMatrix m(D, D);
    m.setFromTriplets(t.begin(), t.end());
    return Operator(space, std::move(m));
}

inline Operator mode_operator(const HilbertSpace& space, std::size_t mode, ModeOp kind) {
    if (mode >= space.num_modes()) throw ConfigError("mode_operator: mode index out of range");
    return embed(space, mode, detail::local_matrix(space.mode_dim(mode), kind));
}

inline Operator mode_operator(const HilbertSpace& space, std::string_view mode, ModeOp kind) {
    return mode_operator(space, space.mode_index(mode), kind);
}

inline Operator mode_operator(const HilbertSpace& space, std::string_view mode, std::string_view kind) {
    return mode_operator(space, space.mode_index(mode), parse_mode_op(kind));
}

// beta = cosh(r) a - sinh(r) a^dagger
inline Operator bogoliubov_operator(const HilbertSpace& space, std::string_view mode, double r) {
    if (!std::isfinite(r)) throw ConfigError("bogoliubov_operator: r must be finite");
    const auto a = mode_operator(space, mode, ModeOp::annihilate);
    return std::cosh(r) * a - std::sinh(r) * a.adjoint();
}

// --------------------------- Matrix exponential ------------------------------

// Scaling and squaring with a Taylor core; terms are summed until they fall
// below tol relative to the running sum.
inline Matrix expm(const Matrix& A, double tol = 1e-12) {
    const auto n = A.rows();
    const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
    int s = 0;
    if (norm1 > 0.5) s = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
    const Matrix B = A / std::ldexp(1.0, s);
    Matrix result = Matrix::Identity(n, n);
    Matrix term = Matrix::Identity(n, n);
    for (int k = 1; k < 64; ++k) {
        term = term * B / double(k);
        result += term;
        if (term.cwiseAbs().maxCoeff() < tol * std::max(1.0, result.cwiseAbs().maxCoeff())) break;
    }
    for (int i = 0; i < s; ++i) result = result * result;
    return result;
}

// 1 - sum_{n<d} |<n|alpha>|^2
inline double coherent_truncation_deficit(cplx alpha, std::size_t d) {
    const double x = std::norm(alpha);
    double p = std::exp(-x), acc = 0.0;
    for (std::size_t n = 0; n < d; ++n) {
        acc += p;
        p *= x / double(n + 1);
    }
    return std::max(0.0, 1.0 - acc);
}

inline Matrix local_displacement(std::size_t d, cplx alpha) {
    const Matrix a = Matrix(detail::local_matrix(d, ModeOp::annihilate));
    return expm(alpha * a.adjoint() - std::conj(alpha) * a);
}

// exp[r/2 (a^dagger^2 - a^2)]; maps vacuum to the vacuum of bogoliubov_operator(r)
inline Matrix local_squeeze(std::size_t d, double r) {
    const Matrix a = Matrix(detail::local_matrix(d, ModeOp::annihilate));
    const Matrix a2 = a * a;
    return expm(0.5 * r * (a2.adjoint() - a2));
}

inline Operator displace(const HilbertSpace& space, std::string_view mode, cplx alpha) {
    const auto k = space.mode_index(mode);
    const auto d = space.mode_dim(k);
    const double deficit = coherent_truncation_deficit(alpha, d);
    if (deficit > 1e-6)
        log_warning("displace: truncation " + std::to_string(d) + " of mode '" + std::string(mode) +
                    "' loses " + std::to_string(deficit) + " of the coherent-state norm");
    return embed(space, k, local_displacement(d, alpha));
}

inline Operator squeeze(const HilbertSpace& space, std::string_view mode, double r) {
    const auto k = space.mode_index(mode);
    return embed(space, k, local_squeeze(space.mode_dim(k), r));
}

// --------------------------- Density matrices --------------------------------

class DensityMatrix {
public:
    DensityMatrix() = default;

    DensityMatrix(HilbertSpace space, Matrix rho, double tol = 1e-9) : space_(std::move(space)), rho_(std::move(rho)) {
        const auto d = static_cast<Eigen::Index>(space_.dim());
        if (rho_.rows() != d || rho_.cols() != d) throw ConfigError("DensityMatrix: dimension mismatch");
        if (std::abs(rho_.trace() - cplx(1.0)) > tol)
            throw InvariantError("DensityMatrix: trace deviates from 1 by " +
                                 std::to_string(std::abs(rho_.trace() - cplx(1.0))));
        if (hermiticity_defect() > tol) throw InvariantError("DensityMatrix: not Hermitian");
    }

    static DensityMatrix pure(const HilbertSpace& space, const Vector& ket) {
        const double nrm = ket.norm();
        if (nrm == 0.0) throw ConfigError("DensityMatrix::pure: zero vector");
        const Vector k = ket / nrm;
        return DensityMatrix(space, k * k.adjoint());
    }

    const HilbertSpace& space() const { return space_; }
    const Matrix& matrix() const { return rho_; }

    cplx trace() const { return rho_.trace(); }
    double purity() const { return (rho_ * rho_).trace().real(); }

    double hermiticity_defect() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho_ + rho_.adjoint()), Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

    void check_positive(double tol = 1e-8) const {
        const double lmin = min_eigenvalue();
        if (lmin < -tol) throw InvariantError("DensityMatrix: eigenvalue " + std::to_string(lmin) + " below tolerance");
    }

private:
    HilbertSpace space_;
    Matrix rho_;
};

inline Vector fock_ket(const HilbertSpace& space, std::span<const std::size_t> occupations) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(space.dim()));
    v(static_cast<Eigen::Index>(space.flatten(occupations))) = 1.0;
    return v;
}

inline Vector fock_ket(const HilbertSpace& space, std::initializer_list<std::size_t> occupations) {
    std::vector<std::size_t> occ(occupations);
    return fock_ket(space, std::span<const std::size_t>(occ));
}

inline Vector vacuum_ket(const HilbertSpace& space) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(space.dim()));
    v(0) = 1.0;
    return v;
}

// single-mode thermal state, d x d, occupation nbar (truncated and renormalised)
inline Matrix thermal_matrix(std::size_t d, double nbar) {
    Matrix m = Matrix::Zero(Eigen::Index(d), Eigen::Index(d));
    if (nbar <= 0.0) {
        m(0, 0) = 1.0;
        return m;
    }
    const double q = nbar / (1.0 + nbar);
    double p = 1.0, z = 0.0;
    for (std::size_t n = 0; n < d; ++n) {
        m(Eigen::Index(n), Eigen::Index(n)) = p;
        z += p;
        p *= q;
    }
    return m / z;
}

// Tensor product of single-mode states in the order of `space`'s modes.
inline DensityMatrix product_state(const HilbertSpace& space, const std::vector<Matrix>& factors) {
    if (factors.size() != space.num_modes()) throw ConfigError("product_state: one factor per mode required");
    Matrix out = Matrix::Ones(1, 1);
    for (std::size_t k = 0; k < factors.size(); ++k) {
        const auto& f = factors[k];
        if (static_cast<std::size_t>(f.rows()) != space.mode_dim(k))
            throw ConfigError("product_state: factor dimension mismatch");
        Matrix next(out.rows() * f.rows(), out.cols() * f.cols());
        for (Eigen::Index i = 0; i < out.rows(); ++i)
            for (Eigen::Index j = 0; j < out.cols(); ++j)
                next.block(i * f.rows(), j * f.cols(), f.rows(), f.cols()) = out(i, j) * f;
        out = std::move(next);
    }
    return DensityMatrix(space, std::move(out));
}

// Reduced state on `keep` (mode indices), kept in the original mode order.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<std::size_t> keep) {
    const auto& sp = rho.space();
    if (keep.empty()) throw ConfigError("partial_trace: keep set is empty");
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    for (auto k : keep)
        if (k >= sp.num_modes()) throw ConfigError("partial_trace: mode index out of range");

    std::vector<std::size_t> dims;
    std::vector<std::string> labels;
    std::vector<bool> kept(sp.num_modes(), false);
    for (auto k : keep) {
        dims.push_back(sp.mode_dim(k));
        labels.push_back(sp.labels()[k]);
        kept[k] = true;
    }
    HilbertSpace reduced(dims, labels);

    const std::size_t D = sp.dim();
    std::vector<std::size_t> kidx(D), tidx(D);
    for (std::size_t i = 0; i < D; ++i) {
        std::size_t a = 0, b = 0;
        for (std::size_t k = 0; k < sp.num_modes(); ++k) {
            const auto dg = sp.digit(i, k);
            if (kept[k]) a = a * sp.mode_dim(k) + dg;
            else b = b * sp.mode_dim(k) + dg;
        }
        kidx[i] = a;
        tidx[i] = b;
    }
    const auto& m = rho.matrix();
    Matrix out = Matrix::Zero(Eigen::Index(reduced.dim()), Eigen::Index(reduced.dim()));
    for (std::size_t j = 0; j < D; ++j)
        for (std::size_t i = 0; i < D; ++i)
            if (tidx[i] == tidx[j]) out(Eigen::Index(kidx[i]), Eigen::Index(kidx[j])) += m(Eigen::Index(i), Eigen::Index(j));
    return DensityMatrix(std::move(reduced), std::move(out));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep) {
    std::vector<std::size_t> idx;
    for (const auto& l : keep) idx.push_back(rho.space().mode_index(l));
    return partial_trace(rho, std::move(idx));
}

// Projects rho onto the smaller truncation `dims` (same modes) and renormalizes.
// Returns the state and the population that was discarded.
inline std::pair<DensityMatrix, double> restrict_state(const DensityMatrix& rho, const std::vector<std::size_t>& dims) {
    const auto& sp = rho.space();
    if (dims.size() != sp.num_modes()) throw ConfigError("restrict_state: wrong number of truncations");
    for (std::size_t k = 0; k < dims.size(); ++k)
        if (dims[k] < 1 || dims[k] > sp.mode_dim(k)) throw ConfigError("restrict_state: truncations must shrink");
    HilbertSpace small(dims, sp.labels());
    std::vector<Eigen::Index> map;
    map.reserve(small.dim());
    for (std::size_t i = 0; i < small.dim(); ++i) map.push_back(Eigen::Index(sp.flatten(small.unflatten(i))));
    const auto n = Eigen::Index(map.size());
    Matrix out(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) out(i, j) = rho.matrix()(map[i], map[j]);
    const double kept = out.trace().real();
    if (!(kept > 0.0)) throw TruncationError("restrict_state: no population inside the smaller truncation");
    out /= kept;
    return {DensityMatrix(std::move(small), std::move(out)), 1.0 - kept};
}

// Tr(rho O) for a raw matrix pair; O sparse.
inline cplx trace_product(const Matrix& rho, const SparseMatrix& op) {
    cplx acc = 0.0;
    for (Eigen::Index i = 0; i < op.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(op, i); it; ++it) acc += it.value() * rho(it.col(), it.row());
    return acc;
}

inline cplx expectation(const DensityMatrix& rho, const Operator& op) {
    if (!(rho.space() == op.space())) throw ConfigError("expectation: space mismatch");
    return trace_product(rho.matrix(), op.matrix());
}

} // namespace optoamp
