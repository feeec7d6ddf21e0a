// observables.hpp — intensity correlations, Gaussian moments, Wigner functions, fidelity

#pragma once

#include <Eigen/Eigenvalues>

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "optoamp/fock.hpp"
#include "optoamp/parallel.hpp"

namespace optoamp {

// <a^dag a^dag a a> / <a^dag a>^2 for an arbitrary (possibly composite) annihilator a.
inline double g2_zero(const DensityMatrix& rho, const Operator& a) {
    const SparseMatrix ad = a.matrix().adjoint();
    const SparseMatrix aa = a.matrix() * a.matrix();
    const double n = trace_product(rho.matrix(), SparseMatrix(ad * a.matrix())).real();
    if (!(n > 1e-12)) throw UndefinedObservable("g2_zero: occupation below numeric floor");
    const double nn = trace_product(rho.matrix(), SparseMatrix(SparseMatrix(aa.adjoint()) * aa)).real();
    return nn / (n * n);
}

inline double g2_zero(const DensityMatrix& rho, std::string_view mode) {
    return g2_zero(rho, mode_operator(rho.space(), mode, ModeOp::annihilate));
}

struct GaussianMoments {
    cplx mean = 0.0;       // <a>
    double occupation = 0; // <a^dag a>
    cplx anomalous = 0.0;  // <a^2>
};

inline GaussianMoments extract_moments(const DensityMatrix& rho, const Operator& a) {
    GaussianMoments m;
    m.mean = trace_product(rho.matrix(), a.matrix());
    m.occupation = trace_product(rho.matrix(), SparseMatrix(SparseMatrix(a.matrix().adjoint()) * a.matrix())).real();
    m.anomalous = trace_product(rho.matrix(), SparseMatrix(a.matrix() * a.matrix()));
    return m;
}

// Wick expansion of <a^dag^2 a^2> for a Gaussian state with the given first and second moments.
// With N = <a^dag a> - |<a>|^2 and M = <a^2> - <a>^2:
//   <a^dag^2 a^2> = |alpha|^4 + 4|alpha|^2 N + 2 Re(alpha*^2 M) + 2N^2 + |M|^2
inline double g2_gaussian(const GaussianMoments& m, double tol = 1e-9) {
    const cplx al = m.mean;
    const double a2 = std::norm(al);
    const double N = m.occupation - a2;
    const cplx M = m.anomalous - al * al;
    if (N < -tol) throw ConfigError("g2_gaussian: occupation below |<a>|^2 (unphysical moments)");
    if (std::norm(M) > N * (N + 1.0) + tol * (1.0 + N * N))
        throw ConfigError("g2_gaussian: |<da^2>|^2 exceeds N(N+1) (unphysical moments)");
    if (!(m.occupation > 1e-12)) throw UndefinedObservable("g2_gaussian: occupation below numeric floor");
    const double num = a2 * a2 + 4.0 * a2 * N + 2.0 * std::real(std::conj(al) * std::conj(al) * M) + 2.0 * N * N +
                       std::norm(M);
    return num / (m.occupation * m.occupation);
}

// ------------------------------- Wigner --------------------------------------

struct WignerGrid {
    std::vector<double> x, p;
    Eigen::MatrixXd values; // values(i, j) = W(x_i, p_j)

    double min() const { return values.minCoeff(); }
    double max() const { return values.maxCoeff(); }
    double integral() const {
        if (x.size() < 2 || p.size() < 2) return 0.0;
        const double dx = (x.back() - x.front()) / double(x.size() - 1);
        const double dp = (p.back() - p.front()) / double(p.size() - 1);
        return values.sum() * dx * dp;
    }

    // x, p, W rows; x is the slow index.
    std::string to_csv() const {
        std::ostringstream os;
        os << std::setprecision(10) << "x,p,W\n";
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = 0; j < p.size(); ++j)
                os << x[i] << ',' << p[j] << ',' << values(Eigen::Index(i), Eigen::Index(j)) << '\n';
        return os.str();
    }
};

inline std::vector<double> linspace(double a, double b, std::size_t n) {
    if (n < 2) throw ConfigError("linspace: need at least two points");
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = a + (b - a) * double(k) / double(n - 1);
    return v;
}

namespace detail {

// Generalized Laguerre L_n^{(k)}(x) by the three-term recurrence.
inline double laguerre(std::size_t n, double k, double x) {
    if (n == 0) return 1.0;
    double l0 = 1.0, l1 = 1.0 + k - x;
    for (std::size_t j = 1; j < n; ++j) {
        const double jj = double(j);
        const double l2 = ((2.0 * jj + 1.0 + k - x) * l1 - (jj + k) * l0) / (jj + 1.0);
        l0 = l1;
        l1 = l2;
    }
    return l1;
}

} // namespace detail

// Matrix of the displaced parity D(alpha) P D(alpha)^dag in the Fock basis, using
// D(alpha) P D(alpha)^dag = D(2 alpha) P and the Laguerre form of displacement elements.
inline Matrix displaced_parity(std::size_t d, cplx alpha) {
    const auto n = static_cast<Eigen::Index>(d);
    Matrix out(n, n);
    const cplx beta = 2.0 * alpha;
    const double x = std::norm(beta);
    const double env = std::exp(-0.5 * x);
    for (Eigen::Index m = 0; m < n; ++m) {
        for (Eigen::Index k = 0; k <= m; ++k) {
            // element (m, k) with m >= k
            const double lr = 0.5 * (std::lgamma(double(k) + 1.0) - std::lgamma(double(m) + 1.0));
            const cplx pw = (m == k) ? cplx(1.0) : std::pow(beta, double(m - k));
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            const cplx v = sign * std::exp(lr) * pw * env * detail::laguerre(std::size_t(k), double(m - k), x);
            out(m, k) = v;
            out(k, m) = std::conj(v);
        }
    }
    return out;
}

// W(x, p) = (1/pi) Tr[rho D(alpha) P D(alpha)^dag] with alpha = (x + ip)/sqrt 2.
inline WignerGrid wigner(const DensityMatrix& rho, std::vector<double> xs, std::vector<double> ps,
                         std::size_t threads = 0) {
    if (rho.space().num_modes() != 1) throw ConfigError("wigner: state must be single-mode (use partial_trace)");
    if (xs.empty() || ps.empty()) throw ConfigError("wigner: empty grid");
    const std::size_t d = rho.space().dim();
    double amax2 = 0.0;
    for (double x : xs)
        for (double p : ps) amax2 = std::max(amax2, 0.5 * (x * x + p * p));
    if (amax2 > 4.0 * double(d) + 16.0)
        throw TruncationError("wigner: grid reaches |alpha|^2 = " + std::to_string(amax2) +
                              ", beyond what a " + std::to_string(d) + "-level truncation represents");
    WignerGrid w{std::move(xs), std::move(ps), {}};
    w.values.resize(Eigen::Index(w.x.size()), Eigen::Index(w.p.size()));
    const Matrix& r = rho.matrix();
    const std::size_t np = w.p.size();
    parallel_for(
        w.x.size() * np,
        [&](std::size_t idx) {
            const std::size_t i = idx / np, j = idx % np;
            const cplx alpha = cplx(w.x[i], w.p[j]) / std::numbers::sqrt2;
            const Matrix P = displaced_parity(d, alpha);
            // Tr(rho P) = sum_mk rho(m,k) P(k,m)
            const double val = (r.cwiseProduct(P.transpose())).sum().real();
            w.values(Eigen::Index(i), Eigen::Index(j)) = val / std::numbers::pi;
        },
        threads);
    return w;
}

inline double wigner_point(const DensityMatrix& rho, double x, double p) {
    return wigner(rho, {x}, {p}).values(0, 0);
}

// ------------------------------- Fidelity ------------------------------------

namespace detail {

inline Matrix psd_sqrt(const Matrix& m, double clamp = -1e-12) {
    const Matrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Eigen::VectorXd ev = es.eigenvalues();
    if (ev.minCoeff() < clamp * std::max(1.0, ev.cwiseAbs().maxCoeff()) && ev.minCoeff() < -1e-8)
        throw InvariantError("fidelity: state has a significantly negative eigenvalue");
    ev = ev.cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace detail

// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2
inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (!(rho.space() == sigma.space())) throw ConfigError("fidelity: states live on different spaces");
    const Matrix s = detail::psd_sqrt(rho.matrix());
    const Matrix m = s * sigma.matrix() * s;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    const double tr = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return std::clamp(tr * tr, 0.0, 1.0);
}

inline double beta_population(const DensityMatrix& rho, double r, std::string_view mode = "mech") {
    const auto beta = bogoliubov_operator(rho.space(), mode, r);
    return trace_product(rho.matrix(), SparseMatrix(SparseMatrix(beta.matrix().adjoint()) * beta.matrix())).real();
}

// x-quadrature probability density <x|rho|x> of a single-mode state (oscillator eigenfunctions).
inline double quadrature_density(const DensityMatrix& rho, double x) {
    const auto d = static_cast<Eigen::Index>(rho.space().dim());
    Eigen::VectorXd psi(d);
    psi(0) = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    if (d > 1) psi(1) = std::sqrt(2.0) * x * psi(0);
    for (Eigen::Index n = 2; n < d; ++n)
        psi(n) = std::sqrt(2.0 / double(n)) * x * psi(n - 1) - std::sqrt(double(n - 1) / double(n)) * psi(n - 2);
    const Vector v = psi.cast<cplx>();
    return (v.transpose() * rho.matrix() * v).real()(0, 0);
}

} // namespace optoamp
