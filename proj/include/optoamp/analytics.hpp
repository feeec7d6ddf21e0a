// analytics.hpp — closed-form mechanical response, Green's functions and effective kernels

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "optoamp/errors.hpp"

namespace optoamp {

using cplx_t = std::complex<double>;

struct MechanicalResponse {
    double Delta = 1.0;
    double lambda = 0.0;
    double gamma = 0.0;
    double nbar = 0.0;

    void validate() const {
        if (!(Delta > 0.0)) throw ConfigError("MechanicalResponse: Delta must be positive");
        if (!(std::abs(lambda) < Delta)) throw ConfigError("MechanicalResponse: |lambda| must stay below Delta");
        if (gamma < 0.0 || nbar < 0.0) throw ConfigError("MechanicalResponse: negative gamma or occupancy");
    }
    double r() const { return 0.5 * std::atanh(lambda / Delta); }
    double E_beta() const { return Delta / std::cosh(2.0 * r()); }

    // Response with prescribed squeezing and Bogoliubov energy.
    static MechanicalResponse from_frame(double r, double E_beta, double gamma, double nbar) {
        const double D = E_beta * std::cosh(2.0 * r);
        return {D, D * std::tanh(2.0 * r), gamma, nbar};
    }
};

using Mat2c = Eigen::Matrix2cd;

// inverse of [[i(Delta - w) + gamma/2, -i lambda], [i lambda, -i(Delta + w) + gamma/2]]
inline Mat2c chi_matrix(double w, const MechanicalResponse& m) {
    const cplx_t I(0.0, 1.0);
    Mat2c A;
    A << I * (m.Delta - w) + m.gamma / 2, -I * m.lambda, I * m.lambda, -I * (m.Delta + w) + m.gamma / 2;
    const cplx_t det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    if (det == cplx_t(0.0)) throw ConfigError("chi_matrix: singular response (instability boundary)");
    Mat2c inv;
    inv << A(1, 1), -A(0, 1), -A(1, 0), A(0, 0);
    return inv / det;
}

// (<beta^dag beta>, <beta beta>) of the Bogoliubov mode for a thermal mechanical bath.
// The anomalous moment solves d<bb>/dt = -(2iE + gamma)<bb> - gamma(n + 1/2) sinh 2r, which is what
// the chi-matrix noise integral gives as well: <bb> = +i gamma (n + 1/2) sinh 2r / (2E - i gamma).
inline std::pair<double, cplx_t> beta_covariances(const MechanicalResponse& m) {
    m.validate();
    const double r = m.r(), E = m.E_beta();
    const double nn = m.nbar * std::cosh(2.0 * r) + std::sinh(r) * std::sinh(r);
    const cplx_t bb = cplx_t(0.0, m.gamma * (m.nbar + 0.5) * std::sinh(2.0 * r)) / cplx_t(2.0 * E, -m.gamma);
    return {nn, bb};
}

// Retarded functions (G^R, G~^R) at frequency w.
inline std::pair<cplx_t, cplx_t> greens_retarded(double w, const MechanicalResponse& m) {
    const double r = m.r(), E = m.E_beta();
    const cplx_t lo = 1.0 / cplx_t(w - E, m.gamma / 2), hi = 1.0 / cplx_t(w + E, m.gamma / 2);
    const double c = std::cosh(r), s = std::sinh(r);
    return {c * c * lo - s * s * hi, 0.5 * std::sinh(2.0 * r) * (lo - hi)};
}

// Keldysh functions from the response matrix.
inline std::pair<cplx_t, cplx_t> greens_keldysh(double w, const MechanicalResponse& m) {
    const Mat2c chi = chi_matrix(w, m);
    const double pre = m.gamma * (2.0 * m.nbar + 1.0);
    const cplx_t gk = cplx_t(0.0, -pre) * (std::norm(chi(0, 0)) + std::norm(chi(0, 1)));
    const cplx_t gkt = cplx_t(0.0, -pre) * (chi(0, 0) * std::conj(chi(1, 0)) + chi(0, 1) * std::conj(chi(1, 1)));
    return {gk, gkt};
}

// Large-squeezing closed form, identical for G^K and G~^K.
inline cplx_t greens_keldysh_large_r(double w, const MechanicalResponse& m) {
    const double E = m.E_beta(), h = m.gamma / 2;
    const double r = m.r();
    auto f = [](double x, double y) { return 1.0 / cplx_t(x, y); };
    return (1.0 + 2.0 * m.nbar) * std::exp(4.0 * r) / 8.0 * (f(w - E, h) + f(w + E, h) - f(w - E, -h) - f(w + E, -h));
}

// Rate at which mechanical noise heats cavity i given the photon number nbar_j of its partner.
inline double heating_rate(double gamma, double g, double E_beta, double r, double nbar_m, double nbar_j) {
    if (!(E_beta > 0.0)) throw ConfigError("heating_rate: E_beta must be positive");
    return gamma * (g * g / (E_beta * E_beta)) * nbar_j * (2.0 * nbar_m + 1.0) * std::exp(4.0 * r);
}

struct Kernels {
    std::vector<double> omega;
    std::vector<cplx_t> Lambda, Lambda_tilde;
};

// Lambda[w] = g^2 G^R[w] / 2, Lambda~[w] = g^2 G~^R[w] / 2
inline Kernels interaction_kernels(const std::vector<double>& omega, double g, const MechanicalResponse& m) {
    Kernels k;
    k.omega = omega;
    k.Lambda.reserve(omega.size());
    k.Lambda_tilde.reserve(omega.size());
    for (double w : omega) {
        const auto [gr, grt] = greens_retarded(w, m);
        k.Lambda.push_back(0.5 * g * g * gr);
        k.Lambda_tilde.push_back(0.5 * g * g * grt);
    }
    return k;
}

// f(t) = int dw/2pi F[w] e^{-i w t}, trapezoid rule on a uniform grid with a Gaussian
// window of width `window` to control truncation ringing.
inline std::vector<cplx_t> inverse_fourier(const std::vector<double>& omega, const std::vector<cplx_t>& F,
                                           const std::vector<double>& times, double window) {
    if (omega.size() != F.size() || omega.size() < 2) throw ConfigError("inverse_fourier: bad grid");
    const double dw = (omega.back() - omega.front()) / double(omega.size() - 1);
    std::vector<cplx_t> out;
    out.reserve(times.size());
    for (double t : times) {
        cplx_t acc = 0.0;
        for (std::size_t k = 0; k < omega.size(); ++k) {
            const double wt = (k == 0 || k + 1 == omega.size()) ? 0.5 : 1.0;
            const double win = std::exp(-0.5 * omega[k] * omega[k] / (window * window));
            acc += wt * win * F[k] * std::exp(cplx_t(0.0, -omega[k] * t));
        }
        out.push_back(acc * dw / (2.0 * std::numbers::pi));
    }
    return out;
}

// (w, Re, Im) rows
inline std::string complex_series_csv(const std::vector<double>& x, const std::vector<cplx_t>& y,
                                      const std::string& xname = "omega") {
    if (x.size() != y.size()) throw ConfigError("complex_series_csv: length mismatch");
    std::ostringstream os;
    os << std::setprecision(12) << xname << ",re,im\n";
    for (std::size_t k = 0; k < x.size(); ++k) os << x[k] << ',' << y[k].real() << ',' << y[k].imag() << '\n';
    return os.str();
}

} // namespace optoamp
