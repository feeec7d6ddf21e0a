// dynamics.hpp — Lindblad generators, time evolution and steady states

#pragma once

#include <Eigen/SparseLU>

#include <cmath>
#include <functional>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "optoamp/fock.hpp"
#include "optoamp/ode.hpp"

namespace optoamp {

struct Dissipator {
    Operator jump;
    double rate = 0.0;
};

inline Dissipator make_dissipator(Operator jump, double rate) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) throw ConfigError("Dissipator: rate must be finite and non-negative");
    return Dissipator{std::move(jump), rate};
}

// L[rho] = -i[H, rho] + sum_k rate_k (J_k rho J_k^dag - 1/2 {J_k^dag J_k, rho})
class Liouvillian {
public:
    Liouvillian() = default;

    Liouvillian(Operator H, std::vector<Dissipator> dissipators)
        : H_(std::move(H)), dissipators_(std::move(dissipators)) {
        const auto& sp = H_.space();
        heff_ = H_.matrix();
        for (const auto& d : dissipators_) {
            if (!(d.jump.space() == sp)) throw ConfigError("Liouvillian: dissipator space mismatch");
            if (d.rate < 0.0) throw ConfigError("Liouvillian: negative rate");
            if (d.rate == 0.0) continue;
            SparseMatrix J = d.jump.matrix() * cplx(std::sqrt(d.rate), 0.0);
            SparseMatrix JdJ = SparseMatrix(J.adjoint()) * J;
            heff_ = heff_ - cplx(0.0, 0.5) * JdJ;
            jumps_.push_back(std::move(J));
        }
        heff_.makeCompressed();
        for (const auto& J : jumps_) jumps_adj_.emplace_back(J.adjoint());
    }

    const HilbertSpace& space() const { return H_.space(); }
    const Operator& hamiltonian() const { return H_; }
    const std::vector<Dissipator>& dissipators() const { return dissipators_; }
    std::size_t dim() const { return H_.space().dim(); }

    // General action (rho need not be Hermitian).
    void apply(const Matrix& rho, Matrix& out) const {
        const Matrix X = heff_ * rho;
        const Matrix Y = heff_ * rho.adjoint();
        out.noalias() = cplx(0.0, -1.0) * X + cplx(0.0, 1.0) * Y.adjoint();
        for (std::size_t k = 0; k < jumps_.size(); ++k) {
            const Matrix Z = jumps_[k] * rho;
            out.noalias() += Z * jumps_adj_[k];
        }
    }

    // Faster action valid for Hermitian rho; the result is exactly Hermitian. The jump terms go
    // into the symmetrized half too: left unsymmetrized, their roundoff seeds an anti-Hermitian
    // part that the bare jump map amplifies exponentially at large truncation.
    void apply_hermitian(const Matrix& rho, Matrix& out) const {
        tmp_.noalias() = heff_ * rho;
        tmp_ *= cplx(0.0, -1.0);
        for (std::size_t k = 0; k < jumps_.size(); ++k) {
            jr_.noalias() = jumps_[k] * rho;
            tmp_.noalias() += 0.5 * (jr_ * jumps_adj_[k]);
        }
        out = tmp_ + tmp_.adjoint();
    }

    Matrix operator()(const Matrix& rho) const {
        Matrix out;
        apply(rho, out);
        return out;
    }

    // Column-stacked superoperator: vec(L[rho]) = S vec(rho), vec index = i + j*d.
    Eigen::SparseMatrix<cplx, Eigen::ColMajor> superoperator() const {
        const auto d = static_cast<Eigen::Index>(dim());
        std::vector<Triplet> t;
        const SparseMatrix heff_adj = heff_.adjoint();
        t.reserve(static_cast<std::size_t>(2 * d * heff_.nonZeros()));
        // -i (I kron Heff) + i (Heff^dag^T kron I)
        for (Eigen::Index r = 0; r < heff_.outerSize(); ++r)
            for (SparseMatrix::InnerIterator it(heff_, r); it; ++it) {
                const auto i = it.row(), k = it.col();
                const cplx v = it.value();
                for (Eigen::Index j = 0; j < d; ++j) t.emplace_back(i + j * d, k + j * d, cplx(0.0, -1.0) * v);
            }
        // rho Heff^dag: (i,j) <- rho(i,k) Heff^dag(k,j)
        for (Eigen::Index r = 0; r < heff_adj.outerSize(); ++r)
            for (SparseMatrix::InnerIterator it(heff_adj, r); it; ++it) {
                const auto k = it.row(), j = it.col();
                const cplx v = it.value();
                for (Eigen::Index i = 0; i < d; ++i) t.emplace_back(i + j * d, i + k * d, cplx(0.0, 1.0) * v);
            }
        // J rho J^dag: (i,j) <- J(i,k) rho(k,l) conj(J(j,l))
        for (const auto& J : jumps_) {
            for (Eigen::Index r1 = 0; r1 < J.outerSize(); ++r1)
                for (SparseMatrix::InnerIterator a(J, r1); a; ++a)
                    for (Eigen::Index r2 = 0; r2 < J.outerSize(); ++r2)
                        for (SparseMatrix::InnerIterator b(J, r2); b; ++b)
                            t.emplace_back(a.row() + b.row() * d, a.col() + b.col() * d, a.value() * std::conj(b.value()));
        }
        Eigen::SparseMatrix<cplx, Eigen::ColMajor> S(d * d, d * d);
        S.setFromTriplets(t.begin(), t.end());
        return S;
    }

private:
    Operator H_;
    std::vector<Dissipator> dissipators_;
    SparseMatrix heff_;
    std::vector<SparseMatrix> jumps_;
    std::vector<SparseMatrix> jumps_adj_;
    mutable Matrix tmp_, jr_;
};

inline Liouvillian build_liouvillian(const Operator& H, std::vector<Dissipator> dissipators) {
    return Liouvillian(H, std::move(dissipators));
}

// Lab-frame thermal mechanical dissipators gamma(1+n)D[b] + gamma n D[b^dag], written in
// the frame whose annihilator is beta = cosh(r) b - sinh(r) b^dag (mode `mode` carries beta).
inline std::vector<Dissipator> frame_transformed_mech_dissipators(const HilbertSpace& space, std::string_view mode,
                                                                   double gamma, double nbar, double r,
                                                                   double phase = 0.0) {
    if (gamma < 0.0 || nbar < 0.0) throw ConfigError("mechanical dissipators: negative gamma or occupancy");
    if (!std::isfinite(r)) throw ConfigError("mechanical dissipators: r must be finite");
    const auto beta = mode_operator(space, mode, ModeOp::annihilate);
    const auto beta_dag = beta.adjoint();
    // in a picture rotating with phase * beta^dag beta, beta picks up exp(-i phase); global jump phases drop out
    const cplx c = std::cosh(r), s = std::sinh(r) * std::exp(cplx(0.0, 2.0 * phase));
    std::vector<Dissipator> out;
    if (gamma * (1.0 + nbar) > 0.0) out.push_back(make_dissipator(c * beta + s * beta_dag, gamma * (1.0 + nbar)));
    if (gamma * nbar > 0.0) out.push_back(make_dissipator(c * beta_dag + std::conj(s) * beta, gamma * nbar));
    return out;
}

inline std::vector<Dissipator> thermal_dissipators(const HilbertSpace& space, std::string_view mode, double gamma,
                                                   double nbar) {
    return frame_transformed_mech_dissipators(space, mode, gamma, nbar, 0.0);
}

// --------------------------- Time-dependent operators ------------------------

// H(t) = H0 + sum_k f_k(t) O_k
class TimeDependentOperator {
public:
    using Coefficient = std::function<cplx(double)>;

    explicit TimeDependentOperator(Operator constant) : constant_(std::move(constant)) {}

    void add(Coefficient f, Operator op) {
        if (!(op.space() == constant_.space())) throw ConfigError("TimeDependentOperator: space mismatch");
        terms_.emplace_back(std::move(f), std::move(op));
    }

    const HilbertSpace& space() const { return constant_.space(); }
    bool is_time_independent() const { return terms_.empty(); }
    const Operator& constant_part() const { return constant_; }

    Operator operator()(double t) const {
        SparseMatrix m = constant_.matrix();
        for (const auto& [f, op] : terms_) {
            const cplx c = f(t);
            if (c != cplx(0.0)) m = m + c * op.matrix();
        }
        return Operator(constant_.space(), std::move(m));
    }

private:
    Operator constant_;
    std::vector<std::pair<Coefficient, Operator>> terms_;
};

// A generator that is rebuilt at each evaluation time (cached per t).
class TimeDependentLiouvillian {
public:
    using Builder = std::function<Liouvillian(double)>;

    explicit TimeDependentLiouvillian(Builder b) : build_(std::move(b)) {}

    const Liouvillian& at(double t) const {
        if (!cache_ || cached_t_ != t) {
            cache_ = build_(t);
            cached_t_ = t;
        }
        return *cache_;
    }

private:
    Builder build_;
    mutable std::optional<Liouvillian> cache_;
    mutable double cached_t_ = 0.0;
};

// --------------------------- Evolution ---------------------------------------

struct Trajectory {
    std::vector<double> times;
    std::vector<std::string> names;
    std::vector<std::vector<cplx>> records; // records[k][i]: observable k at times[i]
    std::vector<std::pair<double, DensityMatrix>> snapshots;
    double max_trace_drift = 0.0;
    IntegratorStats stats;

    const std::vector<cplx>& series(std::string_view name) const {
        for (std::size_t k = 0; k < names.size(); ++k)
            if (names[k] == name) return records[k];
        throw ConfigError("Trajectory: no observable named '" + std::string(name) + "'");
    }
    DensityMatrix final_state() const {
        if (snapshots.empty()) throw ConfigError("Trajectory: no snapshots recorded");
        return snapshots.back().second;
    }
};

struct EvolveOptions {
    IntegratorOptions integrator;
    bool snapshot_all = false;       // keep the state at every grid time
    bool snapshot_final = true;
    double trace_tolerance = 1e-7;
};

using NamedObservables = std::vector<std::pair<std::string, Operator>>;

namespace detail {

template <class ApplyFn>
Trajectory evolve_impl(const DensityMatrix& rho0, ApplyFn&& apply, std::span<const double> t_grid,
                       const NamedObservables& observables, const EvolveOptions& opt) {
    for (const auto& [name, op] : observables)
        if (!(op.space() == rho0.space())) throw ConfigError("evolve: observable '" + name + "' space mismatch");
    Trajectory tr;
    tr.names.reserve(observables.size());
    for (const auto& o : observables) tr.names.push_back(o.first);
    tr.records.assign(observables.size(), {});
    const auto& space = rho0.space();
    auto rhs = [&](double t, const Matrix& y, Matrix& dy) { apply(t, y, dy); };
    auto out = [&](std::size_t k, double t, const Matrix& y) {
        tr.times.push_back(t);
        const double drift = std::abs(y.trace() - cplx(1.0));
        tr.max_trace_drift = std::max(tr.max_trace_drift, drift);
        if (drift > opt.trace_tolerance)
            throw InvariantError("evolve: trace drift " + std::to_string(drift) + " at t=" + std::to_string(t));
        for (std::size_t i = 0; i < observables.size(); ++i)
            tr.records[i].push_back(trace_product(y, observables[i].second.matrix()));
        const bool last = (k + 1 == t_grid.size());
        if (opt.snapshot_all || (last && opt.snapshot_final)) {
            Matrix h = 0.5 * (y + y.adjoint());
            tr.snapshots.emplace_back(t, DensityMatrix(space, std::move(h), 1e-6));
        }
    };
    tr.stats = integrate<Matrix>(rhs, rho0.matrix(), t_grid, out, opt.integrator);
    return tr;
}

} // namespace detail

inline Trajectory evolve(const DensityMatrix& rho0, const Liouvillian& L, std::span<const double> t_grid,
                         const NamedObservables& observables = {}, const EvolveOptions& opt = {}) {
    if (!(L.space() == rho0.space())) throw ConfigError("evolve: generator and state spaces differ");
    return detail::evolve_impl(
        rho0, [&](double, const Matrix& y, Matrix& dy) { L.apply_hermitian(y, dy); }, t_grid, observables, opt);
}

inline Trajectory evolve(const DensityMatrix& rho0, const TimeDependentLiouvillian& L, std::span<const double> t_grid,
                         const NamedObservables& observables = {}, const EvolveOptions& opt = {}) {
    return detail::evolve_impl(
        rho0,
        [&](double t, const Matrix& y, Matrix& dy) {
            const auto& Lt = L.at(t);
            if (!(Lt.space() == rho0.space())) throw ConfigError("evolve: generator and state spaces differ");
            Lt.apply_hermitian(y, dy);
        },
        t_grid, observables, opt);
}

// Closed-system Schroedinger evolution of a ket under H(t); returns the final ket.
inline Vector evolve_ket(const Vector& psi0, const TimeDependentOperator& H, double t0, double t1,
                         const IntegratorOptions& opt = {}) {
    Vector result = psi0;
    const double grid[2] = {t0, t1};
    auto rhs = [&](double t, const Vector& y, Vector& dy) { dy.noalias() = cplx(0.0, -1.0) * (H(t).matrix() * y); };
    integrate<Vector>(rhs, psi0, std::span<const double>(grid, 2),
                      [&](std::size_t, double, const Vector& y) { result = y; }, opt);
    return result;
}

// --------------------------- Steady state ------------------------------------

struct SteadyStateOptions {
    std::size_t direct_dim_cap = 250; // Hilbert dimension above which the integration fallback is used
    double residual_tolerance = 1e-10;
    // Optional conserved charge per basis state (e.g. total photon number). When set, the
    // generator is solved by GMRES preconditioned with its charge-sector diagonal blocks;
    // terms that change the charge (a weak probe) only enter through the Krylov iteration.
    std::vector<int> charge;
    std::size_t krylov_restart = 60;
    std::size_t krylov_max_iterations = 2000;
    double fallback_chunk = 50.0;     // integration chunk length for the fallback
    double fallback_max_time = 1e5;
    IntegratorOptions integrator{};
};

inline double residual_norm(const Liouvillian& L, const Matrix& rho) {
    Matrix r;
    L.apply(rho, r);
    return r.cwiseAbs().maxCoeff();
}

// Photon-number-like charge of every basis state: sum of occupations of the listed modes.
inline std::vector<int> number_charge(const HilbertSpace& space, const std::vector<std::string>& modes) {
    std::vector<std::size_t> idx;
    for (const auto& m : modes) idx.push_back(space.mode_index(m));
    std::vector<int> q(space.dim());
    for (std::size_t k = 0; k < space.dim(); ++k) {
        const auto occ = space.unflatten(k);
        int s = 0;
        for (auto i : idx) s += int(occ[i]);
        q[k] = s;
    }
    return q;
}

namespace detail {

using ColSparse = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;

// Vectorized generator with row 0 replaced by the trace functional.
inline ColSparse constrained_generator(const Liouvillian& L) {
    const auto d = static_cast<Eigen::Index>(L.dim());
    Eigen::SparseMatrix<cplx, Eigen::RowMajor> Sr = L.superoperator();
    for (Eigen::SparseMatrix<cplx, Eigen::RowMajor>::InnerIterator it(Sr, 0); it; ++it) it.valueRef() = 0.0;
    std::vector<Triplet> tr;
    for (Eigen::Index i = 0; i < d; ++i) tr.emplace_back(0, i + i * d, 1.0);
    Eigen::SparseMatrix<cplx, Eigen::RowMajor> T(d * d, d * d);
    T.setFromTriplets(tr.begin(), tr.end());
    ColSparse A = Sr + T;
    A.prune(cplx(0.0), 0.0);
    A.makeCompressed();
    return A;
}

// Block-Jacobi preconditioner over charge-sector pairs (q_i, q_j) of the vectorized state.
class SectorPreconditioner {
public:
    SectorPreconditioner(const ColSparse& A, const std::vector<int>& charge) {
        const auto d = static_cast<Eigen::Index>(charge.size());
        const auto n = A.rows();
        block_of_.resize(n);
        local_.resize(n);
        std::map<std::pair<int, int>, std::size_t> ids;
        for (Eigen::Index k = 0; k < n; ++k) {
            const auto key = std::make_pair(charge[std::size_t(k % d)], charge[std::size_t(k / d)]);
            auto [it, fresh] = ids.emplace(key, blocks_.size());
            if (fresh) blocks_.emplace_back();
            block_of_[k] = it->second;
            local_[k] = Eigen::Index(blocks_[it->second].index.size());
            blocks_[it->second].index.push_back(k);
        }
        std::vector<std::vector<Triplet>> trip(blocks_.size());
        for (Eigen::Index c = 0; c < A.outerSize(); ++c)
            for (ColSparse::InnerIterator it(A, c); it; ++it) {
                const auto b = block_of_[it.row()];
                if (b == block_of_[c]) trip[b].emplace_back(local_[it.row()], local_[c], it.value());
            }
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            auto& blk = blocks_[b];
            const auto m = Eigen::Index(blk.index.size());
            ColSparse M(m, m);
            M.setFromTriplets(trip[b].begin(), trip[b].end());
            M.makeCompressed();
            blk.lu.analyzePattern(M);
            blk.lu.factorize(M);
            if (blk.lu.info() != Eigen::Success)
                throw NonUniqueSteadyState("steady_state: singular charge-sector block (degenerate steady state)");
        }
    }

    Vector solve(const Vector& r) const {
        Vector out(r.size());
        for (const auto& blk : blocks_) {
            Vector loc(Eigen::Index(blk.index.size()));
            for (std::size_t k = 0; k < blk.index.size(); ++k) loc(Eigen::Index(k)) = r(blk.index[k]);
            const Vector s = blk.lu.solve(loc);
            for (std::size_t k = 0; k < blk.index.size(); ++k) out(blk.index[k]) = s(Eigen::Index(k));
        }
        return out;
    }

private:
    struct Block {
        std::vector<Eigen::Index> index;
        Eigen::SparseLU<ColSparse, Eigen::COLAMDOrdering<int>> lu;
    };
    std::deque<Block> blocks_; // SparseLU is not movable
    std::vector<std::size_t> block_of_;
    std::vector<Eigen::Index> local_;
};

// Right-preconditioned restarted GMRES for A x = b.
inline Vector gmres(const ColSparse& A, const Vector& b, const SectorPreconditioner& P, std::size_t restart,
                    std::size_t max_iter, double tol, Vector x0) {
    Vector x = std::move(x0);
    const double bnorm = b.norm();
    std::size_t total = 0;
    while (total < max_iter) {
        Vector r = b - A * x;
        double beta = r.norm();
        if (beta <= tol * bnorm) return x;
        const std::size_t m = restart;
        std::vector<Vector> V{r / beta};
        std::vector<Vector> Z;
        Matrix Hm = Matrix::Zero(Eigen::Index(m + 1), Eigen::Index(m));
        std::vector<cplx> cs(m), sn(m);
        Vector g = Vector::Zero(Eigen::Index(m + 1));
        g(0) = beta;
        std::size_t j = 0;
        for (; j < m && total < max_iter; ++j, ++total) {
            Z.push_back(P.solve(V[j]));
            Vector w = A * Z[j];
            for (std::size_t i = 0; i <= j; ++i) {
                const cplx h = V[i].dot(w);
                Hm(Eigen::Index(i), Eigen::Index(j)) = h;
                w -= h * V[i];
            }
            const double hn = w.norm();
            Hm(Eigen::Index(j + 1), Eigen::Index(j)) = hn;
            for (std::size_t i = 0; i < j; ++i) {
                const cplx a = Hm(Eigen::Index(i), Eigen::Index(j)), c = Hm(Eigen::Index(i + 1), Eigen::Index(j));
                Hm(Eigen::Index(i), Eigen::Index(j)) = std::conj(cs[i]) * a + std::conj(sn[i]) * c;
                Hm(Eigen::Index(i + 1), Eigen::Index(j)) = -sn[i] * a + cs[i] * c;
            }
            const cplx a = Hm(Eigen::Index(j), Eigen::Index(j));
            const double den = std::sqrt(std::norm(a) + hn * hn);
            cs[j] = (den == 0.0) ? cplx(1.0) : a / den;
            sn[j] = (den == 0.0) ? cplx(0.0) : cplx(hn / den);
            Hm(Eigen::Index(j), Eigen::Index(j)) = den;
            Hm(Eigen::Index(j + 1), Eigen::Index(j)) = 0.0;
            g(Eigen::Index(j + 1)) = -sn[j] * g(Eigen::Index(j));
            g(Eigen::Index(j)) = std::conj(cs[j]) * g(Eigen::Index(j));
            if (std::abs(g(Eigen::Index(j + 1))) <= tol * bnorm || hn == 0.0) {
                ++j;
                ++total;
                break;
            }
            V.push_back(w / hn);
        }
        const auto k = Eigen::Index(j);
        const Vector y = Hm.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
        for (Eigen::Index i = 0; i < k; ++i) x += y(i) * Z[std::size_t(i)];
    }
    if ((b - A * x).norm() > tol * bnorm * 1e3)
        throw ConvergenceError("steady_state: GMRES did not converge in " + std::to_string(max_iter) + " iterations");
    return x;
}

inline DensityMatrix finish_steady_state(const Liouvillian& L, const Vector& x, const SteadyStateOptions& opt) {
    const auto d = static_cast<Eigen::Index>(L.dim());
    if (!x.allFinite()) throw NonUniqueSteadyState("steady_state: non-finite solution (singular generator)");
    Matrix rho = Eigen::Map<const Matrix>(x.data(), d, d);
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace();
    const double res = residual_norm(L, rho);
    if (res > opt.residual_tolerance)
        throw ConvergenceError("steady_state: residual " + std::to_string(res) + " exceeds tolerance");
    return DensityMatrix(L.space(), std::move(rho));
}

} // namespace detail

inline DensityMatrix steady_state(const Liouvillian& L, const SteadyStateOptions& opt = {},
                                  const std::optional<DensityMatrix>& guess = std::nullopt) {
    const auto d = static_cast<Eigen::Index>(L.dim());
    Vector rhs = Vector::Zero(d * d);
    rhs(0) = 1.0;

    if (!opt.charge.empty()) {
        if (opt.charge.size() != L.dim()) throw ConfigError("steady_state: charge vector has wrong length");
        const auto A = detail::constrained_generator(L);
        const detail::SectorPreconditioner P(A, opt.charge);
        Vector x0 = Vector::Zero(d * d);
        if (guess) x0 = Eigen::Map<const Vector>(guess->matrix().data(), d * d);
        Vector x = detail::gmres(A, rhs, P, opt.krylov_restart, opt.krylov_max_iterations, 1e-14, std::move(x0));
        return detail::finish_steady_state(L, x, opt);
    }

    if (L.dim() <= opt.direct_dim_cap) {
        const auto A = detail::constrained_generator(L);
        Eigen::SparseLU<detail::ColSparse, Eigen::COLAMDOrdering<int>> lu;
        lu.analyzePattern(A);
        lu.factorize(A);
        if (lu.info() != Eigen::Success)
            throw NonUniqueSteadyState("steady_state: generator is singular after the trace constraint "
                                       "(degenerate or non-unique steady state)");
        Vector x = lu.solve(rhs);
        for (int refine = 0; refine < 2; ++refine) {
            Vector res = rhs - A * x;
            if (res.cwiseAbs().maxCoeff() < 1e-15) break;
            x += lu.solve(res);
        }
        return detail::finish_steady_state(L, x, opt);
    }

    // long-time integration fallback
    DensityMatrix rho = guess ? *guess : DensityMatrix(L.space(), Matrix::Identity(d, d) / double(d));
    double t = 0.0;
    EvolveOptions eo;
    eo.integrator = opt.integrator;
    while (t < opt.fallback_max_time) {
        const double grid[2] = {t, t + opt.fallback_chunk};
        auto tr = evolve(rho, L, std::span<const double>(grid, 2), {}, eo);
        rho = tr.final_state();
        t += opt.fallback_chunk;
        if (residual_norm(L, rho.matrix()) < opt.residual_tolerance) return rho;
    }
    throw ConvergenceError("steady_state: long-time integration did not reach the residual tolerance");
}

} // namespace optoamp
