#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "optrec/domain.hpp"
#include "optrec/geometry.hpp"
#include "optrec/rng.hpp"

namespace optrec {

/// Cell-centered inclusion mask over a bounding grid (d = 1 or 2).
/// A cell belongs to the discrete domain iff its center lies in D.
struct GridDomain {
    double h = 0.0;
    std::size_t d = 0;
    Box frame;                        // grid frame anchored at the bounding box
    std::vector<std::size_t> shape;   // cells per axis
    std::vector<std::int64_t> index;  // cell -> unknown index, -1 outside
    std::size_t unknowns = 0;
    std::string domain_desc;

    double cell_volume() const { return std::pow(h, static_cast<double>(d)); }
    double mask_volume() const { return static_cast<double>(unknowns) * cell_volume(); }
    std::size_t cells_total() const {
        std::size_t t = 1;
        for (auto s : shape) t *= s;
        return t;
    }
};

inline GridDomain discretize(const Domain& D, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("discretize: h > 0 required");
    if (D.dim() < 1 || D.dim() > 2)
        throw std::invalid_argument("discretize: d in {1,2} supported");
    GridDomain G;
    G.h = h;
    G.d = D.dim();
    G.frame = D.bounding_box();
    G.domain_desc = D.describe();
    G.shape.resize(G.d);
    for (std::size_t j = 0; j < G.d; ++j) {
        double side = G.frame.hi[j] - G.frame.lo[j];
        G.shape[j] = static_cast<std::size_t>(std::ceil(side / h - 1e-12));
        if (G.shape[j] == 0) G.shape[j] = 1;
    }
    G.index.assign(G.cells_total(), -1);
    std::vector<double> x(G.d);
    std::vector<std::size_t> idx(G.d, 0);
    for (std::size_t c = 0; c < G.index.size(); ++c) {
        for (std::size_t j = 0; j < G.d; ++j)
            x[j] = G.frame.lo[j] + (static_cast<double>(idx[j]) + 0.5) * h;
        if (D.contains(x)) G.index[c] = static_cast<std::int64_t>(G.unknowns++);
        for (std::size_t j = 0; j < G.d; ++j) {
            if (++idx[j] < G.shape[j]) break;
            idx[j] = 0;
        }
    }
    if (G.unknowns == 0) throw std::invalid_argument("discretize: empty mask");
    return G;
}

/// Ascending Laplacian eigenvalues of the masked grid.
/// Dirichlet imposes u = 0 on cell faces bordering excluded cells
/// (antisymmetric ghost, diag contribution 2/h^2 per boundary face), which on
/// the unit interval reproduces the closed form (4/h^2) sin^2(j pi h / 2)
/// exactly. Neumann mirrors the ghost cell (zero flux at the face).
struct Spectrum {
    std::vector<double> eigenvalues;
    enum class BC { Dirichlet, Neumann } bc = BC::Dirichlet;
    double h = 0.0;
    std::size_t k = 0;
    std::size_t d = 0;
    double domain_volume = 0.0; // mask volume, unknowns * h^d
    double max_residual = 0.0;  // worst ||A v - lambda v|| over the k pairs
    std::string note;
};

namespace detail {

inline Eigen::SparseMatrix<double> assemble_laplacian(const GridDomain& G, Spectrum::BC bc) {
    using T = Eigen::Triplet<double>;
    const double ih2 = 1.0 / (G.h * G.h);
    std::vector<T> trip;
    trip.reserve(G.unknowns * (2 * G.d + 1));
    const std::size_t nx = G.shape[0];
    const std::size_t ny = G.d == 2 ? G.shape[1] : 1;
    auto cell_at = [&](std::size_t i, std::size_t j) { return j * nx + i; }; // row-major y-major
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            std::int64_t me = G.index[cell_at(i, j)];
            if (me < 0) continue;
            double diag = 0.0;
            auto face = [&](std::int64_t nbr) {
                if (nbr >= 0) {
                    diag += ih2;
                    trip.emplace_back(me, nbr, -ih2);
                } else if (bc == Spectrum::BC::Dirichlet) {
                    diag += 2.0 * ih2; // u = 0 at the face: ghost = -interior
                }                      // Neumann: mirrored ghost, zero contribution
            };
            face(i > 0 ? G.index[cell_at(i - 1, j)] : -1);
            face(i + 1 < nx ? G.index[cell_at(i + 1, j)] : -1);
            if (G.d == 2) {
                face(j > 0 ? G.index[cell_at(i, j - 1)] : -1);
                face(j + 1 < ny ? G.index[cell_at(i, j + 1)] : -1);
            }
            trip.emplace_back(me, me, diag);
        }
    }
    Eigen::SparseMatrix<double> A(G.unknowns, G.unknowns);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    return A;
}

// Shift-invert Lanczos with full reorthogonalization for the smallest k
// eigenvalues of a symmetric positive semidefinite sparse matrix.
struct LanczosResult {
    std::vector<double> values;
    double max_residual = 0.0;
    bool converged = false;
    std::size_t steps = 0;
};

inline LanczosResult shift_invert_lanczos(const Eigen::SparseMatrix<double>& A, std::size_t k,
                                          double sigma, double resid_tol, double op_norm_bound,
                                          std::uint64_t seed, std::size_t m_cap) {
    using Eigen::MatrixXd;
    using Eigen::VectorXd;
    const std::size_t N = static_cast<std::size_t>(A.rows());
    Eigen::SparseMatrix<double> M = A;
    if (sigma != 0.0) {
        Eigen::SparseMatrix<double> I(N, N);
        I.setIdentity();
        M = A - sigma * I;
    }
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(M);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("shift_invert_lanczos: factorization failed");

    const std::size_t m_max = std::min<std::size_t>(N, m_cap);
    MatrixXd V(N, m_max);
    std::vector<double> alpha, beta; // T diagonal / off-diagonal

    auto engine = stream_engine(seed, 0x57ec);
    std::normal_distribution<double> gauss(0.0, 1.0);
    VectorXd v(N);
    for (std::size_t i = 0; i < N; ++i) v[i] = gauss(engine);
    v.normalize();
    V.col(0) = v;

    LanczosResult out;
    VectorXd w(N);
    std::size_t j = 0;
    auto extend_to = [&](std::size_t m_target) {
        for (; j < m_target; ++j) {
            w = solver.solve(V.col(j));
            if (j > 0) w -= beta[j - 1] * V.col(j - 1);
            double a = V.col(j).dot(w);
            alpha.push_back(a);
            w -= a * V.col(j);
            // full reorthogonalization, two passes
            for (int pass = 0; pass < 2; ++pass) {
                Eigen::VectorXd coeffs = V.leftCols(j + 1).transpose() * w;
                w -= V.leftCols(j + 1) * coeffs;
            }
            double b = w.norm();
            if (b < 1e-14 || j + 1 == m_max) {
                beta.push_back(b);
                ++j;
                return false; // invariant subspace or cap
            }
            beta.push_back(b);
            V.col(j + 1) = w / b;
        }
        return true;
    };

    std::size_t m_try = std::min(m_max, std::max<std::size_t>(2 * k + 60, 120));
    for (;;) {
        bool can_continue = extend_to(m_try);
        const std::size_t m = j;
        MatrixXd T = MatrixXd::Zero(m, m);
        for (std::size_t i = 0; i < m; ++i) {
            T(i, i) = alpha[i];
            if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(T);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("shift_invert_lanczos: tridiagonal solve failed");
        // largest mu of the inverted operator = smallest lambda of A
        std::vector<std::size_t> order(m);
        for (std::size_t i = 0; i < m; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return es.eigenvalues()[a] > es.eigenvalues()[b];
        });
        if (m >= k) {
            // cheap residual screen, then explicit verification
            bool plausible = true;
            const double bl = beta.empty() ? 0.0 : std::abs(beta[m - 1]);
            for (std::size_t t = 0; t < k; ++t) {
                double mu = es.eigenvalues()[order[t]];
                if (mu <= 0.0) {
                    plausible = false;
                    break;
                }
                double cheap = bl * std::abs(es.eigenvectors()(m - 1, order[t]));
                // ||A y - lambda y|| <= ||A - sigma I|| * r_op / mu
                if (cheap / mu * (op_norm_bound + std::abs(sigma)) > resid_tol * 4.0) {
                    plausible = false;
                    break;
                }
            }
            if (plausible || !can_continue || m >= m_max) {
                MatrixXd S(m, k);
                for (std::size_t t = 0; t < k; ++t) S.col(t) = es.eigenvectors().col(order[t]);
                MatrixXd Y = V.leftCols(m) * S;
                out.values.resize(k);
                out.max_residual = 0.0;
                for (std::size_t t = 0; t < k; ++t) {
                    double mu = es.eigenvalues()[order[t]];
                    double lam = sigma + 1.0 / mu;
                    VectorXd y = Y.col(t);
                    y.normalize();
                    double res = (A * y - lam * y).norm();
                    out.values[t] = lam;
                    out.max_residual = std::max(out.max_residual, res);
                }
                std::sort(out.values.begin(), out.values.end());
                out.steps = m;
                out.converged = out.max_residual <= resid_tol;
                if (out.converged || !can_continue || m >= m_max) return out;
            }
        }
        if (!can_continue || m_try >= m_max) {
            out.steps = m;
            return out;
        }
        m_try = std::min(m_max, m_try + std::max<std::size_t>(k / 2, 60));
    }
}

} // namespace detail

inline Spectrum eigenvalues(const GridDomain& G, Spectrum::BC bc, std::size_t k,
                            std::uint64_t seed = 0) {
    if (k < 1 || k > G.unknowns)
        throw std::invalid_argument("eigenvalues: need 1 <= k <= number of masked cells");
    Eigen::SparseMatrix<double> A = detail::assemble_laplacian(G, bc);
    Spectrum S;
    S.bc = bc;
    S.h = G.h;
    S.k = k;
    S.d = G.d;
    S.domain_volume = G.mask_volume();

    const double scale = 4.0 * static_cast<double>(G.d) / (G.h * G.h); // Gershgorin bound
    const double resid_tol = 1e-8 * scale;

    if (G.unknowns <= 1500) {
        Eigen::MatrixXd Ad(A);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ad);
        if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalues: dense solve failed");
        S.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
        double worst = 0.0;
        for (std::size_t t = 0; t < k; ++t) {
            Eigen::VectorXd y = es.eigenvectors().col(t);
            worst = std::max(worst, (A * y - es.eigenvalues()[t] * y).norm());
        }
        S.max_residual = worst;
        S.note = "dense";
        if (worst > resid_tol) throw std::runtime_error("eigenvalues: dense residual above tolerance");
        return S;
    }

    const double sigma = bc == Spectrum::BC::Dirichlet ? 0.0 : -1.0;
    const std::size_t m_cap = std::min<std::size_t>(G.unknowns, std::max<std::size_t>(3 * k + 200, 400));
    auto lr = detail::shift_invert_lanczos(A, k, sigma, resid_tol, scale, seed, m_cap);
    if (!lr.converged)
        throw std::runtime_error("eigenvalues: Lanczos did not reach the residual tolerance after " +
                                 std::to_string(lr.steps) + " steps");
    S.eigenvalues = lr.values;
    S.max_residual = lr.max_residual;
    S.note = "shift-invert lanczos, m=" + std::to_string(lr.steps);
    return S;
}

/// Weyl ratio sequence: k -> N(lambda_k) (2 pi)^d / (omega_d vol lambda_k^{d/2}).
/// Tends to 1 for any fixed shape as the spectrum grows.
inline std::vector<double> weyl_ratio(const Spectrum& S, double volD, std::size_t d) {
    if (S.eigenvalues.size() < 10)
        throw std::invalid_argument("weyl_ratio: need at least 10 eigenvalues");
    const double omega_d = unit_ball_volume(d, NormSpec::lp(2.0));
    std::vector<double> out;
    const auto& ev = S.eigenvalues;
    for (std::size_t k = 0; k < ev.size(); ++k) {
        double lam = ev[k];
        if (!(lam > 0.0)) {
            out.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        // counting function with a tie tolerance
        std::size_t count = 0;
        while (count < ev.size() && ev[count] <= lam * (1.0 + 1e-12)) ++count;
        double denom = omega_d * volD * std::pow(lam, static_cast<double>(d) / 2.0);
        out.push_back(static_cast<double>(count) * std::pow(2.0 * M_PI, static_cast<double>(d)) /
                      denom);
    }
    return out;
}

struct BoundCheckItem {
    std::size_t k = 0;
    double eigenvalue = 0.0;
    double bound = 0.0;
    bool pass = false;
    double margin = 0.0; // relative slack, >= 0 when passing
    double discretization_error_estimate = 0.0;
};

struct BoundCheckReport {
    std::string bound_name;
    bool constants_confirmed = false;
    bool all_pass = false;
    std::vector<BoundCheckItem> items;
};

namespace detail {

// One-time confirmation of the bound constants against the analytic spectra
// of the interval and the unit square before they are used as assertions.
inline bool spectral_constants_confirmed() {
    static const bool ok = [] {
        const double pi2 = M_PI * M_PI;
        // d = 2 Dirichlet: lambda_k >= (1/2) 4 pi^2 k / (pi vol) = 2 pi k (vol=1)
        std::vector<double> sq;
        for (int a = 1; a <= 45; ++a)
            for (int b = 1; b <= 45; ++b) sq.push_back(pi2 * (a * a + b * b));
        std::sort(sq.begin(), sq.end());
        for (std::size_t k = 1; k <= 600; ++k)
            if (sq[k - 1] < 2.0 * M_PI * static_cast<double>(k)) return false;
        // d = 2 Neumann: mu_{k+1} <= 2 * 4 pi^2 k / (pi vol) = 8 pi k (vol=1)
        std::vector<double> nm;
        for (int a = 0; a <= 45; ++a)
            for (int b = 0; b <= 45; ++b) nm.push_back(pi2 * (a * a + b * b));
        std::sort(nm.begin(), nm.end());
        for (std::size_t k = 1; k <= 600; ++k)
            if (nm[k] > 8.0 * M_PI * static_cast<double>(k)) return false;
        // d = 1 on [0,1]: lambda_k = pi^2 k^2 >= (1/3) pi^2 k^2 ;
        // mu_{k+1} = pi^2 k^2 <= (9/4) pi^2 k^2
        for (std::size_t k = 1; k <= 600; ++k) {
            double lam = pi2 * static_cast<double>(k) * static_cast<double>(k);
            if (lam < (1.0 / 3.0) * 4.0 * pi2 * std::pow(static_cast<double>(k) / 2.0, 2.0))
                return false;
            if (lam > std::pow(1.5, 2.0) * 4.0 * pi2 * std::pow(static_cast<double>(k) / 2.0, 2.0))
                return false;
        }
        return true;
    }();
    return ok;
}

inline double discretization_error_estimate(double lam, double h, std::size_t d) {
    // second-order stencil plus staircase boundary: crude scale estimate
    return lam * (h * h * lam / 12.0 / static_cast<double>(d) + h * std::sqrt(std::max(lam, 0.0)) * 0.5) /
           std::max(lam, 1e-300);
}

} // namespace detail

/// Li-Yau lower check (Dirichlet) / Kroeger-type upper check (Neumann):
///   Dirichlet: lambda_k >= d/(d+2) 4 pi^2 (k/(omega_d vol))^(2/d)
///   Neumann:   mu_{k+1} <= ((d+2)/2)^(2/d) 4 pi^2 (k/(omega_d vol))^(2/d)
/// The constants are only asserted after the analytic confirmation gate.
inline BoundCheckReport eigenvalue_bound_check(const Spectrum& S, double volD, std::size_t d) {
    BoundCheckReport rep;
    rep.constants_confirmed = detail::spectral_constants_confirmed();
    const double omega_d = unit_ball_volume(d, NormSpec::lp(2.0));
    const double dd = static_cast<double>(d);
    rep.all_pass = rep.constants_confirmed;
    if (S.bc == Spectrum::BC::Dirichlet) {
        rep.bound_name = "li-yau lower (dirichlet)";
        for (std::size_t k = 1; k <= S.eigenvalues.size(); ++k) {
            BoundCheckItem it;
            it.k = k;
            it.eigenvalue = S.eigenvalues[k - 1];
            it.bound = dd / (dd + 2.0) * 4.0 * M_PI * M_PI *
                       std::pow(static_cast<double>(k) / (omega_d * volD), 2.0 / dd);
            it.pass = rep.constants_confirmed && it.eigenvalue >= it.bound;
            it.margin = it.eigenvalue / it.bound - 1.0;
            it.discretization_error_estimate =
                detail::discretization_error_estimate(it.eigenvalue, S.h, d);
            rep.all_pass = rep.all_pass && it.pass;
            rep.items.push_back(it);
        }
        return rep;
    }
    rep.bound_name = "kroeger-type upper (neumann)";
    // mu_{k+1} is eigenvalue index k (0-based k), bound indexed by k >= 1
    for (std::size_t k = 1; k + 1 <= S.eigenvalues.size(); ++k) {
        BoundCheckItem it;
        it.k = k;
        it.eigenvalue = S.eigenvalues[k]; // mu_{k+1}
        it.bound = std::pow((dd + 2.0) / 2.0, 2.0 / dd) * 4.0 * M_PI * M_PI *
                   std::pow(static_cast<double>(k) / (omega_d * volD), 2.0 / dd);
        it.pass = rep.constants_confirmed && it.eigenvalue <= it.bound;
        it.margin = it.bound > 0 ? 1.0 - it.eigenvalue / it.bound : 0.0;
        it.discretization_error_estimate =
            detail::discretization_error_estimate(it.eigenvalue, S.h, d);
        rep.all_pass = rep.all_pass && it.pass;
        rep.items.push_back(it);
    }
    return rep;
}

/// Polya-form check lambda_k >= 4 pi^2 (k/(omega_d vol))^(2/d); proven for
/// tiling domains (the square), conjectural in general.
inline BoundCheckReport polya_form_check(const Spectrum& S, double volD, std::size_t d) {
    if (S.bc != Spectrum::BC::Dirichlet)
        throw std::invalid_argument("polya_form_check: Dirichlet spectrum required");
    BoundCheckReport rep;
    rep.bound_name = "polya form (dirichlet, tiling domains)";
    rep.constants_confirmed = detail::spectral_constants_confirmed();
    rep.all_pass = rep.constants_confirmed;
    const double omega_d = unit_ball_volume(d, NormSpec::lp(2.0));
    const double dd = static_cast<double>(d);
    for (std::size_t k = 1; k <= S.eigenvalues.size(); ++k) {
        BoundCheckItem it;
        it.k = k;
        it.eigenvalue = S.eigenvalues[k - 1];
        it.bound =
            4.0 * M_PI * M_PI * std::pow(static_cast<double>(k) / (omega_d * volD), 2.0 / dd);
        it.pass = rep.constants_confirmed && it.eigenvalue >= it.bound;
        it.margin = it.eigenvalue / it.bound - 1.0;
        it.discretization_error_estimate =
            detail::discretization_error_estimate(it.eigenvalue, S.h, d);
        rep.all_pass = rep.all_pass && it.pass;
        rep.items.push_back(it);
    }
    return rep;
}

/// Singular values of the Sobolev embedding H^1 -> L_2 under the norm
/// ||f||^2 = ||f||_2^2 + ||grad f||_2^2:  sigma_{n+1} = (1 + lambda_{n+1})^{-1/2}.
/// Dirichlet spectrum gives the zero-boundary space, Neumann the full space.
/// Only r = 1 is exact with this pipeline; r >= 2 is rejected.
inline std::vector<double> approximation_numbers(const Spectrum& S, std::size_t r = 1) {
    if (r != 1)
        throw std::invalid_argument(
            "approximation_numbers: r >= 2 requires the polyharmonic operator; unsupported");
    std::vector<double> out;
    out.reserve(S.eigenvalues.size());
    for (double lam : S.eigenvalues) out.push_back(1.0 / std::sqrt(1.0 + lam));
    return out;
}

struct WeylConstantEstimate {
    double value = 0.0;
    bool plateau = false;
    double spread = 0.0; // relative spread over the window
    std::size_t window_lo = 0, window_hi = 0;
};

/// Tail estimate of the shape-independent constant lim sigma_{n+1} n^{r/d} vol^{-r/d}.
/// Median over the last third of the sequence; flagged if that window has not
/// stabilized (relative spread above 10%).
inline WeylConstantEstimate weyl_constant_estimate(const Spectrum& S, double volD, std::size_t d,
                                                   std::size_t r = 1) {
    auto sigma = approximation_numbers(S, r);
    const std::size_t kmax = sigma.size();
    if (kmax < 30) throw std::invalid_argument("weyl_constant_estimate: need >= 30 eigenvalues");
    std::vector<double> v;
    const double rd = static_cast<double>(r) / static_cast<double>(d);
    for (std::size_t n = 1; n + 1 <= kmax; ++n)
        v.push_back(sigma[n] * std::pow(static_cast<double>(n), rd) * std::pow(volD, -rd));
    WeylConstantEstimate out;
    out.window_lo = v.size() * 2 / 3;
    out.window_hi = v.size();
    std::vector<double> win(v.begin() + out.window_lo, v.begin() + out.window_hi);
    std::sort(win.begin(), win.end());
    out.value = win[win.size() / 2];
    out.spread = (win.back() - win.front()) / out.value;
    out.plateau = out.spread <= 0.10;
    return out;
}

} // namespace optrec
