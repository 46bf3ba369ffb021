#include "gnx/dispersive.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

extern "C" {
void dgttrf_(const int* n, double* dl, double* d, double* du, double* du2, int* ipiv, int* info);
void dgttrs_(const char* trans, const int* n, const int* nrhs, const double* dl, const double* d,
             const double* du, const double* du2, const int* ipiv, double* b, const int* ldb,
             int* info);
}

namespace gnx {

namespace {

std::vector<double> at_qp(const DgSpace& space, const DgField& f, std::size_t c = 0) {
    std::vector<double> out;
    space.eval_at_qp(f, c, out);
    return out;
}

DgField from_qp(const DgSpace& space, const std::vector<double>& samples) {
    DgField out = space.make_field(1);
    space.project_qp(samples, out, 0);
    return out;
}

void require_positive_depth(const std::vector<double>& hq, const char* where) {
    for (double h : hq)
        if (!(h > 0.0)) throw std::domain_error(std::string(where) + ": non-positive depth");
}

// h Q1(u) sampled at the quadrature points.
std::vector<double> h_times_q1(const DgSpace& space, const DgField& u, const DgField& b,
                               const std::vector<double>& hq) {
    const DgField ux = weak_derivative(u, space);
    const DgField bx = weak_derivative(b, space);
    const DgField bxx = weak_derivative(bx, space);
    const auto uq = at_qp(space, u), uxq = at_qp(space, ux), bxq = at_qp(space, bx),
               bxxq = at_qp(space, bxx);
    const std::size_t n = hq.size();
    std::vector<double> a(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = hq[i] * hq[i] * hq[i] * uxq[i] * uxq[i];
        c[i] = hq[i] * hq[i] * uq[i] * uq[i] * bxxq[i];
    }
    const auto da = at_qp(space, weak_derivative(from_qp(space, a), space));
    const auto dc = at_qp(space, weak_derivative(from_qp(space, c), space));
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = (2.0 / 3.0) * da[i] + hq[i] * hq[i] * uxq[i] * uxq[i] * bxq[i] + 0.5 * dc[i] +
                 hq[i] * uq[i] * uq[i] * bxxq[i] * bxq[i];
    }
    return out;
}

DgField velocity_field(const DgSpace& space, const DgField& q) {
    const auto hq = at_qp(space, q, 0), huq = at_qp(space, q, 1);
    require_positive_depth(hq, "velocity");
    std::vector<double> uq(hq.size());
    for (std::size_t i = 0; i < hq.size(); ++i) uq[i] = huq[i] / hq[i];
    return from_qp(space, uq);
}

}  // namespace

DgField surface_elevation(const DgField& q, const DgField& b, double H0) {
    DgField z(q.n_elements(), 1, q.order());
    for (std::size_t e = 0; e < q.n_elements(); ++e)
        for (std::size_t k = 0; k < q.n_modes(); ++k) z(e, 0, k) = q(e, 0, k) + b(e, 0, k);
    for (std::size_t e = 0; e < q.n_elements(); ++e) z(e, 0, 0) -= H0;
    return z;
}

DgField compute_q1(const DgSpace& space, const DgField& u, const DgField& b, const DgField& h) {
    const auto hq = at_qp(space, h);
    require_positive_depth(hq, "compute_q1");
    auto hq1 = h_times_q1(space, u, b, hq);
    for (std::size_t i = 0; i < hq1.size(); ++i) hq1[i] /= hq[i];
    return from_qp(space, hq1);
}

DgField compute_source_s(const DgSpace& space, const DgField& q, const DgField& b,
                         const PhysicsParams& params) {
    const auto hq = at_qp(space, q, 0);
    require_positive_depth(hq, "compute_source_s");
    const DgField u = velocity_field(space, q);
    const auto zxq = at_qp(space, weak_derivative(surface_elevation(q, b, params.H0), space));
    auto s = h_times_q1(space, u, b, hq);
    const double ga = params.g / params.alpha;
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += ga * hq[i] * zxq[i];
    return from_qp(space, s);
}

DispersiveOperator::DispersiveOperator(const DgSpace& space, const DgField& h, const DgField& b,
                                       const PhysicsParams& params, double tau, ActiveSet active)
    : space_(&space), tau_(tau), active_(std::move(active)) {
    const std::size_t ne = space.n_elements(), nq = space.n_qp(), nm = space.n_modes();
    if (active_.empty()) active_.assign(ne, 1);
    if (active_.size() != ne) throw std::invalid_argument("active set size mismatch");
    if (!(tau > 0.0)) throw std::invalid_argument("HDG stabilization must be positive");
    const auto& quad = space.quadrature();
    const auto& basis = space.basis();
    const double a = params.alpha;

    const DgField bx = weak_derivative(b, space);
    const auto hq = at_qp(space, h), bxq = at_qp(space, bx);

    // single-valued traces of h and db/dx at nodes
    std::vector<double> h_hat(ne + 1), bx_hat(ne + 1);
    for (std::size_t n = 0; n <= ne; ++n) {
        double hs = 0.0, bs = 0.0;
        int cnt = 0;
        if (n > 0) {
            hs += space.right_trace(h, n - 1, 0);
            bs += space.right_trace(bx, n - 1, 0);
            ++cnt;
        }
        if (n < ne) {
            hs += space.left_trace(h, n, 0);
            bs += space.left_trace(bx, n, 0);
            ++cnt;
        }
        h_hat[n] = hs / cnt;
        bx_hat[n] = bs / cnt;
    }

    local_.resize(ne);
    const auto m = static_cast<Eigen::Index>(nm);
    for (std::size_t e = 0; e < ne; ++e) {
        if (!active_[e]) continue;
        const double jac = space.jacobian(e);
        for (std::size_t qp = 0; qp < nq; ++qp)
            if (!(hq[e * nq + qp] > 0.0))
                throw std::domain_error("dispersive operator: non-positive depth in element " +
                                        std::to_string(e));
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * m, 2 * m);
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2 * m, 2);
        for (std::size_t i = 0; i < nm; ++i) {
            const auto r1 = static_cast<Eigen::Index>(i), r2 = r1 + m;
            const double pir = basis.right_value(i), pil = basis.left_value(i);
            for (std::size_t j = 0; j < nm; ++j) {
                const auto c1 = static_cast<Eigen::Index>(j), c2 = c1 + m;
                const double pjr = basis.right_value(j), pjl = basis.left_value(j);
                double mass = 0.0, w2_dv = 0.0, w2_bx = 0.0, w1_hbx_dv = 0.0, w1_bx2 = 0.0;
                double w2_h3 = 0.0, w1_hinv_dv = 0.0;
                for (std::size_t qp = 0; qp < nq; ++qp) {
                    const double w = quad.weights[qp];
                    const double H = hq[e * nq + qp], Bx = bxq[e * nq + qp];
                    const double pj = space.phi(qp, j), pi = space.phi(qp, i), dpi = space.dphi(qp, i);
                    mass += w * pj * pi;
                    w2_dv += w * pj * dpi;
                    w2_bx += w * Bx / H * pj * pi;
                    w1_hbx_dv += w * H * Bx * pj * dpi;
                    w1_bx2 += w * Bx * Bx * pj * pi;
                    w2_h3 += w * pj * pi / (H * H * H);
                    w1_hinv_dv += w * pj / H * dpi;
                }
                // momentum-like row: w1 + alpha * T-terms = s
                A(r1, c1) += jac * mass + a / 3.0 * tau * (pir * pjr + pil * pjl) -
                             0.5 * a * w1_hbx_dv + a * jac * w1_bx2;
                A(r1, c2) += -a / 3.0 * (pir * pjr - pil * pjl) + a / 3.0 * w2_dv -
                             0.5 * a * jac * w2_bx;
                // definition of w2
                A(r2, c2) += jac * w2_h3;
                A(r2, c1) += w1_hinv_dv;
            }
            const std::size_t nl = e, nr = e + 1;
            B(r1, 0) += -a / 3.0 * tau * pil - 0.5 * a * h_hat[nl] * bx_hat[nl] * pil;
            B(r1, 1) += -a / 3.0 * tau * pir + 0.5 * a * h_hat[nr] * bx_hat[nr] * pir;
            B(r2, 0) += pil / h_hat[nl];
            B(r2, 1) += -pir / h_hat[nr];
        }
        Local loc;
        loc.lu.compute(A);
        if (!std::isfinite(loc.lu.determinant()) || loc.lu.determinant() == 0.0)
            throw std::runtime_error("dispersive operator: singular local system in element " +
                                     std::to_string(e));
        loc.z = loc.lu.solve(B);
        local_[e] = std::move(loc);
    }

    node_index_.assign(ne + 1, -1);
    for (std::size_t n = 1; n < ne; ++n)
        if (active_[n - 1] && active_[n]) {
            node_index_[n] = static_cast<long>(unknown_nodes_.size());
            unknown_nodes_.push_back(n);
        }
    const std::size_t nu = unknown_nodes_.size();
    dl_.assign(nu > 0 ? nu - 1 : 0, 0.0);
    du_.assign(nu > 0 ? nu - 1 : 0, 0.0);
    d_.assign(nu, 0.0);
    for (std::size_t i = 0; i < nu; ++i) {
        const std::size_t n = unknown_nodes_[i];
        const Local& L = local_[n - 1];
        const Local& R = local_[n];
        d_[i] = -flux_left_elem(L.z.col(1)) - flux_right_elem(R.z.col(0)) + 2.0 * tau_;
        if (i > 0 && unknown_nodes_[i - 1] == n - 1) dl_[i - 1] = -flux_left_elem(L.z.col(0));
        if (i + 1 < nu && unknown_nodes_[i + 1] == n + 1) du_[i] = -flux_right_elem(R.z.col(1));
    }
    fdl_ = dl_;
    fd_ = d_;
    fdu_ = du_;
    fdu2_.assign(nu > 2 ? nu - 2 : 1, 0.0);
    ipiv_.assign(nu > 0 ? nu : 1, 0);
    if (nu > 0) {
        const int n = static_cast<int>(nu);
        int info = 0;
        dgttrf_(&n, fdl_.data(), fd_.data(), fdu_.data(), fdu2_.data(), ipiv_.data(), &info);
        if (info != 0)
            throw std::runtime_error("dispersive operator: condensed skeleton system is singular");
    }
}

double DispersiveOperator::flux_left_elem(const Eigen::VectorXd& x) const {
    const auto m = x.size() / 2;
    double w1 = 0.0, w2 = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
        w1 += x(k);
        w2 += x(k + m);
    }
    return w2 - tau_ * w1;
}

double DispersiveOperator::flux_right_elem(const Eigen::VectorXd& x) const {
    const auto m = x.size() / 2;
    const auto& basis = space_->basis();
    double w1 = 0.0, w2 = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
        const double p = basis.left_value(static_cast<std::size_t>(k));
        w1 += x(k) * p;
        w2 += x(k + m) * p;
    }
    return -w2 - tau_ * w1;
}

Eigen::VectorXd DispersiveOperator::local_rhs(std::size_t e, const std::vector<double>& sq) const {
    const DgSpace& space = *space_;
    const std::size_t nq = space.n_qp(), nm = space.n_modes();
    Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * nm));
    const double jac = space.jacobian(e);
    for (std::size_t i = 0; i < nm; ++i) {
        double acc = 0.0;
        for (std::size_t qp = 0; qp < nq; ++qp)
            acc += space.quadrature().weights[qp] * sq[e * nq + qp] * space.phi(qp, i);
        f(static_cast<Eigen::Index>(i)) = jac * acc;
    }
    return f;
}

DispersiveSolution DispersiveOperator::solve(const DgField& s) const {
    const DgSpace& space = *space_;
    const std::size_t ne = space.n_elements(), nm = space.n_modes();
    const auto sq = at_qp(space, s);

    std::vector<Eigen::VectorXd> x0(ne);
    for (std::size_t e = 0; e < ne; ++e)
        if (active_[e]) x0[e] = local_[e].lu.solve(local_rhs(e, sq));

    const std::size_t nu = unknown_nodes_.size();
    std::vector<double> lam(nu, 0.0);
    for (std::size_t i = 0; i < nu; ++i) {
        const std::size_t n = unknown_nodes_[i];
        lam[i] = -(flux_left_elem(x0[n - 1]) + flux_right_elem(x0[n]));
    }
    if (nu > 0) {
        const int n = static_cast<int>(nu), nrhs = 1;
        int info = 0;
        const char trans = 'N';
        dgttrs_(&trans, &n, &nrhs, fdl_.data(), fd_.data(), fdu_.data(), fdu2_.data(), ipiv_.data(),
                lam.data(), &n, &info);
        if (info != 0) throw std::runtime_error("dispersive operator: skeleton solve failed");
    }

    DispersiveSolution sol{space.make_field(1), space.make_field(1), TraceField(ne + 1, 1)};
    for (std::size_t i = 0; i < nu; ++i) sol.w1_hat(unknown_nodes_[i], 0) = lam[i];
    for (std::size_t e = 0; e < ne; ++e) {
        if (!active_[e]) continue;
        Eigen::Vector2d lr(sol.w1_hat(e, 0), sol.w1_hat(e + 1, 0));
        const Eigen::VectorXd x = x0[e] - local_[e].z * lr;
        for (std::size_t k = 0; k < nm; ++k) {
            sol.w1(e, 0, k) = x(static_cast<Eigen::Index>(k));
            sol.w2(e, 0, k) = x(static_cast<Eigen::Index>(k + nm));
        }
    }
    return sol;
}

DispersiveSolution solve_w1w2(const DgSpace& space, const DgField& q, const DgField& b,
                              const DgField& s, double tau, const PhysicsParams& params,
                              const ActiveSet& active) {
    return DispersiveOperator(space, q.component(0), b, params, tau, active).solve(s);
}

DgField dispersive_rhs(const DgSpace& space, const DgField& q, const DgField& w1, const DgField& b,
                       const PhysicsParams& params, const ActiveSet& active) {
    const std::size_t ne = space.n_elements(), nq = space.n_qp();
    const auto hq = at_qp(space, q, 0), w1q = at_qp(space, w1);
    const auto zxq = at_qp(space, weak_derivative(surface_elevation(q, b, params.H0), space));
    const double ga = params.g / params.alpha;
    std::vector<double> mom(ne * nq);
    for (std::size_t i = 0; i < mom.size(); ++i) mom[i] = -(w1q[i] - ga * hq[i] * zxq[i]);
    DgField rhs = space.make_field(2);
    space.project_qp(mom, rhs, 1);
    for (std::size_t e = 0; e < ne; ++e)
        if (!active.empty() && !active[e])
            for (std::size_t k = 0; k < space.n_modes(); ++k) rhs(e, 1, k) = 0.0;
    return rhs;
}

}  // namespace gnx
