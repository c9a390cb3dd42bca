#include "netctrb/steering.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

namespace netctrb {

namespace {

Eigen::MatrixXd pade_approximant(const Eigen::MatrixXd& a, const std::vector<double>& b) {
    const int n = static_cast<int>(a.rows());
    const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd a2 = a * a;

    // Horner-style evaluation of the odd part U and even part V.
    Eigen::MatrixXd u, v;
    switch (b.size()) {
        case 4:  // degree 3
            u = a * (b[3] * a2 + b[1] * ident);
            v = b[2] * a2 + b[0] * ident;
            break;
        case 6: {  // degree 5
            const Eigen::MatrixXd a4 = a2 * a2;
            u = a * (b[5] * a4 + b[3] * a2 + b[1] * ident);
            v = b[4] * a4 + b[2] * a2 + b[0] * ident;
            break;
        }
        case 8: {  // degree 7
            const Eigen::MatrixXd a4 = a2 * a2;
            const Eigen::MatrixXd a6 = a4 * a2;
            u = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
            v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
            break;
        }
        case 10: {  // degree 9
            const Eigen::MatrixXd a4 = a2 * a2;
            const Eigen::MatrixXd a6 = a4 * a2;
            const Eigen::MatrixXd a8 = a6 * a2;
            u = a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
            v = b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
            break;
        }
        default: {  // degree 13
            const Eigen::MatrixXd a4 = a2 * a2;
            const Eigen::MatrixXd a6 = a4 * a2;
            u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                     b[3] * a2 + b[1] * ident);
            v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
                b[0] * ident;
            break;
        }
    }
    // exp(A) ~ (V - U)^{-1} (V + U)
    return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("matrix exponential requires a square matrix");
    if (!m.allFinite()) throw DimensionMismatch("matrix exponential requires finite entries");
    const int n = static_cast<int>(m.rows());
    if (n == 0) return m;

    static const std::vector<double> b3{120, 60, 12, 1};
    static const std::vector<double> b5{30240, 15120, 3360, 420, 30, 1};
    static const std::vector<double> b7{17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1};
    static const std::vector<double> b9{17643225600., 8821612800., 2075673600., 302702400.,
                                        30270240.,    2162160.,    110880.,     3960.,
                                        90.,          1.};
    static const std::vector<double> b13{64764752532480000., 32382376266240000., 7771770303897600.,
                                         1187353796428800.,  129060195264000.,   10559470521600.,
                                         670442572800.,      33522128640.,       1323241920.,
                                         40840800.,          960960.,            16380.,
                                         182.,               1.};
    constexpr double theta3 = 1.495585217958292e-2;
    constexpr double theta5 = 2.539398330063230e-1;
    constexpr double theta7 = 9.504178996162932e-1;
    constexpr double theta9 = 2.097847961257068e0;
    constexpr double theta13 = 5.371920351148152e0;

    const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
    if (norm1 <= theta3) return pade_approximant(m, b3);
    if (norm1 <= theta5) return pade_approximant(m, b5);
    if (norm1 <= theta7) return pade_approximant(m, b7);
    if (norm1 <= theta9) return pade_approximant(m, b9);

    int squarings = 0;
    double scaled = norm1;
    while (scaled > theta13) {
        scaled *= 0.5;
        ++squarings;
    }
    Eigen::MatrixXd f = pade_approximant(m / std::ldexp(1.0, squarings), b13);
    for (int s = 0; s < squarings; ++s) f = f * f;
    return f;
}

Eigen::MatrixXd gramian(const CompactSystem& system, double t0, double tf) {
    if (!(tf > t0)) throw DimensionMismatch("gramian requires tf > t0");
    const int n = system.dim();
    const double delta = tf - t0;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    h.topLeftCorner(n, n) = -system.A;
    h.topRightCorner(n, n) = system.B * system.B.transpose();
    h.bottomRightCorner(n, n) = system.A.transpose();
    const Eigen::MatrixXd f = matrix_exponential(h * delta);
    Eigen::MatrixXd w = f.bottomRightCorner(n, n).transpose() * f.topRightCorner(n, n);
    return 0.5 * (w + w.transpose());
}

namespace {

// integral_0^t e^{As} ds via the augmented exponential; valid for singular A.
Eigen::MatrixXd expm_integral(const Eigen::MatrixXd& a, double t) {
    const int n = static_cast<int>(a.rows());
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    c.topLeftCorner(n, n) = a;
    c.topRightCorner(n, n).setIdentity();
    return matrix_exponential(c * t).topRightCorner(n, n);
}

// d = integral_{t0}^{tf} e^{A(tf - tau)} f(tau) dtau, exact per
// piecewise-constant segment.
Eigen::VectorXd drift_response(const Eigen::MatrixXd& a, const DriftSignal& f, double t0,
                               double tf) {
    const int n = static_cast<int>(a.rows());
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);

    // Segment boundaries clipped to the horizon.
    std::vector<double> cuts{t0};
    for (double bp : f.breakpoints)
        if (bp > t0 && bp < tf) cuts.push_back(bp);
    cuts.push_back(tf);

    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double a_t = cuts[s];
        const double b_t = cuts[s + 1];
        const Eigen::VectorXd value = f.at(0.5 * (a_t + b_t));
        if (value.isZero(0.0)) continue;
        // integral_a^b e^{A(tf-tau)} dtau = Psi(tf-a) - Psi(tf-b),
        // Psi(t) = integral_0^t e^{As} ds.
        const Eigen::MatrixXd seg = expm_integral(a, tf - a_t) - expm_integral(a, tf - b_t);
        d += seg * value;
    }
    return d;
}

}  // namespace

SteeringResult min_energy_steer(const SteeringProblem& p, int grid_points) {
    const int n = p.system.dim();
    const int r = static_cast<int>(p.system.B.cols());
    if (p.x0.size() != n || p.xstar.size() != n)
        throw DimensionMismatch("steering endpoints must match the state dimension");
    if (!(p.tf > p.t0)) throw DimensionMismatch("steering requires tf > t0");
    if (p.drift && p.drift->dim() != n)
        throw DimensionMismatch("drift dimension must equal the state dimension");
    if (grid_points < 100) throw std::invalid_argument("grid_points must be at least 100");

    const double delta = p.tf - p.t0;
    const Eigen::MatrixXd w = gramian(p.system, p.t0, p.tf);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ew(w);
    if (ew.info() != Eigen::Success) throw EigenFailure("gramian eigendecomposition failed");
    const double lam_min = ew.eigenvalues().minCoeff();
    const double lam_max = ew.eigenvalues().maxCoeff();
    const double cond = lam_max / std::max(lam_min, std::numeric_limits<double>::min());
    if (!(lam_min > 1e-10 * lam_max))
        throw GramianSingular(cond, "gramian numerically singular (condition " +
                                         std::to_string(cond) + ")");

    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    if (p.drift) d = drift_response(p.system.A, *p.drift, p.t0, p.tf);

    const Eigen::VectorXd target = p.xstar - matrix_exponential(p.system.A * delta) * p.x0 - d;
    const Eigen::VectorXd eta = ew.eigenvectors() *
                                ew.eigenvalues().cwiseInverse().asDiagonal() *
                                (ew.eigenvectors().transpose() * target);

    const int g = grid_points;
    const double h = delta / g;

    // v(tau) = e^{A^T (tf - tau)} eta on half-steps, advanced by the exact
    // factor e^{-A^T h/2} so each evaluation costs one matvec.
    const Eigen::MatrixXd phi = matrix_exponential(-p.system.A.transpose() * (0.5 * h));
    std::vector<Eigen::VectorXd> u_half(2 * g + 1);
    Eigen::VectorXd v = matrix_exponential(p.system.A.transpose() * delta) * eta;
    for (int k = 0; k <= 2 * g; ++k) {
        u_half[k] = p.system.B.transpose() * v;
        v = phi * v;
    }

    const auto drift_at = [&](double t) {
        return p.drift ? p.drift->at(t) : Eigen::VectorXd::Zero(n).eval();
    };
    // The value at a step's right endpoint belongs to the next step: when a
    // breakpoint coincides with a grid point, the end stage must see the
    // left limit, not the new segment.
    const auto drift_at_left = [&](double t) {
        return p.drift
                   ? p.drift->at(std::nextafter(t, -std::numeric_limits<double>::infinity()))
                   : Eigen::VectorXd::Zero(n).eval();
    };

    SteeringResult out;
    out.times.resize(g + 1);
    out.input.resize(g + 1, r);
    out.trajectory.resize(g + 1, n);
    out.gramian_condition = cond;

    Eigen::VectorXd x = p.x0;
    for (int k = 0; k <= g; ++k) {
        const double t = p.t0 + k * h;
        out.times[k] = t;
        out.input.row(k) = u_half[2 * k].transpose();
        out.trajectory.row(k) = x.transpose();
        if (k == g) break;
        const auto& u0 = u_half[2 * k];
        const auto& u1 = u_half[2 * k + 1];
        const auto& u2 = u_half[2 * k + 2];
        const Eigen::VectorXd f0 = drift_at(t);
        const Eigen::VectorXd f1 = drift_at(t + 0.5 * h);
        const Eigen::VectorXd f2 = drift_at_left(t + h);
        const Eigen::VectorXd k1 = p.system.A * x + p.system.B * u0 + f0;
        const Eigen::VectorXd k2 = p.system.A * (x + 0.5 * h * k1) + p.system.B * u1 + f1;
        const Eigen::VectorXd k3 = p.system.A * (x + 0.5 * h * k2) + p.system.B * u1 + f1;
        const Eigen::VectorXd k4 = p.system.A * (x + h * k3) + p.system.B * u2 + f2;
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    out.terminal_error = (x - p.xstar).norm() / (1.0 + p.xstar.norm());
    return out;
}

void write_csv(const SteeringResult& r, std::ostream& os) {
    os << "t";
    for (int j = 0; j < r.input.cols(); ++j) os << ",u_" << (j + 1);
    for (int j = 0; j < r.trajectory.cols(); ++j) os << ",x_" << (j + 1);
    os << "\n";
    os << std::setprecision(17);
    for (std::size_t k = 0; k < r.times.size(); ++k) {
        os << r.times[k];
        for (int j = 0; j < r.input.cols(); ++j) os << "," << r.input(static_cast<int>(k), j);
        for (int j = 0; j < r.trajectory.cols(); ++j)
            os << "," << r.trajectory(static_cast<int>(k), j);
        os << "\n";
    }
}

}  // namespace netctrb
