#include "bayesnr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bayesnr/errors.hpp"

namespace bayesnr {

SymMatrix::SymMatrix(int order) : n_(order), a_(static_cast<std::size_t>(order) * order, 0.0) {
    if (order < 1 || order > 512) throw std::invalid_argument("SymMatrix: order must be in [1,512]");
}

void SymMatrix::set(int i, int j, double v) {
    a_[static_cast<std::size_t>(i) * n_ + j] = v;
    a_[static_cast<std::size_t>(j) * n_ + i] = v;
}

SymMatrix SymMatrix::identity(int order) {
    SymMatrix m(order);
    for (int i = 0; i < order; ++i) m.set(i, i, 1.0);
    return m;
}

SymMatrix SymMatrix::diagonal(const std::vector<double>& d) {
    SymMatrix m(static_cast<int>(d.size()));
    for (int i = 0; i < m.order(); ++i) m.set(i, i, d[static_cast<std::size_t>(i)]);
    return m;
}

double SymMatrix::max_abs() const {
    double r = 0.0;
    for (double v : a_) r = std::max(r, std::abs(v));
    return r;
}

std::vector<double> SymMatrix::multiply(const std::vector<double>& x) const {
    std::vector<double> y(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += (*this)(i, j) * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = s;
    }
    return y;
}

EigResult sym_eig(const SymMatrix& m) {
    const int n = m.order();
    std::vector<std::vector<double>> a(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = m(i, j);

    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) v[i][i] = 1.0;

    auto off_norm = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += a[i][j] * a[i][j];
        return std::sqrt(2.0 * s);
    };

    const double scale = std::max(m.max_abs(), 1e-300);
    constexpr int kMaxSweeps = 128;
    for (int sweep = 0; sweep < kMaxSweeps && off_norm() > 1e-15 * scale * n; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[p][q];
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return a[i][i] > a[j][j]; });

    EigResult r;
    r.values.reserve(static_cast<std::size_t>(n));
    r.vectors.reserve(static_cast<std::size_t>(n));
    for (int k : idx) {
        r.values.push_back(a[k][k]);
        std::vector<double> col(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = v[i][k];
        r.vectors.push_back(std::move(col));
    }
    return r;
}

std::vector<double> solve_spd(const SymMatrix& m, const std::vector<double>& b) {
    const int n = m.order();
    if (static_cast<int>(b.size()) != n) throw std::invalid_argument("solve_spd: size mismatch");

    double max_diag = 0.0;
    for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(m(i, i)));

    // lower-triangular Cholesky factor
    std::vector<std::vector<double>> L(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = m(i, j);
            for (int k = 0; k < j; ++k) s -= L[i][k] * L[j][k];
            if (i == j) {
                if (!(s > 1e-12 * max_diag))
                    throw IllConditioned("solve_spd: matrix is not (numerically) positive definite");
                L[i][i] = std::sqrt(s);
            } else {
                L[i][j] = s / L[j][j];
            }
        }
    }

    std::vector<double> y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double s = b[static_cast<std::size_t>(i)];
        for (int k = 0; k < i; ++k) s -= L[i][k] * y[static_cast<std::size_t>(k)];
        y[static_cast<std::size_t>(i)] = s / L[i][i];
    }
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        double s = y[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < n; ++k) s -= L[k][i] * x[static_cast<std::size_t>(k)];
        x[static_cast<std::size_t>(i)] = s / L[i][i];
    }
    return x;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace bayesnr
