#pragma once

#include <vector>

namespace bayesnr {

/// Dense symmetric matrix with enforced mirror storage: set(i,j,v) writes
/// both triangles so entries[i][j] == entries[j][i] holds exactly.
class SymMatrix {
public:
    explicit SymMatrix(int order);

    int order() const { return n_; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    void set(int i, int j, double v);
    void add(int i, int j, double v) { set(i, j, (*this)(i, j) + v); }

    static SymMatrix identity(int order);
    static SymMatrix diagonal(const std::vector<double>& d);

    /// max |entry|
    double max_abs() const;

    std::vector<double> multiply(const std::vector<double>& x) const;

private:
    int n_;
    std::vector<double> a_;
};

struct EigResult {
    std::vector<double> values;                // descending
    std::vector<std::vector<double>> vectors;  // vectors[k] is the k-th eigenvector
};

/// Cyclic Jacobi eigendecomposition for symmetric matrices of order <= 512.
/// Returns m = U diag(values) U^T with orthonormal U and descending values.
EigResult sym_eig(const SymMatrix& m);

/// Cholesky solve of m x = b for symmetric positive definite m.
/// Throws IllConditioned when a pivot falls below 1e-12 times the scale.
std::vector<double> solve_spd(const SymMatrix& m, const std::vector<double>& b);

double dot(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace bayesnr
