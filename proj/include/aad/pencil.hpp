#pragma once

#include <Eigen/Dense>

namespace aad {

/// Dense symmetric matrix. The input is symmetrized as (A + A^T) / 2 on
/// construction and must be square with finite entries.
class SymMatrix
{
public:
    SymMatrix() = default;
    explicit SymMatrix(const Eigen::MatrixXd& m);

    static SymMatrix identity(Eigen::Index dim);

    Eigen::Index dim() const noexcept { return _m.rows(); }
    const Eigen::MatrixXd& matrix() const noexcept { return _m; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return _m(i, j); }
    double trace() const { return _m.trace(); }

private:
    Eigen::MatrixXd _m;
};

/// The (R, D) pair of a symmetric-definite generalized eigenproblem
/// R W = D W Lambda. `ridge` records the loading already applied to D.
struct PencilPair
{
    SymMatrix r;
    SymMatrix d;
    double ridge = 0.0;
};

struct PencilSolution
{
    Eigen::VectorXd eigenvalues;   // descending
    Eigen::MatrixXd vectors;       // dim x q, D-orthonormal columns
    int q = 0;
};

/// m + epsilon * (trace(m) / dim) * I. The trace scaling makes epsilon
/// dimensionless.
SymMatrix apply_ridge(const SymMatrix& m, double epsilon);

/// Top-q generalized eigenpairs via Cholesky whitening of D followed by a
/// symmetric eigendecomposition. Each returned vector has its
/// largest-magnitude entry positive.
///
/// Throws Error(dimension_mismatch) when q is out of range or r and d differ
/// in size, Error(not_positive_definite) when D has no Cholesky factor.
PencilSolution solve_pencil(const PencilPair& pencil, int q);

} // namespace aad
