#include "aad/pencil.hpp"

#include "aad/error.hpp"

#include <string>

namespace aad {

SymMatrix::SymMatrix(const Eigen::MatrixXd& m)
{
    if (m.rows() != m.cols()) {
        fail(ErrorCode::dimension_mismatch,
             "SymMatrix: expected square matrix, got " + std::to_string(m.rows()) + "x" +
                 std::to_string(m.cols()));
    }
    if (!m.allFinite()) {
        fail(ErrorCode::invalid_argument, "SymMatrix: non-finite entry");
    }
    _m = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(Eigen::Index dim)
{
    return SymMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

SymMatrix apply_ridge(const SymMatrix& m, double epsilon)
{
    if (!(epsilon >= 0.0)) {
        fail(ErrorCode::invalid_argument, "apply_ridge: epsilon must be nonnegative");
    }
    if (epsilon == 0.0 || m.dim() == 0) return m;
    const double load = epsilon * m.trace() / static_cast<double>(m.dim());
    Eigen::MatrixXd out = m.matrix();
    out.diagonal().array() += load;
    return SymMatrix(out);
}

PencilSolution solve_pencil(const PencilPair& pencil, int q)
{
    const Eigen::Index n = pencil.r.dim();
    if (pencil.d.dim() != n) {
        fail(ErrorCode::dimension_mismatch, "solve_pencil: R and D differ in dimension");
    }
    if (q < 1 || q > n) {
        fail(ErrorCode::dimension_mismatch,
             "solve_pencil: q=" + std::to_string(q) + " outside [1, " + std::to_string(n) + "]");
    }

    Eigen::LLT<Eigen::MatrixXd> chol(pencil.d.matrix());
    if (chol.info() != Eigen::Success) {
        fail(ErrorCode::not_positive_definite, "solve_pencil: Cholesky of D failed");
    }
    const auto lower = chol.matrixL();

    // C = L^-1 R L^-T
    Eigen::MatrixXd c = lower.solve(pencil.r.matrix());
    c = lower.solve(c.transpose()).eval();
    c = 0.5 * (c + c.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
    if (eig.info() != Eigen::Success) {
        fail(ErrorCode::not_positive_definite, "solve_pencil: eigensolver did not converge");
    }

    // Eigen returns ascending order; take the last q columns reversed.
    PencilSolution out;
    out.q = q;
    out.eigenvalues.resize(q);
    Eigen::MatrixXd v(n, q);
    for (int i = 0; i < q; ++i) {
        out.eigenvalues(i) = eig.eigenvalues()(n - 1 - i);
        v.col(i) = eig.eigenvectors().col(n - 1 - i);
    }
    out.vectors = lower.transpose().solve(v);

    for (int i = 0; i < q; ++i) {
        Eigen::Index arg = 0;
        out.vectors.col(i).cwiseAbs().maxCoeff(&arg);
        if (out.vectors(arg, i) < 0.0) out.vectors.col(i) *= -1.0;
    }
    return out;
}

} // namespace aad
