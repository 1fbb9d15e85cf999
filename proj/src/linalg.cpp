#include "ksupg/linalg.hpp"

#include <cmath>

#include "ksupg/error.hpp"
#include "ksupg/parallel.hpp"

namespace ksupg {

void spmv(const CsrMatrix& A, std::span<const double> x, std::span<double> y) {
    require(x.size() == A.cols() && y.size() == A.rows(), ErrorCode::DimensionMismatch, "spmv size mismatch");
    const auto& off = A.offsets();
    const auto& col = A.columns();
    const auto& val = A.values();
    parallel_for(A.rows(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            double sum = 0.0;
            for (std::size_t k = off[i]; k < off[i + 1]; ++k) sum += val[k] * x[col[k]];
            y[i] = sum;
        }
    });
}

Vector spmv(const CsrMatrix& A, std::span<const double> x) {
    Vector y(A.rows());
    spmv(A, x, y);
    return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), ErrorCode::DimensionMismatch, "dot size mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

LinearSolveResult bicgstab(const CsrMatrix& A, std::span<const double> b, std::span<const double> x0,
                           const BicgstabOptions& options) {
    const std::size_t n = A.rows();
    require(A.cols() == n, ErrorCode::DimensionMismatch, "BiCGSTAB needs a square matrix");
    require(b.size() == n && (x0.empty() || x0.size() == n), ErrorCode::DimensionMismatch, "BiCGSTAB size mismatch");
    require(options.tol > 0.0, ErrorCode::InvalidArgument, "BiCGSTAB tolerance must be positive");

    LinearSolveResult out;
    out.x = x0.empty() ? Vector(n, 0.0) : Vector(x0.begin(), x0.end());
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        out.x.assign(n, 0.0);
        out.converged = true;
        return out;
    }

    Vector inv_diag(n, 1.0);
    if (options.jacobi) {
        const Vector d = A.diagonal();
        for (std::size_t i = 0; i < n; ++i) inv_diag[i] = d[i] != 0.0 ? 1.0 / d[i] : 1.0;
    }
    auto precondition = [&](const Vector& in, Vector& res) {
        for (std::size_t i = 0; i < n; ++i) res[i] = inv_diag[i] * in[i];
    };

    Vector r(n), r_hat(n), p(n), v(n), s(n), t(n), p_hat(n), s_hat(n), ax(n);
    auto residual = [&]() {
        spmv(A, out.x, ax);
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ax[i];
        return norm2(r) / bnorm;
    };

    out.residual = residual();
    if (out.residual <= options.tol) {
        out.converged = true;
        return out;
    }

    bool restarted = false;
    double rho_old = 1.0, alpha = 1.0, omega = 1.0;
    auto reset = [&]() {
        r_hat = r;
        std::fill(p.begin(), p.end(), 0.0);
        std::fill(v.begin(), v.end(), 0.0);
        rho_old = alpha = omega = 1.0;
    };
    reset();

    // Breakdown thresholds are relative to the vector scales involved.
    auto tiny = [](double value, double scale) { return std::abs(value) < 1e-30 * std::max(scale, 1e-300); };
    auto handle_breakdown = [&]() {
        if (restarted) {
            out.breakdown = true;
            return false;
        }
        restarted = true;
        out.residual = residual();
        reset();
        return true;
    };

    while (out.iterations < options.maxit) {
        const double rho = dot(r_hat, r);
        if (tiny(rho, norm2(r_hat) * norm2(r))) {
            if (!handle_breakdown()) break;
            continue;
        }
        const double beta = (rho / rho_old) * (alpha / omega);
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        precondition(p, p_hat);
        spmv(A, p_hat, v);
        const double rv = dot(r_hat, v);
        if (tiny(rv, norm2(r_hat) * norm2(v))) {
            if (!handle_breakdown()) break;
            continue;
        }
        alpha = rho / rv;
        ++out.iterations;
        for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        if (norm2(s) / bnorm <= options.tol) {
            for (std::size_t i = 0; i < n; ++i) out.x[i] += alpha * p_hat[i];
            break;
        }
        precondition(s, s_hat);
        spmv(A, s_hat, t);
        const double tt = dot(t, t);
        omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            out.x[i] += alpha * p_hat[i] + omega * s_hat[i];
            r[i] = s[i] - omega * t[i];
        }
        if (norm2(r) / bnorm <= options.tol) break;
        if (tiny(omega, 1.0)) {
            if (!handle_breakdown()) break;
            continue;
        }
        rho_old = rho;
    }
    out.residual = residual();
    out.converged = out.residual <= options.tol;
    if (out.converged) out.breakdown = false;
    return out;
}

CsrMatrix block_expand(const CsrMatrix& A, std::size_t m, std::span<const Block> blocks) {
    require(m >= 1, ErrorCode::InvalidArgument, "block size must be positive");
    require(blocks.empty() || blocks.size() == A.cols(), ErrorCode::DimensionMismatch,
            "one block per column node is required");
    for (const auto& B : blocks)
        require(static_cast<std::size_t>(B.rows()) == m && static_cast<std::size_t>(B.cols()) == m,
                ErrorCode::DimensionMismatch, "block has the wrong size");
    BlockTerm term{&A, 1.0, blocks, {}};
    if (A.rows() != A.cols()) fail(ErrorCode::DimensionMismatch, "block_expand needs a square matrix");
    return block_assemble(m, std::span<const BlockTerm>(&term, 1));
}

CsrMatrix block_assemble(std::size_t m, std::span<const BlockTerm> terms) {
    require(!terms.empty() && terms[0].scalar != nullptr, ErrorCode::InvalidArgument, "no block terms");
    const CsrMatrix& base = *terms[0].scalar;
    const std::size_t n = base.rows();
    for (const auto& term : terms) {
        require(term.scalar != nullptr && term.scalar->same_pattern(base), ErrorCode::DimensionMismatch,
                "block terms must share one sparsity pattern");
        require(term.blocks.empty() || term.blocks.size() == n, ErrorCode::DimensionMismatch,
                "one block per node is required");
        require(term.row_scale.empty() || term.row_scale.size() == n, ErrorCode::DimensionMismatch,
                "one row scale per node is required");
    }
    const auto& off = base.offsets();
    const auto& col = base.columns();
    std::vector<std::size_t> offsets(n * m + 1, 0), columns(base.stored() * m * m);
    std::vector<double> values(base.stored() * m * m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t row_len = (off[i + 1] - off[i]) * m;
        for (std::size_t r = 0; r < m; ++r) offsets[i * m + r + 1] = offsets[i * m + r] + row_len;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = off[i]; k < off[i + 1]; ++k) {
            const std::size_t j = col[k];
            const std::size_t local = (k - off[i]) * m;
            for (std::size_t r = 0; r < m; ++r) {
                const std::size_t base_pos = offsets[i * m + r] + local;
                for (std::size_t c = 0; c < m; ++c) columns[base_pos + c] = j * m + c;
            }
            for (const auto& term : terms) {
                double a = term.factor * term.scalar->values()[k];
                if (!term.row_scale.empty()) a *= term.row_scale[i];
                if (a == 0.0) continue;
                for (std::size_t r = 0; r < m; ++r) {
                    double* dst = values.data() + offsets[i * m + r] + local;
                    if (term.blocks.empty()) {
                        dst[r] += a;
                    } else {
                        const Block& B = term.blocks[j];
                        for (std::size_t c = 0; c < m; ++c)
                            dst[c] += a * B(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
                    }
                }
            }
        }
    }
    return CsrMatrix(n * m, n * m, std::move(offsets), std::move(columns), std::move(values));
}

}  // namespace ksupg
