#include "fracobs/tridiag.hpp"

#include <cmath>
#include <stdexcept>

namespace fracobs {

TriDiag laplacian_stencil(int n) {
    if (n < 1) {
        throw std::invalid_argument("laplacian_stencil: n must be >= 1");
    }
    TriDiag t;
    t.diag.assign(n, 2.0);
    t.sub.assign(n - 1, -1.0);
    t.sup.assign(n - 1, -1.0);
    return t;
}

std::vector<double> apply(const TriDiag& t, const std::vector<double>& x) {
    const int n = t.size();
    if (static_cast<int>(x.size()) != n) {
        throw std::invalid_argument("apply: size mismatch");
    }
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
        double v = t.diag[i] * x[i];
        if (i > 0) v += t.sub[i - 1] * x[i - 1];
        if (i + 1 < n) v += t.sup[i] * x[i + 1];
        y[i] = v;
    }
    return y;
}

Mask heaviside_mask(const std::vector<double>& u, const std::vector<double>& psi) {
    if (u.size() != psi.size()) {
        throw std::invalid_argument("heaviside_mask: size mismatch");
    }
    Mask m;
    m.bits.resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        m.bits[i] = u[i] - psi[i] > 0.0;
    }
    return m;
}

namespace {

void check_masked_args(const Mask& mask, double scale, const TriDiag& stencil,
                       const char* who) {
    if (mask.size() != stencil.size()) {
        throw std::invalid_argument(std::string(who) + ": mask/stencil size mismatch");
    }
    if (!(scale >= 0.0)) {
        throw std::invalid_argument(std::string(who) + ": scale must be >= 0");
    }
}

}  // namespace

TriDiag masked_system(const Mask& mask, double scale, const TriDiag& stencil) {
    check_masked_args(mask, scale, stencil, "masked_system");
    const int n = stencil.size();
    TriDiag b;
    b.diag.resize(n);
    b.sub.resize(n - 1);
    b.sup.resize(n - 1);
    for (int i = 0; i < n; ++i) {
        b.diag[i] = mask.bits[i] ? 1.0 + scale * stencil.diag[i] : 1.0;
    }
    // sub[k] lives in row k+1, sup[k] in row k.
    for (int k = 0; k + 1 < n; ++k) {
        b.sub[k] = mask.bits[k + 1] ? scale * stencil.sub[k] : 0.0;
        b.sup[k] = mask.bits[k] ? scale * stencil.sup[k] : 0.0;
    }
    return b;
}

TriDiag column_masked_system(const Mask& mask, double scale, const TriDiag& stencil) {
    check_masked_args(mask, scale, stencil, "column_masked_system");
    const int n = stencil.size();
    TriDiag b;
    b.diag.resize(n);
    b.sub.resize(n - 1);
    b.sup.resize(n - 1);
    for (int i = 0; i < n; ++i) {
        b.diag[i] = mask.bits[i] ? 1.0 + scale * stencil.diag[i] : 1.0;
    }
    // sub[k] sits in column k, sup[k] in column k+1.
    for (int k = 0; k + 1 < n; ++k) {
        b.sub[k] = mask.bits[k] ? scale * stencil.sub[k] : 0.0;
        b.sup[k] = mask.bits[k + 1] ? scale * stencil.sup[k] : 0.0;
    }
    return b;
}

std::vector<double> thomas_solve(const TriDiag& t, const std::vector<double>& rhs) {
    const int n = t.size();
    if (n == 0) {
        throw std::invalid_argument("thomas_solve: empty system");
    }
    if (static_cast<int>(rhs.size()) != n) {
        throw std::invalid_argument("thomas_solve: rhs size mismatch");
    }
    std::vector<double> c(n - 1), d(n);

    double piv = t.diag[0];
    if (piv == 0.0) {
        throw std::runtime_error("thomas_solve: zero pivot at row 0");
    }
    if (n > 1) c[0] = t.sup[0] / piv;
    d[0] = rhs[0] / piv;
    for (int i = 1; i < n; ++i) {
        piv = t.diag[i] - t.sub[i - 1] * c[i - 1];
        if (piv == 0.0) {
            throw std::runtime_error("thomas_solve: zero pivot at row " + std::to_string(i));
        }
        if (i + 1 < n) c[i] = t.sup[i] / piv;
        d[i] = (rhs[i] - t.sub[i - 1] * d[i - 1]) / piv;
    }
    for (int i = n - 2; i >= 0; --i) {
        d[i] -= c[i] * d[i + 1];
    }
    return d;
}

}  // namespace fracobs
