#pragma once

#include <vector>

namespace fracobs {

// Tridiagonal matrix. sub[i] is entry (i+1, i), diag[i] is (i, i), sup[i] is
// (i, i+1).
struct TriDiag {
    std::vector<double> sub;   // length n-1
    std::vector<double> diag;  // length n
    std::vector<double> sup;   // length n-1

    int size() const { return static_cast<int>(diag.size()); }
};

// Activity pattern of the nodes: true means off the obstacle (Heaviside value
// 1), false means contact. The Heaviside convention at zero is H(0) = 0.
struct Mask {
    std::vector<bool> bits;

    int size() const { return static_cast<int>(bits.size()); }
    bool operator==(const Mask&) const = default;
};

// Stencil of -(h^2 * second difference) with homogeneous Dirichlet data:
// 2 on the diagonal, -1 next to it. The 1/h^2 factor travels with the mesh
// ratio gamma_alpha, not with the stencil.
TriDiag laplacian_stencil(int n);

std::vector<double> apply(const TriDiag& t, const std::vector<double>& x);

// bits[i] = (u[i] - psi[i] > 0); an exact zero counts as contact.
Mask heaviside_mask(const std::vector<double>& u, const std::vector<double>& psi);

// I + scale * H * A, masking by rows: row i of the result is the identity row
// when mask.bits[i] is false, otherwise row i of I + scale * stencil.
TriDiag masked_system(const Mask& mask, double scale, const TriDiag& stencil);

// I + scale * A * P, masking by columns: entry (i,j) is
// delta_ij + scale * A_ij * bits[j]. Diagonally dominant by columns rather
// than rows, which elimination tolerates just as well.
TriDiag column_masked_system(const Mask& mask, double scale, const TriDiag& stencil);

// Elimination without pivoting. Every matrix built above keeps its pivots
// away from zero; a vanishing pivot is reported as std::runtime_error.
std::vector<double> thomas_solve(const TriDiag& t, const std::vector<double>& rhs);

}  // namespace fracobs
