#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lapdsm/aperture.hpp"
#include "lapdsm/dsm.hpp"
#include "lapdsm/scene.hpp"
#include "lapdsm/types.hpp"

namespace lapdsm {

// Fourier modes e^{i n t} / sqrt(2 pi), n = -order..order.
struct FourierTrialSpace {
    int order = 20;
    int dimension() const { return 2 * order + 1; }
};

// Testing functions G_inf(y_n, .) for an equispaced lattice of sources.
struct SourceTestingSpace {
    std::vector<Vec2> sources;
    double wavenumber = 0.0;

    // per_side x per_side points spanning the domain including its edges.
    static SourceTestingSpace lattice(const Domain& domain, int per_side, double wavenumber);
    double max_radius() const;
};

// Closed-form Gram matrix A_nm = (1/2pi) <e^{imt}, e^{int}>_Gamma.
// Rows n = -testing_order..testing_order, columns m = -trial_order..trial_order.
Eigen::MatrixXcd ffsm_matrix(const ApertureSet& aperture, int trial_order, int testing_order);
inline Eigen::MatrixXcd ffsm_matrix(const ApertureSet& aperture, int order) {
    return ffsm_matrix(aperture, order, order);
}

// B_n(z) = i^{-n} e^{i pi/4} / (2 sqrt k) J_n(k|z|) e^{-i n theta_z}.
Eigen::VectorXcd ffsm_rhs(Vec2 z, int order, double k);

// Smallest truncation the FSSM series accepts by default:
// ceil(k * max_radius) + 30.
int default_truncation(double k, double max_radius);

// A_nm = (1/sqrt(2pi)) <e^{imt}, G_inf(y_n, .)>_Gamma through the
// Jacobi-Anger series truncated at |p| <= truncation. Throws ValidationError
// when |J_truncation(k max|y_n|)| >= 1e-14.
Eigen::MatrixXcd fssm_matrix(const ApertureSet& aperture, int order,
                             const SourceTestingSpace& sources, int truncation);

// B_n(z) = J_0(k |z - y_n|) / (4k).
Eigen::VectorXcd fssm_rhs(Vec2 z, const SourceTestingSpace& sources);

// F(z) = (sigma I + A^* A)^{-1} A^* B(z) with the Hermitian factorization
// computed once.
class TikhonovSolver {
public:
    TikhonovSolver(const Eigen::MatrixXcd& matrix, double sigma);

    Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;
    // Column-wise solve for a block of right-hand sides.
    Eigen::MatrixXcd solve(const Eigen::MatrixXcd& rhs) const;

    double sigma() const { return sigma_; }

private:
    Eigen::MatrixXcd adjoint_;
    Eigen::LLT<Eigen::MatrixXcd> llt_;
    double sigma_;
};

// Coefficients F(z) as columns, one per sampling point.
using CoefficientField = Eigen::MatrixXcd;

CoefficientField tikhonov_solve(const Eigen::MatrixXcd& matrix, double sigma,
                                const Eigen::MatrixXcd& rhs_field);

// G(z, x_q) = sum_n f_n(z) e^{i n t_q} / sqrt(2 pi) at the aperture receivers.
ProbingSet probing_from_coefficients(const CoefficientField& coeffs, const FourierTrialSpace& trial,
                                     const ApertureSet& aperture);

enum class FiniteSpaceMethod { ffsm, fssm };

struct FiniteSpaceOptions {
    FiniteSpaceMethod method = FiniteSpaceMethod::ffsm;
    int trial_order = 20;
    int testing_order = 20;
    // sigma = 0.1^sigma_exponent
    double sigma_exponent = 8.0;
    int sources_per_side = 20;
    // 0 selects default_truncation().
    int truncation = 0;

    double sigma() const;
};

// Probing functions for every grid point from assembly, regularized solve
// and synthesis.
ProbingSet finite_space_probing(const FiniteSpaceOptions& options, const ApertureSet& aperture,
                                const SamplingGrid& grid, double k);

// End to end: probing functions, per-incidence index, mean, normalization.
IndexField reconstruct_finite_space(const FarFieldData& data, const FiniteSpaceOptions& options,
                                    const SamplingGrid& grid, double k);

}  // namespace lapdsm
