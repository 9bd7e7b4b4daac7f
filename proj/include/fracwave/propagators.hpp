#pragma once

// Diagonal solution operators in the eigenbasis. Per mode with eigenvalue
// lambda the kernels are (z = -lambda t^alpha):
//   S1 : E_{a,1}(z)                initial position
//   S2 : t E_{a,2}(z)              initial velocity
//   S3 : t^{a-1} E_{a,a}(z)        Duhamel kernel
//   dS1: -lambda t^{a-1} E_{a,a}(z)
//   dS2: E_{a,1}(z)
//   dS3: t^{a-2} E_{a,a-1}(z)      weakly singular; quadrature against it
//                                  lives in the linear solver
#include <cmath>
#include <stdexcept>

#include "fracwave/mlf.hpp"
#include "fracwave/spectral.hpp"

namespace fracwave::prop {

enum class PropagatorKind { S1, S2, S3, dS1, dS2, dS3 };

inline double kernel(PropagatorKind kind, double alpha, double lambda, double t) {
    if (t < 0.0) throw std::domain_error("propagator kernel: t must be nonnegative");
    const bool singular =
        kind == PropagatorKind::S3 || kind == PropagatorKind::dS1 || kind == PropagatorKind::dS3;
    if (t == 0.0 && singular)
        throw std::domain_error("propagator kernel: singular kernel requires t > 0");
    switch (kind) {
        case PropagatorKind::S1:
        case PropagatorKind::dS2:
            return t == 0.0 ? 1.0 : mlf::eval({alpha, 1.0}, -lambda * std::pow(t, alpha));
        case PropagatorKind::S2:
            return t == 0.0 ? 0.0 : t * mlf::eval({alpha, 2.0}, -lambda * std::pow(t, alpha));
        case PropagatorKind::S3:
            return std::pow(t, alpha - 1.0) * mlf::eval({alpha, alpha}, -lambda * std::pow(t, alpha));
        case PropagatorKind::dS1:
            return -lambda * std::pow(t, alpha - 1.0) *
                   mlf::eval({alpha, alpha}, -lambda * std::pow(t, alpha));
        case PropagatorKind::dS3:
            if (!(alpha > 1.0)) throw std::domain_error("propagator kernel: dS3 requires alpha > 1");
            return std::pow(t, alpha - 2.0) *
                   mlf::eval({alpha, alpha - 1.0}, -lambda * std::pow(t, alpha));
    }
    throw std::logic_error("propagator kernel: unknown kind");
}

inline spectral::ModalCoeffs apply(PropagatorKind kind, const spectral::EigenBasis& basis,
                                   double alpha, double t, const spectral::ModalCoeffs& coeffs) {
    if (coeffs.size() != basis.mode_count)
        throw std::invalid_argument("propagators::apply: coefficient count mismatch");
    spectral::ModalCoeffs out(coeffs.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        out[k] = kernel(kind, alpha, basis.eigenvalues[k], t) * coeffs[k];
    return out;
}

}  // namespace fracwave::prop
