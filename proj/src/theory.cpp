#include "filterlab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "filterlab/error.hpp"

namespace filterlab {

namespace {

constexpr Eigen::Index kMaxKroneckerDim = 4096;

void require_gamma(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw ParameterError("kernel gamma must be positive");
    }
}

// (1 + 1/(16 gamma^2))^2
double kernel_correction_sq(double gamma) {
    const double c = 1.0 + 1.0 / (16.0 * gamma * gamma);
    return c * c;
}

double hessian_scale(const SystemSpec& spec, double gamma) {
    const double g2 = gamma * gamma;
    const double numerator = 16.0 * g2 * g2 + g2 + spec.input_noise_var;
    const double denominator = 128.0 * std::pow(gamma, 7) * spec.aug_norm_sq() * kernel_correction_sq(gamma);
    return -numerator / denominator;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace

SystemSpec SystemSpec::white(const Vector& true_weights, double input_var, double input_noise_var,
                             double output_noise_var) {
    const auto n = true_weights.size();
    return SystemSpec{true_weights, input_var * Matrix::Identity(n, n), input_noise_var, output_noise_var};
}

void SystemSpec::validate() const {
    const auto n = true_weights.size();
    if (n < 1) {
        throw ParameterError("system needs at least one tap");
    }
    if (!true_weights.allFinite()) {
        throw ParameterError("true weights must be finite");
    }
    if (input_covariance.rows() != n || input_covariance.cols() != n) {
        throw ParameterError("input covariance must be " + std::to_string(n) + "x" + std::to_string(n));
    }
    if (!(input_noise_var > 0.0) || !(output_noise_var > 0.0)) {
        throw ParameterError("noise variances must be positive");
    }
    const double scale = std::max(1.0, input_covariance.cwiseAbs().maxCoeff());
    if ((input_covariance - input_covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw ParameterError("input covariance must be symmetric");
    }
    Eigen::LLT<Matrix> llt(input_covariance);
    if (llt.info() != Eigen::Success) {
        throw ParameterError("input covariance must be positive definite");
    }
}

double SystemSpec::input_power() const {
    return input_covariance.trace() / static_cast<double>(length());
}

Matrix bracket_matrix(const SystemSpec& spec) {
    const auto n = spec.length();
    const Vector& w = spec.true_weights;
    return spec.input_covariance + spec.input_noise_var * Matrix::Identity(n, n) -
           (spec.input_noise_var / spec.aug_norm_sq()) * (w * w.transpose());
}

Matrix hessian_at_optimum(const SystemSpec& spec, double gamma) {
    spec.validate();
    require_gamma(gamma);
    return hessian_scale(spec, gamma) * bracket_matrix(spec);
}

double mean_step_bound(const SystemSpec& spec, double gamma) {
    spec.validate();
    require_gamma(gamma);
    // The coefficient's sign is folded out: |1 + mu lambda| < 1 with lambda < 0.
    const double g2 = gamma * gamma;
    const double numerator = 256.0 * std::pow(gamma, 7) * spec.aug_norm_sq() * kernel_correction_sq(gamma);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(bracket_matrix(spec), Eigen::EigenvaluesOnly);
    const double lambda_max = eig.eigenvalues().maxCoeff();
    return numerator / ((16.0 * g2 * g2 + g2 + spec.input_noise_var) * lambda_max);
}

double msq_step_bound(const SystemSpec& spec, double gamma, double input_var, Eigen::Index length) {
    spec.validate();
    require_gamma(gamma);
    if (!(input_var > 0.0)) {
        throw ParameterError("input variance must be positive");
    }
    if (length < 1) {
        throw ParameterError("filter length must be positive");
    }
    const double n2 = spec.aug_norm_sq();
    const double L = static_cast<double>(length);
    const double wo2 = spec.true_weights.squaredNorm();
    return 16.0 * gamma * gamma * gamma * n2 * n2 /
           (L * input_var * n2 + spec.output_noise_var + wo2 * (L - 1.0) * spec.input_noise_var);
}

double msq_step_bound(const SystemSpec& spec, double gamma) {
    return msq_step_bound(spec, gamma, spec.input_power(), spec.length());
}

StabilityBounds combined_step_bound(const SystemSpec& spec, double gamma, double input_var, Eigen::Index length) {
    StabilityBounds b;
    b.mean_bound = mean_step_bound(spec, gamma);
    b.msq_bound = msq_step_bound(spec, gamma, input_var, length);
    b.combined = std::min(b.mean_bound, b.msq_bound);
    return b;
}

StabilityBounds combined_step_bound(const SystemSpec& spec, double gamma) {
    return combined_step_bound(spec, gamma, spec.input_power(), spec.length());
}

Matrix gradient_noise_covariance(const SystemSpec& spec, double gamma) {
    spec.validate();
    require_gamma(gamma);
    const double scale =
        spec.input_noise_var / (64.0 * std::pow(gamma, 6) * spec.aug_norm_sq() * kernel_correction_sq(gamma));
    return scale * bracket_matrix(spec);
}

MsdPrediction steady_state_msd(const SystemSpec& spec, double gamma, double mu) {
    spec.validate();
    require_gamma(gamma);
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
        throw ParameterError("step size mu must be non-negative");
    }
    const auto n = spec.length();
    if (n * n > kMaxKroneckerDim) {
        throw UsageError("steady_state_msd: L^2 = " + std::to_string(n * n) + " exceeds the dense limit " +
                         std::to_string(kMaxKroneckerDim));
    }

    MsdPrediction out;
    out.hessian = hessian_at_optimum(spec, gamma);
    out.grad_noise_cov = gradient_noise_covariance(spec, gamma);
    const Matrix step = Matrix::Identity(n, n) + mu * out.hessian;
    out.transition = kron(step, step);

    Eigen::SelfAdjointEigenSolver<Matrix> eig(step, Eigen::EigenvaluesOnly);
    const Vector lambdas = eig.eigenvalues();
    out.mean_spectral_radius = lambdas.cwiseAbs().maxCoeff();

    if (mu == 0.0) {
        return out;
    }

    // The eigenvalues of I - F are 1 - lambda_i lambda_j.
    double closest = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            closest = std::min(closest, std::fabs(1.0 - lambdas(i) * lambdas(j)));
        }
    }
    if (closest < 1e-13) {
        throw StabilityBoundaryError("steady_state_msd: (I - F) is singular; mu = " + std::to_string(mu) +
                                     " lies on the stability boundary");
    }

    const auto n2 = n * n;
    const Matrix system = Matrix::Identity(n2, n2) - out.transition;
    const Vector vec_identity = Matrix::Identity(n, n).reshaped();
    const Vector q = system.partialPivLu().solve(vec_identity);
    out.residual = (system * q - vec_identity).norm();
    const Vector m = out.grad_noise_cov.reshaped();
    out.msd = mu * mu * m.dot(q);
    return out;
}

}  // namespace filterlab
