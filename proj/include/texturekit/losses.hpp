/**
 * @file losses.hpp
 * @brief Distillation losses over structural, statistical and response features
 */

#pragma once

#include <texturekit/feature_map.hpp>
#include <texturekit/tiem.hpp>

#include <cstddef>
#include <vector>

namespace texturekit {

inline constexpr double kCovarianceRidge = 1e-6;
inline constexpr double kLogFloor = 1e-8;

/// Sum of squared differences over D scaled by 1 / (region_height * region_width).
double stat_feature_loss(const Matrix& teacher, const Matrix& student, std::size_t region_height,
                         std::size_t region_width);

struct LevelDistribution {
    Vector mean;      ///< mu0, C2
    Matrix covariance; ///< population covariance of the level rows, C2 x C2
};

LevelDistribution level_distribution(const Matrix& levels);

/// sqrt((l - mu)^T (P + ridge I)^-1 (l - mu)) for every row l of `levels`,
/// via a Cholesky solve. Throws SingularCovariance when the factorization fails.
std::vector<double> mahalanobis_corr(const Matrix& levels, const Vector& mean,
                                     const Matrix& covariance, double ridge = 0.0);

struct QclTerms {
    double l_d = 0.0;
    double corr_student_sum = 0.0;
    double corr_teacher_sum = 0.0;
    double l_qdl = 0.0;
    Vector mean;
    Matrix covariance;
};

/// Both level sets are measured against the teacher's level distribution,
/// with kCovarianceRidge added to its covariance.
QclTerms qcl_loss(const StatFeature& teacher, const StatFeature& student,
                  std::size_t region_height, std::size_t region_width);

/// Pixel-averaged KL(teacher || student) over K x H x W probability maps.
/// Throws NotNormalized when a pixel's probabilities are negative or do not
/// sum to 1 within 1e-5.
double response_kl_loss(const FeatureMap& teacher, const FeatureMap& student);

struct LossWeights {
    double lambda1 = 0.9;
    double lambda2 = 3.0;
    double lambda3 = 0.01;
};

/// seg + lambda1 (str + sta) + lambda2 re - lambda3 adv
double total_loss(double l_seg, double l_str, double l_sta, double l_re, double l_adv,
                  const LossWeights& w = {});

} // namespace texturekit
