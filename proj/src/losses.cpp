#include <texturekit/losses.hpp>

#include <texturekit/error.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace texturekit {

double stat_feature_loss(const Matrix& teacher, const Matrix& student, std::size_t region_height,
                         std::size_t region_width) {
    if (teacher.rows() != student.rows() || teacher.cols() != student.cols()) {
        throw Error(ErrorCode::ShapeMismatch, "statistical features differ in shape");
    }
    if (region_height == 0 || region_width == 0) {
        throw Error(ErrorCode::InvalidArgument, "region dims must be positive");
    }
    return (teacher - student).squaredNorm() / double(region_height * region_width);
}

LevelDistribution level_distribution(const Matrix& levels) {
    if (levels.rows() == 0) throw Error(ErrorCode::InvalidArgument, "no levels");
    LevelDistribution d;
    d.mean = levels.colwise().mean().transpose();
    const Matrix centered = levels.rowwise() - d.mean.transpose();
    d.covariance = centered.transpose() * centered / double(levels.rows());
    return d;
}

std::vector<double> mahalanobis_corr(const Matrix& levels, const Vector& mean,
                                     const Matrix& covariance, double ridge) {
    const Eigen::Index c = mean.size();
    if (levels.cols() != c || covariance.rows() != c || covariance.cols() != c) {
        throw Error(ErrorCode::ShapeMismatch, "levels, mean and covariance dims disagree");
    }
    const Matrix reg = covariance + ridge * Matrix::Identity(c, c);
    if (!reg.isApprox(reg.transpose(), 1e-12)) {
        throw Error(ErrorCode::SingularCovariance, "covariance is not symmetric");
    }
    const Eigen::LLT<Matrix> llt(reg);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::SingularCovariance, "covariance is not positive definite");
    }
    std::vector<double> out(std::size_t(levels.rows()));
    for (Eigen::Index i = 0; i < levels.rows(); ++i) {
        const Vector diff = levels.row(i).transpose() - mean;
        // (P)^-1 = L^-T L^-1, so the quadratic form is |L^-1 diff|^2.
        const Vector z = llt.matrixL().solve(diff);
        out[std::size_t(i)] = std::sqrt(z.squaredNorm());
    }
    return out;
}

QclTerms qcl_loss(const StatFeature& teacher, const StatFeature& student,
                  std::size_t region_height, std::size_t region_width) {
    if (teacher.levels.rows() != student.levels.rows() ||
        teacher.levels.cols() != student.levels.cols()) {
        throw Error(ErrorCode::ShapeMismatch, "reconstructed levels differ in shape");
    }
    QclTerms t;
    t.l_d = stat_feature_loss(teacher.features, student.features, region_height, region_width);
    const LevelDistribution dist = level_distribution(teacher.levels);
    t.mean = dist.mean;
    t.covariance = dist.covariance;
    for (double v : mahalanobis_corr(student.levels, t.mean, t.covariance, kCovarianceRidge)) t.corr_student_sum += v;
    for (double v : mahalanobis_corr(teacher.levels, t.mean, t.covariance, kCovarianceRidge)) t.corr_teacher_sum += v;
    t.l_qdl = t.l_d + (t.corr_student_sum - t.corr_teacher_sum);
    return t;
}

double response_kl_loss(const FeatureMap& teacher, const FeatureMap& student) {
    if (teacher.shape() != student.shape()) {
        throw Error(ErrorCode::ShapeMismatch, "probability maps differ in shape");
    }
    const std::size_t k = teacher.channels();
    const std::size_t plane = teacher.shape().plane();
    auto pt = teacher.data();
    auto ps = student.data();

    double total = 0.0;
    for (std::size_t i = 0; i < plane; ++i) {
        double sum_t = 0.0, sum_s = 0.0, kl = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            const double a = pt[c * plane + i], b = ps[c * plane + i];
            if (a < 0.0 || b < 0.0) {
                throw Error(ErrorCode::NotNormalized, "negative probability at pixel " + std::to_string(i));
            }
            sum_t += a;
            sum_s += b;
            if (a > 0.0) kl += a * std::log(std::max(a, kLogFloor) / std::max(b, kLogFloor));
        }
        if (std::abs(sum_t - 1.0) > 1e-5 || std::abs(sum_s - 1.0) > 1e-5) {
            throw Error(ErrorCode::NotNormalized,
                        "probabilities at pixel " + std::to_string(i) + " do not sum to 1");
        }
        total += kl;
    }
    return total / double(plane);
}

double total_loss(double l_seg, double l_str, double l_sta, double l_re, double l_adv,
                  const LossWeights& w) {
    return l_seg + w.lambda1 * (l_str + l_sta) + w.lambda2 * l_re - w.lambda3 * l_adv;
}

} // namespace texturekit
