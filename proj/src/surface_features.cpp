#include "graspkde/surface_features.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "graspkde/errors.hpp"
#include "graspkde/kdtree.hpp"

namespace graspkde {
namespace {

constexpr double kEigenvalueTie = 1e-12;
constexpr double kMaxCondition = 1e8;

void check_inputs(const PointCloud& cloud, int k_nn) {
    if (k_nn < 4) throw DataError("k_nn must be at least 4, got " + std::to_string(k_nn));
    if (cloud.points.size() < static_cast<std::size_t>(k_nn) + 1)
        throw DataError("cloud has " + std::to_string(cloud.points.size()) +
                        " points but k_nn = " + std::to_string(k_nn) + " needs at least " +
                        std::to_string(k_nn + 1));
    for (const auto& p : cloud.points)
        if (!p.allFinite()) throw DataError("cloud contains a non-finite coordinate");
}

// Normal of the neighbourhood covariance; false when the two smallest
// eigenvalues tie and the normal direction is ambiguous.
bool normal_at(const std::vector<Eigen::Vector3d>& pts, const std::vector<std::size_t>& nbrs,
               const Eigen::Vector3d& toward, Eigen::Vector3d* out) {
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (std::size_t j : nbrs) mean += pts[j];
    mean /= static_cast<double>(nbrs.size());
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (std::size_t j : nbrs) {
        const Eigen::Vector3d d = pts[j] - mean;
        cov += d * d.transpose();
    }
    cov /= static_cast<double>(nbrs.size());
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    if (eig.eigenvalues()[1] - eig.eigenvalues()[0] < kEigenvalueTie) return false;
    Eigen::Vector3d n = eig.eigenvectors().col(0);
    if (n.dot(toward) < 0.0) n = -n;
    *out = n;
    return true;
}

// Quadric fit around pts[center] with the frame's z-axis pointing into the
// surface, so a convex neighbourhood yields positive curvature. False when
// the design matrix is rank-deficient.
bool curvature_at(const std::vector<Eigen::Vector3d>& pts, const std::vector<std::size_t>& nbrs,
                  std::size_t center, const Eigen::Vector3d& normal, CurvatureFrame* out) {
    const Eigen::Vector3d axis =
        std::abs(normal.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    const Eigen::Vector3d t1 = (axis - axis.dot(normal) * normal).normalized();
    const Eigen::Vector3d t2 = normal.cross(t1);

    Eigen::MatrixXd design(nbrs.size(), 3);
    Eigen::VectorXd height(nbrs.size());
    for (std::size_t row = 0; row < nbrs.size(); ++row) {
        const Eigen::Vector3d d = pts[nbrs[row]] - pts[center];
        const double x = d.dot(t1);
        const double y = d.dot(t2);
        design.row(row) << x * x, x * y, y * y;
        height[row] = -d.dot(normal);
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(design,
                                                Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::Vector3d& sv = svd.singularValues();
    if (!(sv[2] > 0.0) || sv[0] / sv[2] > kMaxCondition) return false;
    const Eigen::Vector3d abc = svd.solve(height);

    Eigen::Matrix2d weingarten;
    weingarten << 2.0 * abc[0], abc[1], abc[1], 2.0 * abc[2];
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(weingarten);
    const Eigen::Vector2d e1 = eig.eigenvectors().col(1);
    const Eigen::Vector2d e2 = eig.eigenvectors().col(0);
    out->r1 = eig.eigenvalues()[1];
    out->r2 = eig.eigenvalues()[0];
    out->k1 = (e1.x() * t1 + e1.y() * t2).normalized();
    out->k2 = (e2.x() * t1 + e2.y() * t2).normalized();
    return true;
}

Feature make_feature(const Eigen::Vector3d& p, const Eigen::Vector3d& normal,
                     const CurvatureFrame& c) {
    const Eigen::Vector3d z = normal.normalized();
    Eigen::Vector3d x = (c.k1 - c.k1.dot(z) * z).normalized();
    int lead = 0;
    while (lead < 2 && x[lead] == 0.0) ++lead;
    if (x[lead] < 0.0) x = -x;
    const Eigen::Vector3d y = z.cross(x);
    Eigen::Matrix3d frame;
    frame.col(0) = x;
    frame.col(1) = y;
    frame.col(2) = z;
    return Feature(Pose(p, Eigen::Quaterniond(frame)), Eigen::Vector2d(c.r1, c.r2));
}

}  // namespace

std::vector<Eigen::Vector3d> estimate_normals(const PointCloud& cloud, int k_nn) {
    check_inputs(cloud, k_nn);
    const KdTree3 tree(cloud.points);
    std::vector<Eigen::Vector3d> normals(cloud.points.size());
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const auto nbrs = tree.knn(cloud.points[i], static_cast<std::size_t>(k_nn) + 1);
        if (!normal_at(cloud.points, nbrs, cloud.viewpoint - cloud.points[i], &normals[i]))
            throw DegenerateError("ambiguous normal at point " + std::to_string(i) +
                                  ": the two smallest covariance eigenvalues tie");
    }
    return normals;
}

std::vector<CurvatureFrame> estimate_curvatures(const PointCloud& cloud,
                                                const std::vector<Eigen::Vector3d>& normals,
                                                int k_nn) {
    check_inputs(cloud, k_nn);
    if (normals.size() != cloud.points.size())
        throw DataError("normal count " + std::to_string(normals.size()) +
                        " does not match point count " + std::to_string(cloud.points.size()));
    const KdTree3 tree(cloud.points);
    std::vector<CurvatureFrame> out(cloud.points.size());
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const auto nbrs = tree.knn(cloud.points[i], static_cast<std::size_t>(k_nn) + 1);
        if (!curvature_at(cloud.points, nbrs, i, normals[i], &out[i]))
            throw DegenerateError("rank-deficient curvature fit at point " + std::to_string(i));
    }
    return out;
}

SurfaceFeatureSet build_features(const PointCloud& cloud,
                                 const std::vector<Eigen::Vector3d>& normals,
                                 const std::vector<CurvatureFrame>& curvatures) {
    if (normals.size() != cloud.points.size() || curvatures.size() != cloud.points.size())
        throw DataError("per-point data does not match point count");
    SurfaceFeatureSet out;
    out.features.reserve(cloud.points.size());
    for (std::size_t i = 0; i < cloud.points.size(); ++i)
        out.features.push_back(make_feature(cloud.points[i], normals[i], curvatures[i]));
    return out;
}

SurfaceFeatureSet extract_features(const PointCloud& cloud, const FeatureParams& params,
                                   Exec exec) {
    check_inputs(cloud, params.k_nn);
    const KdTree3 tree(cloud.points);
    const std::size_t n = cloud.points.size();
    std::vector<std::optional<Feature>> slots(n);
    parallel_for(n, exec, [&](std::size_t i) {
        const auto nbrs = tree.knn(cloud.points[i], static_cast<std::size_t>(params.k_nn) + 1);
        Eigen::Vector3d normal;
        if (!normal_at(cloud.points, nbrs, cloud.viewpoint - cloud.points[i], &normal)) return;
        CurvatureFrame curv;
        if (!curvature_at(cloud.points, nbrs, i, normal, &curv)) return;
        slots[i] = make_feature(cloud.points[i], normal, curv);
    });
    SurfaceFeatureSet out;
    out.features.reserve(n);
    for (auto& slot : slots) {
        if (slot)
            out.features.push_back(std::move(*slot));
        else
            ++out.skipped;
    }
    if (out.features.empty()) throw DegenerateError("feature extraction skipped every point");
    return out;
}

}  // namespace graspkde
