#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "graspkde/cloud.hpp"
#include "graspkde/exec.hpp"
#include "graspkde/kernels.hpp"

namespace graspkde {

/// Principal curvatures at one cloud point. r1 >= r2; k1 and k2 are unit
/// directions in world coordinates, tangent to the surface, with k1 belonging
/// to r1. Convex regions get positive curvature.
struct CurvatureFrame {
    Eigen::Vector3d k1 = Eigen::Vector3d::UnitX();
    Eigen::Vector3d k2 = Eigen::Vector3d::UnitY();
    double r1 = 0.0;
    double r2 = 0.0;
};

/// Oriented features extracted from a cloud, one per retained point, in cloud
/// order. Points whose neighbourhood defeats estimation are dropped rather
/// than interpolated; `skipped` counts them.
struct SurfaceFeatureSet {
    std::vector<Feature> features;
    std::size_t skipped = 0;
};

struct FeatureParams {
    /// Neighbourhood size, excluding the point itself. Must be >= 4 and the
    /// cloud must hold at least k_nn + 1 points.
    int k_nn = 20;
};

/// Per-point unit normals from PCA over each point's neighbourhood (the point
/// plus its k_nn nearest companions), sign-flipped to face the cloud's
/// viewpoint. Throws DataError on invalid input and DegenerateError when any
/// neighbourhood leaves the normal ambiguous (the two smallest covariance
/// eigenvalues tie within 1e-12, e.g. collinear points).
std::vector<Eigen::Vector3d> estimate_normals(const PointCloud& cloud, int k_nn = 20);

/// Per-point principal curvatures from a least-squares quadric
/// z = a x^2 + b xy + c y^2 fitted in a local frame whose z-axis points into
/// the surface; curvatures and directions are the eigensystem of the
/// Weingarten matrix [[2a, b], [b, 2c]]. Throws DegenerateError when a design
/// matrix is rank-deficient (condition number above 1e8).
std::vector<CurvatureFrame> estimate_curvatures(const PointCloud& cloud,
                                                const std::vector<Eigen::Vector3d>& normals,
                                                int k_nn = 20);

/// Assembles one Feature per point. Frame columns are (k1, k2, normal),
/// orthonormalised right-handed; k1's sign is fixed so its first nonzero
/// component is positive, and k2 = normal x k1, which makes frames
/// deterministic up to the inherent ambiguity at umbilic points.
SurfaceFeatureSet build_features(const PointCloud& cloud,
                                 const std::vector<Eigen::Vector3d>& normals,
                                 const std::vector<CurvatureFrame>& curvatures);

/// Full extraction pipeline. Unlike the stepwise functions above, per-point
/// failures (ambiguous normal, rank-deficient fit) skip the point instead of
/// aborting; the result reports how many were dropped. Work is independent
/// per point, so Exec::OpenMP parallelises over the cloud. Throws
/// DegenerateError when no point survives.
SurfaceFeatureSet extract_features(const PointCloud& cloud, const FeatureParams& params = {},
                                   Exec exec = Exec::Serial);

}  // namespace graspkde
