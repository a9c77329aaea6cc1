#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace graspkde {

/// Static 3D kd-tree for nearest-neighbour, k-NN and radius queries over a
/// point set. Median split on the widest axis, small leaves. Read-only after
/// construction, so concurrent queries are safe.
class KdTree3 {
public:
    KdTree3() = default;

    explicit KdTree3(std::vector<Eigen::Vector3d> points) : pts_(std::move(points)) {
        order_.resize(pts_.size());
        std::iota(order_.begin(), order_.end(), std::uint32_t{0});
        if (!pts_.empty()) root_ = build(0, static_cast<std::uint32_t>(pts_.size()));
    }

    bool empty() const { return pts_.empty(); }
    std::size_t size() const { return pts_.size(); }
    const std::vector<Eigen::Vector3d>& points() const { return pts_; }

    /// Indices of the k nearest points, sorted by increasing distance.
    std::vector<std::size_t> knn(const Eigen::Vector3d& q, std::size_t k) const {
        k = std::min(k, pts_.size());
        if (k == 0) return {};
        MaxHeap heap;
        knn_rec(root_, q, k, heap);
        std::vector<std::size_t> out(heap.size());
        for (std::size_t i = out.size(); i-- > 0;) {
            out[i] = heap.top().second;
            heap.pop();
        }
        return out;
    }

    /// (index, distance) of the closest point.
    std::pair<std::size_t, double> nearest(const Eigen::Vector3d& q) const {
        MaxHeap heap;
        knn_rec(root_, q, 1, heap);
        return {heap.top().second, std::sqrt(heap.top().first)};
    }

    /// Indices of all points within radius r of q (unordered).
    std::vector<std::size_t> radius(const Eigen::Vector3d& q, double r) const {
        std::vector<std::size_t> out;
        if (!pts_.empty()) radius_rec(root_, q, r * r, out);
        return out;
    }

private:
    static constexpr std::uint32_t kLeafSize = 16;

    struct Node {
        double split = 0.0;
        std::int32_t axis = -1;  // -1 marks a leaf
        std::uint32_t left = 0, right = 0;
        std::uint32_t begin = 0, end = 0;
    };

    using MaxHeap = std::priority_queue<std::pair<double, std::size_t>>;

    std::uint32_t build(std::uint32_t begin, std::uint32_t end) {
        const std::uint32_t id = static_cast<std::uint32_t>(nodes_.size());
        nodes_.emplace_back();
        if (end - begin <= kLeafSize) {
            nodes_[id].begin = begin;
            nodes_[id].end = end;
            return id;
        }
        Eigen::Vector3d lo = pts_[order_[begin]], hi = lo;
        for (std::uint32_t i = begin + 1; i < end; ++i) {
            lo = lo.cwiseMin(pts_[order_[i]]);
            hi = hi.cwiseMax(pts_[order_[i]]);
        }
        int axis = 0;
        (hi - lo).maxCoeff(&axis);
        const std::uint32_t mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](std::uint32_t a, std::uint32_t b) { return pts_[a][axis] < pts_[b][axis]; });
        const double split = pts_[order_[mid]][axis];
        const std::uint32_t left = build(begin, mid);
        const std::uint32_t right = build(mid, end);
        nodes_[id].split = split;
        nodes_[id].axis = axis;
        nodes_[id].left = left;
        nodes_[id].right = right;
        return id;
    }

    void knn_rec(std::uint32_t id, const Eigen::Vector3d& q, std::size_t k, MaxHeap& heap) const {
        const Node& n = nodes_[id];
        if (n.axis < 0) {
            for (std::uint32_t i = n.begin; i < n.end; ++i) {
                const double d2 = (pts_[order_[i]] - q).squaredNorm();
                if (heap.size() < k)
                    heap.emplace(d2, order_[i]);
                else if (d2 < heap.top().first) {
                    heap.pop();
                    heap.emplace(d2, order_[i]);
                }
            }
            return;
        }
        const double delta = q[n.axis] - n.split;
        const std::uint32_t first = delta < 0.0 ? n.left : n.right;
        const std::uint32_t second = delta < 0.0 ? n.right : n.left;
        knn_rec(first, q, k, heap);
        if (heap.size() < k || delta * delta < heap.top().first) knn_rec(second, q, k, heap);
    }

    void radius_rec(std::uint32_t id, const Eigen::Vector3d& q, double r2,
                    std::vector<std::size_t>& out) const {
        const Node& n = nodes_[id];
        if (n.axis < 0) {
            for (std::uint32_t i = n.begin; i < n.end; ++i)
                if ((pts_[order_[i]] - q).squaredNorm() <= r2) out.push_back(order_[i]);
            return;
        }
        const double delta = q[n.axis] - n.split;
        if (delta < 0.0 || delta * delta <= r2) radius_rec(n.left, q, r2, out);
        if (delta >= 0.0 || delta * delta <= r2) radius_rec(n.right, q, r2, out);
    }

    std::vector<Eigen::Vector3d> pts_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
    std::uint32_t root_ = 0;
};

}  // namespace graspkde
