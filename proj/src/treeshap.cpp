#include "tsshap/treeshap.hpp"

#include <cmath>
#include <vector>

#include "tsshap/error.hpp"

namespace tsshap {

namespace {

/// One step of the feature path threaded through the recursion.
/// zero_fraction: share of cover-weighted paths reaching here when the
/// feature is absent from the coalition; one_fraction: 1 or 0 depending on
/// whether x follows the split when present; pweight: permutation weight of
/// the path prefix.
struct PathElement {
    int feature = -1;
    double zero_fraction = 1.0;
    double one_fraction = 1.0;
    double pweight = 1.0;
};

using Path = std::vector<PathElement>;

void extend_path(Path& path, double zero_fraction, double one_fraction, int feature) {
    path.push_back({feature, zero_fraction, one_fraction, path.empty() ? 1.0 : 0.0});
    const auto depth = static_cast<int>(path.size()) - 1;
    for (int i = depth - 1; i >= 0; --i) {
        path[static_cast<std::size_t>(i + 1)].pweight +=
            one_fraction * path[static_cast<std::size_t>(i)].pweight * (i + 1) /
            static_cast<double>(depth + 1);
        path[static_cast<std::size_t>(i)].pweight = zero_fraction *
                                                    path[static_cast<std::size_t>(i)].pweight *
                                                    (depth - i) / static_cast<double>(depth + 1);
    }
}

void unwind_path(Path& path, int index) {
    const auto depth = static_cast<int>(path.size()) - 1;
    const double one_fraction = path[static_cast<std::size_t>(index)].one_fraction;
    const double zero_fraction = path[static_cast<std::size_t>(index)].zero_fraction;
    double next_one_portion = path[static_cast<std::size_t>(depth)].pweight;

    for (int i = depth - 1; i >= 0; --i) {
        auto& el = path[static_cast<std::size_t>(i)];
        if (one_fraction != 0.0) {
            const double tmp = el.pweight;
            el.pweight = next_one_portion * (depth + 1) / static_cast<double>((i + 1) * one_fraction);
            next_one_portion = tmp - el.pweight * zero_fraction * (depth - i) /
                                         static_cast<double>(depth + 1);
        } else {
            el.pweight = el.pweight * (depth + 1) / (zero_fraction * (depth - i));
        }
    }
    for (int i = index; i < depth; ++i) {
        path[static_cast<std::size_t>(i)].feature = path[static_cast<std::size_t>(i + 1)].feature;
        path[static_cast<std::size_t>(i)].zero_fraction =
            path[static_cast<std::size_t>(i + 1)].zero_fraction;
        path[static_cast<std::size_t>(i)].one_fraction =
            path[static_cast<std::size_t>(i + 1)].one_fraction;
    }
    path.pop_back();
}

/// Total permutation weight the element at `index` would leave behind if
/// unwound; multiplying by (one - zero) fractions gives its phi share.
double unwound_path_sum(const Path& path, int index) {
    const auto depth = static_cast<int>(path.size()) - 1;
    const double one_fraction = path[static_cast<std::size_t>(index)].one_fraction;
    const double zero_fraction = path[static_cast<std::size_t>(index)].zero_fraction;
    double next_one_portion = path[static_cast<std::size_t>(depth)].pweight;
    double total = 0.0;

    if (one_fraction != 0.0) {
        for (int i = depth - 1; i >= 0; --i) {
            const double tmp =
                next_one_portion * (depth + 1) / static_cast<double>((i + 1) * one_fraction);
            total += tmp;
            next_one_portion = path[static_cast<std::size_t>(i)].pweight -
                               tmp * zero_fraction * (depth - i) / static_cast<double>(depth + 1);
        }
    } else {
        for (int i = depth - 1; i >= 0; --i) {
            total += path[static_cast<std::size_t>(i)].pweight * (depth + 1) /
                     (zero_fraction * (depth - i));
        }
    }
    return total;
}

struct TreeShapWalker {
    const Tree& tree;
    const Eigen::Ref<const Eigen::RowVectorXd>& x;
    Eigen::VectorXd& phi;

    void recurse(int node_index, Path path, double zero_fraction, double one_fraction,
                 int feature) {
        extend_path(path, zero_fraction, one_fraction, feature);
        const TreeNode& node = tree.nodes[static_cast<std::size_t>(node_index)];

        if (node.is_leaf()) {
            for (int i = 1; i < static_cast<int>(path.size()); ++i) {
                const double w = unwound_path_sum(path, i);
                const PathElement& el = path[static_cast<std::size_t>(i)];
                phi[el.feature] += w * (el.one_fraction - el.zero_fraction) * node.value;
            }
            return;
        }

        const TreeNode& left = tree.nodes[static_cast<std::size_t>(node.left)];
        const TreeNode& right = tree.nodes[static_cast<std::size_t>(node.right)];
        require(node.cover > 0.0 && left.cover > 0.0 && right.cover > 0.0, ErrorCode::MissingCover,
                "internal node without positive cover counts");
        require(std::abs(left.cover + right.cover - node.cover) <= 1e-9 * node.cover,
                ErrorCode::MissingCover, "child covers do not sum to the parent cover");

        const bool go_left = x[node.feature] <= node.threshold;
        const int hot = go_left ? node.left : node.right;
        const int cold = go_left ? node.right : node.left;
        const double hot_zero = tree.nodes[static_cast<std::size_t>(hot)].cover / node.cover;
        const double cold_zero = tree.nodes[static_cast<std::size_t>(cold)].cover / node.cover;

        // A feature met again deeper in the path: undo its earlier split and
        // fold the fractions into this one.
        double incoming_zero = 1.0;
        double incoming_one = 1.0;
        int found = -1;
        for (int i = 1; i < static_cast<int>(path.size()); ++i) {
            if (path[static_cast<std::size_t>(i)].feature == node.feature) {
                found = i;
                break;
            }
        }
        if (found >= 0) {
            incoming_zero = path[static_cast<std::size_t>(found)].zero_fraction;
            incoming_one = path[static_cast<std::size_t>(found)].one_fraction;
            unwind_path(path, found);
        }

        recurse(hot, path, hot_zero * incoming_zero, incoming_one, node.feature);
        recurse(cold, std::move(path), cold_zero * incoming_zero, 0.0, node.feature);
    }
};

/// Path-dependent expectation with the coalition `mask` fixed: features in
/// the mask route by x, the rest average children by cover share.
double expected_value_with_mask(const Tree& tree, int node_index,
                                const Eigen::Ref<const Eigen::RowVectorXd>& x,
                                std::uint32_t mask) {
    const TreeNode& node = tree.nodes[static_cast<std::size_t>(node_index)];
    if (node.is_leaf()) return node.value;
    if (mask & (1u << node.feature)) {
        const int next = x[node.feature] <= node.threshold ? node.left : node.right;
        return expected_value_with_mask(tree, next, x, mask);
    }
    const TreeNode& left = tree.nodes[static_cast<std::size_t>(node.left)];
    const TreeNode& right = tree.nodes[static_cast<std::size_t>(node.right)];
    return (left.cover * expected_value_with_mask(tree, node.left, x, mask) +
            right.cover * expected_value_with_mask(tree, node.right, x, mask)) /
           node.cover;
}

void validate_input(const TreeEnsemble& model, const Eigen::Ref<const Eigen::RowVectorXd>& x) {
    require(x.size() == model.feature_count(), ErrorCode::DimensionMismatch,
            "expected " + std::to_string(model.feature_count()) + " features, got " +
                std::to_string(x.size()));
    require(x.allFinite(), ErrorCode::NonFiniteFeature, "explained instance must be finite");
}

}  // namespace

ShapVector tree_shap(const TreeEnsemble& model, const Eigen::Ref<const Eigen::RowVectorXd>& x) {
    validate_input(model, x);
    ShapVector out;
    out.phi = Eigen::VectorXd::Zero(model.feature_count());
    for (const Tree& tree : model.trees()) {
        Eigen::VectorXd tree_phi = Eigen::VectorXd::Zero(model.feature_count());
        TreeShapWalker walker{tree, x, tree_phi};
        walker.recurse(0, {}, 1.0, 1.0, -1);
        out.phi += tree_phi;
    }
    out.phi *= model.learning_rate();
    out.base_value = model.expected_value();
    return out;
}

ShapVector brute_shapley(const TreeEnsemble& model, const Eigen::Ref<const Eigen::RowVectorXd>& x) {
    validate_input(model, x);
    const auto d = static_cast<int>(model.feature_count());
    require(d <= 12, ErrorCode::TooManyFeatures,
            "brute-force Shapley enumeration is limited to 12 features, got " + std::to_string(d));

    // v(S) for every coalition, shared across features.
    const std::uint32_t n_masks = 1u << d;
    std::vector<double> value(n_masks, 0.0);
    for (std::uint32_t mask = 0; mask < n_masks; ++mask) {
        double acc = 0.0;
        for (const Tree& tree : model.trees()) acc += expected_value_with_mask(tree, 0, x, mask);
        value[mask] = model.base_score() + model.learning_rate() * acc;
    }

    std::vector<double> factorial(static_cast<std::size_t>(d) + 1, 1.0);
    for (int i = 1; i <= d; ++i)
        factorial[static_cast<std::size_t>(i)] = factorial[static_cast<std::size_t>(i - 1)] * i;

    ShapVector out;
    out.phi = Eigen::VectorXd::Zero(d);
    out.base_value = value[0];
    for (int i = 0; i < d; ++i) {
        const std::uint32_t bit = 1u << i;
        double phi = 0.0;
        for (std::uint32_t mask = 0; mask < n_masks; ++mask) {
            if (mask & bit) continue;
            const int s = __builtin_popcount(mask);
            const double weight = factorial[static_cast<std::size_t>(s)] *
                                  factorial[static_cast<std::size_t>(d - s - 1)] /
                                  factorial[static_cast<std::size_t>(d)];
            phi += weight * (value[mask | bit] - value[mask]);
        }
        out.phi[i] = phi;
    }
    return out;
}

std::vector<ShapVector> shap_rows(const TreeEnsemble& model,
                                  const Eigen::Ref<const Eigen::MatrixXd>& X) {
    std::vector<ShapVector> out;
    out.reserve(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index r = 0; r < X.rows(); ++r) out.push_back(tree_shap(model, X.row(r)));
    return out;
}

std::vector<ShapVector> shap_matrix(const TreeEnsemble& model, const FeatureMatrix& X) {
    return shap_rows(model, X.rows);
}

}  // namespace tsshap
