#pragma once

#include <Eigen/Dense>

#include "tsshap/features.hpp"
#include "tsshap/gbt.hpp"

namespace tsshap {

/// Additive attribution of one prediction: base_value + phi.sum() equals the
/// model output for the explained instance.
struct ShapVector {
    Eigen::VectorXd phi;
    double base_value = 0.0;

    double reconstructed() const { return base_value + phi.sum(); }
};

/// Exact per-feature Shapley values under the tree-path-dependent conditional
/// expectation (node covers define branch probabilities). Polynomial time via
/// the path extend/unwind recursion; attributions sum across trees.
ShapVector tree_shap(const TreeEnsemble& model, const Eigen::Ref<const Eigen::RowVectorXd>& x);

/// Reference oracle: enumerates all feature subsets of the same value
/// function. Test-support only; refuses d > 12.
ShapVector brute_shapley(const TreeEnsemble& model, const Eigen::Ref<const Eigen::RowVectorXd>& x);

/// Row-wise tree_shap, preserving row order.
std::vector<ShapVector> shap_matrix(const TreeEnsemble& model, const FeatureMatrix& X);
std::vector<ShapVector> shap_rows(const TreeEnsemble& model,
                                  const Eigen::Ref<const Eigen::MatrixXd>& X);

}  // namespace tsshap
