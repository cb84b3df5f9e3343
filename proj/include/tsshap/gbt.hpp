#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace tsshap {

/// Flat tree node. feature < 0 marks a leaf. Internal nodes route
/// x[feature] <= threshold to `left`. cover is the training-sample count,
/// kept because the SHAP recursion weights branches by it.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
    double cover = 0.0;

    bool is_leaf() const { return feature < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    double predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
    /// Cover-weighted mean over leaves (model output with nothing fixed).
    double expectation() const;
    int max_depth() const;
};

struct GbtParams {
    int n_trees = 200;
    int max_depth = 4;
    int min_samples_leaf = 3;
    double learning_rate = 0.1;
    double subsample_fraction = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Additive model: prediction(x) = base_score + learning_rate * sum_t tree_t(x).
class TreeEnsemble {
public:
    TreeEnsemble() = default;
    TreeEnsemble(double base_score, double learning_rate, std::vector<Tree> trees,
                 std::vector<std::string> feature_names);

    double base_score() const { return base_score_; }
    double learning_rate() const { return learning_rate_; }
    const std::vector<Tree>& trees() const { return trees_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    Eigen::Index feature_count() const { return static_cast<Eigen::Index>(feature_names_.size()); }

    double predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
    Eigen::VectorXd predict_rows(const Eigen::Ref<const Eigen::MatrixXd>& X) const;
    /// base_score + learning_rate * sum of tree expectations.
    double expected_value() const;

    nlohmann::json to_json() const;
    static TreeEnsemble from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static TreeEnsemble load(const std::string& path);

private:
    double base_score_ = 0.0;
    double learning_rate_ = 1.0;
    std::vector<Tree> trees_;
    std::vector<std::string> feature_names_;
};

/// Least-squares boosting with exact greedy splits (midpoints between sorted
/// distinct values, variance-reduction gain, ties broken toward the lowest
/// feature index then lowest threshold). A constant target yields a
/// base-score-only ensemble.
TreeEnsemble gbt_fit(const Eigen::Ref<const Eigen::MatrixXd>& X,
                     const Eigen::Ref<const Eigen::VectorXd>& y, const GbtParams& params,
                     std::vector<std::string> feature_names = {});

double gbt_predict(const TreeEnsemble& model, const Eigen::Ref<const Eigen::RowVectorXd>& x);

}  // namespace tsshap
