#include "tsshap/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "tsshap/error.hpp"

namespace tsshap {

double Tree::predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    int i = 0;
    while (!nodes[static_cast<std::size_t>(i)].is_leaf()) {
        const TreeNode& n = nodes[static_cast<std::size_t>(i)];
        i = x[n.feature] <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(i)].value;
}

double Tree::expectation() const {
    double acc = 0.0;
    const double total = nodes[0].cover;
    for (const TreeNode& n : nodes)
        if (n.is_leaf()) acc += n.value * n.cover;
    return acc / total;
}

int Tree::max_depth() const {
    // iterative depth over the flat layout
    std::vector<std::pair<int, int>> stack{{0, 0}};
    int depth = 0;
    while (!stack.empty()) {
        auto [i, d] = stack.back();
        stack.pop_back();
        depth = std::max(depth, d);
        const TreeNode& n = nodes[static_cast<std::size_t>(i)];
        if (!n.is_leaf()) {
            stack.push_back({n.left, d + 1});
            stack.push_back({n.right, d + 1});
        }
    }
    return depth;
}

void GbtParams::validate() const {
    require(n_trees >= 1, ErrorCode::ConfigInvalid, "n_trees must be >= 1");
    require(max_depth >= 1, ErrorCode::ConfigInvalid, "max_depth must be >= 1");
    require(min_samples_leaf >= 1, ErrorCode::ConfigInvalid, "min_samples_leaf must be >= 1");
    require(learning_rate > 0.0 && learning_rate <= 1.0, ErrorCode::ConfigInvalid,
            "learning_rate must be in (0, 1]");
    require(subsample_fraction > 0.0 && subsample_fraction <= 1.0, ErrorCode::ConfigInvalid,
            "subsample_fraction must be in (0, 1]");
}

TreeEnsemble::TreeEnsemble(double base_score, double learning_rate, std::vector<Tree> trees,
                           std::vector<std::string> feature_names)
    : base_score_(base_score),
      learning_rate_(learning_rate),
      trees_(std::move(trees)),
      feature_names_(std::move(feature_names)) {}

double TreeEnsemble::predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    require(x.size() == feature_count(), ErrorCode::DimensionMismatch,
            "expected " + std::to_string(feature_count()) + " features, got " +
                std::to_string(x.size()));
    require(x.allFinite(), ErrorCode::NonFiniteFeature, "feature vector has non-finite values");
    double acc = 0.0;
    for (const Tree& t : trees_) acc += t.predict(x);
    return base_score_ + learning_rate_ * acc;
}

Eigen::VectorXd TreeEnsemble::predict_rows(const Eigen::Ref<const Eigen::MatrixXd>& X) const {
    Eigen::VectorXd out(X.rows());
    for (Eigen::Index r = 0; r < X.rows(); ++r) out[r] = predict(X.row(r));
    return out;
}

double TreeEnsemble::expected_value() const {
    double acc = 0.0;
    for (const Tree& t : trees_) acc += t.expectation();
    return base_score_ + learning_rate_ * acc;
}

nlohmann::json TreeEnsemble::to_json() const {
    nlohmann::json j;
    j["base_score"] = base_score_;
    j["learning_rate"] = learning_rate_;
    j["feature_names"] = feature_names_;
    nlohmann::json trees = nlohmann::json::array();
    for (const Tree& t : trees_) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const TreeNode& n : t.nodes) {
            nodes.push_back({{"feature", n.feature},
                             {"threshold", n.threshold},
                             {"left", n.left},
                             {"right", n.right},
                             {"value", n.value},
                             {"cover", n.cover}});
        }
        trees.push_back({{"nodes", std::move(nodes)}});
    }
    j["trees"] = std::move(trees);
    return j;
}

TreeEnsemble TreeEnsemble::from_json(const nlohmann::json& j) {
    std::vector<Tree> trees;
    for (const auto& tj : j.at("trees")) {
        Tree t;
        for (const auto& nj : tj.at("nodes")) {
            TreeNode n;
            n.feature = nj.at("feature").get<int>();
            n.threshold = nj.at("threshold").get<double>();
            n.left = nj.at("left").get<int>();
            n.right = nj.at("right").get<int>();
            n.value = nj.at("value").get<double>();
            n.cover = nj.at("cover").get<double>();
            t.nodes.push_back(n);
        }
        trees.push_back(std::move(t));
    }
    return TreeEnsemble(j.at("base_score").get<double>(), j.at("learning_rate").get<double>(),
                        std::move(trees), j.at("feature_names").get<std::vector<std::string>>());
}

void TreeEnsemble::save(const std::string& path) const {
    std::ofstream out(path);
    require(out.good(), ErrorCode::InputUnreadable, "cannot write '" + path + "'");
    out << to_json().dump(2) << "\n";
}

TreeEnsemble TreeEnsemble::load(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::InputUnreadable, "cannot open '" + path + "'");
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

namespace {

struct SplitCandidate {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

/// Best exact split for the rows in `idx`: maximize
/// sum_L^2/n_L + sum_R^2/n_R (equivalent to SSE reduction for squared loss).
SplitCandidate find_best_split(const Eigen::Ref<const Eigen::MatrixXd>& X,
                               const Eigen::VectorXd& residual, const std::vector<int>& idx,
                               int min_samples_leaf) {
    const auto n = static_cast<int>(idx.size());
    SplitCandidate best;
    if (n < 2 * min_samples_leaf) return best;

    double total_sum = 0.0;
    for (int i : idx) total_sum += residual[i];
    const double parent_score = total_sum * total_sum / n;

    std::vector<std::pair<double, double>> vals(static_cast<std::size_t>(n));  // (x, r)
    for (int f = 0; f < X.cols(); ++f) {
        for (std::size_t k = 0; k < idx.size(); ++k)
            vals[k] = {X(idx[k], f), residual[idx[k]]};
        std::sort(vals.begin(), vals.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (vals.front().first == vals.back().first) continue;

        double left_sum = 0.0;
        for (int i = 0; i + 1 < n; ++i) {
            left_sum += vals[static_cast<std::size_t>(i)].second;
            const double v = vals[static_cast<std::size_t>(i)].first;
            const double v_next = vals[static_cast<std::size_t>(i + 1)].first;
            if (v == v_next) continue;
            const int n_left = i + 1;
            const int n_right = n - n_left;
            if (n_left < min_samples_leaf || n_right < min_samples_leaf) continue;
            const double right_sum = total_sum - left_sum;
            const double gain =
                left_sum * left_sum / n_left + right_sum * right_sum / n_right - parent_score;
            // strict improvement keeps the lowest feature / lowest threshold on ties
            if (gain > 0.0 && (!best.found || gain > best.gain)) {
                best.found = true;
                best.feature = f;
                best.threshold = 0.5 * (v + v_next);
                best.gain = gain;
            }
        }
    }
    return best;
}

int grow_tree(Tree& tree, const Eigen::Ref<const Eigen::MatrixXd>& X,
              const Eigen::VectorXd& residual, std::vector<int>&& idx, int depth,
              const GbtParams& params) {
    double mean = 0.0;
    for (int i : idx) mean += residual[i];
    mean /= static_cast<double>(idx.size());

    const int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[static_cast<std::size_t>(node_id)].cover = static_cast<double>(idx.size());
    tree.nodes[static_cast<std::size_t>(node_id)].value = mean;

    if (depth >= params.max_depth) return node_id;
    const SplitCandidate split = find_best_split(X, residual, idx, params.min_samples_leaf);
    if (!split.found) return node_id;

    std::vector<int> left_idx, right_idx;
    left_idx.reserve(idx.size());
    right_idx.reserve(idx.size());
    for (int i : idx) {
        (X(i, split.feature) <= split.threshold ? left_idx : right_idx).push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();

    const int left = grow_tree(tree, X, residual, std::move(left_idx), depth + 1, params);
    const int right = grow_tree(tree, X, residual, std::move(right_idx), depth + 1, params);
    TreeNode& node = tree.nodes[static_cast<std::size_t>(node_id)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left;
    node.right = right;
    node.value = 0.0;
    return node_id;
}

/// Deterministic subsample without replacement (plain modulo draw; the bias
/// is irrelevant at these sizes and it keeps results identical across
/// standard libraries).
std::vector<int> draw_subsample(int n, double fraction, std::mt19937_64& rng) {
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    if (fraction >= 1.0) return all;
    const int k = std::max(1, static_cast<int>(std::floor(fraction * n)));
    for (int i = 0; i < k; ++i) {
        const auto j = i + static_cast<int>(rng() % static_cast<std::uint64_t>(n - i));
        std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
    }
    all.resize(static_cast<std::size_t>(k));
    std::sort(all.begin(), all.end());
    return all;
}

}  // namespace

TreeEnsemble gbt_fit(const Eigen::Ref<const Eigen::MatrixXd>& X,
                     const Eigen::Ref<const Eigen::VectorXd>& y, const GbtParams& params,
                     std::vector<std::string> feature_names) {
    params.validate();
    require(X.rows() == y.size(), ErrorCode::LengthMismatch,
            "row count " + std::to_string(X.rows()) + " != target length " +
                std::to_string(y.size()));
    require(X.rows() >= 2, ErrorCode::EmptyTraining, "need at least 2 training rows");
    require(X.allFinite() && y.allFinite(), ErrorCode::NonFiniteFeature,
            "training data must be finite");
    if (feature_names.empty()) {
        for (Eigen::Index f = 0; f < X.cols(); ++f)
            feature_names.push_back("feature_" + std::to_string(f));
    }
    require(static_cast<Eigen::Index>(feature_names.size()) == X.cols(),
            ErrorCode::DimensionMismatch, "feature name count != column count");

    const double base_score = y.mean();
    // Degenerate constant target: nothing to boost.
    if ((y.array() == y[0]).all()) {
        return TreeEnsemble(y[0], params.learning_rate, {}, std::move(feature_names));
    }

    const auto n = static_cast<int>(X.rows());
    Eigen::VectorXd prediction = Eigen::VectorXd::Constant(n, base_score);
    std::mt19937_64 rng(params.seed);
    std::vector<Tree> trees;
    trees.reserve(static_cast<std::size_t>(params.n_trees));

    for (int round = 0; round < params.n_trees; ++round) {
        const Eigen::VectorXd residual = y - prediction;
        if (residual.cwiseAbs().maxCoeff() == 0.0) break;
        std::vector<int> idx = draw_subsample(n, params.subsample_fraction, rng);
        Tree tree;
        grow_tree(tree, X, residual, std::move(idx), 0, params);
        for (int i = 0; i < n; ++i)
            prediction[i] += params.learning_rate * tree.predict(X.row(i));
        trees.push_back(std::move(tree));
    }
    return TreeEnsemble(base_score, params.learning_rate, std::move(trees),
                        std::move(feature_names));
}

double gbt_predict(const TreeEnsemble& model, const Eigen::Ref<const Eigen::RowVectorXd>& x) {
    return model.predict(x);
}

}  // namespace tsshap
