#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "helpers.hpp"
#include "tsshap/error.hpp"
#include "tsshap/gbt.hpp"

using namespace tsshap;

namespace {

Eigen::MatrixXd column(std::initializer_list<double> xs) {
    Eigen::MatrixXd X(static_cast<Eigen::Index>(xs.size()), 1);
    Eigen::Index i = 0;
    for (double x : xs) X(i++, 0) = x;
    return X;
}

Eigen::VectorXd vec(std::initializer_list<double> ys) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(ys.size()));
    Eigen::Index i = 0;
    for (double v : ys) y[i++] = v;
    return y;
}

double training_mse(const TreeEnsemble& m, const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    return (m.predict_rows(X) - y).squaredNorm() / static_cast<double>(y.size());
}

}  // namespace

TEST_CASE("constant target collapses to the base score") {
    const Eigen::MatrixXd X = column({1, 2, 3, 4});
    const TreeEnsemble m = gbt_fit(X, vec({7, 7, 7, 7}), {});
    CHECK(m.trees().empty());
    Eigen::RowVectorXd x(1);
    x << 100.0;
    CHECK(m.predict(x) == 7.0);
    CHECK(m.expected_value() == 7.0);
}

TEST_CASE("step function: single stump splits at the midpoint") {
    const Eigen::MatrixXd X = column({0.0, 0.25, 0.75, 1.0});
    const Eigen::VectorXd y = vec({0, 0, 1, 1});
    GbtParams params;
    params.n_trees = 1;
    params.max_depth = 1;
    params.min_samples_leaf = 1;
    params.learning_rate = 1.0;
    const TreeEnsemble m = gbt_fit(X, y, params);

    REQUIRE(m.trees().size() == 1);
    const Tree& tree = m.trees()[0];
    REQUIRE(tree.nodes.size() == 3);
    CHECK(tree.nodes[0].feature == 0);
    CHECK(tree.nodes[0].threshold == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(training_mse(m, X, y) == doctest::Approx(0.0).epsilon(1e-24));

    Eigen::RowVectorXd x(1);
    x << 0.9;
    CHECK(m.predict(x) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("identical rows with different targets predict their mean") {
    Eigen::MatrixXd X(2, 1);
    X << 3.0, 3.0;
    const Eigen::VectorXd y = vec({1, 5});
    GbtParams params;
    params.n_trees = 4;
    params.min_samples_leaf = 1;
    params.learning_rate = 1.0;
    const TreeEnsemble m = gbt_fit(X, y, params);
    Eigen::RowVectorXd x(1);
    x << 3.0;
    CHECK(m.predict(x) == doctest::Approx(3.0).epsilon(1e-12));
    // training MSE equals the within-pair variance
    CHECK(training_mse(m, X, y) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("prediction contract") {
    TreeEnsemble empty(5.0, 0.3, {}, {"a", "b"});
    Eigen::RowVectorXd x(2);
    x << 1.0, 2.0;
    CHECK(empty.predict(x) == 5.0);

    Eigen::RowVectorXd wrong(3);
    wrong << 1, 2, 3;
    CHECK_THROWS_WITH_AS(empty.predict(wrong), doctest::Contains("DimensionMismatch"), Error);
    Eigen::RowVectorXd nan_x(2);
    nan_x << 1.0, std::nan("");
    CHECK_THROWS_WITH_AS(empty.predict(nan_x), doctest::Contains("NonFiniteFeature"), Error);
}

TEST_CASE("training loss is non-increasing per round") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> noise(0.0, 0.3);
    Eigen::MatrixXd X(60, 3);
    Eigen::VectorXd y(60);
    for (int i = 0; i < 60; ++i) {
        for (int f = 0; f < 3; ++f) X(i, f) = noise(rng);
        y[i] = 2.0 * X(i, 0) - X(i, 1) + 0.5 * noise(rng);
    }
    GbtParams params;
    params.learning_rate = 0.2;
    double prev = std::numeric_limits<double>::max();
    for (int rounds = 1; rounds <= 12; ++rounds) {
        params.n_trees = rounds;
        const double mse = training_mse(gbt_fit(X, y, params), X, y);
        CHECK(mse <= prev + 1e-12);
        prev = mse;
    }
}

TEST_CASE("conservation of the mean at learning rate 1") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2, 2);
    Eigen::MatrixXd X(24, 2);
    Eigen::VectorXd y(24);
    for (int i = 0; i < 24; ++i) {
        X(i, 0) = u(rng);
        X(i, 1) = u(rng);
        y[i] = X(i, 0) * X(i, 1) + u(rng);
    }
    GbtParams params;
    params.learning_rate = 1.0;
    params.n_trees = 30;
    const TreeEnsemble m = gbt_fit(X, y, params);
    CHECK(m.predict_rows(X).mean() == doctest::Approx(y.mean()).epsilon(1e-9));
}

TEST_CASE("determinism under a fixed seed") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0, 1);
    Eigen::MatrixXd X(40, 4);
    Eigen::VectorXd y(40);
    for (int i = 0; i < 40; ++i) {
        for (int f = 0; f < 4; ++f) X(i, f) = u(rng);
        y[i] = X(i, 0) + u(rng);
    }
    GbtParams params;
    params.n_trees = 25;
    params.subsample_fraction = 0.7;
    params.seed = 99;
    const TreeEnsemble a = gbt_fit(X, y, params);
    const TreeEnsemble b = gbt_fit(X, y, params);
    CHECK(a.to_json().dump() == b.to_json().dump());

    params.seed = 100;
    const TreeEnsemble c = gbt_fit(X, y, params);
    CHECK(a.to_json().dump() != c.to_json().dump());
}

TEST_CASE("tie-breaking prefers the lowest feature index") {
    // both features split {0,1} -> {0},{1} with identical gain
    Eigen::MatrixXd X(2, 2);
    X << 0, 1, 1, 0;
    const Eigen::VectorXd y = vec({0, 1});
    GbtParams params;
    params.n_trees = 1;
    params.max_depth = 1;
    params.min_samples_leaf = 1;
    params.learning_rate = 1.0;
    const TreeEnsemble m = gbt_fit(X, y, params);
    REQUIRE(!m.trees().empty());
    CHECK(m.trees()[0].nodes[0].feature == 0);
}

TEST_CASE("covers track sample counts down the tree") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    Eigen::MatrixXd X(50, 2);
    Eigen::VectorXd y(50);
    for (int i = 0; i < 50; ++i) {
        X(i, 0) = u(rng);
        X(i, 1) = u(rng);
        y[i] = X(i, 0) > 0.5 ? u(rng) : -u(rng);
    }
    GbtParams params;
    params.n_trees = 5;
    const TreeEnsemble m = gbt_fit(X, y, params);
    for (const Tree& t : m.trees()) {
        CHECK(t.nodes[0].cover == 50.0);
        for (const TreeNode& n : t.nodes) {
            if (!n.is_leaf()) {
                CHECK(n.cover == t.nodes[static_cast<std::size_t>(n.left)].cover +
                                     t.nodes[static_cast<std::size_t>(n.right)].cover);
            } else {
                CHECK(n.cover >= params.min_samples_leaf);
            }
        }
        CHECK(t.max_depth() <= params.max_depth);
    }
}

TEST_CASE("json round trip preserves predictions bit for bit") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    Eigen::MatrixXd X(30, 3);
    Eigen::VectorXd y(30);
    for (int i = 0; i < 30; ++i) {
        for (int f = 0; f < 3; ++f) X(i, f) = u(rng);
        y[i] = std::sin(X(i, 0)) + u(rng) * 0.1;
    }
    GbtParams params;
    params.n_trees = 12;
    const TreeEnsemble m = gbt_fit(X, y, params, {"a", "b", "c"});
    const TreeEnsemble back = TreeEnsemble::from_json(m.to_json());
    CHECK(back.feature_names() == m.feature_names());
    for (int i = 0; i < 30; ++i) CHECK(back.predict(X.row(i)) == m.predict(X.row(i)));
}

TEST_CASE("fit rejects bad input") {
    CHECK_THROWS_WITH_AS(gbt_fit(Eigen::MatrixXd(1, 1), Eigen::VectorXd::Zero(1), {}),
                         doctest::Contains("EmptyTraining"), Error);
    CHECK_THROWS_WITH_AS(gbt_fit(Eigen::MatrixXd::Zero(3, 1), Eigen::VectorXd::Zero(2), {}),
                         doctest::Contains("LengthMismatch"), Error);
    GbtParams bad;
    bad.learning_rate = 0.0;
    CHECK_THROWS_AS(gbt_fit(Eigen::MatrixXd::Zero(3, 1), Eigen::VectorXd::Zero(3), bad), Error);
}
