#include "doctest.h"

#include <Eigen/Dense>

#include "oracles.hpp"
#include "subsel/error.hpp"
#include "subsel/linalg.hpp"

using namespace subsel;
using namespace subsel::linalg;
using oracle::q;

namespace {

TargetMatrix make(std::size_t r, std::size_t c, std::vector<double> v) {
    return TargetMatrix::from_row_major(r, c, v);
}

double frame_trace(const IsotropicFrame& f) {
    double t = 0.0;
    for (std::size_t i = 0; i < f.dim(); ++i)
        for (std::size_t j = 0; j < f.count(); ++j) t += f.at(i, j) * f.at(i, j);
    return t;
}

} // namespace

TEST_CASE("thin svd of the identity") {
    const auto a = make(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
    const auto svd = thin_svd(a);
    CHECK(svd.sigma.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(svd.sigma(i) == doctest::Approx(1.0).epsilon(1e-14));
    // U and Y may carry compensating signs; their product must be I.
    const Eigen::MatrixXd uy = svd.u * to_eigen(svd.frame.columns);
    CHECK((uy - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(svd.frame.gram_residual <= 1e-14);
}

TEST_CASE("thin svd reconstructs a scaled frame") {
    const auto y = random_isotropic_frame(2, 4, 3);
    Eigen::MatrixXd a = Eigen::Vector2d(2.0, 1.0).asDiagonal() * to_eigen(y.columns);
    const auto target = TargetMatrix::from_matrix(a);
    const auto svd = thin_svd(target);
    const Eigen::MatrixXd back = svd.u * svd.sigma.asDiagonal() * to_eigen(svd.frame.columns);
    CHECK((back - a).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("frame reduction lower bound holds for every 3-subset of a 3x6 Gaussian") {
    const auto a = random_gaussian_matrix(3, 6, 42);
    const auto svd = thin_svd(a);
    CHECK(svd.frame.gram_residual <= 1e-10);
    const double s = a.sigma_min();
    oracle::combinations(6, 3, [&](const std::vector<std::size_t>& cols) {
        const auto subset = SubsetIndex::from(cols, 6);
        const double ys = sigma_min_sub(svd.frame, subset);
        const double as = sigma_min_sub(a, subset);
        CHECK(ys * ys * s * s <= as * as + 1e-10);
    });
}

TEST_CASE("reduction inequality on random shapes") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const std::size_t n = 1 + seed % 4;
        const std::size_t m = n + 1 + seed % (9 - n);
        const auto a = random_gaussian_matrix(n, m, 100 + seed);
        const auto y = thin_svd(a).frame;
        const double s2 = a.sigma_min() * a.sigma_min();
        for (std::size_t k = 1; k <= m; ++k)
            oracle::combinations(m, k, [&](const std::vector<std::size_t>& cols) {
                const auto subset = SubsetIndex::from(cols, m);
                const double ys = sigma_min_sub(y, subset);
                const double as = sigma_min_sub(a, subset);
                CHECK(ys * ys * s2 <= as * as + 1e-10);
            });
    }
}

TEST_CASE("sigma_min_sub small cases") {
    const auto id = make(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1});
    CHECK(sigma_min_sub(id, SubsetIndex::from({0, 1}, 3)) == doctest::Approx(1.0).epsilon(1e-14));

    const auto wide = make(2, 3, {1, 0, 0, 0, 2, 0});
    CHECK(sigma_min_sub(wide, SubsetIndex::full(3)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("sigma_min_sub agrees with an independent eigensolver") {
    const auto a = random_gaussian_matrix(3, 7, 7);
    const std::vector<std::size_t> cols{1, 4, 6};
    Eigen::MatrixXd block(3, 3);
    for (int j = 0; j < 3; ++j) block.col(j) = a.entries().col(static_cast<Eigen::Index>(cols[j]));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block.transpose() * block);
    const double expected = std::sqrt(es.eigenvalues()(0));
    CHECK(std::abs(sigma_min_sub(a, SubsetIndex::from(cols, 7)) - expected) <= 1e-10);
    CHECK(std::abs(oracle::sigma_min_jacobi(a.entries(), cols, 3) - expected) <= 1e-10);
}

TEST_CASE("sigma_min_sub on the full set is the smallest singular value") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto a = random_gaussian_matrix(3, 5 + seed, seed);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.entries());
        CHECK(std::abs(sigma_min_sub(a, SubsetIndex::full(a.cols())) - svd.singularValues()(2)) <= 1e-10);
        CHECK(std::abs(a.sigma_min() - svd.singularValues()(2)) <= 1e-10);
    }
}

TEST_CASE("rational Cayley frames") {
    SUBCASE("zero skew gives the leading rows of the identity") {
        const DenseMatrix<Rational> skew(4, 4);
        const auto f = rational_isotropic_frame(skew, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 4; ++j) CHECK(f.at(i, j) == Rational(i == j ? 1 : 0));
        CHECK(f.gram_residual == 0);
    }
    SUBCASE("hand computed 2x2 transform") {
        DenseMatrix<Rational> skew(2, 2);
        skew(0, 1) = q(1, 2);
        skew(1, 0) = q(-1, 2);
        const auto f = rational_isotropic_frame(skew, 1);
        // (I - S)(I + S)^{-1} with det(I + S) = 5/4.
        CHECK(f.at(0, 0) == q(3, 5));
        CHECK(f.at(0, 1) == q(-4, 5));
        CHECK(f.at(0, 0) * f.at(0, 0) + f.at(0, 1) * f.at(0, 1) == 1);
    }
    SUBCASE("random skew is exactly isotropic") {
        const auto f = rational_isotropic_frame(random_rational_skew(5, 3, 5, 1), 3);
        CHECK(f.gram_residual == 0);
        const auto g = f.columns * f.columns.transpose();
        CHECK(g == DenseMatrix<Rational>::identity(3));
        Rational trace = 0;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 5; ++j) trace += f.at(i, j) * f.at(i, j);
        CHECK(trace == 3);
    }
}

TEST_CASE("random isotropic frames") {
    const auto one = random_isotropic_frame(1, 1, 0);
    CHECK(std::abs(std::abs(one.at(0, 0)) - 1.0) <= 1e-15);
    CHECK(one.gram_residual <= 1e-15);

    const auto f = random_isotropic_frame(3, 8, 42);
    const Eigen::MatrixXd y = to_eigen(f.columns);
    CHECK((y * y.transpose() - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(std::abs(frame_trace(f) - 3.0) <= 1e-9);

    const auto again = random_isotropic_frame(3, 8, 42);
    CHECK(again.columns.data() == f.columns.data());
}

TEST_CASE("rank deficient targets use the effective rank") {
    // Third row repeats the first, so rank 2.
    const auto a = make(3, 4, {1, 2, 0, 1, 0, 1, 1, 3, 1, 2, 0, 1});
    CHECK(a.rank() == 2);
    const auto svd = thin_svd(a);
    CHECK(svd.frame.dim() == 2);
    CHECK(svd.frame.gram_residual <= 1e-12);
    Eigen::JacobiSVD<Eigen::MatrixXd> oracle_svd(a.entries());
    CHECK(std::abs(a.sigma_min() - oracle_svd.singularValues()(1)) <= 1e-10);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(make(2, 2, {1, 2, 3}), InputError);
    CHECK_THROWS_AS(make(1, 2, {1, std::nan("")}), InputError);
    CHECK_THROWS_AS(thin_svd(make(2, 2, {0, 0, 0, 0})), InputError);
    CHECK_THROWS_AS(SubsetIndex::from({1, 1}, 3), InputError);
    CHECK_THROWS_AS(SubsetIndex::from({3}, 3), InputError);
}
