#include "oracles.hpp"

#include "orthotensor/linalg.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace orthotensor;

namespace {

DenseMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    DenseMatrix a(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            a(i, j) = n(rng);
    return a;
}

oracle::Mat to_oracle(const DenseMatrix& a)
{
    oracle::Mat m(static_cast<std::size_t>(a.rows()), oracle::Vec(static_cast<std::size_t>(a.cols())));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a(i, j);
    return m;
}

RealVector unit_random(Eigen::Index d, std::uint64_t seed)
{
    auto v = oracle::random_vector(static_cast<int>(d), seed, true);
    return Eigen::Map<RealVector>(v.data(), d);
}

double orthonormality_defect(const DenseMatrix& q)
{
    return (q.transpose() * q - DenseMatrix::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
}

} // namespace

TEST(TruncatedSvd, RankOneOuterProduct)
{
    RealVector u = unit_random(3, 1);
    RealVector v = unit_random(5, 2) * 2.5;
    const RealVector left = kron_power(u, 2);
    const DenseMatrix a = left * v.transpose();
    for (auto method : {SvdMethod::gram, SvdMethod::direct, SvdMethod::automatic}) {
        auto res = truncated_left_svd(a, 1, method);
        EXPECT_NEAR(res.singular_values[0], v.norm(), 1e-12);
        EXPECT_NEAR(std::abs(res.left_vectors.col(0).dot(left)), 1.0, 1e-12);
        EXPECT_NEAR(res.gap_next, 0.0, 1e-7);
    }
}

TEST(TruncatedSvd, ZeroMatrix)
{
    for (auto method : {SvdMethod::gram, SvdMethod::direct}) {
        auto res = truncated_left_svd(DenseMatrix::Zero(4, 6), 1, method);
        EXPECT_EQ(res.singular_values[0], 0.0);
        EXPECT_EQ(res.gap_next, 0.0);
        EXPECT_NEAR(res.left_vectors.col(0).norm(), 1.0, 1e-12);
    }
}

TEST(TruncatedSvd, MatchesJacobiOracleOn9x27)
{
    const DenseMatrix a = random_matrix(9, 27, 3);
    const auto expected = oracle::jacobi_singular_values(to_oracle(a));
    for (auto method : {SvdMethod::gram, SvdMethod::direct}) {
        auto res = truncated_left_svd(a, 3, method);
        for (int i = 0; i < 3; ++i)
            EXPECT_NEAR(res.singular_values[i], expected[i], 1e-9 * expected[0]);
        EXPECT_NEAR(res.gap_next, expected[3], 1e-9 * expected[0]);
        EXPECT_LT(orthonormality_defect(res.left_vectors), 1e-10);
        // Each a_i satisfies A A^T a_i = mu_i^2 a_i.
        for (int i = 0; i < 3; ++i) {
            const RealVector ai = res.left_vectors.col(i);
            const double mu2 = res.singular_values[i] * res.singular_values[i];
            EXPECT_LT((a * (a.transpose() * ai) - mu2 * ai).norm(), 1e-9 * mu2);
        }
    }
}

TEST(TruncatedSvd, RejectsBadArguments)
{
    const DenseMatrix a = random_matrix(3, 4, 4);
    EXPECT_THROW(truncated_left_svd(a, 0), std::invalid_argument);
    EXPECT_THROW(truncated_left_svd(a, 4), std::invalid_argument);
    DenseMatrix bad = a;
    bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(truncated_left_svd(bad, 1), numeric_error);
}

TEST(TruncatedSvd, FullRankReconstruction)
{
    const DenseMatrix a = random_matrix(6, 10, 5);
    for (auto method : {SvdMethod::gram, SvdMethod::direct}) {
        auto res = truncated_left_svd(a, 6, method);
        DenseMatrix rebuilt = DenseMatrix::Zero(6, 10);
        for (int i = 0; i < 6; ++i)
            rebuilt += res.singular_values[i] * res.left_vectors.col(i) * res.right_vectors.col(i).transpose();
        EXPECT_LT((rebuilt - a).norm(), 1e-9 * a.norm());
    }
}

TEST(TruncatedSvd, SingularValuesSortedAndSignCanonical)
{
    const DenseMatrix a = random_matrix(8, 40, 6);
    auto res = truncated_left_svd(a, 5);
    for (int i = 0; i + 1 < 5; ++i)
        EXPECT_GE(res.singular_values[i], res.singular_values[i + 1]);
    EXPECT_GE(res.singular_values[4], res.gap_next);
    for (int i = 0; i < 5; ++i) {
        RealVector c = res.left_vectors.col(i);
        canonicalize_sign(c);
        EXPECT_EQ(c, RealVector(res.left_vectors.col(i)));
    }
}

TEST(TruncatedSvd, WeylStability)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const DenseMatrix a = random_matrix(5, 9, 100 + seed);
        const DenseMatrix e = 1e-2 * random_matrix(5, 9, 200 + seed);
        const double spectral_e = singular_values(e).front();
        auto sa = singular_values(a);
        auto sb = singular_values(a + e);
        for (std::size_t i = 0; i < sa.size(); ++i)
            EXPECT_LE(std::abs(sa[i] - sb[i]), spectral_e + 1e-12);
    }
}

TEST(TopEigAbs, DiagonalPicksNegativeEnd)
{
    DenseMatrix m = DenseMatrix::Zero(2, 2);
    m(0, 0) = 3.0;
    m(1, 1) = -5.0;
    auto e = top_eig_abs(m);
    EXPECT_DOUBLE_EQ(e.value, -5.0);
    EXPECT_NEAR(e.vector[0], 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(e.vector[1], 1.0);
}

TEST(TopEigAbs, Projector)
{
    RealVector u = unit_random(5, 7);
    auto e = top_eig_abs(u * u.transpose());
    EXPECT_NEAR(e.value, 1.0, 1e-12);
    EXPECT_NEAR(std::abs(e.vector.dot(u)), 1.0, 1e-12);
}

TEST(TopEigAbs, MatchesJacobiOracle)
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        DenseMatrix b = random_matrix(6, 6, 300 + seed);
        DenseMatrix m = b + b.transpose();
        auto [values, vectors] = oracle::jacobi_eigen(to_oracle(m));
        std::size_t best = 0;
        for (std::size_t i = 1; i < values.size(); ++i)
            if (std::abs(values[i]) > std::abs(values[best]))
                best = i;
        auto e = top_eig_abs(m);
        EXPECT_NEAR(e.value, values[best], 1e-10 * std::abs(values[best]));
        double dot = 0.0;
        for (std::size_t i = 0; i < 6; ++i)
            dot += vectors[i][best] * e.vector[static_cast<Eigen::Index>(i)];
        EXPECT_NEAR(std::abs(dot), 1.0, 1e-10);
        EXPECT_NEAR(e.vector.norm(), 1.0, 1e-12);
    }
}

TEST(TopEigAbs, SymmetrizesInput)
{
    DenseMatrix m(2, 2);
    m << 1.0, 4.0, 0.0, 1.0; // symmetric part has eigenvalues 3 and -1
    auto e = top_eig_abs(m);
    EXPECT_NEAR(e.value, 3.0, 1e-12);
}

TEST(TopEigAbs, RayleighBoundSampling)
{
    DenseMatrix b = random_matrix(7, 7, 9);
    DenseMatrix m = b + b.transpose();
    const double top = std::abs(top_eig_abs(m).value);
    for (int i = 0; i < 100; ++i) {
        RealVector x = unit_random(7, 1000 + static_cast<std::uint64_t>(i));
        EXPECT_GE(top + 1e-12, std::abs(x.dot(m * x)));
    }
}

TEST(TopEigAbs, Errors)
{
    EXPECT_THROW(top_eig_abs(DenseMatrix::Zero(2, 3)), std::invalid_argument);
    DenseMatrix m = DenseMatrix::Identity(2, 2);
    m(0, 1) = std::numeric_limits<double>::infinity();
    EXPECT_THROW(top_eig_abs(m), numeric_error);
}

TEST(CanonicalizeSign, FirstSignificantCoordinatePositive)
{
    RealVector v(3);
    v << 1e-14, -2.0, 1.0;
    canonicalize_sign(v);
    EXPECT_GT(v[1], 0.0);
    RealVector z = RealVector::Zero(3);
    canonicalize_sign(z);
    EXPECT_EQ(z.norm(), 0.0);
}

TEST(Orthonormalize, DuplicateCollapses)
{
    std::vector<RealVector> in{RealVector::Unit(3, 0), RealVector::Unit(3, 0)};
    auto out = orthonormalize(in);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0], RealVector::Unit(3, 0));
}

TEST(Orthonormalize, OrthonormalInputUnchanged)
{
    Eigen::HouseholderQR<DenseMatrix> qr(random_matrix(6, 4, 10));
    DenseMatrix q = qr.householderQ() * DenseMatrix::Identity(6, 4);
    std::vector<RealVector> in;
    for (int j = 0; j < 4; ++j)
        in.emplace_back(q.col(j));
    auto out = orthonormalize(in);
    ASSERT_EQ(out.size(), 4u);
    for (int j = 0; j < 4; ++j)
        EXPECT_LT((out[j] - in[j]).norm(), 1e-12);
}

TEST(Orthonormalize, GramIdentityAndSpanContainsInputs)
{
    RealVector a(3), b(3);
    a << 1, 1, 0;
    b << 1, 0, 0;
    auto out = orthonormalize(std::vector<RealVector>{a, b});
    ASSERT_EQ(out.size(), 2u);
    DenseMatrix q(3, 2);
    q << out[0], out[1];
    EXPECT_LT(orthonormality_defect(q), 1e-12);
    for (const RealVector& v : {a, b})
        EXPECT_LT((q * (q.transpose() * v) - v).norm(), 1e-12);
}

TEST(Orthonormalize, EmptyAndMismatched)
{
    EXPECT_TRUE(orthonormalize(std::vector<RealVector>{}).empty());
    std::vector<RealVector> bad{RealVector::Ones(2), RealVector::Ones(3)};
    EXPECT_THROW(orthonormalize(bad), std::invalid_argument);
}
