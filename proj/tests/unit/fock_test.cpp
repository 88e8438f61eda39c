#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "macroreal/fock.hpp"

using namespace macroreal;

namespace {

const cplx I(0.0, 1.0);

// Poisson amplitude from a running product, no log-space tricks.
double poisson_amplitude(double alpha, int n) {
    double v = std::exp(-0.5 * alpha * alpha);
    for (int k = 1; k <= n; ++k) v *= alpha / std::sqrt(static_cast<double>(k));
    return v;
}

Eigen::VectorXcd basis_state(int cutoff, int n0, int n1) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero((cutoff + 1) * (cutoff + 1));
    v(n0 + (cutoff + 1) * n1) = 1.0;
    return v;
}

} // namespace

TEST(FockVector, LittleEndianIndexing) {
    auto psi = FockVector::vacuum(3, 3);
    EXPECT_EQ(psi.dimension(), 64);
    EXPECT_EQ(psi.index_of(std::vector<int>{1, 0, 0}), 1);
    EXPECT_EQ(psi.index_of(std::vector<int>{0, 1, 0}), 4);
    EXPECT_EQ(psi.index_of(std::vector<int>{2, 3, 1}), 2 + 4 * 3 + 16 * 1);
    EXPECT_EQ(psi.occupation_of(2 + 4 * 3 + 16), (std::vector<int>{2, 3, 1}));
    EXPECT_THROW(psi.index_of(std::vector<int>{4, 0, 0}), InvalidArgument);
    EXPECT_THROW(psi.index_of(std::vector<int>{0, 0}), InvalidArgument);
}

TEST(FockVector, RejectsUnnormalizedAmplitudes) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(4);
    EXPECT_THROW(FockVector::from_amplitudes(3, 1, v), InvalidArgument);
    auto psi = FockVector::normalized(3, 1, v);
    EXPECT_NEAR(psi.norm_squared(), 1.0, 1e-15);
    EXPECT_THROW(FockVector::from_amplitudes(3, 1, Eigen::VectorXcd::Ones(5) / std::sqrt(5.0)), InvalidArgument);
    EXPECT_THROW(FockVector::vacuum(-1), InvalidArgument);
}

TEST(FockVector, NumberDistributionPerMode) {
    auto psi = FockVector::from_amplitudes(2, 2, (basis_state(2, 2, 0) + basis_state(2, 0, 1)) / std::sqrt(2.0));
    const auto p0 = psi.number_distribution(0);
    const auto p1 = psi.number_distribution(1);
    EXPECT_NEAR(p0[0], 0.5, 1e-15);
    EXPECT_NEAR(p0[2], 0.5, 1e-15);
    EXPECT_NEAR(p1[0], 0.5, 1e-15);
    EXPECT_NEAR(p1[1], 0.5, 1e-15);
    EXPECT_EQ(psi.support(), 2);
}

TEST(FockVector, WithCutoffReembedsAndGuardsWeight) {
    auto psi = make_noon(2, 3);
    auto bigger = psi.with_cutoff(5);
    EXPECT_NEAR(std::abs(bigger.amplitude({2, 0})), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(std::abs(bigger.amplitude({0, 2})), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_THROW(psi.with_cutoff(1), NonConvergence);
}

TEST(ModeOperators, LadderAlgebra) {
    const int c = 8;
    const auto a = ops::annihilation(c).matrix;
    const auto ad = ops::creation(c).matrix;
    const auto n = ops::number(c).matrix;
    EXPECT_LT((ad * a - n).cwiseAbs().maxCoeff(), 1e-13);
    // [a, a^dag] = 1 away from the truncation edge.
    const Eigen::MatrixXcd comm = a * ad - ad * a;
    EXPECT_LT((comm.topLeftCorner(c, c) - Eigen::MatrixXcd::Identity(c, c)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(ModeOperators, CanonicalCommutatorOnSafeBlock) {
    const int c = 10;
    const auto x = ops::position(c).matrix;
    const auto p = ops::momentum(c).matrix;
    const Eigen::MatrixXcd comm = x * p - p * x;
    EXPECT_LT((comm.topLeftCorner(c, c) - I * Eigen::MatrixXcd::Identity(c, c)).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LT((x - x.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((p - p.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ModeOperators, AmplitudePIsSqrtTwoP) {
    const int c = 7;
    EXPECT_LT((ops::amplitude_P(c).matrix - std::sqrt(2.0) * ops::momentum(c).matrix).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ModeOperators, RotatedQuadratureIdentity) {
    const int c = 6;
    for (double th : {0.0, 0.3, 1.2, 2.9, 5.0}) {
        const Eigen::MatrixXcd expected = ops::position(c).matrix * std::cos(th) + ops::momentum(c).matrix * std::sin(th);
        EXPECT_LT((ops::rotated_quadrature(c, th).matrix - expected).cwiseAbs().maxCoeff(), 1e-14) << th;
    }
}

TEST(ModeOperators, PowerAndProduct) {
    const int c = 5;
    const auto a = ops::annihilation(c);
    EXPECT_LT(((a * a).matrix - a.power(2).matrix).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_EQ((a.power(0).matrix - Eigen::MatrixXcd::Identity(c + 1, c + 1)).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_THROW(a.power(-1), InvalidArgument);
    EXPECT_THROW(a * ops::annihilation(c + 1), InvalidArgument);
}

TEST(TensorProduct, MatchesModeApplication) {
    const int c = 3;
    const std::vector<ModeOperator> f{ops::annihilation(c), ops::number(c)};
    const auto op = tensor(f);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(16);
    for (int i = 0; i < 16; ++i) v(i) = cplx(std::sin(i + 1.0), std::cos(2.0 * i));
    const Eigen::VectorXcd direct = op.matrix * v;
    const Eigen::VectorXcd staged = apply_to_mode(f[0].matrix, 0, c, 2, apply_to_mode(f[1].matrix, 1, c, 2, v));
    EXPECT_LT((direct - staged).cwiseAbs().maxCoeff(), 1e-13);
    // embed(op, 1) acts on the slow index
    const auto n1 = embed(ops::number(c), 1, 2);
    const Eigen::VectorXcd b = basis_state(c, 1, 2);
    EXPECT_NEAR((n1.matrix * b - 2.0 * b).norm(), 0.0, 1e-15);
}

TEST(Expectation, NumberAndQuadratureMeans) {
    const auto coh = coherent_vector(cplx(1.5, 0.5), 40);
    const auto &psi = coh.state;
    EXPECT_NEAR(expectation(psi, ops::number(40)).real(), 2.5, 1e-9);
    // <x> = sqrt(2) Re(alpha), <p> = sqrt(2) Im(alpha)
    EXPECT_NEAR(expectation(psi, ops::position(40)).real(), std::sqrt(2.0) * 1.5, 1e-9);
    EXPECT_NEAR(expectation(psi, ops::momentum(40)).real(), std::sqrt(2.0) * 0.5, 1e-9);
    const auto rho = DensityMatrix::pure(psi);
    EXPECT_NEAR(std::abs(expectation(rho, ops::number(40)) - expectation(psi, ops::number(40))), 0.0, 1e-12);
}

TEST(Coherent, AmplitudesMatchPoissonProduct) {
    const double alpha = 2.3;
    const auto amps = coherent_amplitudes(alpha, 30);
    for (int n = 0; n <= 30; ++n) EXPECT_NEAR(amps(n).real(), poisson_amplitude(alpha, n), 1e-14) << n;
    double tail = 0.0;
    for (int n = 11; n < 200; ++n) tail += std::pow(poisson_amplitude(alpha, n), 2);
    EXPECT_NEAR(coherent_tail_mass(alpha, 10), tail, 1e-14);
    EXPECT_NEAR(coherent_vector(alpha, 10).tail_mass, tail, 1e-14);
}

TEST(Coherent, LargeArgumentsStayFinite) {
    const auto amps = coherent_amplitudes(12.0, 400);
    EXPECT_TRUE(amps.allFinite());
    EXPECT_NEAR(amps.squaredNorm(), 1.0, 1e-12);
}

TEST(DensityMatrix, ValidatesPhysicality) {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(2, 2);
    rho(0, 0) = 1.2;
    rho(1, 1) = -0.2;
    EXPECT_THROW(DensityMatrix::from_matrix(1, 1, rho), InvalidArgument);
    rho(0, 0) = 0.5;
    rho(1, 1) = 0.5;
    rho(0, 1) = 0.1;
    EXPECT_THROW(DensityMatrix::from_matrix(1, 1, rho), InvalidArgument);
    rho(1, 0) = 0.1;
    EXPECT_NO_THROW(DensityMatrix::from_matrix(1, 1, rho));
}

TEST(Constructors, NumberSuperpositionAndNoon) {
    const auto psi = make_number_superposition(3, 0.7, 5);
    EXPECT_NEAR(std::arg(psi.amplitudes()(0)), 0.7, 1e-15);
    EXPECT_NEAR(std::norm(psi.amplitudes()(3)), 0.5, 1e-15);
    EXPECT_THROW(make_number_superposition(3, 0.0, 2), InvalidArgument);
    const auto noon = make_noon(2, 2);
    EXPECT_NEAR(std::norm(noon.amplitude({2, 0})), 0.5, 1e-15);
    EXPECT_NEAR(std::norm(noon.amplitude({0, 2})), 0.5, 1e-15);
}

TEST(BeamSplitter, PreservesNormAndIsUnitary) {
    const auto u = beam_splitter_5050_matrix();
    EXPECT_LT((u * u.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-15);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(36);
    for (int n0 = 0; n0 <= 2; ++n0)
        for (int n1 = 0; n1 <= 2; ++n1) v(n0 + 6 * n1) = cplx(1.0 + n0, 0.5 * n1);
    const auto in = FockVector::normalized(5, 2, v);
    EXPECT_NEAR(beam_splitter_5050(in).norm_squared(), 1.0, 1e-12);
}

TEST(BeamSplitter, TwoPhotonInterference) {
    // |1,1> -> (|2,0> - |0,2>)/sqrt(2) up to sign: no coincidences.
    const auto in = FockVector::from_amplitudes(2, 2, basis_state(2, 1, 1));
    const auto out = beam_splitter_5050(in);
    EXPECT_NEAR(std::abs(out.amplitude({1, 1})), 0.0, 1e-15);
    EXPECT_NEAR(std::norm(out.amplitude({2, 0})), 0.5, 1e-14);
    EXPECT_NEAR(std::norm(out.amplitude({0, 2})), 0.5, 1e-14);
}

TEST(BeamSplitter, CoherentInputsStayCoherent) {
    // c+ gets (a1 + a2)/sqrt(2), c- gets (a2 - a1)/sqrt(2).
    const int c = 30;
    const double a1 = 1.0, a2 = 0.6;
    const Eigen::VectorXcd x = coherent_amplitudes(a1, c);
    const Eigen::VectorXcd y = coherent_amplitudes(a2, c);
    Eigen::VectorXcd v(31 * 31);
    for (int i = 0; i <= c; ++i)
        for (int j = 0; j <= c; ++j) v(i + 31 * j) = x(i) * y(j);
    const auto out = beam_splitter_5050(FockVector::normalized(c, 2, v));
    const Eigen::VectorXcd p = coherent_amplitudes((a1 + a2) / std::sqrt(2.0), c);
    const Eigen::VectorXcd m = coherent_amplitudes((a2 - a1) / std::sqrt(2.0), c);
    double err = 0.0;
    for (int i = 0; i <= 10; ++i)
        for (int j = 0; j <= 10; ++j) err = std::max(err, std::abs(out.amplitude({i, j}) - p(i) * m(j)));
    EXPECT_LT(err, 1e-10);
}

TEST(BeamSplitter, RejectsNonUnitaryAndOverflow) {
    Eigen::Matrix2cd bad = Eigen::Matrix2cd::Identity() * 2.0;
    EXPECT_THROW(apply_linear_optics(FockVector::vacuum(2, 2), bad), InvalidArgument);
    const auto in = FockVector::from_amplitudes(2, 2, basis_state(2, 2, 2));
    EXPECT_THROW(beam_splitter_5050(in), NonConvergence);
}
