#include <doctest.h>

#include <cmath>

#include "gcsensor/errors.hpp"
#include "gcsensor/model.hpp"
#include "gcsensor/transfer.hpp"
#include "test_helpers.hpp"

using namespace gcs;
using gcs::test::kPi;
using gcs::test::ParamDraw;

namespace {

constexpr cplx kI{0.0, 1.0};

SensorParams decoupled(double delta, double delta12) {
    RawParams raw;
    raw.delta = delta;
    raw.delta12 = delta12;
    raw.j_coupling = 0.0;
    raw.gamma_gain = 0.0;
    raw.gamma_loss = 0.0;
    return build_params(raw);
}

// term-by-term assembly of the frequency-domain system matrix from the raw
// couplings, kept independent of system_matrix()
Mat2 reference_system_matrix(const SensorParams& p, Topology topo, double omega,
                             double epsilon) {
    const Mat2 detuning{p.delta + omega, 0.0, 0.0, p.delta + p.delta12 + omega};
    const double y = std::sqrt(p.gamma_gain / (2.0 * kPi));
    const Mat2 gy{y * y, y * y, y * y, y * y};
    const double z = std::sqrt(p.gamma_loss / (2.0 * kPi));
    Mat2 dz;
    if (topo == Topology::Small) {
        dz = Mat2{0.5 * z * z, 0.5 * z * z, 0.5 * z * z, 0.5 * z * z};
    } else {
        const double th = p.delta * p.tau + p.phi;
        const cplx e1 = std::exp(cplx(0.0, th - omega * p.tau));
        const cplx e2 = std::exp(cplx(0.0, 2.0 * th - omega * p.tau));
        const cplx e3 = std::exp(cplx(0.0, 3.0 * th - omega * p.tau));
        dz = Mat2{z * z * (1.0 + e1), 0.0, z * z * (e1 + 2.0 * e2 + e3), z * z * (1.0 + e1)};
    }
    const Mat2 kappa_half{kI * (p.kappa / 2.0), 0.0, 0.0, 0.0};
    return detuning - p.h_free - epsilon * p.v_matrix - (kI * kPi) * gy +
           (kI * 2.0 * kPi) * dz + kappa_half;
}

}  // namespace

TEST_CASE("system matrix in the decoupled limit") {
    const SensorParams p = decoupled(0.7, 0.3);
    const Mat2 k = system_matrix(p, Topology::Giant, TransferConvention::GeneralForm, 0.0, 0.0);
    CHECK(std::abs(k.m11 - cplx(0.7, 0.5)) <= 1e-15);
    CHECK(std::abs(k.m12) == 0.0);
    CHECK(std::abs(k.m21) == 0.0);
    CHECK(std::abs(k.m22 - cplx(1.0, 0.0)) <= 1e-15);
}

TEST_CASE("system matrix agrees with the independent term-by-term assembly") {
    SUBCASE("baseline small-topology point") {
        const SensorParams p = gcs::test::baseline();
        const Mat2 k =
            system_matrix(p, Topology::Small, TransferConvention::GeneralForm, 0.0, 0.0);
        const Mat2 ref = reference_system_matrix(p, Topology::Small, 0.0, 0.0);
        CHECK(std::abs(k.m11 - ref.m11) <= 1e-15);
        CHECK(std::abs(k.m12 - ref.m12) <= 1e-15);
        CHECK(std::abs(k.m21 - ref.m21) <= 1e-15);
        CHECK(std::abs(k.m22 - ref.m22) <= 1e-15);
        // frozen values: gamma_loss = gamma_gain makes the gain and loss
        // blocks cancel everywhere except the readout channel
        CHECK(std::abs(k.m11 - cplx(0.0, 0.5)) <= 1e-15);
        CHECK(std::abs(k.m12 - cplx(-0.1, 0.0)) <= 1e-15);
        CHECK(std::abs(k.m21 - cplx(-0.1, 0.0)) <= 1e-15);
        CHECK(std::abs(k.m22) <= 1e-15);
    }
    SUBCASE("random draws, both topologies, omega and epsilon nonzero") {
        ParamDraw draw(101);
        for (int i = 0; i < 100; ++i) {
            const SensorParams p = draw.params();
            const Topology topo = draw.topology();
            const double omega = draw.uniform(-1.0, 1.0);
            const double eps = draw.uniform(-0.05, 0.05);
            const Mat2 k = system_matrix(p, topo, TransferConvention::GeneralForm, omega, eps);
            const Mat2 ref = reference_system_matrix(p, topo, omega, eps);
            const double scale = std::sqrt(std::max(1.0, k.frobenius_sq()));
            CHECK(std::abs(k.m11 - ref.m11) <= 1e-13 * scale);
            CHECK(std::abs(k.m12 - ref.m12) <= 1e-13 * scale);
            CHECK(std::abs(k.m21 - ref.m21) <= 1e-13 * scale);
            CHECK(std::abs(k.m22 - ref.m22) <= 1e-13 * scale);
        }
    }
}

TEST_CASE("the perturbation enters linearly: K(eps) - K(0) = -eps V") {
    const SensorParams p = gcs::test::baseline();
    const Mat2 k0 = system_matrix(p, Topology::Giant, TransferConvention::GeneralForm, 0.0, 0.0);
    const Mat2 k1 =
        system_matrix(p, Topology::Giant, TransferConvention::GeneralForm, 0.0, 0.01);
    const Mat2 diff = k1 - k0;
    CHECK(std::abs(diff.m11 - cplx(-0.01)) <= 1e-16);
    CHECK(std::abs(diff.m12 - cplx(-0.01)) <= 1e-16);
    CHECK(std::abs(diff.m21 - cplx(-0.01)) <= 1e-16);
    CHECK(std::abs(diff.m22 - cplx(-0.01)) <= 1e-16);
}

TEST_CASE("transfer matrix in the decoupled lossless limit") {
    const SensorParams p = decoupled(0.0, 0.3);
    const Mat2 chi = transfer_matrix(p, Topology::Giant, TransferConvention::GeneralForm, 0.0, 0.0);
    CHECK(std::abs(chi.m11 - 2.0) <= 1e-14);
    CHECK(std::abs(chi.m12) == 0.0);
    CHECK(std::abs(chi.m21) == 0.0);
    CHECK(std::abs(chi.m22 - kI / 0.3) <= 1e-14);
}

TEST_CASE("fully decoupled resonant system is singular") {
    const SensorParams p = decoupled(0.0, 0.0);
    try {
        transfer_matrix(p, Topology::Small, TransferConvention::GeneralForm, 0.0, 0.0);
        FAIL("expected SingularSystem");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularSystem);
        // the offending parameter combination is named
        CHECK(std::string(e.what()).find("delta=") != std::string::npos);
    }
}

TEST_CASE("chi * K = i kappa I across random draws") {
    ParamDraw draw(211);
    int tested = 0;
    while (tested < 200) {
        const SensorParams p = draw.params();
        const Topology topo = draw.topology();
        const double omega = draw.uniform(-0.5, 0.5);
        const Mat2 k = system_matrix(p, topo, TransferConvention::GeneralForm, omega, 0.0);
        if (std::abs(k.det()) < 1e-6 * k.frobenius_sq()) continue;  // skip near-singular draws
        const Mat2 chi = transfer_matrix(p, topo, TransferConvention::GeneralForm, omega, 0.0);
        const Mat2 residual = chi * k - (kI * p.kappa) * Mat2::identity();
        const double scale = std::sqrt(chi.frobenius_sq() * k.frobenius_sq());
        CHECK(std::sqrt(residual.frobenius_sq()) <= 1e-12 * scale);
        ++tested;
    }
}

TEST_CASE("reflection coefficient") {
    SUBCASE("decoupled lossless resonance reflects with a pi phase") {
        const SensorParams p = decoupled(0.0, 0.3);
        const cplx r = reflection_coefficient(p, Topology::Giant, TransferConvention::GeneralForm);
        CHECK(std::abs(r - cplx(-1.0)) <= 1e-14);
    }
    SUBCASE("lossless detuned reflection is (delta - ik/2)/(delta + ik/2)") {
        const SensorParams p = decoupled(0.5, 0.3);
        const cplx r = reflection_coefficient(p, Topology::Giant, TransferConvention::GeneralForm);
        const cplx expected = cplx(0.5, -0.5) / cplx(0.5, 0.5);
        CHECK(std::abs(r - expected) <= 1e-14);
        CHECK(std::abs(std::abs(r) - 1.0) <= 1e-14);
    }
    SUBCASE("passive loss gives sub-unit reflection") {
        RawParams raw;
        raw.gamma_gain = 0.0;
        raw.gamma_loss = 0.15;
        raw.phi = 0.3 * kPi;
        const SensorParams p = build_params(raw);
        for (Topology topo : {Topology::Giant, Topology::Small}) {
            const cplx r = reflection_coefficient(p, topo, TransferConvention::GeneralForm);
            CHECK(std::abs(r) < 1.0);
        }
    }
}

TEST_CASE("non-reciprocity propagates into the transfer matrix") {
    // J = 0, Gamma = 0, gamma > 0: the only cross coupling is the directional
    // reservoir-mediated one, so chi12 vanishes while chi21 does not
    RawParams raw;
    raw.j_coupling = 0.0;
    raw.gamma_gain = 0.0;
    raw.gamma_loss = 0.15;
    raw.phi = 0.37 * kPi;
    raw.delta12 = 0.2;
    const SensorParams p = build_params(raw);
    const Mat2 chi = transfer_matrix(p, Topology::Giant, TransferConvention::GeneralForm, 0.0, 0.0);
    CHECK(chi.m12 == cplx(0.0));
    CHECK(std::abs(chi.m21) > 1e-3);
}

TEST_CASE("conventions agree whenever the dissipative block vanishes") {
    SUBCASE("gamma = 0") {
        RawParams raw;
        raw.gamma_loss = 0.0;
        raw.delta = 0.2;
        const SensorParams p = build_params(raw);
        for (Topology topo : {Topology::Giant, Topology::Small}) {
            const Mat2 a = transfer_matrix(p, topo, TransferConvention::GeneralForm, 0.0, 0.0);
            const Mat2 b = transfer_matrix(p, topo, TransferConvention::ExplicitForm, 0.0, 0.0);
            CHECK(std::sqrt((a - b).frobenius_sq()) <= 1e-14);
        }
    }
    SUBCASE("giant with phi = pi at resonance") {
        RawParams raw;
        raw.phi = kPi;
        const SensorParams p = build_params(raw);
        const Mat2 a = transfer_matrix(p, Topology::Giant, TransferConvention::GeneralForm, 0.0, 0.0);
        const Mat2 b = transfer_matrix(p, Topology::Giant, TransferConvention::ExplicitForm, 0.0, 0.0);
        CHECK(std::sqrt((a - b).frobenius_sq()) <= 1e-13);
    }
}
