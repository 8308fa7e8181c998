#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ppr/fourier.hpp"
#include "ppr/operators.hpp"

#include "test_support.hpp"

#include <vector>

using namespace ppr;
using testsupport::dense_cdp_matrix;
using testsupport::flatten_rm;
using testsupport::random_image;
using testsupport::random_spectrum;

namespace {

double rel_diff(const ComplexImage& a, const ComplexImage& b) {
  return norm(ComplexImage(a - b)) / std::max(norm(b), 1e-300);
}

MeasurementOperator small_ptycho(Eigen::Index n, Eigen::Index frame, std::uint64_t seed,
                                 bool wrap = true) {
  ComplexImage probe = random_image(frame, frame, seed);
  return make_ptycho_operator(std::move(probe), scan_grid(2, 2, n / 2), n, n, wrap);
}

void check_adjoint_identity(const MeasurementOperator& op, std::uint64_t seed) {
  const auto shape = image_shape(op);
  const ComplexImage u = random_image(shape[0], shape[1], seed);
  const SpectrumVector z = random_spectrum(output_size(op), seed + 1);
  const Complex lhs = inner(forward(op, u), z);
  const Complex rhs = inner(SpectrumVector(flatten_rm(u).array()),
                            SpectrumVector(flatten_rm(adjoint(op, z)).array()));
  CHECK(std::abs(lhs - rhs) <= 1e-10 * norm(u) * norm(z));
}

void check_diagonal_by_basis_probe(const MeasurementOperator& op) {
  const auto shape = image_shape(op);
  const RealImage diag = ata_diagonal(op);
  for (Eigen::Index i = 0; i < shape[0]; ++i)
    for (Eigen::Index j = 0; j < shape[1]; ++j) {
      ComplexImage basis = ComplexImage::Zero(shape[0], shape[1]);
      basis(i, j) = 1.0;
      const ComplexImage ata = adjoint(op, forward(op, basis));
      CHECK(std::abs(ata(i, j).real() - diag(i, j)) <= 1e-12 * std::max(1.0, diag(i, j)));
      CHECK(std::abs(ata(i, j).imag()) <= 1e-12);
    }
}

}  // namespace

TEST_CASE("unitary DFT of a delta is the constant 1/sqrt(n)") {
  ComplexImage delta = ComplexImage::Zero(4, 4);
  delta(0, 0) = 1.0;
  const ComplexImage f = dft2_unitary(delta);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) CHECK(std::abs(f(i, j) - Complex(0.25, 0.0)) < 1e-14);
}

TEST_CASE("unitary DFT of the constant image is a scaled delta") {
  const ComplexImage ones = ComplexImage::Constant(4, 4, Complex(1.0, 0.0));
  const ComplexImage f = dft2_unitary(ones);
  CHECK(std::abs(f(0, 0) - Complex(4.0, 0.0)) < 1e-13);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j)
      if (i != 0 || j != 0) CHECK(std::abs(f(i, j)) < 1e-13);
}

TEST_CASE("unitarity and round trip on a seeded 8x8 image") {
  const ComplexImage x = random_image(8, 8, 101);
  const ComplexImage fx = dft2_unitary(x);
  CHECK(std::abs(norm(fx) - norm(x)) <= 1e-12 * norm(x));
  CHECK(rel_diff(idft2_unitary(fx), x) <= 1e-12);
}

TEST_CASE("cdp with a single identity mask is the plain DFT") {
  const ComplexImage u = random_image(8, 8, 7);
  const auto op = MeasurementOperator(
      make_cdp_operator({ComplexImage::Constant(8, 8, Complex(1.0, 0.0))}));
  const SpectrumVector z = forward(op, u);
  const ComplexImage f = dft2_unitary(u);
  CHECK(norm(SpectrumVector(z - flatten_rm(f).array())) <= 1e-12 * norm(f));
}

TEST_CASE("cdp forward matches the dense DFT-matrix oracle on 4x4") {
  const ComplexImage w = random_image(4, 4, 21);
  const CdpOperator cdp = make_cdp_operator({w, w.conjugate()});
  const auto op = MeasurementOperator(cdp);
  const ComplexImage u = random_image(4, 4, 22);

  const Eigen::MatrixXcd a = dense_cdp_matrix(cdp);
  const Eigen::VectorXcd expected = a * flatten_rm(u);
  const SpectrumVector got = forward(op, u);
  CHECK(norm(SpectrumVector(got - expected.array())) <= 1e-12 * expected.norm());
}

TEST_CASE("ptychography with one full flat frame is the plain DFT") {
  const ComplexImage u = random_image(8, 8, 31);
  const auto op = MeasurementOperator(make_ptycho_operator(
      ComplexImage::Constant(8, 8, Complex(1.0, 0.0)), {{0, 0}}, 8, 8, true));
  const SpectrumVector z = forward(op, u);
  CHECK(norm(SpectrumVector(z - flatten_rm(dft2_unitary(u)).array())) <= 1e-12 * norm(z));
}

TEST_CASE("adjoint of forward of a delta with the identity mask is the delta") {
  ComplexImage delta = ComplexImage::Zero(8, 8);
  delta(0, 0) = 1.0;
  const auto op = MeasurementOperator(
      make_cdp_operator({ComplexImage::Constant(8, 8, Complex(1.0, 0.0))}));
  CHECK(rel_diff(adjoint(op, forward(op, delta)), delta) <= 1e-12);
}

TEST_CASE("adjoint identity holds for both operator kinds") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    check_adjoint_identity(
        MeasurementOperator(make_cdp_operator(octanary_masks(8, 8, 2, seed))), seed);
    check_adjoint_identity(small_ptycho(8, 4, seed), seed + 100);
  }
}

TEST_CASE("adjoint maps zero to zero") {
  const auto op = MeasurementOperator(make_cdp_operator(octanary_masks(8, 8, 2, 5)));
  const ComplexImage img = adjoint(op, SpectrumVector::Zero(output_size(op)));
  CHECK(norm(img) == 0.0);
}

TEST_CASE("ata diagonal of two flat masks is the constant 2") {
  const ComplexImage ones = ComplexImage::Constant(6, 6, Complex(1.0, 0.0));
  const RealImage diag = ata_diagonal(MeasurementOperator(make_cdp_operator({ones, ones})));
  CHECK((diag - 2.0).abs().maxCoeff() <= 1e-14);
}

TEST_CASE("octanary diagonal equals the mask power sum and the basis probe") {
  const auto masks = octanary_masks(4, 4, 2, 99);
  const auto op = MeasurementOperator(make_cdp_operator(masks));
  const RealImage diag = ata_diagonal(op);
  // entries of |w|^2 are 1/2 or 3, so sums over K=2 live in {1, 3.5, 6}
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) {
      const double expected = std::abs(masks[0](i, j)) * std::abs(masks[0](i, j)) +
                              std::abs(masks[1](i, j)) * std::abs(masks[1](i, j));
      CHECK(diag(i, j) == doctest::Approx(expected).epsilon(1e-14));
      const bool known = std::abs(diag(i, j) - 1.0) < 1e-12 ||
                         std::abs(diag(i, j) - 3.5) < 1e-12 ||
                         std::abs(diag(i, j) - 6.0) < 1e-12;
      CHECK(known);
    }
  check_diagonal_by_basis_probe(op);
}

TEST_CASE("single non-wrapping ptycho frame covers exactly its window") {
  const auto op = MeasurementOperator(make_ptycho_operator(
      ComplexImage::Constant(4, 4, Complex(1.0, 0.0)), {{2, 2}}, 8, 8, false));
  const RealImage diag = ata_diagonal(op);
  for (Eigen::Index i = 0; i < 8; ++i)
    for (Eigen::Index j = 0; j < 8; ++j) {
      const bool inside = i >= 2 && i < 6 && j >= 2 && j < 6;
      CHECK(diag(i, j) == doctest::Approx(inside ? 1.0 : 0.0));
    }
}

TEST_CASE("diagonal consistency by basis probing, both kinds") {
  check_diagonal_by_basis_probe(
      MeasurementOperator(make_cdp_operator(octanary_masks(8, 8, 3, 1234))));
  check_diagonal_by_basis_probe(small_ptycho(8, 4, 77));
  check_diagonal_by_basis_probe(small_ptycho(8, 4, 78, false));
}

TEST_CASE("forward is linear") {
  const auto op = MeasurementOperator(make_cdp_operator(octanary_masks(8, 8, 2, 42)));
  const ComplexImage u = random_image(8, 8, 1);
  const ComplexImage v = random_image(8, 8, 2);
  const Complex alpha(0.3, -1.1), beta(-0.7, 0.2);
  const SpectrumVector lhs = forward(op, ComplexImage(alpha * u + beta * v));
  const SpectrumVector rhs = alpha * forward(op, u) + beta * forward(op, v);
  CHECK(norm(SpectrumVector(lhs - rhs)) <= 1e-12 * norm(rhs));
}

TEST_CASE("Parseval per frame under the unitary DFT") {
  const auto masks = octanary_masks(8, 8, 2, 3);
  const ComplexImage u = random_image(8, 8, 4);
  for (const auto& w : masks) {
    const ComplexImage masked = w * u;
    CHECK(std::abs(norm(dft2_unitary(masked)) - norm(masked)) <= 1e-12 * norm(masked));
  }
}

TEST_CASE("shape mismatches are rejected") {
  const auto op = MeasurementOperator(make_cdp_operator(octanary_masks(8, 8, 2, 6)));
  CHECK_THROWS_AS(forward(op, ComplexImage::Zero(4, 4)), std::invalid_argument);
  CHECK_THROWS_AS(adjoint(op, SpectrumVector::Zero(7)), std::invalid_argument);
  CHECK_THROWS_AS(make_cdp_operator({}), std::invalid_argument);
  CHECK_THROWS_AS(
      make_ptycho_operator(ComplexImage::Constant(9, 9, Complex(1, 0)), {{0, 0}}, 8, 8, true),
      std::invalid_argument);
}

TEST_CASE("non-wrapping scan positions are clipped into range") {
  const auto pty = make_ptycho_operator(ComplexImage::Constant(4, 4, Complex(1.0, 0.0)),
                                        {{7, -3}, {20, 6}}, 8, 8, false);
  CHECK(pty.positions[0][0] == 4);
  CHECK(pty.positions[0][1] == 0);
  CHECK(pty.positions[1][0] == 4);
  CHECK(pty.positions[1][1] == 4);
}

TEST_CASE("operators reject non-finite masks and probes") {
  ComplexImage bad = ComplexImage::Constant(4, 4, Complex(1.0, 0.0));
  bad(1, 2) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_THROWS_AS(make_cdp_operator({bad}), std::invalid_argument);
  CHECK_THROWS_AS(make_ptycho_operator(bad, {{0, 0}}, 8, 8, true), std::invalid_argument);
}

TEST_CASE("synthetic probes have the aperture geometry") {
  const ComplexImage disk = flat_disk_probe(16, 6.0);
  const ComplexImage quad = quadratic_phase_probe(16, 6.0, 4.0);
  CHECK(std::abs(disk(8, 8) - Complex(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(disk(0, 0)) == 0.0);  // outside the aperture
  // same support, unit modulus inside, curved phase
  for (Eigen::Index i = 0; i < 16; ++i)
    for (Eigen::Index j = 0; j < 16; ++j) {
      CHECK((std::abs(disk(i, j)) > 0) == (std::abs(quad(i, j)) > 0));
      if (std::abs(quad(i, j)) > 0) CHECK(std::abs(quad(i, j)) == doctest::Approx(1.0));
    }
  CHECK(std::arg(quad(8, 12)) != doctest::Approx(0.0).epsilon(1e-6));
}
