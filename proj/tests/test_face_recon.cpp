#include <doctest.h>

#include <cmath>
#include <random>

#include "subswe/face_recon.hpp"

using namespace subswe;

namespace {

SideTrace make_side(double eta, double d, double u = 0.0, double v = 0.0) {
  SideTrace t;
  t.eta = eta;
  t.d = d;
  t.h = std::max(0.0, eta + d);
  t.u = u;
  t.v = v;
  t.wet = true;
  return t;
}

SideTrace make_dry(double d) {
  SideTrace t;
  t.eta = -d;
  t.d = d;
  t.h = 0.0;
  t.wet = false;
  return t;
}

CoarseSide coarse(double hbar, double etabar, double dbar) { return {hbar, etabar, dbar}; }

}  // namespace

TEST_CASE("case 1.1: both wet with moderate bathymetry jump") {
  const SideTrace l = make_side(0.5, 1.0);
  const SideTrace r = make_side(0.4, 0.8);
  CHECK(l.h == doctest::Approx(1.5));
  CHECK(r.h == doctest::Approx(1.2));
  const FaceTrace t = classify_and_reconstruct(l, r, coarse(1.5, 0.5, 1.0), coarse(1.2, 0.4, 0.8));
  CHECK(t.tag == FaceCase::C11);
  CHECK(t.kind == FluxKind::Riemann);
  CHECK(t.d_l == doctest::Approx(0.9));
  CHECK(t.d_r == doctest::Approx(0.9));
  CHECK(t.h_l == doctest::Approx(1.4));
  CHECK(t.h_r == doctest::Approx(1.3));
}

TEST_CASE("case 1.2: shallow side relative to the bathymetry jump") {
  const SideTrace l = make_side(-0.8, 1.0);   // h = 0.2
  const SideTrace r = make_side(0.6, -0.5);   // h = 0.1
  CHECK(l.h == doctest::Approx(0.2));
  CHECK(r.h == doctest::Approx(0.1));
  const FaceTrace t = classify_and_reconstruct(l, r, coarse(0.2, -0.8, 1.0), coarse(0.1, 0.6, -0.5));
  CHECK(t.tag == FaceCase::C12);
  CHECK(t.d_l == doctest::Approx(0.8));
  CHECK(t.h_l == doctest::Approx(0.0));
  CHECK(t.h_r == doctest::Approx(0.1));
}

TEST_CASE("case 2.1: dry bathymetry above the wet free surface is a wall") {
  const SideTrace l = make_side(0.2, 0.5);  // h = 0.7
  const SideTrace r = make_dry(-0.5);       // bed crest 0.5 above datum
  const FaceTrace t = classify_and_reconstruct(l, r, coarse(0.7, 0.2, 0.5), coarse(0.0, 0.6, -0.6));
  CHECK(t.tag == FaceCase::C21);
  CHECK(t.kind == FluxKind::WallBothSides);
  CHECK(t.h_l == doctest::Approx(0.7));
  CHECK(t.d_l == doctest::Approx(0.5));
  CHECK(t.eta_l == doctest::Approx(0.2));
  // Dry side falls back to its coarse values.
  CHECK(t.d_r == doctest::Approx(-0.6));
  CHECK(t.h_r == doctest::Approx(0.0));
}

TEST_CASE("case 2.2: free surface above the dry bed promotes to case 1") {
  const SideTrace l = make_side(0.2, 0.5, 1.5, -0.5);
  const SideTrace r = make_dry(0.1);  // -d_r = -0.1 < eta_l
  const FaceTrace t = classify_and_reconstruct(l, r, coarse(0.7, 0.2, 0.5), coarse(0.0, -0.1, 0.1));
  CHECK(t.tag == FaceCase::C22Promoted);
  CHECK(t.kind == FluxKind::Riemann);
  // Promoted dry side carries zero velocity and a zero-depth state.
  CHECK(t.u_r == 0.0);
  CHECK(t.v_r == 0.0);
  CHECK(t.h_r == doctest::Approx(0.0));
  CHECK(t.u_l == doctest::Approx(1.5));
  // Mirror image swaps sides.
  const FaceTrace t2 = classify_and_reconstruct(r, l, coarse(0.0, -0.1, 0.1), coarse(0.7, 0.2, 0.5));
  CHECK(t2.tag == FaceCase::C22Promoted);
  CHECK(t2.h_l == doctest::Approx(t.h_r));
  CHECK(t2.h_r == doctest::Approx(t.h_l));
}

TEST_CASE("case 3: both dry is a wall on coarse values") {
  const SideTrace l = make_dry(0.3);
  const SideTrace r = make_dry(-0.2);
  const FaceTrace t = classify_and_reconstruct(l, r, coarse(0.0, -0.3, 0.3), coarse(0.0, 0.2, -0.2));
  CHECK(t.tag == FaceCase::C3);
  CHECK(t.kind == FluxKind::WallBothSides);
  CHECK(t.h_l == doctest::Approx(0.0));
  CHECK(t.h_r == doctest::Approx(0.0));
  CHECK(t.d_l == doctest::Approx(0.3));
  CHECK(t.d_r == doctest::Approx(-0.2));
}

TEST_CASE("lake at rest is preserved by the reconstruction") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> d_dist(-0.5, 1.5);
  std::uniform_real_distribution<double> eta_dist(-0.3, 0.8);
  for (int trial = 0; trial < 500; ++trial) {
    const double eta0 = eta_dist(rng);
    double d_l = d_dist(rng), d_r = d_dist(rng);
    // Force both sides wet at the face.
    if (eta0 + d_l <= 0.0) d_l = -eta0 + 0.1;
    if (eta0 + d_r <= 0.0) d_r = -eta0 + 0.05;
    const SideTrace l = make_side(eta0, d_l);
    const SideTrace r = make_side(eta0, d_r);
    const FaceTrace t =
        classify_and_reconstruct(l, r, coarse(l.h, eta0, d_l), coarse(r.h, eta0, d_r));
    CHECK(t.h_l - t.d_l == doctest::Approx(eta0).epsilon(1e-13));
    CHECK(t.h_r - t.d_r == doctest::Approx(eta0).epsilon(1e-13));
    CHECK(t.h_l == doctest::Approx(t.h_r).epsilon(1e-13));
  }
}

TEST_CASE("reconstructed depths never go negative") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 2000; ++trial) {
    SideTrace l, r;
    l.eta = dist(rng);
    l.d = dist(rng);
    l.h = std::max(0.0, l.eta + l.d);
    l.wet = l.h > 0.0 ? (dist(rng) > -1.0) : false;
    r.eta = dist(rng);
    r.d = dist(rng);
    r.h = std::max(0.0, r.eta + r.d);
    r.wet = r.h > 0.0 ? (dist(rng) > -1.0) : false;
    const FaceTrace t = classify_and_reconstruct(l, r, coarse(std::abs(dist(rng)), dist(rng), dist(rng)),
                                                 coarse(std::abs(dist(rng)), dist(rng), dist(rng)));
    CHECK(t.h_l >= 0.0);
    CHECK(t.h_r >= 0.0);
    if (t.tag == FaceCase::C11 || t.tag == FaceCase::C12) {
      CHECK(t.d_l == t.d_r);
    }
    if (t.tag == FaceCase::C21 || t.tag == FaceCase::C3) {
      CHECK(t.kind == FluxKind::WallBothSides);
    } else {
      CHECK(t.kind == FluxKind::Riemann);
    }
  }
}

TEST_CASE("swapping sides mirrors the riemann cases") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> dist(-1.0, 1.5);
  for (int trial = 0; trial < 500; ++trial) {
    const SideTrace l = make_side(dist(rng), dist(rng) + 1.0, dist(rng), dist(rng));
    const SideTrace r = make_side(dist(rng), dist(rng) + 1.0, dist(rng), dist(rng));
    if (!(l.h > 0.0) || !(r.h > 0.0)) continue;
    const CoarseSide cl = coarse(l.h, l.eta, l.d);
    const CoarseSide cr = coarse(r.h, r.eta, r.d);
    const FaceTrace a = classify_and_reconstruct(l, r, cl, cr);
    const FaceTrace b = classify_and_reconstruct(r, l, cr, cl);
    CHECK(a.tag == b.tag);
    CHECK(a.h_l == doctest::Approx(b.h_r).epsilon(1e-14));
    CHECK(a.h_r == doctest::Approx(b.h_l).epsilon(1e-14));
    CHECK(a.d_l == doctest::Approx(b.d_r).epsilon(1e-14));
  }
}
