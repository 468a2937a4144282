#include <doctest.h>

#include "stickydiff/distributions.hpp"

using namespace stickydiff;

// Reference values computed independently with scipy.special / scipy.stats.

TEST_CASE("regularized incomplete beta") {
  CHECK(beta_inc(0.5, 0.5, 0.3) == doctest::Approx(0.36901011956554536).epsilon(1e-12));
  CHECK(beta_inc(2.0, 3.0, 0.7) == doctest::Approx(0.9163).epsilon(1e-12));
  CHECK(beta_inc(10.0, 0.5, 0.9) == doctest::Approx(0.15164090963470994).epsilon(1e-12));
  CHECK(beta_inc(5.5, 7.25, 0.42) == doctest::Approx(0.47829839430961935).epsilon(1e-12));
  CHECK(beta_inc(2.0, 3.0, 0.0) == 0.0);
  CHECK(beta_inc(2.0, 3.0, 1.0) == 1.0);
}

TEST_CASE("regularized incomplete gamma") {
  CHECK(gamma_p(0.5, 0.2) == doctest::Approx(0.47291074313446196).epsilon(1e-12));
  CHECK(gamma_q(0.5, 0.2) == doctest::Approx(0.5270892568655381).epsilon(1e-12));
  CHECK(gamma_p(2.0, 1.0) == doctest::Approx(0.2642411176571153).epsilon(1e-12));
  CHECK(gamma_q(7.5, 3.25) == doctest::Approx(0.9700710388463101).epsilon(1e-12));
  CHECK(gamma_p(20.0, 30.0) == doctest::Approx(0.9781265315586091).epsilon(1e-12));
  CHECK(gamma_q(20.0, 30.0) == doctest::Approx(0.02187346844139091).epsilon(1e-12));
}

TEST_CASE("F and chi-square upper tails") {
  CHECK(f_sf(8.0, 1, 2) == doctest::Approx(0.10557280900008414).epsilon(1e-12));
  CHECK(f_sf(2.5, 4, 15) == doctest::Approx(0.08673499728031352).epsilon(1e-12));
  CHECK(f_sf(0.3, 2, 8) == doctest::Approx(0.7488005297763748).epsilon(1e-12));
  CHECK(f_sf(12.0, 3, 6) == doctest::Approx(0.006025505127574123).epsilon(1e-12));
  CHECK(chi2_sf(2.4, 1) == doctest::Approx(0.12133525035848208).epsilon(1e-12));
  CHECK(chi2_sf(5.0, 3) == doctest::Approx(0.1717971442967335).epsilon(1e-12));
  CHECK(chi2_sf(0.5, 2) == doctest::Approx(0.7788007830714049).epsilon(1e-12));
  CHECK(chi2_sf(25.0, 10) == doctest::Approx(0.005345505487134069).epsilon(1e-12));
  CHECK(f_sf(0.0, 3, 6) == 1.0);
  CHECK(chi2_sf(0.0, 4) == 1.0);
}
