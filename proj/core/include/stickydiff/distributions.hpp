#pragma once

namespace stickydiff {

// Regularized incomplete gamma P(s,x) and Q(s,x) = 1 - P(s,x), s > 0, x >= 0.
// Series expansion for x < s+1, continued fraction otherwise; relative
// accuracy about 1e-14.
double gamma_p(double s, double x);
double gamma_q(double s, double x);

// Regularized incomplete beta I_x(a,b), a,b > 0, x in [0,1] (Lentz continued
// fraction with the symmetry transform).
double beta_inc(double a, double b, double x);

// Upper-tail p-values.
double f_sf(double f, double df1, double df2);       // P(F >= f)
double chi2_sf(double x, double df);                 // P(X >= x)

}  // namespace stickydiff
