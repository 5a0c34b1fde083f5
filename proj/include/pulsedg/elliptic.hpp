#pragma once

// Complete and incomplete elliptic integrals and Jacobi elliptic functions,
// parameterized by the modulus k (parameter m = k^2).

namespace pulsedg::elliptic {

double K(double k);  // complete, first kind
double E(double k);  // complete, second kind

struct Jacobi {
  double am, sn, cn, dn;
};

// Arithmetic-geometric mean descent; am is continuous and increasing in u.
Jacobi jacobi(double u, double k);
double cn(double u, double k);

// Carlson symmetric forms.
double carlson_RF(double x, double y, double z);
double carlson_RD(double x, double y, double z);

// Incomplete integral of the second kind E(phi, k) for any real phi.
double E_incomplete_phi(double phi, double k);
// Jacobi epsilon function E(am(u), k), the incomplete integral in the Jacobi argument.
double E_incomplete(double u, double k);

}  // namespace pulsedg::elliptic
