#pragma once

#include "fksym/catalog.hpp"
#include "fksym/errors.hpp"

#include <cmath>
#include <memory>
#include <string>

namespace fksym::catalog_detail {

double par(const Params& p, const char* name);

/// Throws ValidityError "<entry>: requires <constraint>" unless ok.
void require(bool ok, const std::string& entry, const std::string& constraint);

/// ln sinh(h), h > 0, without overflow.
double log_sinh(double h);

/// log I_ν(z) for z > 0 with a -∞ result at z = 0 for ν > 0.
double log_i(double nu, double z);
/// ln(e^{-z} I_ν(z)).
double log_i_scaled(double nu, double z);

/// γ = 1 laplace-family kernel with the I_ν branch only:
/// √(x/y) e^{(F(y)-F(x))/2σ}/(σt) exp(-(x+y)/(σt) - At/(2σ)) I_ν(2√(xy)/(σt)),
/// ν = √(2B+σ²)/σ.
double log_laplace_kernel(double sigma, double A, double B, double Fx, double Fy, double t,
                          double x, double y);

/// γ = 1 quadratic-family kernel, C₁ = 1, C₂ = 0:
/// √A e^{(F(y)-F(x))/2σ}/(2σ sinh(√At/2)) √(x/y) exp(-Bt/2σ - √A(x+y)/(2σ tanh(√At/2)))
/// × I_ν(√(Axy)/(σ sinh(√At/2))), ν = √(σ²+2C)/σ.
double log_quadratic_kernel(double sigma, double A, double B, double C, double Fx, double Fy,
                            double t, double x, double y);

/// ∫₀^∞ y^{k-1/2} e^{-c y} I_ν(2β√y) dy in log form (k + ν/2 + 1/2 > 0, c > 0).
double log_bessel_laplace(double k, double nu, double c, double beta);

std::unique_ptr<CatalogEntry> make_besq();
std::unique_ptr<CatalogEntry> make_besq_cosh();
std::unique_ptr<CatalogEntry> make_bessel();
std::unique_ptr<CatalogEntry> make_bessel_drift();
std::unique_ptr<CatalogEntry> make_radial_ou();
std::unique_ptr<CatalogEntry> make_cir();
std::unique_ptr<CatalogEntry> make_rational();
std::unique_ptr<CatalogEntry> make_tanh();
std::unique_ptr<CatalogEntry> make_drift34();
std::unique_ptr<CatalogEntry> make_sqrt_drift();
std::unique_ptr<CatalogEntry> make_generic_a0();
std::unique_ptr<CatalogEntry> make_generic_apos();

} // namespace fksym::catalog_detail
