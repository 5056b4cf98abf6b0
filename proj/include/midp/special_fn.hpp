#pragma once

namespace midp {

/// Survival function of the chi-square distribution with k degrees of
/// freedom, i.e. the upper regularized incomplete gamma Q(k/2, x/2).
/// Throws InvalidDegreesOfFreedom (k < 1) or NegativeArgument (x < 0).
double chisq_survival(int k, double x);

/// Natural log of the chi-square survival function; finite far into the
/// tail where chisq_survival underflows.
double log_chisq_survival(int k, double x);

/// log E exp(hU) = log((e^h - 1) / h) for U uniform on [0, 1], h >= 0.
/// Throws NegativeParameter.
double log_mgf_uniform(double h);

/// log(sinh(x) / x) for x >= 0, exact at 0 and overflow-free for large x.
double log_sinhc(double x);

}  // namespace midp
