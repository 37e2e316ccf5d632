#pragma once

namespace sbsn {

// Derivative of log Gamma for x > 0. Throws std::domain_error otherwise.
double digamma(double x);

}  // namespace sbsn
