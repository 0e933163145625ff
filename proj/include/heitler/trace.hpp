#pragma once

#include <vector>

namespace heitler {

/// Time-resolved two-photon correlation g2(tau) for tau >= 0 (the function is
/// even in tau). Delays are in units of 1 / gamma_sigma.
struct G2Trace {
  std::vector<double> taus;
  std::vector<double> values;
};

}  // namespace heitler
