#pragma once

#include <string>

#include "orbitope/sdp.hpp"

namespace orbitope {

/// SDPA sparse format (".dat-s"). The file encodes
///   min c^T x  s.t.  sum_i x_i F_i - F0 psd
/// whose dual is  max <F0,Y> s.t. <F_i,Y> = c_i, Y psd  -- exactly an
/// SdpProblem with sense Maximize (F0 = objective, F_i = constraints,
/// c = rhs). A Minimize problem is exported with the objective negated.
std::string export_sdpa(const SdpProblem& p);
SdpProblem import_sdpa(const std::string& text);

void write_sdpa_file(const SdpProblem& p, const std::string& path);
SdpProblem read_sdpa_file(const std::string& path);

}  // namespace orbitope
