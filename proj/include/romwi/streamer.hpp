#pragma once
#include <array>

#include "romwi/wave.hpp"

namespace romwi {

// Towed-streamer acquisition: sources at the m final array positions, dense
// receiver line, one-sided coverage of the coarse pairs. All traces share the
// fine sample window [j_begin, j_end].
struct StreamerData {
  int m = 0;
  double tau_f = 0;
  long j_begin = 0;
  long n_samples = 0;

  // lower[s][r-s-1]: measured trace at final sensor r (r > s) for source s
  std::vector<std::vector<std::vector<double>>> lower;
  // traces at the dense-line neighbors of each source, offsets {-2,-1,+1,+2}
  std::vector<std::array<std::vector<double>, 4>> near;
  // reference-medium (cbar) traces at the same neighbors and at zero offset
  std::vector<std::array<std::vector<double>, 4>> ref_near;
  std::vector<std::vector<double>> ref_zero;
};

// Full m x m response: missing (s,r), r > s filled by source/receiver
// reciprocity; diagonal filled by interpolating the scattered field
// (measurement minus reference) across the four neighbors in the Fourier
// domain with cubic Lagrange weights (-1/6, 2/3, 2/3, -1/6), then adding the
// reference back.
ArrayResponse streamer_assemble(const StreamerData& sd);

// Synthesize streamer data by simulation: shots at `ar` positions, recording
// at the other array positions one-sidedly plus the four dense neighbors
// (spacing dense_dx, a multiple of the grid step). The reference traces come
// from a second run in the homogeneous cbar medium.
StreamerData simulate_streamer(const VelocityField& v, const ArrayGeometry& ar,
                               double dense_dx, const Pulse& f, const SimOptions& opt);

}  // namespace romwi
