#pragma once
#include <mutex>

namespace romwi {
// fftw planning is not thread safe; executing a plan on its own arrays is.
// every TU that creates/destroys plans must hold this.
inline std::mutex fftw_plan_mutex;
}  // namespace romwi
