#pragma once

#include "jpvi/xreal.hpp"

namespace jpvi {

/// f'(t) from the 5-point centred stencil, error O(h^4).
template <class F>
XReal fd_first(F&& f, const XReal& t, const XReal& h) {
  return (f(t - 2 * h) - 8 * f(t - h) + 8 * f(t + h) - f(t + 2 * h)) / (12 * h);
}

/// f''(t) from the 5-point centred stencil, error O(h^4).
template <class F>
XReal fd_second(F&& f, const XReal& t, const XReal& h) {
  return (-f(t - 2 * h) + 16 * f(t - h) - 30 * f(t) + 16 * f(t + h) - f(t + 2 * h)) / (12 * h * h);
}

/// f'(t) from the one-sided forward 5-point stencil, error O(h^4).
template <class F>
XReal fd_forward(F&& f, const XReal& t, const XReal& h) {
  return (-25 * f(t) + 48 * f(t + h) - 36 * f(t + 2 * h) + 16 * f(t + 3 * h) - 3 * f(t + 4 * h)) /
         (12 * h);
}

}  // namespace jpvi
