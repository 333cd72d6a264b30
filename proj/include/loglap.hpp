#ifndef LOGLAP_HPP
#define LOGLAP_HPP

// Umbrella header for the log-Laplacian library.

#include "loglap/acceptance.hpp"
#include "loglap/crosscheck.hpp"
#include "loglap/energy.hpp"
#include "loglap/extension.hpp"
#include "loglap/field.hpp"
#include "loglap/operator.hpp"
#include "loglap/parallel.hpp"
#include "loglap/quadrature.hpp"
#include "loglap/radial.hpp"
#include "loglap/spectral.hpp"
#include "loglap/specfun.hpp"
#include "loglap/version.hpp"

#endif  // LOGLAP_HPP
