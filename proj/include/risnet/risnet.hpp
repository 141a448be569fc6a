#ifndef RISNET_RISNET_HPP
#define RISNET_RISNET_HPP

#include "risnet/analytic_distributions.hpp"
#include "risnet/channel_model.hpp"
#include "risnet/experiment.hpp"
#include "risnet/integration.hpp"
#include "risnet/parallel.hpp"
#include "risnet/rng.hpp"
#include "risnet/scaling_laws.hpp"
#include "risnet/special_functions.hpp"
#include "risnet/validation.hpp"

#endif  // RISNET_RISNET_HPP
