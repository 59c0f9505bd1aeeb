#ifndef CHEMO_CHEMO_HPP
#define CHEMO_CHEMO_HPP

#include "chemo/config.hpp"
#include "chemo/diagnostics.hpp"
#include "chemo/elliptic.hpp"
#include "chemo/figures.hpp"
#include "chemo/grid.hpp"
#include "chemo/kinetics.hpp"
#include "chemo/mms.hpp"
#include "chemo/state.hpp"
#include "chemo/stepper.hpp"
#include "chemo/sweep.hpp"
#include "chemo/theory.hpp"

#endif // CHEMO_CHEMO_HPP
