#pragma once

#include "gkpsim/clifford.hpp"
#include "gkpsim/compiler.hpp"
#include "gkpsim/error_analysis.hpp"
#include "gkpsim/gkp_states.hpp"
#include "gkpsim/hybrid_state.hpp"
#include "gkpsim/logical.hpp"
#include "gkpsim/matrix.hpp"
#include "gkpsim/oracle.hpp"
#include "gkpsim/quadrature.hpp"
#include "gkpsim/wavepacket.hpp"
