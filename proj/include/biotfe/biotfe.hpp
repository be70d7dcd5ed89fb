// Umbrella header.

#ifndef BIOTFE_BIOTFE_HPP
#define BIOTFE_BIOTFE_HPP

#include "biotfe/assembly.hpp"
#include "biotfe/basis.hpp"
#include "biotfe/biot_system.hpp"
#include "biotfe/dof_layout.hpp"
#include "biotfe/geometry.hpp"
#include "biotfe/interpolation.hpp"
#include "biotfe/material.hpp"
#include "biotfe/mesh.hpp"
#include "biotfe/quadrature.hpp"
#include "biotfe/solver.hpp"
#include "biotfe/sparse.hpp"
#include "biotfe/stokes.hpp"
#include "biotfe/timestep.hpp"
#include "biotfe/verify/cases.hpp"
#include "biotfe/verify/diagnostics.hpp"
#include "biotfe/verify/norms.hpp"
#include "biotfe/verify/study.hpp"

#endif  // BIOTFE_BIOTFE_HPP
