#pragma once

#include "torsimax/acceptance.hpp"
#include "torsimax/delaunay.hpp"
#include "torsimax/distance_efficiency.hpp"
#include "torsimax/domains.hpp"
#include "torsimax/errors.hpp"
#include "torsimax/geometry.hpp"
#include "torsimax/hex_tiling.hpp"
#include "torsimax/io.hpp"
#include "torsimax/lattice.hpp"
#include "torsimax/parallel.hpp"
#include "torsimax/quadrature.hpp"
#include "torsimax/scalar_field.hpp"
#include "torsimax/torsion.hpp"
#include "torsimax/triangle_energy.hpp"
#include "torsimax/voronoi.hpp"
