#ifndef FLIPMESH_FLIPMESH_HPP
#define FLIPMESH_FLIPMESH_HPP

#include "analysis.hpp"
#include "error.hpp"
#include "flip_engine.hpp"
#include "geometry.hpp"
#include "halfedge_mesh.hpp"
#include "mesh_io.hpp"
#include "spatial_index.hpp"
#include "stab_predicates.hpp"
#include "surface.hpp"
#include "surface_gen.hpp"

#endif
