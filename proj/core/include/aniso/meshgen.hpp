#pragma once

#include "aniso/mesh.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace aniso {

/// [0,1]^2 as nx x ny cells, each split along the (i,j)-(i+1,j+1) diagonal.
SimplicialMesh aniso_grid_2d(int nx, int ny);
/// [0,1]^2 as n x round(n/eps) cells with the diagonal direction
/// alternating by row; right triangles with legs 1/n and eps-scaled.
SimplicialMesh needle_2d(double eps, int n = 2);
/// [0,1]^3 as nx x ny x nz boxes, each split into the 6 Kuhn tetrahedra.
SimplicialMesh kuhn_3d(int nx, int ny, int nz);
/// Single sliver (0,0,0), (1,0,0), (1/2, eps, eps^2), (1/2, -eps, eps^2).
SimplicialMesh sliver_3d(double eps);
/// (-1,1)^2 minus [0,1) x (-1,0] on a grid of spacing 1/n.
SimplicialMesh lshape_2d(int n);

struct FamilyMember {
  std::string family;
  std::string label;   // e.g. "nx=4,ny=40"
  double param = 0;    // eps, aspect, nz or n depending on the family
  double aspect = 0;   // analytic aspect ratio
  double gamma_max = 0;
  double h = 0;        // largest element diameter
  SimplicialMesh mesh;
};

/// Parses a family spec:
///   aniso_grid_2d:<nx-list>:<ny-list>   (an ny entry xK means K*nx)
///   needle_2d:<eps-list>[:n]
///   kuhn_3d:<nx>:<ny>:<nz-list>
///   sliver_3d:<eps-list>
///   lshape_2d:<n-list>
/// Lists are comma separated. Throws Error on an invalid spec.
std::vector<FamilyMember> gen_family(std::string_view spec);

}  // namespace aniso
