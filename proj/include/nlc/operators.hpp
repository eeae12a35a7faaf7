#pragma once

#include <utility>

#include "nlc/field.hpp"

namespace nlc {

/// Ghost-cell closure used by the cell-centered difference operators.
///   neumann:   mirror ghost, zero normal derivative at the wall
///   dirichlet: antimirror ghost, zero value at the wall
///   periodic:  wrap-around (test harness closure; the solver runs on walls)
enum class Closure { neumann, dirichlet, periodic };

/// Face gradient of a cell scalar.  Interior faces carry the two-point
/// difference; boundary-normal faces carry the ghost closure value
/// (neumann: 0, dirichlet: 2 s / h, periodic: wrapped difference).
///
/// Discrete duality: for any s and any w with zero boundary-normal faces,
///   <div w, s>_cells = -<w, grad s>_faces
/// exactly up to round-off, with volume weights hx*hy on both sides.
StaggeredField grad(const ScalarField& s, Closure bc = Closure::neumann);

/// Cell divergence of face data.  Together with grad this satisfies the
/// summation-by-parts identity above; composing the two reproduces
/// laplacian() entrywise in exact floating point.
ScalarField div(const StaggeredField& w);

/// Five-point Laplacian of a cell scalar, computed as div(grad(s, bc)) so
/// the composition identity holds bitwise.  Symmetric and negative
/// semidefinite for all three closures.
ScalarField laplacian(const ScalarField& s, Closure bc = Closure::neumann);

/// Boundary rule for center-to-face interpolation.
///   extrapolate: linear two-point extrapolation, exact for linear fields
///   nearest:     copy the single adjacent cell; preserves bounds, used for
///                the face density in the momentum solve
enum class FaceRule { extrapolate, nearest };

/// Cell scalar averaged to both face families (two-point means inside,
/// FaceRule at boundary faces).  Exact for constants; extrapolate is also
/// exact for linear fields.
StaggeredField center_to_faces(const ScalarField& s, FaceRule rule = FaceRule::extrapolate);

/// Face velocity averaged to cell centers, one scalar per component.
/// Exact for constant and linear data.
std::pair<ScalarField, ScalarField> faces_to_center(const StaggeredField& w);

// Volume-weighted inner products, norms, and reductions.  All loops run in
// a fixed serial order so results are reproducible bit for bit.
double dot_cells(const ScalarField& a, const ScalarField& b);
double dot_faces(const StaggeredField& a, const StaggeredField& b);
double l2_norm_cells(const ScalarField& a);
double l2_norm_faces(const StaggeredField& a);
double linf_norm_cells(const ScalarField& a);
double linf_norm_faces(const StaggeredField& a);
double integral_cells(const ScalarField& a);
double mean_cells(const ScalarField& a);

/// Centered differences of a cell scalar stored as a flat vector, with the
/// ghost closure applied at walls.  Shared by the director source, the
/// elastic force, and the energy quadratures so they all see one stencil.
double centered_dx(const std::vector<double>& f, const Grid& g, int i, int j, Closure bc);
double centered_dy(const std::vector<double>& f, const Grid& g, int i, int j, Closure bc);

/// L2 norm of the centered-difference gradient of a director difference,
/// using the same stencil as the elastic energy.
double h1_seminorm_director(const DirectorField& a, Closure bc = Closure::neumann);

} // namespace nlc
