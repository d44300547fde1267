"""Normal surface theory for triangulated 3-manifolds and PL curves on surfaces."""
from .triangulation import (FaceGluing, SurfaceTriangulation, Triangulation, build,
                            from_gluing_table)
from .homology import homology, is_homology_sphere, smith_normal_form
from .normal_coords import Mode, matching_matrix, vertex_linking_vector, weight

__version__ = "0.1.0"

__all__ = [
    "FaceGluing", "SurfaceTriangulation", "Triangulation", "build", "from_gluing_table",
    "homology", "is_homology_sphere", "smith_normal_form",
    "Mode", "matching_matrix", "vertex_linking_vector", "weight",
]
