"""Short orthogeodesic decompositions of ideal hyperbolic polygons in the Poincare disk."""

from .kernel import (
    DiskPoint,
    Geodesic,
    GeometryError,
    IdealPoint,
    MobiusMap,
    OrthoSegment,
    bisector,
    common_perpendicular,
    dist_pg,
    dist_pp,
    equidistant_point,
    foot_pg,
    mobius_normalize,
    signed_distance,
)
from .polygon import (
    IdealPolygon,
    OrthoDecomposition,
    OrthoGeodesic,
    Triangulation,
    all_orthogeodesics,
    basmajian_sum,
    decomposition_from_triangulation,
    inradius_formula,
    make_polygon,
    max_inradius,
    orthogeodesic,
    regular,
    triangulations,
)
from .cutlocus import CutLocusTree, build_cut_locus
from .decompose import bounds, o_n_lower, o_n_upper, oracle_minmax, short_decomposition
from .moduli import MarkedLengths, marked_lengths, normalize, reconstruct, sample, spectrum

__version__ = "0.1.0"
