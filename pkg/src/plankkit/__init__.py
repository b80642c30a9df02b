"""Relative widths, successive C-inradii, hyperplane cuts and plank coverings of convex bodies."""
from .bodies import ConvexBody
from .cuts import (Cut, LEAF, PartitionFamily, apply_cut_tree, arrangement_pieces,
                   greatest_piece_inradius, optimal_conway_cuts, random_cut_tree,
                   verify_conway_theorem, verify_partition_inequality, voronoi_partition)
from .errors import *  # noqa: F401,F403
from .geometry import (Hyperplane, WidthResult, c_inradius, erode, intersect,
                       minimal_relative_width, minimal_width, relative_width_parallel,
                       slice_with_halfspace, support_value, width_parallel)
from .inradius import (ErosionProfile, LinearPacking, SuccessiveInradiusResult,
                       inradius_sequence, packing_feasible, rounded_relative_width,
                       successive_inradius, successive_inradius_via_packing)
from .planks import (Plank, PlankFamily, affine_deficit, bang_deficit, covers_body,
                     plank_relative_width, thicken_hyperplane, two_plank_check)
from .search import ProbeConfig, ProbeReport, probe, random_body, random_plank_covering

__version__ = "0.1.0"
