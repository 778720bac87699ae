"""Finite A-infinity categories with exact coefficients."""

from .foundation import QQ, FieldSpec, GradedSpace, LinearMap, Residue
from .core import (AInfFunctor, AInfPair, AInfStructure, Gen, HomotopyData, MorphismHomotopy,
                   check_ainf, opposite, representable_pair)
from .bar import apply_homotopy, bar_differential, check_bar_square, check_functor, perturb
from .dual import TruncatedDualAlgebra, abelianize, dual_algebra, induced_dual_map
from .transfer import certify, local_algebra_fixture, transfer
from .deformation import adapted_complex, deformed_differential, family_matrix, specialize_first_order
from .jets import JetIdeal, JetMatrix, JetPoly, ideal_jet_equal, minors, straighten
from .kill import KillTarget, kill_all, kill_stage

__version__ = "0.1.0"
