"""Sublinear circuits of point sets relative to polyhedra, and SAGE certificates built on them."""
from .certify import (AGEWitness, MembershipResult, SageDecomposition, Signomial, Status,
                      check_relent_certificate, convert_witness, dual_membership_check,
                      grid_min, lambda_age_check, refine_certificate, sage_membership)
from .circuits import (Circuit, FunctionalForm, Support, build_p_polyhedron, conic_circuits,
                       enumerate_circuits, functional_form, is_circuit)
from .polyhedra import HPolyhedron, VPolyhedron, dd_convert, lp_maximize
from .reduced import (CircuitGraph, ReducedSet, build_circuit_graph, minimality_witness,
                      reduced_circuits, separating_functional)
from .univariate import (ExtremeType, SortedAlphas, classify_extreme, extreme_generator,
                         univariate_circuits, univariate_reduced)

__version__ = "0.1.0"
