"""Annihilator ideals and quasi-Baer tests for Leavitt path algebras of finite graphs."""

from .closure import (
    breaking_vertices,
    enumerate_hs,
    hereditary_closure,
    is_hereditary,
    is_hereditary_saturated,
    is_saturated,
    perp,
    s_saturation,
    saturation_rounds,
)
from .dsl import Workspace, format_workspace, parse_element, parse_workspace
from .errors import CapacityError, ContractViolation, LpaError, ValidationError
from .graph import (
    INF,
    Cycle,
    EdgeBundle,
    Graph,
    classify_vertex,
    cycle_has_exit,
    find_cycles,
    make_cycle,
    make_graph,
    root,
)
from .ideals import (
    AdmissiblePair,
    IdealPresentation,
    RationalPolynomial,
    ann_of_graded,
    annihilator,
    boolean_join,
    boolean_meet,
    graded_envelope,
    graded_join,
    is_annihilator_ideal,
    is_baer,
    is_quasi_baer,
    is_quasi_baer_star,
    is_reflexive,
    is_rickart,
    largest_graded_subideal,
    make_presentation,
    pair_leq,
    s_perp,
    validate_pair,
)
from .symbolic import (
    LpaElement,
    generators,
    homogeneous_component,
    is_zero,
    multiply,
    normal_form,
    spanning_monomials,
    v_H_element,
    verify_annihilation,
)

__version__ = "0.1.0"
