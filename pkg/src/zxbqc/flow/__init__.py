from .opengraph import FlowError, OpenGraph, odd_neighborhood, open_graph_of, plane_of_phase
from .pauli import FlowViolation, PauliFlowData, find_flow, verify_pauli_flow
from .semi import ReducedFlow, flow_of_semi_graph_like, reduced_flow

__all__ = [
    "FlowError", "FlowViolation", "OpenGraph", "PauliFlowData", "ReducedFlow",
    "find_flow", "flow_of_semi_graph_like", "odd_neighborhood", "open_graph_of",
    "plane_of_phase", "reduced_flow", "verify_pauli_flow",
]
