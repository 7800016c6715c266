from .program import (
    ObfuscatedProgram, prepare, program_from_json, program_to_public_json,
    program_to_secrets_json, public_view,
)
from .stages import (
    DUMMY, EVEN, ODD, SINGLE, STUB, BlockPartition, PreparationError, SplitMap,
    add_dummy_resources, check_locality, compute_depths, externalize_internal_edges,
    hub_degree, hubs, initial_partition, protocol_normal_form, split_phases,
    subdivide_interblock_edges,
)

__all__ = [
    "DUMMY", "EVEN", "ODD", "SINGLE", "STUB", "BlockPartition", "ObfuscatedProgram",
    "PreparationError", "SplitMap", "add_dummy_resources", "check_locality", "compute_depths",
    "externalize_internal_edges", "hub_degree", "hubs", "initial_partition", "prepare",
    "program_from_json", "program_to_public_json", "program_to_secrets_json",
    "protocol_normal_form", "public_view", "split_phases", "subdivide_interblock_edges",
]
