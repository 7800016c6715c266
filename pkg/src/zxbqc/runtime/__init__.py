from .backend import DEFAULT_BACKEND, KERNELS, get_kernel
from .compile import Compiled, compile_program
from .execute import (RunResult, RuntimeFailure, ShotData, draw_secrets, exact_distribution,
                      run_compiled, run_program)
from .schedule import (AgentSchedule, AgentTranscript, ScheduleBuilder, ScheduleOp, TranscriptRecord,
                       check_locality, owner, read_transcripts, write_transcripts)

__all__ = [
    "DEFAULT_BACKEND", "KERNELS", "get_kernel", "Compiled", "compile_program", "RunResult",
    "RuntimeFailure", "ShotData", "draw_secrets", "exact_distribution", "run_compiled",
    "run_program", "AgentSchedule", "AgentTranscript", "ScheduleBuilder", "ScheduleOp",
    "TranscriptRecord", "check_locality", "owner", "read_transcripts", "write_transcripts",
]
