"""Small dense semidefinite programming toolkit."""
from .complementarity import (
    ComplementarityReport,
    RankBoundWarning,
    beta_coefficient,
    check_complementarity,
    combine_duals,
    recombined_dual,
)
from .embedding import build_embedding_sdp, embedding_dim_L
from .kernels import BACKEND
from .lmi import LmiResult, solve_lmi
from .problem import (
    SdpProblem,
    SdpSolution,
    load_problem,
    problem_from_dict,
    problem_to_dict,
    solution_to_dict,
)
from .solver import common_kernel, solve
