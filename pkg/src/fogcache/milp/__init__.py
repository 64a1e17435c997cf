from .build import (
    CLOUD_ONLY,
    FOG_ONLY,
    OPTIMAL_SPLIT,
    Breakdown,
    FogcacheModel,
    ModelError,
    ScenarioFlags,
    build_model,
    build_problem,
    expected_variable_count,
)
from .lpformat import LpSyntaxError, UnsupportedLpFeature, export_lp, format_lp, parse_lp, parse_lp_text
from .problem import (
    CONTINUOUS,
    EQ,
    GE,
    INTEGER,
    LE,
    Constraint,
    MilpProblem,
    ProblemError,
    Variable,
)
