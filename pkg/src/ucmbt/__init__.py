"""Model-based system testing from guarded use-case scenarios.

Pipeline: load a ``.ucm.json`` model, fold scenarios into execution
contracts, extract one test goal per path, derive sequence diagrams, merge
them into a transition table and statechart, then run the goals on the chart
and report coverage.
"""

from .contracts import (
    EmptyContract,
    EmptyFlow,
    ExecutionContract,
    TestGoal,
    extract_test_goals,
    scenario_contract,
    system_contract,
)
from .executor import CoverageReport, GoalRun, execute_all, execute_goal
from .guards import (
    And,
    EmptyExpression,
    GuardAtom,
    GuardLiteral,
    GuardSyntaxError,
    Or,
    UnboundAtom,
    eval_dnf,
    eval_guard,
    parse_guard,
    render_guard,
    to_dnf,
)
from .loader import FormatError, InvalidModel, bundled_model_path, dump_model, load_model, loads_model, read_model
from .model import (
    CycleDetected,
    Diagnostic,
    Edge,
    ScenarioGraph,
    ScenarioStep,
    SystemFlow,
    SystemModel,
    UseCase,
    enumerate_paths,
    validate_model,
)
from .synthesis import (
    Conflict,
    ConflictError,
    NoUniqueInitial,
    DeterminismViolation,
    SequenceDiagram,
    StateChart,
    TransitionRow,
    build_state_chart,
    derive_sequence_diagrams,
    detect_conflicts,
    generate_transition_table,
)

__version__ = "0.1.0"
