"""Makespan minimization for precedence-constrained task graphs.

A genetic algorithm schedules a DAG of tasks onto identical processors;
fitness evaluation runs either sequentially or fanned out over worker
threads in synchronous master-slave fashion, with bit-identical search
trajectories either way. An analytical cost model predicts the speedup, an
exhaustive oracle supplies exact optima for small instances, and a
benchmark harness measures both engines.
"""

from .analysis import (
    BenchCell,
    BenchReport,
    ComplexityModel,
    exhaustive_optimal,
    make_suite,
    run_benchmark,
)
from .engine import GAConfig, GAResult, run, run_to_convergence
from .errors import (
    ConfigError,
    CycleError,
    GraphError,
    GraphSyntaxError,
    OracleCapError,
)
from .evaluator import (
    ScheduleResult,
    decode,
    evaluate_population,
    fitness_from_makespan,
    gantt_rows,
)
from .genome import (
    Chromosome,
    Individual,
    Population,
    crossover,
    init_population,
    mutate,
    select_parents,
)
from .taskgraph import (
    TaskGraph,
    compute_heights,
    lower_bounds,
    parse_graph,
    random_dag,
    serialize_graph,
)

__version__ = "0.1.0"

__all__ = [
    "BenchCell", "BenchReport", "ComplexityModel", "exhaustive_optimal",
    "make_suite", "run_benchmark",
    "GAConfig", "GAResult", "run", "run_to_convergence",
    "ConfigError", "CycleError", "GraphError", "GraphSyntaxError",
    "OracleCapError",
    "ScheduleResult", "decode", "evaluate_population",
    "fitness_from_makespan", "gantt_rows",
    "Chromosome", "Individual", "Population", "crossover",
    "init_population", "mutate", "select_parents",
    "TaskGraph", "compute_heights", "lower_bounds", "parse_graph",
    "random_dag", "serialize_graph",
    "__version__",
]
