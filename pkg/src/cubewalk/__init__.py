"""Generators from n-cube walks with a balanced Gray cycle removed."""

from .cubefunc import (
    BooleanMap,
    HamiltonianCycle,
    IterationGraph,
    apply_component,
    build_iteration_graph,
    cycle_to_gray,
    format_function_table,
    gray_to_cycle,
    is_strongly_connected,
    parse_function_table,
    recover_removed_permutation,
    remove_cycle,
)
from .graycode import (
    BalanceClass,
    Decomposition,
    GrayCode,
    TransitionCount,
    TransitionSequence,
    choose_l,
    classify_balance,
    construction_b,
    count_all_decompositions,
    count_fixed_l_decompositions,
    enumerate_decompositions,
    from_transitions,
    generate_balanced,
    is_balanced,
    reflected_gray,
    to_transitions,
    transition_count,
)
from .markov import (
    MarkovMatrix,
    MixingReport,
    epsilon_sweep,
    is_doubly_stochastic,
    markov_of,
    mixing_time,
    total_variation_to_uniform,
)
from .prng import (
    PROFILE_TAGS,
    GeneratorConfig,
    GeneratorState,
    StrategyGenerator,
    paper_profile,
)
from .stats import (
    TestReport,
    bits_from_bytes,
    block_frequency,
    chi_square_blocks,
    export_raw,
    monobit,
    run_battery,
    runs_test,
)

__version__ = "0.1.0"
