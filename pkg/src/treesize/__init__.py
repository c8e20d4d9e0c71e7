"""Tree-size complexity of few-qubit states.

Classify 2-4 qubit pure states under stochastic local operations,
construct minimal tensor/sum trees realizing their bra-ket formulas,
measure exact and epsilon-approximate tree size, evaluate the
maximal-tree-size witness, and step the generalized Werner family
through its mixed-state tree sizes.
"""

from .approx import (
    EpsilonScan,
    FBounds,
    OptResult,
    WitnessReport,
    epsilon_ts,
    epsilon_ts_scan,
    f_bounds,
    max_overlap,
    witness_eval,
    witness_from_wprime,
)
from .braket import parse_braket, print_braket
from .errors import (
    BadEnsemble,
    BadParam,
    BadParams,
    BadPartition,
    BraketSyntaxError,
    BudgetExceeded,
    BudgetTooLarge,
    Degenerate,
    DegeneratePolynomial,
    DimensionMismatch,
    InvalidDensity,
    NotIrreducible,
    QubitCoverage,
    TreesizeError,
    Unsupported,
    WitnessMissing,
    ZeroVector,
)
from .exact import (
    OracleScan,
    TsResult,
    decompose3,
    decompose4_irreducible,
    decompose4_reducible,
    oracle_scan,
    ts2,
    ts3,
    ts4,
    ts_oracle,
)
from .irreducible import (
    AbcdForm,
    Family,
    IrreducibilityVerdict,
    WNormalForm,
    abcd_split,
    build_family_state,
    check_family,
    is_irreducible,
    quartic_lambda_roots,
)
from .shapes import CatalogEntry, TreeShape, catalog, enumerate_shapes, instantiate, shape_of
from .slocc import Class2, Evidence, Kind3, SloccClass3, classify2, classify3, one_eigenvalue
from .states import (
    ILO,
    CoeffMatrixPair,
    DensityMatrix,
    PureState,
    apply_ilo,
    apply_ilos,
    b_state,
    basis_ket,
    bell_state,
    coeff_matrices,
    d2_state,
    density_from_json,
    density_to_json,
    ghz_state,
    normalize,
    overlap2,
    p_state,
    psi4_state,
    pure_to_density,
    random_ilo,
    random_ilos,
    random_state,
    state_from_json,
    state_to_json,
    states_equal,
    w_state,
    w0_state,
    w1_state,
)
from .tree import (
    Leaf,
    Prod,
    Sum,
    TreeNode,
    canonical,
    evaluate,
    evaluate_raw,
    ilo_pullback_tree,
    size,
    tree_from_json,
    tree_to_json,
)
from .werner import WernerTs, mixed_ts_from_decomposition, werner_state, werner_ts

P_W = 0.6955427

__all__ = [name for name in dir() if not name.startswith("_")]
