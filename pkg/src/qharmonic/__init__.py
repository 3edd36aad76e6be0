"""qharmonic: exact finite multiple harmonic q-sums and their identities.

Computes the nested q-harmonic sums attached to multi-indices as exact
rational functions of an indeterminate q and machine-verifies the duality and
difference identities relating them, both symbolically in Q(q) and through an
independent sampled-evaluation route.
"""

from .exactq import (
    InexactDivisionError,
    PoleError,
    QPoly,
    QRat,
    Rational,
    poly_gcd,
    q_binomial,
    q_factorial,
    q_integer,
    q_power,
    qrat_eval,
    qrat_normalize,
)
from .harmonic import (
    QSeq,
    a_seq,
    a_value,
    b_seq,
    b_value,
    c_value,
    delta_qk_closed,
    delta_qk_iter,
    delta_z,
    nabla_q,
    subscript_expansion,
)
from .multiindex import (
    MultiIndex,
    dual,
    enumerate_by_weight,
    minus_reduce,
    parse_multiindex,
    subset_decode,
    subset_encode,
)
from .qseries import (
    BiSeries,
    F_a_series,
    G_series,
    IDENTITY,
    LAMBDA_X,
    LAMBDA_X_INV,
    LAMBDA_Y,
    LAMBDA_Y_INV,
    MUL_X,
    MUL_Y,
    PARTIAL_X,
    PARTIAL_Y,
    SeriesOp,
    TruncationError,
    apply_op,
    diag_q_integer,
    f_a_series,
    lambda_scale,
    lowering_op_i,
    lowering_op_i_shifted,
    lowering_op_ii,
    lowering_op_ii_shifted,
    mul_by_var,
    pde_operator,
    pde_residual,
    pde_solve_from_column,
    q_commutator,
    q_exp,
    q_partial,
    qshift_product,
    series_mul,
)
from .verify import (
    CampaignConfig,
    Record,
    VerificationReport,
    eval_crosscheck,
    parse_config_text,
    run_campaign,
    verify_duality,
    verify_inductive_relations,
    verify_main_identity,
    verify_series_suite,
)

__version__ = "0.1.0"
