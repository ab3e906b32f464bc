"""Exact toric cobordisms, weighted blow-ups and C*-action weights."""

from .lattice import (
    Cone,
    Fan,
    LatticeError,
    NotCommonFace,
    SubdivisionReport,
    ValidationReport,
    common_face,
    cone_index,
    hnf_rows,
    is_smooth,
    point_in_cone,
    primitive,
    project_cone,
    quotient_projection,
    snf,
    validate_fan,
    verify_subdivision,
)
from .cobordism import (
    BordismFan,
    CobordismFans,
    CobordismSetup,
    FlipClassification,
    FlipKind,
    bordism_fan,
    bundle_fans,
    classify_flip,
    expected_index,
    make_setup,
    multiplicity_oracle,
    quotient_fans,
)
from .blowup import (
    ChartWeights,
    WeightedBlowupSpec,
    WPSSignature,
    chart_weights,
    exceptional_fiber,
    weighted_star_subdivision,
)
from .actions import (
    DiagonalAction,
    FixedComponentReport,
    PairingQuadric,
    PsiVerdict,
    Verdict,
    am_fm_degree,
    analyze,
    classify_psi,
    fixed_components_pn,
    og_example,
    order_graph,
    quadric_example,
)

__version__ = "0.1.0"
