"""Exact sawtooth-function algebra for one-dimensional neural networks."""

from .alternating import (
    BoundReport,
    LabeledDataset,
    ap_image_check,
    classification_error,
    max_shallow_width,
    n_ap,
    n_ap_literal,
    network_lower_bound,
    sawtooth_lower_bound,
)
from .network import (
    MirrorDecomposition,
    NetworkSpec,
    Neuron,
    RecurrentSpec,
    compile_network,
    compile_recurrent,
    evaluate_network,
    evaluate_recurrent,
    mirror_closed_form,
    mirror_closed_form_pwl,
    mirror_decompose,
    mirror_map,
    mirror_network,
    relu,
    stump,
)
from .pwl import (
    AffinePiece,
    ExactRational,
    PwlFunction,
    ThresholdClassifier,
    affine,
    constant,
    format_rational,
    identity,
    piece_count,
    pwl_add,
    pwl_compose,
    pwl_equal,
    pwl_eval,
    pwl_scale_shift,
    rational,
    threshold_classifier,
)

__version__ = "0.1.0"
