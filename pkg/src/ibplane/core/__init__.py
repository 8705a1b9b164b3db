"""Information-theoretic primitives and the joint/encoder data model."""

from ibplane.core.distributions import (
    BottleneckReport,
    Determinism,
    Encoder,
    JointXY,
    LayerChain,
    Objective,
    Posterior,
    chain_evaluate,
    compose_chain,
    decoder_posterior,
    evaluate,
    is_deterministic,
    joint_from_function,
    objective_value,
    point_prediction_error,
    require_deterministic,
)

__all__ = [
    "BottleneckReport",
    "Determinism",
    "Encoder",
    "JointXY",
    "LayerChain",
    "Objective",
    "Posterior",
    "chain_evaluate",
    "compose_chain",
    "decoder_posterior",
    "evaluate",
    "is_deterministic",
    "joint_from_function",
    "objective_value",
    "point_prediction_error",
    "require_deterministic",
]
