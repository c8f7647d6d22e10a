"""Online class-incremental learning with dual students and a fused global workspace."""

import json as _json

from ._core import (  # noqa: F401
    ContractError,
    DataError,
    DimensionError,
    FormatError,
    ParameterError,
    ala,
    combine,
    cross_entropy,
    faa,
    frf,
    fuse_back,
    kl_div,
    load_dataset,
    log_softmax,
    masked_logits,
    parameter_cosine,
    run_experiment,
    softmax,
    tempered_kd,
    write_dataset,
    __version__,
)


def run(config):
    """Run one experiment.

    ``config`` may be a dict or a JSON string matching the CLI config schema.
    Returns a dict with ``faa``, ``frf``, ``ala``, ``accuracy_matrix`` and
    ``out_dir``.
    """
    if isinstance(config, (dict, list)):
        config = _json.dumps(config)
    return run_experiment(config)
