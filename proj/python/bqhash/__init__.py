"""Binary code inference by per-bit binary quadratic programming.

Arrays follow the library's orientation: data is D x n (samples in
columns) and codes are bits x n with entries in {-1, +1}.
"""

from ._bqhash import (
    BqhashError,
    ConfigError,
    DimensionError,
    IoError,
    NumericalError,
    PreconditionError,
    assemble_bit_instance,
    brute_force,
    build_supervised,
    build_unsupervised,
    derive_target,
    encode,
    evaluate,
    fit_linear_encoder,
    global_objective,
    hamming_distances,
    hamming_from_codes,
    infer_codes,
    init_codes,
    load_matrix,
    shift_instance,
    solve_al,
    solve_sdr,
    spectral_init,
)

__all__ = [name for name in dir() if not name.startswith("_")]
