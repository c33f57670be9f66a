"""Exact verification toolkit for norm-ratio point configurations over small
odd finite fields.

The library computes, entirely in exact arithmetic, the character sums,
indicator transforms, sphere geometry, pair counts, and null-subspace
constructions attached to the ratio-of-norms map on F_q**d, and checks the
closed forms and threshold claims about them by exhaustive enumeration at
desk scale.  The `ratiodist` command exposes every verification battery as
a reproducible JSON-lines run.
"""

from .counting import (
    PAIR_BUDGET,
    nu_brute,
    nu_fourier,
    nu_fourier_profile,
    nu_lower_bound,
    nu_lower_bound_d4,
    nu_profile_brute,
    phi_image,
    threshold_experiment,
)
from .cyclotomic import (
    CycNum,
    chi,
    complex_embed,
    completed_square_sum,
    gauss_sum,
    gauss_sum_embedding,
    orthogonality_sum,
    verify_gauss_square,
)
from .field import CapExceededError, Field, check_cap, configured_cap, is_prime
from .fourier import (
    FourierTable,
    PointSet,
    decode_point,
    dft,
    encode_point,
    inversion_check,
    load_pointset,
    plancherel_sum,
    random_pointset,
    save_pointset,
)
from .isotropic import (
    SharpnessSet,
    SubspaceBasis,
    max_isotropic_brute,
    max_isotropic_construct,
    max_isotropic_dim,
    sharpness_set,
    verify_null,
)
from .varieties import (
    VerifyResult,
    norm_value,
    phi,
    ratio_sphere,
    rt_ft_closed,
    s0_ft_closed,
    s0_ft_rational,
    verify_rt_ft,
    verify_s0_ft,
    zero_sphere,
)

__version__ = "0.1.0"
