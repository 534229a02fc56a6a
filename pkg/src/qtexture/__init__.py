"""Quantum-state texture: measures, free operations, witnesses and property checks."""

from qtexture.channels import (
    KrausChannel,
    apply,
    detexture,
    is_texture_free,
    random_texture_free_channel,
    random_texture_free_unitary_mix,
)
from qtexture.exceptions import TextureError
from qtexture.kernels import BACKEND
from qtexture.measures import (
    AlphaZParams,
    MeasureValue,
    d_alpha_z,
    evaluate,
    f_alpha_z,
    t_bures,
    t_fidelity,
    t_gr,
    t_renyi,
    t_rugosity,
    t_trace,
    t_tsallis,
    t_weight,
)
from qtexture.states import (
    DensityMatrix,
    basis_state,
    free_state,
    free_vector,
    make_rng,
    maximally_mixed,
    pure_density,
    random_f1_fixing_unitary,
    random_mixed,
    random_pure,
)
from qtexture.witnesses import (
    Witness,
    evaluate_witness,
    imaginarity_witness,
    universal_witness,
    witness_jk,
    witness_theta,
    witness_w1,
)

__version__ = "0.1.0"
