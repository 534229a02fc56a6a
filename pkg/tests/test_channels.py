import numpy as np
import pytest

from qtexture.channels import (
    KrausChannel,
    apply,
    depolarizing_channel,
    detexture,
    identity_channel,
    is_texture_free,
    random_texture_free_channel,
    random_texture_free_unitary_mix,
    unitary_channel,
)
from qtexture.exceptions import DimensionError, TracePreservationError
from qtexture.states import (
    basis_state,
    free_state,
    make_rng,
    maximally_mixed,
    pure_density,
    random_f1_fixing_unitary,
    random_mixed,
    random_pure,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)


def test_completeness_enforced():
    with pytest.raises(TracePreservationError):
        KrausChannel([0.9 * np.eye(2)])


def test_apply_examples(rng):
    rho = random_mixed(3, 3, rng)
    np.testing.assert_allclose(apply(identity_channel(3), rho).data, rho.data, atol=1e-15)
    u = random_f1_fixing_unitary(3, rng)
    out = apply(unitary_channel(u), rho)
    assert np.trace(out.data).real == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(np.linalg.eigvalsh(out.data), np.linalg.eigvalsh(rho.data), atol=1e-12)
    e0 = pure_density(basis_state(2, 0))
    np.testing.assert_allclose(apply(depolarizing_channel(2), e0).data, maximally_mixed(2).data, atol=1e-15)


def test_apply_dim_mismatch():
    with pytest.raises(DimensionError):
        apply(identity_channel(2), free_state(3))


def test_is_texture_free_examples(rng):
    rep = is_texture_free(identity_channel(3))
    assert rep.free
    np.testing.assert_allclose(rep.alphas, [1.0])
    assert is_texture_free(unitary_channel(random_f1_fixing_unitary(4, rng)))
    assert is_texture_free(KrausChannel([X]))
    rep = is_texture_free(KrausChannel([Z]))
    assert not rep.free
    assert rep.residuals[0] == pytest.approx(1.0)


def test_annihilating_kraus_flagged():
    # K0 = f1 (alpha 1), K1 maps f1 to 0 (alpha 0): free, with index 1 flagged
    f1 = free_state(2).data
    minus = np.array([1, -1]) / np.sqrt(2)
    k1 = np.outer(minus, minus.conj())
    rep = is_texture_free(KrausChannel([f1, k1]))
    assert rep.free
    assert rep.annihilating == (1,)


def test_unitary_mix(rng):
    ch = random_texture_free_unitary_mix(3, 1, rng)
    assert len(ch) == 1 and is_texture_free(ch)
    for n in (2, 5):
        ch = random_texture_free_unitary_mix(4, n, rng)
        gram = sum(k.conj().T @ k for k in ch.kraus_ops)
        assert np.max(np.abs(gram - np.eye(4))) <= 1e-10


def test_isometry_channel_alphas_match_environment_vector():
    for seed in range(50):
        d, m = 2 + seed % 4, 1 + seed % 3
        ch = random_texture_free_channel(d, m, make_rng(seed))
        chi = random_pure(m, make_rng(seed))  # first draw inside the generator
        rep = is_texture_free(ch)
        assert rep.free
        np.testing.assert_allclose(rep.alphas, chi, atol=1e-9)
        assert np.sum(np.abs(rep.alphas) ** 2) == pytest.approx(1.0, abs=1e-9)


def test_isometry_channel_env_one_is_unitary():
    ch = random_texture_free_channel(3, 1, make_rng(4))
    k = ch.kraus_ops[0]
    assert np.max(np.abs(k.conj().T @ k - np.eye(3))) <= 1e-12


def test_isometry_channel_size_cap():
    with pytest.raises(DimensionError):
        random_texture_free_channel(8, 9, make_rng(0))


def test_generators_fix_f1():
    for seed in range(500):
        d = 2 + seed % 5
        rng = make_rng(seed)
        f1 = free_state(d)
        for ch in (random_texture_free_unitary_mix(d, 1 + seed % 3, rng),
                   random_texture_free_channel(d, 1 + seed % 4, rng)):
            assert np.max(np.abs(apply(ch, f1).data - f1.data)) <= 1e-9


def test_isometry_channel_is_not_unital():
    # the general construction must reach beyond mixed-unitary maps
    ch = random_texture_free_channel(3, 3, make_rng(9))
    out = apply(ch, maximally_mixed(3)).data
    assert np.max(np.abs(out - np.eye(3) / 3)) > 1e-3


def test_detexture_examples():
    np.testing.assert_allclose(detexture(free_state(3).data), free_state(3).data, atol=1e-15)
    np.testing.assert_allclose(detexture(np.eye(3)), free_state(3).data, atol=1e-15)
    e0 = pure_density(basis_state(2, 0)).data
    np.testing.assert_allclose(detexture(e0), free_state(2).data / 2, atol=1e-15)
    for d in (2, 4):
        assert np.trace(detexture(pure_density(basis_state(d, 0)).data)).real == pytest.approx(1 / d)


def test_detexture_idempotent(rng):
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    a = g + g.conj().T
    once = detexture(a)
    assert np.max(np.abs(detexture(once) - once)) <= 1e-12
