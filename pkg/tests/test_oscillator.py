from fractions import Fraction
from functools import lru_cache
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oscigeo import ConventionError, DomainError, InputError
from oscigeo.field_geometry import classify, mean_curvature_norm, nomizu, singular_frame
from oscigeo.lie_metric import CurvatureTensor, curvature, koszul_connection
from oscigeo.oscillator import (
    FieldDecomposition,
    OscillatorSpec,
    check_curvature_convention,
    classify_minimal_xy,
    closed_curvature,
    closed_nomizu,
    harmonic_map_set_membership,
    heisenberg_algebra,
    minimal_xy_by_modulus,
    nomizu_matrix,
    oscillator_algebra,
    phi,
    sigma_squared_closed,
    singular_poly,
    singular_poly_coordinate_c,
    singular_poly_roots,
)
from oscigeo.report import sample_field

from oracles import unit

F = Fraction
E1, E2, XI, ZETA = range(4)
OSC1 = OscillatorSpec(1, (1,))


def dec(spec, v):
    return FieldDecomposition.from_vector(spec, v)


def xy_unit(n, weights, angles):
    v = np.zeros(2 * n + 2)
    for i, (w, t) in enumerate(zip(weights, angles)):
        v[i], v[n + i] = math.sqrt(w) * math.cos(t), math.sqrt(w) * math.sin(t)
    return v


@lru_cache(maxsize=None)
def generic(spec):
    alg = oscillator_algebra(spec).as_float()
    conn = koszul_connection(alg)
    return alg, conn, curvature(alg, conn)


def generic_mcn(spec, v):
    alg, conn, cur = generic(spec)
    nom = nomizu(alg, conn, v)
    return mean_curvature_norm(conn, cur, nom, singular_frame(nom))


lam_values = st.floats(0.1, 3) | st.floats(-3, -0.1)
specs2 = st.tuples(lam_values, lam_values).map(lambda lam: OscillatorSpec(2, lam))


@st.composite
def xy_fields(draw, n=2):
    raw = draw(st.lists(st.floats(-1, 1), min_size=2 * n, max_size=2 * n).filter(
        lambda xs: sum(x * x for x in xs) > 1e-2))
    v = np.zeros(2 * n + 2)
    v[: 2 * n] = raw
    return v / np.linalg.norm(v)


# ---- algebra ------------------------------------------------------------------

def test_osc1_brackets():
    c = oscillator_algebra(OSC1).structure
    assert list(c[ZETA, E1]) == [0, 1, 0, 0]
    assert list(c[ZETA, E2]) == [-1, 0, 0, 0]
    assert list(c[E1, E2]) == [0, 0, 1, 0]
    assert list(c[E1, XI]) == [0] * 4


def test_jacobi_g3():
    assert oscillator_algebra(OscillatorSpec(3, (1, 2, 3))).jacobi_residual() == 0


def test_heisenberg_is_zeta_free_subalgebra():
    full = oscillator_algebra(OscillatorSpec(2, (F(1, 2), 3))).structure
    h = heisenberg_algebra(2).structure
    assert (full[:5, :5, :5] == h).all()
    assert heisenberg_algebra(1).labels == ("e1", "e2", "ξ")


@pytest.mark.parametrize("n, lam", [(0, ()), (2, (1,)), (1, (0,)), (2, (1, 0))])
def test_spec_validation(n, lam):
    with pytest.raises(InputError):
        OscillatorSpec(n, lam)


def test_phi():
    assert list(phi(OSC1, unit(4, E1))) == [0, 1, 0, 0]
    assert list(phi(OSC1, unit(4, E2))) == [-1, 0, 0, 0]
    assert list(phi(OSC1, phi(OSC1, unit(4, E1)))) == [-1, 0, 0, 0]


# ---- Nomizu closed forms -----------------------------------------------------------

def test_closed_nomizu_examples():
    z_all = [unit(4, k) for k in range(4)]
    zeta = dec(OSC1, unit(4, ZETA))
    for z in z_all:
        assert all(x == 0 for x in closed_nomizu(OSC1, zeta, z))
    xi = dec(OSC1, unit(4, XI))
    for z in z_all:
        assert list(closed_nomizu(OSC1, xi, z)) == list(phi(OSC1, z) / 2)
    e1 = dec(OSC1, unit(4, E1))
    assert list(closed_nomizu(OSC1, e1, unit(4, ZETA))) == [0, -1, 0, 0]


def test_closed_nomizu_dimension_mismatch():
    with pytest.raises(InputError):
        closed_nomizu(OSC1, dec(OSC1, unit(4, E1)), unit(3, 0))


def test_nomizu_matrix_examples():
    a = nomizu_matrix(OSC1, dec(OSC1, unit(4, E1))).a
    want = np.zeros((4, 4))
    want[E2, XI], want[E2, ZETA], want[XI, E2] = F(1, 2), -1, F(1, 2)
    assert (a == want).all()
    xi = nomizu_matrix(OSC1, dec(OSC1, unit(4, XI))).a
    want = np.zeros((4, 4))
    want[E2, E1], want[E1, E2] = F(1, 2), F(-1, 2)
    assert (xi == want).all()


def test_nomizu_matrix_exact_against_generic():
    rng = np.random.default_rng(41)
    for lam in [(F(1, 2), F(-3)), (F(5, 3), F(2, 7), F(-1))]:
        spec = OscillatorSpec(len(lam), lam)
        alg = oscillator_algebra(spec)
        conn = koszul_connection(alg)
        d = spec.dim
        for _ in range(5):
            # rational unit vector by stereographic projection
            p = [F(int(t), int(s)) for t, s in zip(rng.integers(-5, 6, d - 1), rng.integers(1, 4, d - 1))]
            q = sum(x * x for x in p)
            v = np.array([2 * x / (1 + q) for x in p] + [(q - 1) / (1 + q)], dtype=object)
            generic_a = nomizu(alg, conn, v).a
            assert (nomizu_matrix(spec, dec(spec, v), alg).a == generic_a).all()
            assert all(x == 0 for x in generic_a[-1])
            for k in range(d):
                assert list(closed_nomizu(spec, dec(spec, v), unit(d, k))) == list(generic_a[:, k])


def test_nomizu_matrix_float_sweep():
    rng = np.random.default_rng(43)
    worst = 0.0
    for k in range(500):
        if k % 50 == 0:
            spec = OscillatorSpec(2, tuple(rng.choice([-1, 1]) * rng.uniform(0.05, 3, 2)))
            alg, conn, _ = generic(spec)
        v = rng.standard_normal(6)
        v /= np.linalg.norm(v)
        worst = max(worst, np.max(np.abs(nomizu_matrix(spec, dec(spec, v), alg).a - nomizu(alg, conn, v).a)))
    assert worst < 1e-12


# ---- curvature closed form ------------------------------------------------------------

def test_closed_curvature_examples():
    assert list(closed_curvature(OSC1, unit(4, E1), unit(4, XI), unit(4, XI))) == [F(-1, 4), 0, 0, 0]
    assert list(closed_curvature(OSC1, unit(4, E1), unit(4, E2), unit(4, E2))) == [F(3, 4), 0, 0, 0]
    x, z = unit(4, E1) + 2 * unit(4, XI), unit(4, E2) - unit(4, ZETA)
    assert all(t == 0 for t in closed_curvature(OSC1, x, x, z))
    assert all(t == 0 for t in closed_curvature(OSC1, unit(4, XI), unit(4, E2), unit(4, E1)))


def test_closed_curvature_sweep():
    rng = np.random.default_rng(47)
    for lam in [(1, 1), (1, -1), (1, 2), (-2.5, 0.3)]:
        spec = OscillatorSpec(2, lam)
        _, _, cur = generic(spec)
        worst = worst_std = 0.0
        for _ in range(500):
            x, y, z = rng.standard_normal((3, 6))
            gen = np.einsum("i,j,k,ijkl->l", x, y, z, cur.r)
            worst = max(worst, np.max(np.abs(gen - closed_curvature(spec, x, y, z))))
            std = np.einsum("i,j,k,ijkl->l", x, y, z, cur.standard)
            worst_std = max(worst_std, np.max(np.abs(std - closed_curvature(spec, x, y, z, standard=True))))
        assert worst < 1e-12 and worst_std < 1e-12


def test_curvature_convention_guard():
    spec = OscillatorSpec(2, (F(1, 2), 3))
    alg = oscillator_algebra(spec)
    cur = curvature(alg, koszul_connection(alg))
    check_curvature_convention(spec, cur)
    with pytest.raises(ConventionError):
        check_curvature_convention(spec, CurvatureTensor(cur.standard, alg))


# ---- singular polynomial -------------------------------------------------------------

def test_singular_poly_e1():
    d1 = dec(OSC1, unit(4, E1))
    assert singular_poly(OSC1, d1) == (1, F(-5, 4), 0)
    assert singular_poly_roots(OSC1, d1) == [1.25, 0.0]
    assert sigma_squared_closed(OSC1, d1) == [1.25, 0.25, 0.0, 0.0]


def test_singular_poly_mixed_sign():
    spec = OscillatorSpec(2, (1, -1))
    v = (unit(6, 0, exact=False) + unit(6, 1, exact=False)) / math.sqrt(2)
    one, b, c = singular_poly(spec, dec(spec, v))
    assert one == 1 and abs(b + 1.25) < 1e-15 and abs(c - 0.25) < 1e-15
    np.testing.assert_allclose(singular_poly_roots(spec, dec(spec, v)), [1, 0.25])
    alg, conn, _ = generic(spec)
    sig = np.linalg.svd(nomizu(alg, conn, v).a, compute_uv=False)
    np.testing.assert_allclose(np.sort(sig ** 2)[::-1], [1, 0.25, 0.25, 0, 0, 0], atol=1e-12)


def test_singular_poly_domain():
    with pytest.raises(DomainError):
        singular_poly(OSC1, dec(OSC1, unit(4, XI)))
    v = np.array([F(3, 5), 0, 0, F(4, 5)], dtype=object)
    with pytest.raises(DomainError):
        singular_poly(OSC1, dec(OSC1, v))


@given(specs2, xy_fields())
@settings(max_examples=80, deadline=None)
def test_singular_poly_constant_term_coordinate_form(spec, v):
    d = dec(spec, v)
    c = singular_poly(spec, d)[2]
    assert abs(c - singular_poly_coordinate_c(spec, d)) < 1e-12
    assert c >= -1e-15


@given(specs2, xy_fields())
@settings(max_examples=80, deadline=None)
def test_spectral_consistency(spec, v):
    alg, conn, _ = generic(spec)
    sig = np.linalg.svd(nomizu(alg, conn, v).a, compute_uv=False)
    assert np.max(np.abs(np.sort(sig ** 2)[::-1] - sigma_squared_closed(spec, dec(spec, v)))) < 1e-9


# ---- minimality on X + Y --------------------------------------------------------------

def test_classify_minimal_xy_examples():
    g11, g1m1, g12 = (OscillatorSpec(2, lam) for lam in [(1, 1), (1, -1), (1, 2)])
    v = (unit(6, 0, exact=False) + unit(6, 1, exact=False)) / math.sqrt(2)
    assert classify_minimal_xy(g11, dec(g11, v))
    assert classify_minimal_xy(g1m1, dec(g1m1, v))
    assert not classify_minimal_xy(g12, dec(g12, v))
    with pytest.raises(DomainError):
        classify_minimal_xy(g11, dec(g11, unit(6, 4)))


def test_classify_minimal_xy_exact_path():
    spec = OscillatorSpec(2, (1, -1))
    v = np.array([F(3, 5), F(0), F(0), F(4, 5), 0, 0], dtype=object)  # weights 9/25, 16/25
    assert classify_minimal_xy(spec, dec(spec, v)) is False
    v = np.array([F(3, 5), F(0), F(4, 5), F(0), 0, 0], dtype=object)  # one block only
    assert classify_minimal_xy(spec, dec(spec, v)) is True
    rep = classify(oscillator_algebra(spec), v)
    assert rep.minimal


def test_single_block_fields_are_minimal_for_any_lambda():
    """Fields in one (e_i, e_{n+i}) block are minimal whatever lambda is, which the
    coarser rule (all lambda_i^2 equal, then a balance condition) does not capture."""
    rng = np.random.default_rng(53)
    for lam in [(1, 2), (1, -1), (0.3, -2.0)]:
        spec = OscillatorSpec(2, lam)
        for block in (0, 1):
            w = [0.0, 0.0]
            w[block] = 1.0
            v = xy_unit(2, w, rng.uniform(0, 2 * math.pi, 2))
            assert generic_mcn(spec, v) < 1e-9
            assert classify_minimal_xy(spec, dec(spec, v))
            assert not minimal_xy_by_modulus(spec, dec(spec, v)) or lam[0] ** 2 == lam[1] ** 2


def test_unequal_modulus_two_block_minimal_field():
    """lambda = (1, -1.1): a field with both blocks occupied is minimal."""
    spec = OscillatorSpec(2, (1, -1.1))
    rng = np.random.default_rng(59)
    for _ in range(5):
        v = xy_unit(2, (0.85 / 2.1, 1.25 / 2.1), rng.uniform(0, 2 * math.pi, 2))
        assert generic_mcn(spec, v) < 1e-9
        assert classify_minimal_xy(spec, dec(spec, v))
        assert not minimal_xy_by_modulus(spec, dec(spec, v))
        # moving off the special weights breaks minimality
        off = xy_unit(2, (0.5, 0.5), rng.uniform(0, 2 * math.pi, 2))
        assert generic_mcn(spec, off) > 1e-3 and not classify_minimal_xy(spec, dec(spec, off))


def test_modulus_rule_agrees_on_full_support():
    """On fields touching every block, the coarser rule and the exact one coincide
    when all lambda_i^2 agree."""
    rng = np.random.default_rng(61)
    for lam in [(1, 1), (1, -1), (2, -2)]:
        spec = OscillatorSpec(2, lam)
        for _ in range(50):
            w1 = rng.uniform(0.05, 0.95)
            v = xy_unit(2, (w1, 1 - w1), rng.uniform(0, 2 * math.pi, 2))
            assert classify_minimal_xy(spec, dec(spec, v)) == minimal_xy_by_modulus(spec, dec(spec, v))


def _sweep_fields(seed, count):
    masks = [(1, 1, 1, 1, 0, 0)] * 6 + [(1, 0, 1, 0, 0, 0), (0, 1, 0, 1, 0, 0)]
    for i in range(count):
        yield sample_field(seed, i, np.array(masks[i % len(masks)], dtype=bool))


def test_classification_equivalence_sweep():
    rng = np.random.default_rng(67)
    conflicts = positives = 0
    for g, lam in enumerate([(1, 1), (1, -1), (1, 2)]):
        spec = OscillatorSpec(2, lam)
        fields = list(_sweep_fields(71 + g, 3300))
        if lam == (1, -1):
            fields += [xy_unit(2, (0.5, 0.5), rng.uniform(0, 2 * math.pi, 2)) for _ in range(34)]
        for v in fields:
            generic_verdict = generic_mcn(spec, v) < 1e-9
            conflicts += generic_verdict != classify_minimal_xy(spec, dec(spec, v), 1e-9)
            positives += generic_verdict
    assert positives > 3000
    assert conflicts == 0


# ---- harmonic-map set ---------------------------------------------------------------

def test_harmonic_map_set_examples():
    for idx in (XI, ZETA):
        for sign in (1, -1):
            assert harmonic_map_set_membership(OSC1, dec(OSC1, sign * unit(4, idx, exact=False)))
    g12 = OscillatorSpec(2, (1, 2))
    v = (unit(6, 0, exact=False) + unit(6, 1, exact=False)) / math.sqrt(2)
    assert not harmonic_map_set_membership(g12, dec(g12, v))
    assert harmonic_map_set_membership(g12, dec(g12, unit(6, 0, exact=False)))
    mixed = (unit(6, 4, exact=False) + unit(6, 5, exact=False)) / math.sqrt(2)
    assert not harmonic_map_set_membership(g12, dec(g12, mixed))


def test_harmonic_map_set_exact():
    g12 = OscillatorSpec(2, (1, 2))
    assert harmonic_map_set_membership(g12, dec(g12, unit(6, 5)), tol=0)
    v = np.array([F(3, 5), F(4, 5), 0, 0, 0, 0], dtype=object)
    assert not harmonic_map_set_membership(g12, dec(g12, v), tol=0)


def test_equal_lambda_harmonic_maps_are_minimal():
    spec = OscillatorSpec(2, (1, 1))
    alg, conn, cur = generic(spec)
    masks = [(1, 1, 1, 1, 0, 0), (0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1), (1, 1, 1, 1, 1, 1)]
    for i in range(400):
        v = sample_field(73, i, np.array(masks[i % 4], dtype=bool))
        if harmonic_map_set_membership(spec, dec(spec, v)):
            assert classify(alg, v, 1e-9, conn=conn, cur=cur).minimal


def test_decomposition_round_trip():
    spec = OscillatorSpec(2, (1, 2))
    v = np.arange(6.0)
    d = dec(spec, v)
    assert list(d.v_x) == [0, 1] and list(d.v_y) == [2, 3] and (d.eta, d.theta) == (4, 5)
    np.testing.assert_array_equal(d.to_vector(), v)
    np.testing.assert_array_equal(d.block_weights(), [4, 10])
    with pytest.raises(InputError):
        dec(spec, np.arange(4.0))
