"""Tests for the sequence carrier type and the multirate operators."""

import math

import numpy as np
import pytest

from fbstab.seqcore import (
    FiniteSeq,
    Grid,
    convolve,
    delta,
    downsample,
    dtft_at,
    dtft_eval,
    inner,
    involute,
    norm_sq,
    seq,
    seq_close,
    translate,
    upsample,
    zero_seq,
)

RNG = np.random.default_rng(2024)


def random_seq(length=8, offset_range=6, complex_valued=True):
    off = int(RNG.integers(-offset_range, offset_range + 1))
    c = RNG.standard_normal(length)
    if complex_valued:
        c = c + 1j * RNG.standard_normal(length)
    return seq(off, c)


def test_trimming_and_zero():
    x = seq(-3, [0.0, 0.0, 1.0, 2.0, 0.0])
    assert x.support == (-1, 0)
    assert x.at(-1) == 1.0
    assert x.at(5) == 0.0
    z = seq(7, [0.0, 0.0])
    assert z.is_zero
    assert z.offset == 0
    with pytest.raises(ValueError):
        z.support


def test_dtft_delta_is_constant_one():
    vals = dtft_eval(delta(), Grid(4))
    assert np.allclose(vals, np.ones(4))


def test_dtft_haar_axioms():
    h = seq(0, [1 / math.sqrt(2)] * 2)
    assert abs(dtft_at(h, 0.0) - math.sqrt(2)) < 1e-14
    assert abs(dtft_at(h, 0.5)) < 1e-14


def test_dtft_scalar_and_array_agree():
    x = random_seq()
    xs = np.linspace(0, 1, 7)
    arr = dtft_at(x, xs)
    for i, xi in enumerate(xs):
        assert abs(arr[i] - dtft_at(x, float(xi))) < 1e-12


def test_convolution_theorem():
    grid = Grid(64)
    for _ in range(20):
        x, y = random_seq(), random_seq(5)
        lhs = dtft_eval(convolve(x, y), grid)
        rhs = dtft_eval(x, grid) * dtft_eval(y, grid)
        assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_convolve_with_delta():
    x = random_seq()
    assert seq_close(convolve(x, delta()), x)
    assert seq_close(convolve(x, delta(1)), translate(x, 1))
    assert convolve(x, zero_seq()).is_zero


def test_involute_transform_is_conjugate():
    grid = Grid(32)
    x = random_seq()
    lhs = dtft_eval(involute(x), grid)
    rhs = np.conj(dtft_eval(x, grid))
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_downsample_keeps_dyadic_samples():
    x = seq(-2, [1, 2, 3, 4, 5, 6, 7])
    d = downsample(x, 1)
    assert d.support == (-1, 2)
    assert [d.at(n).real for n in range(-1, 3)] == [1, 3, 5, 7]
    d2 = downsample(x, 2)
    assert [d2.at(n).real for n in range(0, 2)] == [3, 7]


def test_upsample_then_downsample_is_identity():
    for j in (1, 2, 3):
        x = random_seq()
        assert seq_close(downsample(upsample(x, j), j), x)


def test_downsample_upsample_adjoint():
    for j in (1, 2, 3):
        x, y = random_seq(), random_seq(10)
        lhs = inner(downsample(x, j), y)
        rhs = inner(x, upsample(y, j))
        assert abs(lhs - rhs) < 1e-12


def test_noble_identity():
    # D^j (x * U^j h) = (D^j x) * h
    for j in (1, 2, 3):
        x, h = random_seq(16), random_seq(4)
        lhs = downsample(convolve(x, upsample(h, j)), j)
        rhs = convolve(downsample(x, j), h)
        assert seq_close(lhs, rhs)


def test_grid_parseval():
    grid = Grid(64)
    for _ in range(10):
        x = random_seq(12)
        vals = dtft_eval(x, grid)
        assert abs(np.sum(np.abs(vals) ** 2) / grid.size - norm_sq(x)) < 1e-10


def test_inner_and_norm():
    x = seq(0, [1, 1j])
    y = seq(1, [2.0])
    assert inner(x, y) == pytest.approx(2j)
    assert norm_sq(x) == pytest.approx(2.0)
    assert inner(x, zero_seq()) == 0


def test_json_roundtrip():
    x = seq(-2, [1.5, 0.25 - 1j, 3.0])
    obj = x.to_json_obj()
    assert obj["offset"] == -2
    assert obj["coeffs"][0] == 1.5
    assert obj["coeffs"][1] == [0.25, -1.0]
    y = FiniteSeq.from_json_obj(obj)
    assert seq_close(x, y, tol=0 + 1e-15)


def test_centered_points_cover_half_open_interval():
    xi = Grid(8).centered_points
    assert xi.min() == -0.5
    assert xi.max() < 0.5
    assert np.allclose(sorted(xi), np.arange(-4, 4) / 8)


def test_invalid_orders_rejected():
    x = random_seq()
    with pytest.raises(ValueError):
        downsample(x, 0)
    with pytest.raises(ValueError):
        upsample(x, 0)
    with pytest.raises(ValueError):
        Grid(1)
