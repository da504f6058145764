"""Seeded random data for tests and report runs.

All draws go through ``random.Random`` so that a seed pins every byte of a
report.  Exact draws produce Gaussian rationals with numerators and
denominators in [-9, 9].
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .fiber import FiberContext, SpinorVector, TangentVector
from .scalars import QG


def rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 9))


def scalar(ctx: FiberContext, rng: random.Random, real: bool = False):
    re = rational(rng)
    im = Fraction(0) if real else rational(rng)
    if ctx.mode == "exact":
        return QG(re, im)
    return complex(re) + 1j * complex(im)


def spinor(ctx: FiberContext, rng: random.Random,
           grade: Optional[int] = None) -> SpinorVector:
    masks = ctx.grade_basis(grade) if grade is not None else range(ctx.dim)
    return SpinorVector(ctx, {m: scalar(ctx, rng) for m in masks}).cleaned()


def tangent(ctx: FiberContext, rng: random.Random, real: bool = True) -> TangentVector:
    return TangentVector(ctx, tuple(scalar(ctx, rng, real=real) for _ in range(ctx.n)))


def mode_vector(ctx: FiberContext, rng: random.Random, band: int):
    return tuple(rng.randint(-band, band) for _ in range(ctx.n))


def spinor_field(torus, rng: random.Random, band: int, nmodes: int = 3,
                 grade: Optional[int] = None):
    """Sparse random band-limited spinor field (colliding draws overwrite)."""
    modes = {}
    for _ in range(nmodes):
        k = mode_vector(torus.fiber, rng, band)
        modes[k] = spinor(torus.fiber, rng, grade=grade)
    return torus.spinor_field(band, modes)


def vector_field(torus, rng: random.Random, band: int, nmodes: int = 2,
                 real: bool = True):
    """Sparse trigonometric vector field; real fields get conjugate-symmetric
    mode data (the zero mode, its own mirror, is drawn real)."""
    modes = {}
    for _ in range(nmodes):
        k = mode_vector(torus.fiber, rng, band)
        mk = tuple(-c for c in k)
        if real and mk == k:
            modes[k] = tangent(torus.fiber, rng, real=True)
        elif real:
            X = tangent(torus.fiber, rng, real=False)
            modes[k] = X
            modes[mk] = X.conjugate()
        else:
            modes[k] = tangent(torus.fiber, rng, real=False)
    return torus.vector_field(band, modes)
