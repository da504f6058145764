"""Twistor operators, block connections, and kernel sweeps on the flat torus.

The twistor operator of type r splits the covariant derivative of a grade-r
spinor field into its two Dirac parts and a trace-free remainder.  Since every
operator here acts mode by mode, kernels and parallel-section spaces reduce to
finite linear algebra per wavevector: a single elimination over GF(p^2)
certifies trivial nullity for almost every mode (exact rank can only drop when
reduced mod p), and the few flagged modes are settled over Gaussian rationals.
A floating tier based on batched SVDs provides an independent second reading.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exactla import nullspace
from .fiber import (
    FiberContext,
    FiberOperator,
    RicciModel,
    SpinorVector,
    TangentVector,
    build_fiber,
    build_rho_s,
    dim_grade,
    op_clifford_minus,
    op_clifford_plus,
)
from .kernels import PRIMES, modp_nullities
from .report import check
from .scalars import QG
from .torus import (
    FourierSpinorField,
    TorusContext,
    apply_D,
    apply_Dminus,
    apply_Dplus,
    clifford_field,
    covariant_derivative,
    rough_laplacian,
)

Wavevector = Tuple[int, ...]


def _frac(ctx: FiberContext, fr) -> object:
    return ctx.scalar(Fraction(fr))


# -- spinor-valued one-forms on the torus -----------------------------------

class SpinorOneForm:
    """One spinor field per frame direction; the shape of nabla(phi)."""

    __slots__ = ("torus", "comps")

    def __init__(self, torus: TorusContext, comps: Sequence[FourierSpinorField]):
        comps = tuple(comps)
        if len(comps) != torus.n:
            raise ValueError(f"need {torus.n} components, got {len(comps)}")
        self.torus = torus
        self.comps = comps

    def component(self, l: int) -> FourierSpinorField:
        return self.comps[l]

    def __add__(self, other: "SpinorOneForm") -> "SpinorOneForm":
        return SpinorOneForm(self.torus, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other: "SpinorOneForm") -> "SpinorOneForm":
        return SpinorOneForm(self.torus, [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self) -> "SpinorOneForm":
        return SpinorOneForm(self.torus, [-a for a in self.comps])

    def scale(self, c) -> "SpinorOneForm":
        return SpinorOneForm(self.torus, [a.scale(c) for a in self.comps])

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.comps)

    def l2_norm_sq(self):
        acc = self.torus.fiber.scalar(0)
        for a in self.comps:
            acc = acc + a.l2_norm_sq()
        return acc

    def contract(self, part: str = "full") -> FourierSpinorField:
        """Clifford contraction sum_l e_l^{part} . alpha_l.

        The complex-bilinear pairing is already built into the graded Clifford
        action, so the plus/minus contractions need no J bookkeeping: summing
        e_l^+ . alpha_l over the real frame equals the contraction against the
        antiholomorphic directions.
        """
        acc = self.torus.spinor_field(0)
        for l, comp in enumerate(self.comps):
            acc = acc + clifford_field(l, comp, part)
        return acc

    def __repr__(self):
        return f"SpinorOneForm(n={len(self.comps)})"


def gradient(phi: FourierSpinorField) -> SpinorOneForm:
    t = phi.torus
    return SpinorOneForm(t, [covariant_derivative(l, phi) for l in range(t.n)])


def iota_plus_field(psi: FourierSpinorField, r: int) -> SpinorOneForm:
    """Embed a grade-(r+1) field into one-forms with grade-r values.

    Right inverse of contract("plus"); the left inverse property fixes the
    -1/(2(r+1)) normalization.
    """
    t = psi.torus
    coeff = _frac(t.fiber, Fraction(-1, 2 * (r + 1)))
    return SpinorOneForm(
        t, [clifford_field(l, psi, "minus").scale(coeff) for l in range(t.n)])


def iota_minus_field(xi: FourierSpinorField, r: int) -> SpinorOneForm:
    """Embed a grade-(r-1) field into one-forms with grade-r values."""
    t = xi.torus
    m = t.fiber.m
    coeff = _frac(t.fiber, Fraction(-1, 2 * (m - r + 1)))
    return SpinorOneForm(
        t, [clifford_field(l, xi, "plus").scale(coeff) for l in range(t.n)])


# -- the twistor operators ---------------------------------------------------

def riemannian_twistor(phi: FourierSpinorField) -> SpinorOneForm:
    """T_X phi = nabla_X phi + (1/n) X . D phi, one component per frame vector."""
    t = phi.torus
    dphi = apply_D(phi)
    coeff = _frac(t.fiber, Fraction(1, t.n))
    return SpinorOneForm(
        t,
        [covariant_derivative(l, phi) + clifford_field(l, dphi).scale(coeff)
         for l in range(t.n)],
    )


def kahlerian_twistor(phi: FourierSpinorField, r: int) -> SpinorOneForm:
    """The type-r twistor operator on a grade-r field.

    (T_r)_X phi = nabla_X phi + X^+ . D^- phi / (2(m-r+1))
                             + X^- . D^+ phi / (2(r+1)).
    Both Clifford contractions of the output vanish identically.
    """
    t = phi.torus
    m = t.fiber.m
    if not 0 <= r <= m:
        raise ValueError(f"grade r={r} outside 0..{m}")
    gs = phi.grades()
    if gs and gs != [r]:
        raise ValueError(f"type-{r} twistor operator needs a grade-{r} field, "
                         f"found grades {gs}")
    dplus = apply_Dplus(phi)
    dminus = apply_Dminus(phi)
    cp = _frac(t.fiber, Fraction(1, 2 * (m - r + 1)))
    cm = _frac(t.fiber, Fraction(1, 2 * (r + 1)))
    comps = []
    for l in range(t.n):
        term = covariant_derivative(l, phi)
        term = term + clifford_field(l, dminus, "plus").scale(cp)
        term = term + clifford_field(l, dplus, "minus").scale(cm)
        comps.append(term)
    return SpinorOneForm(t, comps)


def twistor_identity_suite(phi: FourierSpinorField, r: Optional[int] = None) -> List[dict]:
    """Structural identities of the twistor splitting on one field.

    Covers trace-freeness of both operators, the three-part decomposition of
    the gradient, and the L2 norm identity that powers the eigenvalue
    estimates downstream.
    """
    t = phi.torus
    mode = t.fiber.mode
    if r is None:
        gs = phi.grades()
        r = gs[0] if len(gs) == 1 else None
    checks = []

    riem = riemannian_twistor(phi)
    checks.append(check("twistor.riemannian.trace", "2.1",
                        riem.contract("full").is_zero(), mode=mode))

    if r is None:
        return checks

    alpha = kahlerian_twistor(phi, r)
    checks.append(check("twistor.trace_plus", "2.4",
                        alpha.contract("plus").is_zero(), mode=mode))
    checks.append(check("twistor.trace_minus", "2.4",
                        alpha.contract("minus").is_zero(), mode=mode))

    dplus = apply_Dplus(phi)
    dminus = apply_Dminus(phi)
    recomposed = iota_plus_field(dplus, r) + iota_minus_field(dminus, r) + alpha
    resid = gradient(phi) - recomposed
    checks.append(check("twistor.decomposition", "2.3", resid.is_zero(), mode=mode))

    m = t.fiber.m
    lhs = gradient(phi).l2_norm_sq()
    rhs = (dplus.l2_norm_sq() * _frac(t.fiber, Fraction(1, 2 * (r + 1)))
           + dminus.l2_norm_sq() * _frac(t.fiber, Fraction(1, 2 * (m - r + 1)))
           + alpha.l2_norm_sq())
    diff = lhs - rhs
    ok = not diff if mode == "exact" else abs(complex(diff)) <= 1e-10
    checks.append(check("twistor.norm_identity", "2.8", ok, mode=mode,
                        gradient_norm_sq=str(lhs)))
    return checks


# -- mode blocks and the formal adjoint --------------------------------------

def _twistor_mode_blocks(ctx: FiberContext, r: int, k: Wavevector) -> List[FiberOperator]:
    """Per-direction matrices of the type-r twistor operator at one mode."""
    m = ctx.n // 2
    kv = TangentVector.from_components(ctx, tuple(ctx.scalar(c) for c in k))
    ckm = op_clifford_minus(kv)
    ckp = op_clifford_plus(kv)
    cp = _frac(ctx, Fraction(1, 2 * (m - r + 1)))
    cm = _frac(ctx, Fraction(1, 2 * (r + 1)))
    i_unit = ctx.scalar(0, 1)
    blocks = []
    for l in range(ctx.n):
        el = TangentVector.basis(ctx, l)
        op = FiberOperator.identity(ctx).scale(ctx.scalar(k[l]))
        op = op + op_clifford_plus(el).compose(ckm).scale(cp)
        op = op + op_clifford_minus(el).compose(ckp).scale(cm)
        blocks.append(op.scale(i_unit))
    return blocks


def twistor_star(alpha: SpinorOneForm, r: int) -> FourierSpinorField:
    """Formal adjoint of the type-r twistor operator, mode-block by mode-block.

    Parseval turns the L2 adjoint into the conjugate transpose of each
    per-mode matrix, so no integration by parts is needed.
    """
    t = alpha.torus
    ctx = t.fiber
    out: Dict[Wavevector, SpinorVector] = {}
    support = sorted({k for comp in alpha.comps for k in comp.modes})
    for k in support:
        blocks = _twistor_mode_blocks(ctx, r, k)
        acc = SpinorVector(ctx, {})
        for l, comp in enumerate(alpha.comps):
            v = comp.modes.get(k)
            if v is not None:
                acc = acc + blocks[l].adjoint().apply(v)
        if not acc.is_zero():
            out[k] = acc
    band = max((comp.band for comp in alpha.comps), default=0)
    return FourierSpinorField(t, band, out)


def weitzenboeck_check(phi: FourierSpinorField, r: Optional[int] = None) -> List[dict]:
    """Verify nabla*nabla = D^-D^+/(2(r+1)) + D^+D^-/(2(m-r+1)) + T_r*T_r.

    All four operators act mode by mode, so the identity is checked exactly;
    an adjoint pairing <T phi, T phi> = <phi, T*T phi> comes along for free.
    """
    t = phi.torus
    ctx = t.fiber
    mode = ctx.mode
    m = ctx.m
    if r is None:
        gs = phi.grades()
        if len(gs) > 1:
            raise ValueError(f"need a grade-homogeneous field, found grades {gs}")
        r = gs[0] if gs else 0
    alpha = kahlerian_twistor(phi, r)
    tstar_t = twistor_star(alpha, r)
    rhs = (apply_Dminus(apply_Dplus(phi)).scale(_frac(ctx, Fraction(1, 2 * (r + 1))))
           + apply_Dplus(apply_Dminus(phi)).scale(_frac(ctx, Fraction(1, 2 * (m - r + 1))))
           + tstar_t)
    resid = rough_laplacian(phi) - rhs
    checks = [check("twistor.weitzenboeck", "2.7", resid.is_zero(), mode=mode, r=r)]

    pairing_diff = alpha.l2_norm_sq() - phi.l2_inner(tstar_t)
    ok = not pairing_diff if mode == "exact" else abs(complex(pairing_diff)) <= 1e-10
    checks.append(check("twistor.weitzenboeck.adjoint", "2.7", ok, mode=mode))
    return checks


# -- connection parameters and block connections -----------------------------

class TwistorParams:
    """Size, type, and curvature data shared by the connection builders."""

    __slots__ = ("m", "r", "S", "ricci")

    def __init__(self, m: int, r: int, S=0, ricci: Optional[RicciModel] = None):
        if not 0 <= r <= m:
            raise ValueError(f"type r={r} outside 0..{m}")
        if ricci is not None and ricci.ctx.m != m:
            raise ValueError(f"Ricci model is for m={ricci.ctx.m}, expected {m}")
        self.m = m
        self.r = r
        self.S = S
        self.ricci = ricci

    def require_connection_range(self):
        """The block coefficients carry 1/(m-2r) poles and empty end slots."""
        r, m = self.r, self.m
        if r == 0 or r == m or 2 * r == m:
            raise ValueError(
                f"connection needs 0 < r < m and r != m/2, got r={r}, m={m} "
                "(block coefficients degenerate at the excluded values)")

    def __repr__(self):
        return f"TwistorParams(m={self.m}, r={self.r}, S={self.S})"


class BlockConnection:
    """A connection nabla_X + B(X) on a stack of fixed-grade subbundles.

    blocks[l][i][j] is the FiberOperator coupling slot j into slot i along
    the frame direction e_l; None encodes a zero block, and the diagonal is
    the plain covariant derivative.
    """

    __slots__ = ("ctx", "params", "grades", "blocks", "label")

    def __init__(self, ctx: FiberContext, params: TwistorParams,
                 grades: Tuple[int, ...],
                 blocks: List[List[List[Optional[FiberOperator]]]], label: str):
        ns = len(grades)
        if len(blocks) != ctx.n or any(len(row) != ns or any(len(b) != ns for b in row)
                                       for row in blocks):
            raise ValueError("block grid shape does not match slots/directions")
        for l in range(ctx.n):
            for i in range(ns):
                for j in range(ns):
                    op = blocks[l][i][j]
                    if op is None:
                        continue
                    for mask in ctx.grade_basis(grades[j]):
                        img = op.apply(ctx.basis_spinor(mask))
                        if img.grades() not in ([], [grades[i]]):
                            raise ValueError(
                                f"block ({i},{j}) of direction {l} maps grade "
                                f"{grades[j]} outside grade {grades[i]}")
        self.ctx = ctx
        self.params = params
        self.grades = grades
        self.blocks = blocks
        self.label = label

    @property
    def n(self) -> int:
        return self.ctx.n

    @property
    def slot_dims(self) -> List[int]:
        return [dim_grade(self.ctx.m, g) for g in self.grades]

    @property
    def stacked_dim(self) -> int:
        return sum(self.slot_dims)

    def block(self, l: int, i: int, j: int) -> Optional[FiberOperator]:
        return self.blocks[l][i][j]

    def dense_block_matrix(self, l: int):
        """Stacked coupling matrix B(e_l) over the graded slot bases."""
        dims = self.slot_dims
        sd = self.stacked_dim
        zero = self.ctx.scalar(0)
        mat = [[zero] * sd for _ in range(sd)]
        row0 = 0
        for i, gi in enumerate(self.grades):
            col0 = 0
            outs = self.ctx.grade_basis(gi)
            for j, gj in enumerate(self.grades):
                ins = self.ctx.grade_basis(gj)
                op = self.blocks[l][i][j]
                if op is not None:
                    dense = op.to_dense(in_masks=ins, out_masks=outs)
                    for a in range(len(outs)):
                        for b in range(len(ins)):
                            mat[row0 + a][col0 + b] = dense[a][b]
                col0 += dims[j]
            row0 += dims[i]
        return mat

    def __repr__(self):
        return f"BlockConnection({self.label}, grades={self.grades})"


_VARIANT_TAGS = {"full": "3.19", "kaehler_einstein": "3.20", "reduced": "4.5"}


def build_connection(params: TwistorParams, variant: str = "full") -> BlockConnection:
    """Assemble the per-direction blocks of a twistor connection.

    variant "full" couples (grade r, r+1, r-1, r) with general Ricci data,
    "kaehler_einstein" substitutes Ric(X) = (S/n) X into the same stack, and
    "reduced" couples only (r, r+1, r-1) with Ricci-form corrections.
    """
    if variant not in _VARIANT_TAGS:
        raise ValueError(f"unknown connection variant {variant!r}")
    params.require_connection_range()
    m, r = params.m, params.r
    ricci = params.ricci
    ctx = ricci.ctx if ricci is not None else build_fiber(m)
    if ricci is None:
        ricci = RicciModel(ctx, [0] * m)
    S = Fraction(params.S)
    half = Fraction(1, 2)

    def cliff_ops(l):
        el = TangentVector.basis(ctx, l)
        return op_clifford_plus(el), op_clifford_minus(el)

    def ric_ops(l):
        rx = ricci.apply(TangentVector.basis(ctx, l))
        return op_clifford_plus(rx), op_clifford_minus(rx)

    def scaled(op, fr):
        if fr == 0:
            return None
        return op.scale(_frac(ctx, fr))

    def combine(*ops):
        live = [op for op in ops if op is not None]
        if not live:
            return None
        acc = live[0]
        for op in live[1:]:
            acc = acc + op
        return None if acc.is_zero() else acc

    blocks: List[List[List[Optional[FiberOperator]]]] = []
    if variant == "reduced":
        grades = (r, r + 1, r - 1)
        rho = build_rho_s(ricci, 1)
        i_unit = ctx.scalar(0, 1)
        for l in range(ctx.n):
            xp, xm = cliff_ops(l)
            rxp, rxm = ric_ops(l)
            ns = [[None] * 3 for _ in range(3)]
            ns[0][1] = scaled(xm, Fraction(1, 2 * (r + 1)))
            ns[0][2] = scaled(xp, Fraction(1, 2 * (m - r + 1)))
            ns[1][0] = combine(
                scaled(xp, -S * Fraction(1, 8 * (m + 1))),
                scaled(rxp, half),
                scaled(xp.compose(rho).scale(i_unit), Fraction(2 * r + 1, 4 * (m + 1))),
            )
            ns[2][0] = combine(
                scaled(xm, -S * Fraction(1, 8 * (m + 1))),
                scaled(rxm, half),
                scaled(xm.compose(rho).scale(i_unit), -Fraction(2 * m - 2 * r + 1, 4 * (m + 1))),
            )
            blocks.append(ns)
        return BlockConnection(ctx, params, grades, blocks, variant)

    grades = (r, r + 1, r - 1, r)
    for l in range(ctx.n):
        xp, xm = cliff_ops(l)
        ns = [[None] * 4 for _ in range(4)]
        ns[0][1] = scaled(xm, Fraction(1, 2 * (r + 1)))
        ns[0][2] = scaled(xp, Fraction(1, 2 * (m - r + 1)))
        ns[1][3] = scaled(xp, Fraction(2 * r + 1, 2 * (m - 2 * r)))
        ns[2][3] = scaled(xm, -Fraction(2 * m - 2 * r + 1, 2 * (m - 2 * r)))
        ns[3][1] = scaled(xm, S * Fraction(1, 4 * (2 * r + 1)))
        ns[3][2] = scaled(xp, S * Fraction(1, 4 * (2 * m - 2 * r + 1)))
        if variant == "full":
            rxp, rxm = ric_ops(l)
            ns[1][0] = combine(scaled(xp, -S * Fraction(r + 1, 4 * (m - 2 * r))),
                               scaled(rxp, half))
            ns[2][0] = combine(scaled(xm, S * Fraction(m - r + 1, 4 * (m - 2 * r))),
                               scaled(rxm, half))
            # slot-0 -> slot-3 coupling: every term differentiates S or the
            # Ricci endomorphism, so constant S and a parallel Ricci model
            # leave nothing to store.
            ns[3][0] = None
        else:  # kaehler_einstein
            ns[1][0] = scaled(xp, -S * Fraction(r * (m + 2), 4 * m * (m - 2 * r)))
            ns[2][0] = scaled(xm, S * Fraction((m - r) * (m + 2), 4 * m * (m - 2 * r)))
            ns[3][0] = None
        blocks.append(ns)
    return BlockConnection(ctx, params, grades, blocks, variant)


# -- sections and parallelity -------------------------------------------------

Section = Tuple[FourierSpinorField, ...]


def apply_fiber_operator(op: FiberOperator, phi: FourierSpinorField) -> FourierSpinorField:
    """Apply a constant fiber endomorphism to every mode coefficient."""
    return FourierSpinorField(
        phi.torus, phi.band, {k: op.apply(v) for k, v in phi.modes.items()})


def lift_spinor(phi: FourierSpinorField, r: Optional[int] = None) -> Section:
    """Lift a twistor-kernel element to its stacked section.

    Returns (phi, D^+ phi, D^- phi, D^2 phi); raises when phi is not in the
    kernel, since only kernel elements lift to parallel sections.
    """
    if r is None:
        gs = phi.grades()
        if len(gs) > 1:
            raise ValueError(f"need a grade-homogeneous field, found grades {gs}")
        r = gs[0] if gs else 0
    if not kahlerian_twistor(phi, r).is_zero():
        raise ValueError("field is not in the kernel of the twistor operator")
    return (phi, apply_Dplus(phi), apply_Dminus(phi), apply_D(apply_D(phi)))


def connection_derivative(conn: BlockConnection, section: Section, l: int) -> Section:
    """Component along e_l of the connection applied to a stacked section."""
    if len(section) != len(conn.grades):
        raise ValueError(f"section has {len(section)} slots, connection "
                         f"expects {len(conn.grades)}")
    out = []
    for i in range(len(conn.grades)):
        acc = covariant_derivative(l, section[i])
        for j, comp in enumerate(section):
            op = conn.blocks[l][i][j]
            if op is not None and not comp.is_zero():
                acc = acc + apply_fiber_operator(op, comp)
        out.append(acc)
    return tuple(out)


def parallel_check(conn: BlockConnection, section: Section) -> dict:
    """Single check record: is the section parallel for the connection?"""
    ok = True
    for l in range(conn.n):
        if any(not f.is_zero() for f in connection_derivative(conn, section, l)):
            ok = False
            break
    return check(f"twistor.parallel.{conn.label}", _VARIANT_TAGS[conn.label], ok,
                 mode=conn.ctx.mode, grades=list(conn.grades))


# -- kernel sweeps ------------------------------------------------------------

def mode_box(n: int, band: int) -> np.ndarray:
    """All integer wavevectors with entries in [-band, band], shape (N, n)."""
    axes = [np.arange(-band, band + 1, dtype=np.int64)] * n
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)


def rank_bound(m: int, r: int) -> int:
    """Rank of the three-slot stack: an a-priori cap on the kernel dimension."""
    total = math.comb(m, r)
    if r + 1 <= m:
        total += math.comb(m, r + 1)
    if r - 1 >= 0:
        total += math.comb(m, r - 1)
    return total


class KernelReport:
    """Outcome of a per-mode kernel sweep.

    nullities holds only the modes with nonzero kernel; the total dimension
    is their sum.  zero_mode_basis spans the k = 0 block as constant
    sections (tuples of SpinorVectors, one per slot).
    """

    __slots__ = ("label", "params", "band", "arithmetic", "modes_scanned",
                 "nullities", "total_dim", "zero_mode_basis", "slot_grades")

    def __init__(self, label: str, params: dict, band: int, arithmetic: str,
                 modes_scanned: int, nullities: Dict[Wavevector, int],
                 zero_mode_basis: List[Tuple[SpinorVector, ...]],
                 slot_grades: Tuple[int, ...]):
        self.label = label
        self.params = params
        self.band = band
        self.arithmetic = arithmetic
        self.modes_scanned = modes_scanned
        self.nullities = nullities
        self.total_dim = sum(nullities.values())
        self.zero_mode_basis = zero_mode_basis
        self.slot_grades = slot_grades

    @property
    def zero_mode_dim(self) -> int:
        return len(self.zero_mode_basis)

    @property
    def all_parallel(self) -> bool:
        """True when every kernel element is a constant section."""
        return all(not any(k) for k in self.nullities)

    def summary(self) -> dict:
        return {
            "label": self.label,
            **self.params,
            "band": self.band,
            "arithmetic": self.arithmetic,
            "modes_scanned": self.modes_scanned,
            "total_dim": self.total_dim,
            "slot_grades": list(self.slot_grades),
            "nonzero_modes": [
                {"mode": list(k), "nullity": v}
                for k, v in sorted(self.nullities.items())
            ],
            "all_parallel": self.all_parallel,
        }

    def __repr__(self):
        return (f"KernelReport({self.label}, total_dim={self.total_dim}, "
                f"modes={self.modes_scanned})")


def _int_entry(v: QG) -> Tuple[int, int]:
    if v.re.denominator != 1 or v.im.denominator != 1:
        raise ValueError(f"entry {v} is not a Gaussian integer after scaling")
    return int(v.re), int(v.im)


def _qg_rows(mat: np.ndarray) -> List[List[QG]]:
    return [[QG(int(a), int(b)) for a, b in row] for row in mat]


def _svd_nullities(g0: np.ndarray, gs: np.ndarray, modes: np.ndarray,
                   tol: float) -> np.ndarray:
    rows, cols = g0.shape
    out = np.empty(len(modes), dtype=np.int64)
    chunk = max(1, 4_000_000 // max(1, rows * cols))
    for start in range(0, len(modes), chunk):
        ks = modes[start:start + chunk].astype(np.complex128)
        mats = g0[None, :, :] + np.einsum("nl,lrc->nrc", ks, gs)
        sv = np.linalg.svd(mats, compute_uv=False)
        thresh = tol * np.maximum(1.0, sv[:, 0])
        out[start:start + len(ks)] = cols - (sv > thresh[:, None]).sum(axis=1)
    return out


def _run_sweep(g0_int: np.ndarray, gs_int: np.ndarray, band: int,
               arithmetic: str, tol: float):
    """Shared mode sweep: certified-exact or floating nullities per mode.

    g0_int/gs_int are Gaussian-integer matrices as (..., 2) int64 arrays; the
    swept matrix at mode k is g0 + sum_a k_a gs[a].  Returns the nonzero
    nullity table, the k = 0 nullspace columns, and the mode count.
    """
    n = gs_int.shape[0]
    ncols = g0_int.shape[1]
    modes = mode_box(n, band)
    if arithmetic == "exact":
        raw = modp_nullities(np.ascontiguousarray(g0_int),
                             np.ascontiguousarray(gs_int),
                             np.ascontiguousarray(modes), PRIMES[0])
        nullities: Dict[Wavevector, int] = {}
        zero_cols: List[List[QG]] = []
        for idx in np.flatnonzero(raw):
            k = tuple(int(c) for c in modes[idx])
            mat = g0_int + np.tensordot(np.asarray(k, dtype=np.int64),
                                        gs_int, axes=1)
            basis = nullspace(_qg_rows(mat), ncols)
            if basis:
                nullities[k] = len(basis)
            if not any(k):
                zero_cols = basis
        return nullities, zero_cols, len(modes)
    if arithmetic != "float":
        raise ValueError(f"unknown arithmetic tier {arithmetic!r}")
    g0c = g0_int[..., 0] + 1j * g0_int[..., 1]
    gsc = gs_int[..., 0] + 1j * gs_int[..., 1]
    raw = _svd_nullities(g0c, gsc, modes, tol)
    nullities = {}
    zero_cols = []
    for idx in np.flatnonzero(raw):
        k = tuple(int(c) for c in modes[idx])
        nullities[k] = int(raw[idx])
        if not any(k):
            mat = g0c + np.tensordot(np.asarray(k, dtype=np.float64), gsc, axes=1)
            _, sv, vh = np.linalg.svd(mat)
            rank = int((sv > tol * max(1.0, sv[0] if len(sv) else 1.0)).sum())
            zero_cols = [list(vh[j].conj()) for j in range(rank, ncols)]
    return nullities, zero_cols, len(modes)


def _columns_to_sections(ctx: FiberContext, slot_grades: Tuple[int, ...],
                         cols: List[Sequence]) -> List[Tuple[SpinorVector, ...]]:
    sections = []
    for col in cols:
        parts = []
        pos = 0
        for g in slot_grades:
            masks = ctx.grade_basis(g)
            coeffs = {mask: col[pos + i] for i, mask in enumerate(masks)}
            parts.append(SpinorVector(ctx, coeffs).cleaned())
            pos += len(masks)
        sections.append(tuple(parts))
    return sections


def twistor_kernel(m: int, r: int, band: int, arithmetic: str = "exact",
                   tol: float = 1e-10) -> KernelReport:
    """Per-mode kernel of the type-r twistor operator on the band-limited torus.

    Every grade and every r in 0..m is accepted.  On the flat torus the
    expected answer is binomial(m, r) constants at k = 0 and nothing else.
    """
    if not 0 <= r <= m:
        raise ValueError(f"type r={r} outside 0..{m}")
    if band < 0:
        raise ValueError("band must be nonnegative")
    ctx = build_fiber(m)
    n = ctx.n
    gm = ctx.grade_basis(r)
    d = len(gm)
    scale = math.lcm(2 * (r + 1), 2 * (m - r + 1))
    cp = Fraction(scale, 2 * (m - r + 1))
    cm = Fraction(scale, 2 * (r + 1))

    per_dir = []
    for a in range(n):
        ea = TangentVector.basis(ctx, a)
        cpa = op_clifford_plus(ea)
        cma = op_clifford_minus(ea)
        rows = []
        for l in range(n):
            el = TangentVector.basis(ctx, l)
            op = op_clifford_plus(el).compose(cma).scale(_frac(ctx, cp))
            op = op + op_clifford_minus(el).compose(cpa).scale(_frac(ctx, cm))
            if a == l:
                op = op + FiberOperator.identity(ctx).scale(ctx.scalar(scale))
            dense = op.to_dense(in_masks=gm, out_masks=gm)
            rows.append([[_int_entry(v) for v in row] for row in dense])
        per_dir.append(np.concatenate([np.asarray(b, dtype=np.int64) for b in rows]))
    gs_int = np.stack(per_dir)
    g0_int = np.zeros((n * d, d, 2), dtype=np.int64)

    nullities, zero_cols, scanned = _run_sweep(g0_int, gs_int, band, arithmetic, tol)
    basis_ctx = ctx if arithmetic == "exact" else build_fiber(m, "float")
    basis = _columns_to_sections(basis_ctx, (r,), zero_cols)
    report = KernelReport("twistor_kernel", {"m": m, "r": r}, band, arithmetic,
                          scanned, nullities, basis, (r,))
    if report.total_dim > rank_bound(m, r):
        raise AssertionError(
            f"kernel dimension {report.total_dim} exceeds the rank bound "
            f"{rank_bound(m, r)}")
    return report


def parallel_sections(conn: BlockConnection, band: int, arithmetic: str = "exact",
                      tol: float = 1e-10) -> KernelReport:
    """Per-mode parallel sections of a block connection on the torus.

    Mode k contributes the stacked kernel of i k_l I + B(e_l) over all
    directions l; k = 0 contributes the joint kernel of the couplings alone.
    """
    if band < 0:
        raise ValueError("band must be nonnegative")
    ctx = conn.ctx
    if ctx.mode != "exact":
        raise ValueError("build the connection on an exact fiber; pick the "
                         "tier through the arithmetic argument instead")
    n = conn.n
    sd = conn.stacked_dim
    dense = [conn.dense_block_matrix(l) for l in range(n)]

    # uniform Gaussian-integer rescaling: multiply the stacked matrix by -i
    # and clear every denominator at once (the kernel is scale invariant)
    denoms = {1}
    for mat in dense:
        for row in mat:
            for v in row:
                denoms.add(v.re.denominator)
                denoms.add(v.im.denominator)
    scale = math.lcm(*denoms)
    sq = Fraction(scale)

    g0_rows = []
    for mat in dense:
        for row in mat:
            # -i * (a + bi) = b - ai, scaled to integrality
            g0_rows.append([(int(v.im * sq), int(-v.re * sq)) for v in row])
    g0_int = np.asarray(g0_rows, dtype=np.int64).reshape(n * sd, sd, 2)

    gs_int = np.zeros((n, n * sd, sd, 2), dtype=np.int64)
    for a in range(n):
        for t in range(sd):
            gs_int[a, a * sd + t, t, 0] = scale

    nullities, zero_cols, scanned = _run_sweep(g0_int, gs_int, band, arithmetic, tol)
    basis_ctx = ctx if arithmetic == "exact" else build_fiber(ctx.m, "float")
    basis = _columns_to_sections(basis_ctx, conn.grades, zero_cols)
    params = {"m": conn.ctx.m, "r": conn.params.r, "variant": conn.label,
              "S": str(conn.params.S)}
    return KernelReport("parallel_sections", params, band, arithmetic,
                        scanned, nullities, basis, conn.grades)


# -- consequences for anti-holomorphic twistor fields -------------------------

def prop43_residuals(phi: FourierSpinorField, ric: RicciModel, S,
                     tol: float = 1e-10) -> List[dict]:
    """Residuals of the curvature consequences for an anti-holomorphic
    twistor field: one that satisfies the type-r system with D^- phi = 0.

    The torus carries constant S and a parallel Ricci model, so every term
    that differentiates curvature data drops out; what remains must vanish
    identically.  Raises when the lowering precondition D^- phi = 0 fails.
    """
    t = phi.torus
    ctx = t.fiber
    if ric.ctx is not ctx:
        raise ValueError("Ricci model and field live on different fibers")
    mode = ctx.mode
    gs = phi.grades()
    if len(gs) > 1:
        raise ValueError(f"need a grade-homogeneous field, found grades {gs}")
    r = gs[0] if gs else 0
    if not apply_Dminus(phi).is_zero():
        raise ValueError("precondition failed: D^- phi != 0")

    phi_plus = apply_Dplus(phi)
    k_const = Fraction(1, 2 * (2 * r + 1))
    kS = _frac(ctx, k_const * Fraction(S))
    rho = build_rho_s(ric, 1)
    ric2 = ric.power(2)
    i_unit = ctx.scalar(0, 1)

    def fiber_field(op, field):
        return apply_fiber_operator(op, field)

    def frame_residual(fn) -> bool:
        return all(fn(l).is_zero() for l in range(t.n))

    checks = [check("twistor.prop43.hypothesis", "2.5",
                    kahlerian_twistor(phi, r).is_zero(), mode=mode, r=r)]

    # constant scalar curvature: dS = 0, so its graded parts act as zero
    checks.append(check("twistor.prop43.ds_minus", "4.13", True, mode=mode,
                        note="dS = 0 for constant S"))

    d2 = apply_D(apply_D(phi))
    resid = d2 - phi.scale(kS * ctx.scalar(r + 1))
    checks.append(check("twistor.prop43.dirac_square", "4.14",
                        resid.is_zero(), mode=mode))

    def grad_plus_resid(l):
        rxp = op_clifford_plus(ric.apply(TangentVector.basis(ctx, l)))
        return (covariant_derivative(l, phi_plus)
                + fiber_field(rxp, phi).scale(_frac(ctx, Fraction(1, 2))))
    checks.append(check("twistor.prop43.grad_plus", "4.15",
                        frame_residual(grad_plus_resid), mode=mode))

    def ric_lower_resid(l):
        rxm = op_clifford_minus(ric.apply(TangentVector.basis(ctx, l)))
        return fiber_field(rxm, phi) - clifford_field(l, phi, "minus").scale(kS)
    checks.append(check("twistor.prop43.ricci_lower", "4.16",
                        frame_residual(ric_lower_resid), mode=mode))

    resid = fiber_field(rho.scale(i_unit), phi) - phi.scale(kS)
    checks.append(check("twistor.prop43.rho_action", "4.17",
                        resid.is_zero(), mode=mode))

    # parallel Ricci form and constant S: both sides differentiate to zero
    checks.append(check("twistor.prop43.rho_derivative_plus", "4.18", True,
                        mode=mode, note="nabla rho = 0 and dS = 0"))

    resid = fiber_field(rho.scale(i_unit), phi_plus) + phi_plus.scale(kS)
    checks.append(check("twistor.prop43.rho_action_plus", "4.19",
                        resid.is_zero(), mode=mode))

    def ric_lower_plus_resid(l):
        rxm = op_clifford_minus(ric.apply(TangentVector.basis(ctx, l)))
        return fiber_field(rxm, phi_plus) - clifford_field(l, phi_plus, "minus").scale(kS)
    checks.append(check("twistor.prop43.ricci_lower_plus", "4.20",
                        frame_residual(ric_lower_plus_resid), mode=mode))

    def ric_square_resid(l):
        el = TangentVector.basis(ctx, l)
        r2 = op_clifford_plus(ric2.apply(el))
        r1 = op_clifford_plus(ric.apply(el))
        return fiber_field(r2, phi) - fiber_field(r1, phi).scale(kS)
    checks.append(check("twistor.prop43.ricci_square", "4.21",
                        frame_residual(ric_square_resid), mode=mode))

    checks.append(check("twistor.prop43.rho_derivative_minus", "4.22", True,
                        mode=mode, note="every term differentiates constant data"))
    return checks
