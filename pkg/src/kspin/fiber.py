"""Pointwise spinor algebra for Kaehler spin manifolds.

The spinor representation of Spin(2m) is modeled on the exterior algebra of
C^m: basis states are subsets of {1..m} stored as bitmasks, the grade-r
piece has dimension binomial(m, r), and Clifford multiplication is built
from wedge/contraction ladder maps.  In this realization every frame
generator acts with Gaussian-integer matrix entries, so the whole algebra
closes over exact scalars.

Frame conventions, fixed once for the entire package:

* real frame vectors are indexed l = 0..2m-1; the complex structure pairs
  them as J e_{2j} = e_{2j+1}, J e_{2j+1} = -e_{2j} (0-based, plane j),
* Clifford multiplication satisfies X.Y + Y.X = -2<X,Y>,
* e^+ = (e - iJe)/2 raises the grade, e^- = (e + iJe)/2 lowers it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .scalars import QG, conj, is_zero

Mask = int

# value codes for single-term generator actions: a + b*i with a, b in {-1,0,1}
_VAL = Tuple[int, int]


def dim_grade(m: int, r: int) -> int:
    if r < 0 or r > m:
        return 0
    return math.comb(m, r)


def _sign_below(mask: Mask, bit: int) -> int:
    """Sign (-1)^{#set bits below `bit`} used by wedge/contraction."""
    return -1 if (mask & ((1 << bit) - 1)).bit_count() & 1 else 1


def act_generator(l: int, mask: Mask) -> Tuple[Mask, _VAL]:
    """Action of the frame vector e_l on a basis state, always one term.

    Returns (new_mask, (a, b)) with the coefficient a + b*i.
    """
    j = l >> 1
    bit = 1 << j
    s = _sign_below(mask, j)
    if not l & 1:  # e_{2j} = wedge - contract
        if mask & bit:
            return mask & ~bit, (-s, 0)
        return mask | bit, (s, 0)
    # e_{2j+1} = i*(wedge + contract)
    if mask & bit:
        return mask & ~bit, (0, s)
    return mask | bit, (0, s)


def act_plus(l: int, mask: Mask) -> Optional[Tuple[Mask, _VAL]]:
    """Grade-raising part e_l^+ of e_l; None when it annihilates the state."""
    j = l >> 1
    bit = 1 << j
    if mask & bit:
        return None
    s = _sign_below(mask, j)
    return mask | bit, ((s, 0) if not l & 1 else (0, s))


def act_minus(l: int, mask: Mask) -> Optional[Tuple[Mask, _VAL]]:
    """Grade-lowering part e_l^- of e_l."""
    j = l >> 1
    bit = 1 << j
    if not mask & bit:
        return None
    s = _sign_below(mask, j)
    return mask & ~bit, ((-s, 0) if not l & 1 else (0, s))


class FiberContext:
    """Spinor fiber for complex dimension m, with a chosen scalar mode."""

    def __init__(self, m: int, mode: str = "exact"):
        if not 1 <= m <= 8:
            raise ValueError(f"complex dimension m={m} out of the supported range 1..8")
        if mode not in ("exact", "float"):
            raise ValueError(f"unknown arithmetic mode {mode!r}")
        self.m = m
        self.n = 2 * m  # real dimension
        self.mode = mode
        self.dim = 1 << m
        self._grade_basis: List[List[Mask]] = [[] for _ in range(m + 1)]
        for mask in range(self.dim):
            self._grade_basis[mask.bit_count()].append(mask)
        self._grade_pos = [
            {mask: i for i, mask in enumerate(basis)} for basis in self._grade_basis
        ]

    # -- scalar plumbing -------------------------------------------------
    def scalar(self, re=0, im=0):
        if self.mode == "exact":
            return QG(re, im)
        return complex(re) + 1j * complex(im)

    def lift_value(self, val: _VAL):
        return self.scalar(val[0], val[1])

    def zero_tol(self) -> float:
        return 0.0 if self.mode == "exact" else 1e-12

    # -- basis bookkeeping ------------------------------------------------
    def grade_basis(self, r: int) -> List[Mask]:
        return self._grade_basis[r]

    def grade_pos(self, r: int) -> Dict[Mask, int]:
        return self._grade_pos[r]

    def basis_spinor(self, mask: Mask) -> "SpinorVector":
        return SpinorVector(self, {mask: self.scalar(1)})

    def __repr__(self):
        return f"FiberContext(m={self.m}, mode={self.mode!r})"


def build_fiber(m: int, mode: str = "exact") -> FiberContext:
    return FiberContext(m, mode)


@dataclass
class SpinorVector:
    """Sparse element of the full fiber; keys are basis bitmasks."""

    ctx: FiberContext
    coeffs: Dict[Mask, object] = field(default_factory=dict)

    def cleaned(self) -> "SpinorVector":
        tol = self.ctx.zero_tol()
        self.coeffs = {k: v for k, v in self.coeffs.items() if not is_zero(v, tol)}
        return self

    def copy(self) -> "SpinorVector":
        return SpinorVector(self.ctx, dict(self.coeffs))

    def __add__(self, other: "SpinorVector") -> "SpinorVector":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return SpinorVector(self.ctx, out).cleaned()

    def __sub__(self, other: "SpinorVector") -> "SpinorVector":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] - v if k in out else -v
        return SpinorVector(self.ctx, out).cleaned()

    def __neg__(self) -> "SpinorVector":
        return SpinorVector(self.ctx, {k: -v for k, v in self.coeffs.items()})

    def scale(self, c) -> "SpinorVector":
        if is_zero(c):
            return SpinorVector(self.ctx, {})
        return SpinorVector(self.ctx, {k: c * v for k, v in self.coeffs.items()}).cleaned()

    def conjugate_coeffs(self) -> "SpinorVector":
        return SpinorVector(self.ctx, {k: conj(v) for k, v in self.coeffs.items()})

    def inner(self, other: "SpinorVector"):
        """Hermitian pairing, antilinear in the second slot."""
        acc = self.ctx.scalar(0)
        small, big = self.coeffs, other.coeffs
        for k, v in small.items():
            if k in big:
                acc = acc + v * conj(big[k])
        return acc

    def norm_sq(self):
        acc = self.ctx.scalar(0)
        for v in self.coeffs.values():
            acc = acc + v * conj(v)
        return acc

    def is_zero(self, tol: Optional[float] = None) -> bool:
        t = self.ctx.zero_tol() if tol is None else tol
        return all(is_zero(v, t) for v in self.coeffs.values())

    def grades(self) -> List[int]:
        return sorted({k.bit_count() for k, v in self.coeffs.items()
                       if not is_zero(v, self.ctx.zero_tol())})

    def grade(self) -> int:
        """Grade of a homogeneous spinor; raises on mixed input."""
        gs = self.grades()
        if len(gs) != 1:
            raise ValueError(f"spinor is not homogeneous: grades {gs}")
        return gs[0]


def project_grade(phi: SpinorVector, r: int) -> SpinorVector:
    return SpinorVector(
        phi.ctx, {k: v for k, v in phi.coeffs.items() if k.bit_count() == r}
    ).cleaned()


@dataclass
class TangentVector:
    """(Possibly complex) tangent vector in the fixed frame e_0..e_{2m-1}."""

    ctx: FiberContext
    comps: Tuple

    @classmethod
    def basis(cls, ctx: FiberContext, l: int) -> "TangentVector":
        c = [ctx.scalar(0)] * ctx.n
        c[l] = ctx.scalar(1)
        return cls(ctx, tuple(c))

    @classmethod
    def from_components(cls, ctx: FiberContext, comps: Sequence) -> "TangentVector":
        if len(comps) != ctx.n:
            raise ValueError(f"expected {ctx.n} components, got {len(comps)}")
        return cls(ctx, tuple(comps))

    def jay(self) -> "TangentVector":
        out = [None] * self.ctx.n
        for j in range(self.ctx.m):
            out[2 * j + 1] = self.comps[2 * j]
            out[2 * j] = -self.comps[2 * j + 1]
        return TangentVector(self.ctx, tuple(out))

    def conjugate(self) -> "TangentVector":
        return TangentVector(self.ctx, tuple(conj(c) for c in self.comps))

    def __add__(self, other):
        return TangentVector(self.ctx, tuple(a + b for a, b in zip(self.comps, other.comps)))

    def __sub__(self, other):
        return TangentVector(self.ctx, tuple(a - b for a, b in zip(self.comps, other.comps)))

    def __neg__(self):
        return TangentVector(self.ctx, tuple(-a for a in self.comps))

    def scale(self, c):
        return TangentVector(self.ctx, tuple(c * a for a in self.comps))

    def metric(self, other: "TangentVector"):
        """Complex-bilinear extension of the Riemannian metric."""
        acc = self.ctx.scalar(0)
        for a, b in zip(self.comps, other.comps):
            acc = acc + a * b
        return acc


def _apply_terms(phi: SpinorVector, terms) -> SpinorVector:
    """Apply a list of (coeff, action) single-term generator maps."""
    ctx = phi.ctx
    out: Dict[Mask, object] = {}
    for coeff, action in terms:
        if is_zero(coeff):
            continue
        for mask, v in phi.coeffs.items():
            hit = action(mask)
            if hit is None:
                continue
            nm, val = hit
            contrib = coeff * ctx.lift_value(val) * v
            out[nm] = out[nm] + contrib if nm in out else contrib
    return SpinorVector(ctx, out).cleaned()


def clifford_mul(X: TangentVector, phi: SpinorVector) -> SpinorVector:
    """Clifford product X . phi (complex-bilinear in X)."""
    terms = [(X.comps[l], (lambda l: lambda mask: act_generator(l, mask))(l))
             for l in range(phi.ctx.n)]
    return _apply_terms(phi, terms)


def clifford_plus(X: TangentVector, phi: SpinorVector) -> SpinorVector:
    """Action of the (1,0) part: X^+ . phi, raising the grade."""
    terms = [(X.comps[l], (lambda l: lambda mask: act_plus(l, mask))(l))
             for l in range(phi.ctx.n)]
    return _apply_terms(phi, terms)


def clifford_minus(X: TangentVector, phi: SpinorVector) -> SpinorVector:
    """Action of the (0,1) part: X^- . phi, lowering the grade."""
    terms = [(X.comps[l], (lambda l: lambda mask: act_minus(l, mask))(l))
             for l in range(phi.ctx.n)]
    return _apply_terms(phi, terms)


def _gen_mul(ctx: FiberContext, l: int, phi: SpinorVector) -> SpinorVector:
    out: Dict[Mask, object] = {}
    for mask, v in phi.coeffs.items():
        nm, val = act_generator(l, mask)
        contrib = ctx.lift_value(val) * v
        out[nm] = out[nm] + contrib if nm in out else contrib
    return SpinorVector(ctx, out).cleaned()


def form_action(ctx: FiberContext, alpha: Dict[Tuple[int, ...], object],
                phi: SpinorVector) -> SpinorVector:
    """Clifford action of an exterior form.

    `alpha` maps strictly increasing tuples of frame indices (0-based) to
    coefficients; the empty tuple contributes a scalar term.  The action of
    a k-form is sum alpha(e_{i1},..,e_{ik}) e_{i1}. ... .e_{ik}. phi.
    """
    acc = SpinorVector(ctx, {})
    for idx, coeff in alpha.items():
        if any(idx[t] >= idx[t + 1] for t in range(len(idx) - 1)):
            raise ValueError(f"form indices must be strictly increasing: {idx}")
        cur = phi
        for l in reversed(idx):
            cur = _gen_mul(ctx, l, cur)
        acc = acc + cur.scale(coeff)
    return acc


def kaehler_form(ctx: FiberContext) -> Dict[Tuple[int, int], object]:
    """The Kaehler 2-form w(X, Y) = <JX, Y> in the fixed frame."""
    return {(2 * j, 2 * j + 1): ctx.scalar(1) for j in range(ctx.m)}


def omega_action(phi: SpinorVector) -> SpinorVector:
    """Clifford action of the Kaehler form; i(2r - m) on the grade-r piece."""
    ctx = phi.ctx
    acc = SpinorVector(ctx, {})
    for j in range(ctx.m):
        acc = acc + _gen_mul(ctx, 2 * j, _gen_mul(ctx, 2 * j + 1, phi))
    return acc


def volume_form_action(phi: SpinorVector) -> SpinorVector:
    """Action of the complex volume element i^m e_0.Je_0. ... ; (-1)^r on grades."""
    ctx = phi.ctx
    cur = phi
    for j in range(ctx.m):
        cur = _gen_mul(ctx, 2 * j, _gen_mul(ctx, 2 * j + 1, cur))
    # multiply by i^m
    im = {0: (1, 0), 1: (0, 1), 2: (-1, 0), 3: (0, -1)}[ctx.m % 4]
    return cur.scale(ctx.lift_value(im))


def j_map(phi: SpinorVector) -> SpinorVector:
    """Conjugate-linear structure map Sigma_r -> Sigma_{m-r}.

    Commutes with Clifford multiplication by real vectors, squares to
    (-1)^{m(m+1)/2}, and sends Z.phi to conj(Z).j(phi) for complex Z.
    """
    ctx = phi.ctx
    full = ctx.dim - 1
    out: Dict[Mask, object] = {}
    for mask, v in phi.coeffs.items():
        tot = 0
        mm = mask
        while mm:
            b = mm & -mm
            tot += b.bit_length()  # 1-based generator index
            mm ^= b
        val = conj(v)
        out[full ^ mask] = val if tot % 2 == 0 else -val
    return SpinorVector(ctx, out).cleaned()


# -- spinor-valued one-forms ---------------------------------------------

OneForm = List[SpinorVector]  # component along each frame vector


def one_form_zero(ctx: FiberContext) -> OneForm:
    return [SpinorVector(ctx, {}) for _ in range(ctx.n)]


def iota_plus(psi: SpinorVector) -> OneForm:
    """Canonical embedding of Sigma_{r+1} into T* (x) Sigma_r.

    Right inverse of c_plus; scales norms by 1/(2(r+1)) where r+1 is the
    grade of psi.
    """
    ctx = psi.ctx
    rp1 = psi.grade()
    if rp1 < 1:
        raise ValueError("iota_plus needs a spinor of grade at least 1")
    coeff = ctx.scalar(Fraction(-1, 2 * rp1)) if ctx.mode == "exact" else -1.0 / (2 * rp1)
    return [clifford_minus(TangentVector.basis(ctx, l), psi).scale(coeff)
            for l in range(ctx.n)]


def iota_minus(phi: SpinorVector) -> OneForm:
    """Canonical embedding of Sigma_{r-1} into T* (x) Sigma_r."""
    ctx = phi.ctx
    rm1 = phi.grade()
    if rm1 > ctx.m - 1:
        raise ValueError("iota_minus needs a spinor of grade at most m-1")
    denom = 2 * (ctx.m - rm1)
    coeff = ctx.scalar(Fraction(-1, denom)) if ctx.mode == "exact" else -1.0 / denom
    return [clifford_plus(TangentVector.basis(ctx, l), phi).scale(coeff)
            for l in range(ctx.n)]


def c_plus(Psi: OneForm) -> SpinorVector:
    """Grade-raising Clifford contraction sum_l e_l^+ . Psi_l."""
    ctx = Psi[0].ctx
    acc = SpinorVector(ctx, {})
    for l, comp in enumerate(Psi):
        acc = acc + clifford_plus(TangentVector.basis(ctx, l), comp)
    return acc


def c_minus(Psi: OneForm) -> SpinorVector:
    """Grade-lowering Clifford contraction sum_l e_l^- . Psi_l."""
    ctx = Psi[0].ctx
    acc = SpinorVector(ctx, {})
    for l, comp in enumerate(Psi):
        acc = acc + clifford_minus(TangentVector.basis(ctx, l), comp)
    return acc


def c_full(Psi: OneForm) -> SpinorVector:
    ctx = Psi[0].ctx
    acc = SpinorVector(ctx, {})
    for l, comp in enumerate(Psi):
        acc = acc + clifford_mul(TangentVector.basis(ctx, l), comp)
    return acc


def twistor_project_fiber(Psi: OneForm, r: int) -> OneForm:
    """Orthogonal projection of T* (x) Sigma_r onto the kernel of both
    Clifford contractions (the fiber carrying the twistor operator)."""
    ctx = Psi[0].ctx
    out = [comp.copy() for comp in Psi]
    up = c_plus(Psi)
    if not up.is_zero():
        emb = iota_plus(up)
        out = [a - b for a, b in zip(out, emb)]
    down = c_minus(Psi)
    if not down.is_zero():
        emb = iota_minus(down)
        out = [a - b for a, b in zip(out, emb)]
    return out


class FiberOperator:
    """Endomorphism of the fiber, stored column-sparse.

    cols[in_mask][out_mask] holds the matrix entry; grading is an optional
    (grade_in, grade_out) annotation for maps between fixed graded pieces.
    """

    def __init__(self, ctx: FiberContext, cols: Optional[Dict[Mask, Dict[Mask, object]]] = None,
                 grading: Optional[Tuple[int, int]] = None):
        self.ctx = ctx
        self.cols = cols if cols is not None else {}
        self.grading = grading

    @classmethod
    def zero(cls, ctx: FiberContext) -> "FiberOperator":
        return cls(ctx)

    @classmethod
    def identity(cls, ctx: FiberContext) -> "FiberOperator":
        one = ctx.scalar(1)
        return cls(ctx, {mask: {mask: one} for mask in range(ctx.dim)})

    @classmethod
    def from_action(cls, ctx: FiberContext, fn, masks=None,
                    grading: Optional[Tuple[int, int]] = None) -> "FiberOperator":
        """Materialize a spinor-to-spinor callable on the given basis states."""
        cols = {}
        for mask in (range(ctx.dim) if masks is None else masks):
            img = fn(ctx.basis_spinor(mask))
            if img.coeffs:
                cols[mask] = dict(img.coeffs)
        return cls(ctx, cols, grading)

    def apply(self, phi: SpinorVector) -> SpinorVector:
        out: Dict[Mask, object] = {}
        for mask, v in phi.coeffs.items():
            col = self.cols.get(mask)
            if not col:
                continue
            for om, entry in col.items():
                contrib = entry * v
                out[om] = out[om] + contrib if om in out else contrib
        return SpinorVector(self.ctx, out).cleaned()

    def compose(self, other: "FiberOperator") -> "FiberOperator":
        """self after other."""
        cols: Dict[Mask, Dict[Mask, object]] = {}
        for in_mask, mid in other.cols.items():
            acc: Dict[Mask, object] = {}
            for mid_mask, b in mid.items():
                col = self.cols.get(mid_mask)
                if not col:
                    continue
                for out_mask, a in col.items():
                    contrib = a * b
                    acc[out_mask] = acc[out_mask] + contrib if out_mask in acc else contrib
            if acc:
                cols[in_mask] = acc
        grading = None
        if self.grading and other.grading:
            grading = (other.grading[0], self.grading[1])
        return FiberOperator(self.ctx, cols, grading)

    def adjoint(self) -> "FiberOperator":
        cols: Dict[Mask, Dict[Mask, object]] = {}
        for in_mask, col in self.cols.items():
            for out_mask, v in col.items():
                cols.setdefault(out_mask, {})[in_mask] = conj(v)
        grading = (self.grading[1], self.grading[0]) if self.grading else None
        return FiberOperator(self.ctx, cols, grading)

    def scale(self, c) -> "FiberOperator":
        return FiberOperator(
            self.ctx,
            {im: {om: c * v for om, v in col.items()} for im, col in self.cols.items()},
            self.grading,
        )

    def __add__(self, other: "FiberOperator") -> "FiberOperator":
        cols = {im: dict(col) for im, col in self.cols.items()}
        for im, col in other.cols.items():
            dst = cols.setdefault(im, {})
            for om, v in col.items():
                dst[om] = dst[om] + v if om in dst else v
        grading = self.grading if self.grading == other.grading else None
        return FiberOperator(self.ctx, cols, grading)

    def __sub__(self, other: "FiberOperator") -> "FiberOperator":
        return self + other.scale(self.ctx.scalar(-1))

    def __neg__(self) -> "FiberOperator":
        return self.scale(self.ctx.scalar(-1))

    def to_dense(self, in_masks: Optional[Sequence[Mask]] = None,
                 out_masks: Optional[Sequence[Mask]] = None):
        """Dense matrix over the chosen basis states (full fiber by default).

        Exact mode gives nested lists of QG, float mode a numpy array.
        """
        ins = list(range(self.ctx.dim)) if in_masks is None else list(in_masks)
        outs = list(range(self.ctx.dim)) if out_masks is None else list(out_masks)
        if self.ctx.mode == "float":
            import numpy as np
            mat = np.zeros((len(outs), len(ins)), dtype=complex)
            pos = {m: i for i, m in enumerate(outs)}
            for ci, im in enumerate(ins):
                for om, v in self.cols.get(im, {}).items():
                    if om in pos:
                        mat[pos[om], ci] = complex(v)
            return mat
        pos = {m: i for i, m in enumerate(outs)}
        mat = [[self.ctx.scalar(0)] * len(ins) for _ in outs]
        for ci, im in enumerate(ins):
            for om, v in self.cols.get(im, {}).items():
                if om in pos:
                    mat[pos[om]][ci] = v
        return mat

    def is_zero(self, tol: Optional[float] = None) -> bool:
        t = self.ctx.zero_tol() if tol is None else tol
        return all(is_zero(v, t) for col in self.cols.values() for v in col.values())


def op_clifford(X: TangentVector) -> FiberOperator:
    return FiberOperator.from_action(X.ctx, lambda p: clifford_mul(X, p))


def op_clifford_plus(X: TangentVector) -> FiberOperator:
    return FiberOperator.from_action(X.ctx, lambda p: clifford_plus(X, p))


def op_clifford_minus(X: TangentVector) -> FiberOperator:
    return FiberOperator.from_action(X.ctx, lambda p: clifford_minus(X, p))


# -- Ricci models ----------------------------------------------------------

class RicciModel:
    """Symmetric J-commuting endomorphism, diagonal on the frame planes.

    plane_eigenvalues[j] is the eigenvalue on span{e_{2j}, e_{2j+1}}; each
    therefore occurs with even multiplicity, as required of the Ricci tensor
    of a Kaehler metric in an adapted frame.
    """

    def __init__(self, ctx: FiberContext, plane_eigenvalues: Sequence):
        if len(plane_eigenvalues) != ctx.m:
            raise ValueError(f"need {ctx.m} plane eigenvalues")
        self.ctx = ctx
        self.mu = tuple(ev if isinstance(ev, (QG, complex, float)) else ctx.scalar(ev)
                        for ev in plane_eigenvalues)

    @classmethod
    def from_pairs(cls, ctx: FiberContext, pairs: Sequence[Tuple[object, int]]) -> "RicciModel":
        """Build from (eigenvalue, multiplicity) data; multiplicities must be
        even and sum to 2m."""
        mu = []
        for ev, mult in pairs:
            if mult < 0 or mult % 2:
                raise ValueError(f"eigenvalue multiplicity must be even, got {mult}")
            mu.extend([ev] * (mult // 2))
        if len(mu) != ctx.m:
            raise ValueError(f"multiplicities sum to {2 * len(mu)}, expected {2 * ctx.m}")
        return cls(ctx, mu)

    @classmethod
    def einstein(cls, ctx: FiberContext, scal) -> "RicciModel":
        lam = Fraction(scal, 2 * ctx.m) if not isinstance(scal, (float, complex)) \
            else scal / (2 * ctx.m)
        return cls(ctx, [lam] * ctx.m)

    def scal(self):
        acc = self.ctx.scalar(0)
        for ev in self.mu:
            acc = acc + ev + ev
        return acc

    def power(self, s: int) -> "RicciModel":
        out = []
        for ev in self.mu:
            acc = self.ctx.scalar(1)
            for _ in range(s):
                acc = acc * ev
            out.append(acc)
        return RicciModel(self.ctx, out)

    def trace_power(self, s: int):
        acc = self.ctx.scalar(0)
        for ev in self.power(s).mu:
            acc = acc + ev + ev
        return acc

    def apply(self, X: TangentVector) -> TangentVector:
        comps = list(X.comps)
        for j, ev in enumerate(self.mu):
            comps[2 * j] = ev * comps[2 * j]
            comps[2 * j + 1] = ev * comps[2 * j + 1]
        return TangentVector(self.ctx, tuple(comps))

    def rho_form(self, s: int = 1) -> Dict[Tuple[int, int], object]:
        """The 2-form rho_s(X, Y) = <J Ric^s X, Y> in the fixed frame."""
        pw = self.power(s)
        return {(2 * j, 2 * j + 1): pw.mu[j] for j in range(self.ctx.m)}


def build_rho_s(ric: RicciModel, s: int) -> FiberOperator:
    """Twisted Ricci forms: rho_0 acts as the Kaehler form, rho_1 as the
    Ricci form.  Clifford action of (1/2) sum_l e_l . J Ric^s(e_l)."""
    if s < 0 or s > 6:
        raise ValueError(f"rho_s power s={s} outside the supported range 0..6")
    ctx = ric.ctx
    pw = ric.power(s)
    half = ctx.scalar(Fraction(1, 2)) if ctx.mode == "exact" else 0.5

    def act(phi: SpinorVector) -> SpinorVector:
        acc = SpinorVector(ctx, {})
        for l in range(ctx.n):
            # J Ric^s(e_l) stays in the plane of e_l
            target = 2 * (l >> 1) + 1 if not l & 1 else 2 * (l >> 1)
            sign = 1 if not l & 1 else -1
            term = _gen_mul(ctx, l, _gen_mul(ctx, target, phi))
            mu = pw.mu[l >> 1]
            acc = acc + term.scale(mu if sign == 1 else -mu)
        return acc.scale(half)

    return FiberOperator.from_action(ctx, act)


def contraction_suite(ric: RicciModel, r: Optional[int] = None) -> List[dict]:
    """Exact operator identities tying the graded Clifford contractions to
    the Ricci form: on each grade r,

    * sum_l e_l^+ . e_l^- = -2r
    * sum_l e_l^- . e_l^+ = -2(m - r)
    * sum_l e_l . Ric(e_l)  = -S
    * sum_l e_l^- . Ric(e_l^+) = -S/2 - i rho

    Checked on every basis state of the grade (all grades when r is None).
    Failing records carry the offending (grade, basis state) pairs.
    """
    from .report import check

    ctx = ric.ctx
    rho = build_rho_s(ric, 1)
    S = ric.scal()
    i_unit = ctx.scalar(0, 1)
    failures: Dict[str, list] = {
        "plus_minus": [], "minus_plus": [], "ricci_full": [], "ricci_mixed": []}
    grades = range(ctx.m + 1) if r is None else [r]
    for g in grades:
        for mask in ctx.grade_basis(g):
            phi = ctx.basis_spinor(mask)
            pm = SpinorVector(ctx, {})
            mp = SpinorVector(ctx, {})
            ricfull = SpinorVector(ctx, {})
            ricmix = SpinorVector(ctx, {})
            for l in range(ctx.n):
                e = TangentVector.basis(ctx, l)
                pm = pm + clifford_plus(e, clifford_minus(e, phi))
                mp = mp + clifford_minus(e, clifford_plus(e, phi))
                ricfull = ricfull + clifford_mul(e, clifford_mul(ric.apply(e), phi))
                ricmix = ricmix + clifford_minus(e, clifford_plus(ric.apply(e), phi))
            expected_mixed = phi.scale(-(S / 2)) - rho.apply(phi).scale(i_unit)
            for name, resid in (
                ("plus_minus", pm - phi.scale(ctx.scalar(-2 * g))),
                ("minus_plus", mp - phi.scale(ctx.scalar(-2 * (ctx.m - g)))),
                ("ricci_full", ricfull + phi.scale(S)),
                ("ricci_mixed", ricmix - expected_mixed),
            ):
                if not resid.is_zero():
                    failures[name].append((g, mask))
    tags = {"plus_minus": "4.1", "minus_plus": "4.1",
            "ricci_full": "4.3", "ricci_mixed": "4.3"}
    return [check(f"fiber.contraction.{name}", tags[name], not bad, failures=bad)
            for name, bad in failures.items()]
