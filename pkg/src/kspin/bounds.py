"""Closed-form spectral bounds and Ricci eigendata arithmetic.

Everything here is exact rational arithmetic over Fractions: lower bounds for
Dirac eigenvalues, the eigenvalue formulas attached to holomorphic and
anti-holomorphic kernel fields, the inversion of the order-two operator system
that powers those formulas, Ricci eigenvalue tables with their Newton-identity
round trip, and the structural classification report for product splittings.
Floating point appears only in the last-resort root finder of
``newton_recover``; nothing else approximates.
"""

import math
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

Rat = Union[int, Fraction]

KINDS = ("anti-holomorphic", "holomorphic")

_VARIANTS = ("friedrich", "kirchberg-odd", "kirchberg-even", "sigma-r")


def _rat(x, name: str = "value") -> Fraction:
    try:
        return Fraction(x)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name} must be rational, got {x!r}") from exc


def _check_kind(kind: str) -> str:
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    return kind


def _check_r(m: int, r: int, strict: bool = False) -> None:
    if strict:
        if not 0 < r < m:
            raise ValueError(f"need 0 < r < m, got r={r}, m={m}")
    elif not 0 <= r <= m:
        raise ValueError(f"need 0 <= r <= m, got r={r}, m={m}")


# -- eigenvalue lower bounds ---------------------------------------------------

def friedrich_bound(n: int, infS) -> Fraction:
    """Lower bound for the square of any Dirac eigenvalue in real dimension n."""
    s = _rat(infS, "infS")
    if n < 2:
        raise ValueError(f"real dimension must be at least 2, got {n}")
    if s <= 0:
        raise ValueError("the bound needs a positive scalar curvature infimum")
    return Fraction(n, 4 * (n - 1)) * s


def kirchberg_bound(m: int, infS) -> Fraction:
    """Sharpened bound on Kaehler manifolds of complex dimension m.

    The odd and even cases carry different constants; the even constant is
    undefined at m = 1, but that branch is never taken.
    """
    s = _rat(infS, "infS")
    if m < 1:
        raise ValueError(f"complex dimension must be at least 1, got {m}")
    if s <= 0:
        raise ValueError("the bound needs a positive scalar curvature infimum")
    if m % 2 == 1:
        return Fraction(m + 1, 4 * m) * s
    return Fraction(m, 4 * (m - 1)) * s


def sigma_r_bound(m: int, r: int, infS) -> Fraction:
    """Type-r refinement of the eigenvalue bound for D^2.

    Symmetric under r -> m - r and equal to the Kirchberg constant at the
    odd-dimensional Killing type r = (m-1)/2.
    """
    _check_r(m, r)
    s = _rat(infS, "infS")
    if s <= 0:
        raise ValueError("the bound needs a positive scalar curvature infimum")
    if 2 * r > m:
        r = m - r
    return Fraction(2 * (r + 1), 2 * r + 1) * s / 4


def lemma26_bound(k, infS) -> Fraction:
    """Elementary bound k/(k-1) * infS/4 behind the type-r refinement."""
    kk = _rat(k, "k")
    s = _rat(infS, "infS")
    if kk <= 1:
        raise ValueError(f"the constant k/(k-1) needs k > 1, got {k}")
    if s <= 0:
        raise ValueError("the bound needs a positive scalar curvature infimum")
    return kk / (kk - 1) * s / 4


class BoundQuery:
    """One bound request: dimension, optional type r, curvature infimum, variant."""

    __slots__ = ("m", "r", "infS", "variant")

    def __init__(self, variant: str, infS, m: Optional[int] = None,
                 n: Optional[int] = None, r: Optional[int] = None):
        v = variant.lower()
        if v not in _VARIANTS:
            raise ValueError(f"variant must be one of {_VARIANTS}, got {variant!r}")
        if m is None and n is None:
            raise ValueError("give the dimension as m (complex) or n (real)")
        if n is not None:
            if n % 2:
                raise ValueError(f"real dimension must be even, got n={n}")
            if m is not None and n != 2 * m:
                raise ValueError(f"inconsistent dimensions m={m}, n={n}")
            m = n // 2
        self.m = m
        self.infS = _rat(infS, "infS")
        if self.infS <= 0:
            raise ValueError("bound queries need infS > 0")
        if r is not None:
            _check_r(m, r)
        self.r = r
        self.variant = v

    def evaluate(self) -> Tuple[Fraction, str]:
        """Return the bound and the tag of the formula that produced it."""
        m, s = self.m, self.infS
        if self.variant == "friedrich":
            return friedrich_bound(2 * m, s), "1.10"
        if self.variant == "kirchberg-odd":
            if m % 2 == 0:
                raise ValueError(f"odd-dimension variant needs m odd, got m={m}")
            return kirchberg_bound(m, s), "1.12"
        if self.variant == "kirchberg-even":
            if m % 2 == 1:
                raise ValueError(f"even-dimension variant needs m even, got m={m}")
            return kirchberg_bound(m, s), "1.13"
        if self.r is None:
            raise ValueError("the type-r variant needs r")
        tag = "2.10" if 2 * self.r <= m else "2.11"
        return sigma_r_bound(m, self.r, s), tag


# -- eigenvalue formulas -------------------------------------------------------

def special_eigenvalue(m: int, r: int, S, kind: str) -> Fraction:
    """D^2 eigenvalue forced on one-sided kernel fields of type r."""
    _check_r(m, r)
    _check_kind(kind)
    s = _rat(S, "S")
    if kind == "anti-holomorphic":
        return Fraction(r + 1, 2 * (2 * r + 1)) * s
    return Fraction(m - r + 1, 2 * (2 * m - 2 * r + 1)) * s


def middle_eigenvalue(m: int, S) -> Tuple[Fraction, str]:
    """Forced D^2 eigenvalue at the middle type r = m/2, with a verdict.

    For S > 0 the value sits strictly below the even-dimensional bound, so
    only the zero solution exists; at S = 0 the candidates are parallel.
    """
    if m % 2:
        raise ValueError(f"the middle type m/2 needs m even, got m={m}")
    s = _rat(S, "S")
    value = Fraction(m + 2, 4 * (m + 1)) * s
    if s == 0:
        return value, "parallel"
    if s > 0:
        assert value < kirchberg_bound(m, s)
    return value, "excluded"


class InversionCoefficients(NamedTuple):
    """D^-D^+ = a0*D^2 + a1*S and D^+D^- = b0*D^2 + b1*S, exactly."""

    minus_plus_dirac_sq: Fraction
    minus_plus_scal: Fraction
    plus_minus_dirac_sq: Fraction
    plus_minus_scal: Fraction


def weitzenboeck_inversion(m: int, r: int) -> InversionCoefficients:
    """Solve for the two composite operators from their sum and weighted sum.

    The system is {a + b = D^2, a/(2(r+1)) + b/(2(m-r+1)) = D^2 - S/4}; it is
    singular exactly at the middle type, which is rejected.
    """
    _check_r(m, r)
    if 2 * r == m:
        raise ValueError(f"the 2x2 system is singular at r = m/2 (r={r}, m={m})")
    wa = Fraction(1, 2 * (r + 1))
    wb = Fraction(1, 2 * (m - r + 1))
    det = wb - wa
    # Cramer on the coefficient vectors (d, s) of D^2 and S
    rhs1 = (Fraction(1), Fraction(0))
    rhs2 = (Fraction(1), Fraction(-1, 4))
    a = tuple((r1 * wb - r2) / det for r1, r2 in zip(rhs1, rhs2))
    b = tuple((r2 - r1 * wa) / det for r1, r2 in zip(rhs1, rhs2))
    # must reproduce the printed closed forms
    assert a == (Fraction((2 * m - 2 * r + 1) * (r + 1), m - 2 * r),
                 Fraction(-(r + 1) * (m - r + 1), 2 * (m - 2 * r)))
    assert b == (Fraction(-(2 * r + 1) * (m - r + 1), m - 2 * r),
                 Fraction((r + 1) * (m - r + 1), 2 * (m - 2 * r)))
    return InversionCoefficients(a[0], a[1], b[0], b[1])


def ke_eigenvalue(m: int, r: int, S) -> Fraction:
    """D^2 eigenvalue on an Einstein background, re-derived before returning.

    The cross check expands the curvature term of the Dirac-square relation
    with the Einstein value of the Ricci form action and compares exactly.
    """
    _check_r(m, r)
    s = _rat(S, "S")
    value = Fraction(m * m + m - 2 * m * r + 2 * r * r, 2 * m * (m + 1)) * s
    derived = (Fraction(m + 2, 4 * (m + 1)) * s
               + Fraction(m - 2 * r, 2 * (m + 1)) * Fraction(m - 2 * r, 2 * m) * s)
    assert value == derived
    return value


def ke_admissible_r(m: int) -> set:
    """Types r <= m/2 allowing nontrivial solutions on an Einstein background.

    Roots of r(m-2r)(m-2r-1) over 0 <= r <= m/2: the extremal type 0, the
    middle type when m is even, and the Killing type (m-1)/2 when m is odd.
    Away from these only parallel fields remain.
    """
    if m < 1:
        raise ValueError(f"complex dimension must be at least 1, got {m}")
    out = {0}
    if m % 2 == 0:
        out.add(m // 2)
    else:
        out.add((m - 1) // 2)
    return out


# -- Ricci eigendata -----------------------------------------------------------

class EigendataReport:
    """Constant Ricci eigenvalues with multiplicities, trace-checked."""

    __slots__ = ("m", "r", "S", "kind", "pairs", "zero_multiplicity", "eq_tag")

    def __init__(self, m: int, r: int, S: Fraction, kind: str,
                 pairs: Sequence[Tuple[Fraction, int]], zero_multiplicity: int,
                 eq_tag: str = "5.3"):
        total = 0
        trace = Fraction(0)
        for value, mult in pairs:
            if mult <= 0 or mult != int(mult):
                raise ValueError(f"multiplicities must be positive integers, got {mult}")
            total += mult
            trace += value * mult
        if total != 2 * m:
            raise ValueError(f"multiplicities sum to {total}, expected {2 * m}")
        if trace != S:
            raise ValueError(f"eigenvalue trace {trace} differs from S={S}")
        self.m = m
        self.r = r
        self.S = S
        self.kind = kind
        self.pairs = tuple((Fraction(v), int(mu)) for v, mu in pairs)
        self.zero_multiplicity = zero_multiplicity
        self.eq_tag = eq_tag

    def trace(self) -> Fraction:
        return sum((v * mu for v, mu in self.pairs), Fraction(0))

    def power_sums(self, count: int) -> List[Fraction]:
        """tr(Ric^s) for s = 1..count, the Newton-identity round-trip input."""
        return [sum((v ** s * mu for v, mu in self.pairs), Fraction(0))
                for s in range(1, count + 1)]

    def summary(self) -> dict:
        return {
            "m": self.m, "r": self.r, "S": str(self.S), "kind": self.kind,
            "eigenvalues": [{"value": str(v), "multiplicity": mu}
                            for v, mu in self.pairs],
            "zero_multiplicity": self.zero_multiplicity,
            "trace": str(self.trace()),
        }


def ricci_eigendata(m: int, r: int, S, kind: str) -> EigendataReport:
    """Two-eigenvalue Ricci table forced by a one-sided kernel field of type r.

    The zero eigenvalue's multiplicity is 2(m-2r-1) on the anti-holomorphic
    side and 2(2r-m-1) on the holomorphic side; a negative count means the
    requested type cannot carry such a field at all, which is an error.
    """
    _check_r(m, r, strict=True)
    _check_kind(kind)
    s = _rat(S, "S")
    if s <= 0:
        raise ValueError("eigendata needs S > 0")
    if kind == "anti-holomorphic":
        zero_mult = 2 * (m - 2 * r - 1)
        if zero_mult < 0:
            raise ValueError(
                f"anti-holomorphic fields need r <= (m-1)/2, got r={r}, m={m} "
                f"(the zero eigenvalue would have multiplicity {zero_mult})")
        value = s / (2 * (2 * r + 1))
        value_mult = 2 * (2 * r + 1)
    else:
        zero_mult = 2 * (2 * r - m - 1)
        if zero_mult < 0:
            raise ValueError(
                f"holomorphic fields need r >= (m+1)/2, got r={r}, m={m} "
                f"(the zero eigenvalue would have multiplicity {zero_mult})")
        value = s / (2 * (2 * m - 2 * r + 1))
        value_mult = 2 * (2 * m - 2 * r + 1)
    pairs = [(value, value_mult)]
    if zero_mult > 0:
        pairs.append((Fraction(0), zero_mult))
    return EigendataReport(m, r, s, kind, pairs, zero_mult)


def newton_recover(power_sums: Sequence, tol: float = 1e-6) -> List[Tuple]:
    """Eigenvalue multiset from the power sums tr(Ric^s), s = 1..len.

    Newton's identities give the elementary symmetric functions exactly; a
    single repeated nonzero eigenvalue (the shape the eigendata reports
    produce) is then recognized and returned exactly.  Anything else falls
    back to numeric root finding, clustered and re-verified against the
    inputs; power sums with no real spectrum are rejected.  The default
    tolerance is loose because repeated roots only come out of the float
    root finder with about half precision.
    """
    ps = [_rat(x, "power sum") for x in power_sums]
    n = len(ps)
    if n == 0:
        raise ValueError("need at least one power sum")
    elem = [Fraction(1)] + [Fraction(0)] * n
    for k in range(1, n + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * elem[k - i] * ps[i - 1]
        elem[k] = acc / k
    deg = max(k for k in range(n + 1) if elem[k] != 0)
    zero_mult = n - deg
    if deg == 0:
        return [(Fraction(0), n)]

    # one repeated root c of multiplicity deg iff e_k = C(deg, k) c^k
    c = elem[1] / deg
    if all(elem[k] == math.comb(deg, k) * c ** k for k in range(2, deg + 1)):
        out = [(c, deg)]
        if zero_mult:
            out.append((Fraction(0), zero_mult))
        return sorted(out, key=lambda p: -p[0])

    coeffs = [(-1) ** k * float(elem[k]) for k in range(deg + 1)]
    roots = np.roots(coeffs)
    scale = max(1.0, float(np.max(np.abs(roots))))
    if float(np.max(np.abs(roots.imag))) > tol * scale:
        raise ValueError("power sums are inconsistent: the recovered "
                         "polynomial has non-real roots")
    reals = sorted(float(x) for x in roots.real)
    clusters: List[List[float]] = []
    for x in reals:
        if clusters and abs(x - clusters[-1][-1]) <= tol * scale:
            clusters[-1].append(x)
        else:
            clusters.append([x])
    found = [(sum(c0) / len(c0), len(c0)) for c0 in clusters]
    if zero_mult:
        found.append((0.0, zero_mult))
    # round trip: the clustered multiset must reproduce the inputs
    for s in range(1, n + 1):
        regen = sum(v ** s * mu for v, mu in found)
        if abs(regen - float(ps[s - 1])) > tol * max(1.0, abs(float(ps[s - 1]))):
            raise ValueError("power sums are inconsistent: clustered roots "
                             "do not reproduce them")
    return sorted(found, key=lambda p: -p[0])


# -- structure of the solution space -------------------------------------------

def dim_bound(m: int, r: int) -> int:
    """Rank of the reduced three-slot bundle: a cap on the solution space."""
    _check_r(m, r)
    total = math.comb(m, r)
    if r + 1 <= m:
        total += math.comb(m, r + 1)
    if r >= 1:
        total += math.comb(m, r - 1)
    return total


def killing_dim(m_prime: int) -> int:
    """Dimension of the Killing-type solution space on projective space.

    Complex dimension m' = 2k - 1 must be odd; the count is binomial(2k, k).
    """
    if m_prime < 1 or m_prime % 2 == 0:
        raise ValueError(f"projective model needs odd complex dimension, got {m_prime}")
    k = (m_prime + 1) // 2
    return math.comb(2 * k, k)


def wbf_coefficient(m: int, r: int) -> Fraction:
    """Obstruction coefficient r(m-2r)/(2(m+1)(2r+1)) to non-constant S.

    Nonzero away from the middle type, so a weakly-Bochner-flat metric
    carrying a one-sided kernel field must have constant scalar curvature.
    """
    _check_r(m, r, strict=True)
    return Fraction(r * (m - 2 * r), 2 * (m + 1) * (2 * r + 1))


def normalized_ricci_coefficient(m: int) -> Fraction:
    """Weight of the scalar part subtracted from the Ricci form."""
    return Fraction(1, 2 * (m + 1))


def hamiltonian_form_coefficient(m: int) -> Fraction:
    """Weight in the closed-form derivative of the normalized Ricci form."""
    return Fraction(1, 4 * (m + 1))


def classification_report(m: int, r: int, kind: str) -> dict:
    """Structural conclusion for a compact simply connected carrier manifold.

    The manifold splits as (Ricci-flat) x (Kaehler-Einstein); the solution
    field is a parallel spinor on the first factor tensored with a one-sided
    kernel field on the second, and the Einstein factor is a projective space
    or a twistor space depending on its dimension mod 4.
    """
    _check_r(m, r, strict=True)
    _check_kind(kind)
    if kind == "anti-holomorphic":
        if 2 * r >= m:
            raise ValueError(
                f"anti-holomorphic classification needs r < m/2, got r={r}, m={m}")
        ke_dim = 2 * r + 1
        parallel_grade = 0
        twistor_grade = r
    else:
        if 2 * r <= m:
            raise ValueError(
                f"holomorphic classification needs r > m/2, got r={r}, m={m}")
        ke_dim = 2 * (m - r) + 1
        parallel_grade = 2 * r - m - 1
        twistor_grade = m - r + 1
    flat_dim = m - ke_dim
    if ke_dim % 4 == 1:
        model = "complex projective space"
    else:
        model = "twistor space over a positive quaternionic Kaehler manifold"
    return {
        "eq_tag": "5.18",
        "m": m, "r": r, "kind": kind,
        "kaehler_einstein_complex_dim": ke_dim,
        "ricci_flat_complex_dim": flat_dim,
        "spinor_shape": {
            "parallel_factor": "ricci_flat",
            "parallel_grade": parallel_grade,
            "twistor_factor": "kaehler_einstein",
            "twistor_grade": twistor_grade,
        },
        "einstein_factor_model": model,
        "killing_dim_projective": killing_dim(ke_dim),
        "killing_dim_otherwise_total": 2,
    }
