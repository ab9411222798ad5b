"""Matrix families whose linear combinations are n-th roots of sums of n-th powers.

A set of d x d matrices ``M_1, ..., M_r`` factorizes the n-th root when

    (c_1 M_1 + ... + c_r M_r)**n == (c_1**n + ... + c_r**n) * I

for all commuting coefficients ``c``. Expanding the power, this holds iff
every member satisfies ``M**n == I`` and every mixed word sum (the sum over
all distinct orderings of a multiset of members with at least two distinct
members) vanishes. Members are indexed from 0 in code; reports use 1-based
labels such as ``lambda1``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from sympy.utilities.iterables import multiset_permutations

from diracfrac.algebra import (
    anticommutator,
    as_matrix,
    commutator,
    eye,
    frobenius_norm,
    mat_pow,
    residual,
    unity_roots,
)
from diracfrac.errors import InvalidOrderError, ShapeError

FAMILY_NAMES = ("sigma", "quaternion", "lambda", "phi", "chi", "tau")

CONSTRUCTION_TOL = 1e-12
TRIPLE_TOL = 1e-10
MAX_WORD_LENGTH = 8

_W = unity_roots(3)
EPS0, EPS1, EPS2 = _W[0], _W[1], _W[2]


# --- matrix families --------------------------------------------------------

def pauli() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    s1 = np.array([[0, 1], [1, 0]], dtype=complex)
    s2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
    s3 = np.array([[1, 0], [0, -1]], dtype=complex)
    return s1, s2, s3


def sigma_plus() -> np.ndarray:
    return np.array([[0, 1], [0, 0]], dtype=complex)


def sigma_minus() -> np.ndarray:
    return np.array([[0, 0], [1, 0]], dtype=complex)


def s_matrix() -> np.ndarray:
    return np.array([[-1j, 0], [0, 1]], dtype=complex)


def quaternion_units(literal: bool = False) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Quaternion units ``i = i*sigma1``, ``j = i*sigma2``, ``k = i*j``.

    With ``k = +i*sigma3`` (``literal=True``) the product ``i*j*k`` is ``+I``
    rather than ``-I``, so the default takes ``k = -i*sigma3``.
    """
    s1, s2, s3 = pauli()
    qk = 1j * s3 if literal else -1j * s3
    return 1j * s1, 1j * s2, qk


def lambda_matrices() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    l1 = np.zeros((3, 3), dtype=complex)
    l1[0, 1] = l1[1, 2] = l1[2, 0] = EPS0
    l2 = np.zeros((3, 3), dtype=complex)
    l2[0, 1], l2[1, 2], l2[2, 0] = EPS1, EPS2, EPS0
    l3 = np.diag([EPS1, EPS2, 1]).astype(complex)
    return l1, l2, l3


def phi_matrices() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    p1 = np.array([[0, 0, EPS1], [EPS2, 0, 0], [0, 1, 0]], dtype=complex)
    p2 = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=complex)
    p3 = np.diag([EPS2, EPS1, 1]).astype(complex)
    return p1, p2, p3


def phi_commutator_table() -> dict[tuple[int, int], np.ndarray]:
    """Closed-form commutators ``[phi_a, phi_b]`` keyed by 0-based ``(a, b)``."""
    scale = EPS1 - 1
    c12 = np.array([[0, 1, 0], [0, 0, EPS1], [EPS2, 0, 0]], dtype=complex)
    c13 = phi_matrices()[1]
    c23 = np.array([[0, 0, EPS2], [EPS1, 0, 0], [0, 1, 0]], dtype=complex)
    return {(0, 1): scale * c12, (0, 2): scale * c13, (1, 2): scale * c23}


def chi_matrices() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    sp, sm, s = sigma_plus(), sigma_minus(), s_matrix()
    z = np.zeros((2, 2), dtype=complex)
    c1 = np.block([[sp, sm], [sm, sp]])
    c2 = np.exp(1j * np.pi / 4) * np.block([[1j * sp, -sm], [sm, -1j * sp]])
    c3 = np.block([[z, s], [-s, z]])
    return c1, c2, c3


def even_tau_phase(n: int, literal: bool = False) -> complex:
    """Phase applied to the second tau matrix; 1 for odd ``n``.

    For even ``n`` the second matrix satisfies ``tau2**n == -I``, so it needs a
    phase whose n-th power is -1, i.e. ``exp(i*pi/n)``. ``literal=True``
    returns ``exp(2*pi*i/n)``, whose n-th power is +1 and does not repair the
    factorization; it is kept for reporting.
    """
    if n % 2:
        return 1.0 + 0j
    return complex(np.exp(2j * np.pi / n)) if literal else complex(np.exp(1j * np.pi / n))


def tau_matrices(n: int, literal_phase: bool = False) -> tuple[np.ndarray, np.ndarray]:
    if n < 2:
        raise InvalidOrderError(f"tau family needs n >= 2, got {n}")
    eps = unity_roots(n)
    t1 = np.zeros((n, n), dtype=complex)
    t2 = np.zeros((n, n), dtype=complex)
    for r in range(n - 1):
        t1[r, r + 1] = eps[0]
        t2[r, r + 1] = eps[r + 1]
    t1[n - 1, 0] = eps[0]
    t2[n - 1, 0] = eps[0]
    return t1, even_tau_phase(n, literal_phase) * t2


# --- families ---------------------------------------------------------------

@dataclass(frozen=True)
class FactorFamily:
    name: str
    order: int
    members: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return self.members[0].shape[0]

    def label(self, idx: int) -> str:
        return f"{self.name}{idx + 1}"

    def power_residuals(self) -> list[float]:
        """Residual of ``M**order == I`` (``M**2 == -I`` for quaternions) per member."""
        target = -eye(self.dim) if self.name == "quaternion" else eye(self.dim)
        return [residual(mat_pow(m, self.order), target) for m in self.members]


def build_family(name: str, n: int | None = None) -> FactorFamily:
    if name == "sigma":
        return FactorFamily(name, 2, pauli())
    if name == "quaternion":
        return FactorFamily(name, 2, quaternion_units())
    if name == "lambda":
        return FactorFamily(name, 3, lambda_matrices())
    if name == "phi":
        return FactorFamily(name, 3, phi_matrices())
    if name == "chi":
        return FactorFamily(name, 4, chi_matrices())
    if name == "tau":
        if n is None:
            raise InvalidOrderError("tau family needs an order n")
        return FactorFamily(name, int(n), tau_matrices(int(n)))
    raise ValueError(f"unknown family {name!r}; expected one of {', '.join(FAMILY_NAMES)}")


def _members(family) -> list[np.ndarray]:
    members = family.members if isinstance(family, FactorFamily) else family
    members = [as_matrix(m) for m in members]
    shape = members[0].shape
    if shape[0] != shape[1] or any(m.shape != shape for m in members):
        raise ShapeError("members must be square matrices of equal dimension")
    return members


# --- word sums and factorization checks -------------------------------------

def word_count(multiset: Mapping[int, int]) -> int:
    total = sum(multiset.values())
    count = math.factorial(total)
    for mult in multiset.values():
        count //= math.factorial(mult)
    return count


def word_sum(family, multiset: Mapping[int, int]) -> np.ndarray:
    """Sum of the products over all distinct orderings of ``multiset``.

    ``multiset`` maps 0-based member indices to multiplicities.
    """
    members = _members(family)
    if not multiset:
        raise ValueError("empty multiset")
    for idx, mult in multiset.items():
        if not 0 <= idx < len(members):
            raise IndexError(f"member index {idx} out of range")
        if mult < 1:
            raise ValueError(f"multiplicity of {idx} must be >= 1, got {mult}")
    length = sum(multiset.values())
    if length > MAX_WORD_LENGTH:
        raise ValueError(f"word length {length} exceeds the guard {MAX_WORD_LENGTH}")

    letters = [idx for idx, mult in sorted(multiset.items()) for _ in range(mult)]
    d = members[0].shape[0]
    total = np.zeros((d, d), dtype=complex)
    for word in multiset_permutations(letters):
        prod = members[word[0]]
        for idx in word[1:]:
            prod = prod @ members[idx]
        total += prod
    return total


def linear_combination(members: Sequence[np.ndarray], coefficients: Sequence[complex]) -> np.ndarray:
    members = _members(members)
    if len(coefficients) != len(members):
        raise ShapeError(f"{len(coefficients)} coefficients for {len(members)} members")
    return sum(complex(c) * m for c, m in zip(coefficients, members))


def check_factorization(members: Sequence[np.ndarray], n: int, coefficients: Sequence[complex]) -> float:
    """Frobenius residual of ``(sum c_m M_m)**n - (sum c_m**n) I``."""
    combo = linear_combination(members, coefficients)
    target = sum(complex(c) ** n for c in coefficients) * eye(combo.shape[0])
    return residual(mat_pow(combo, n), target)


def factorization_tolerance(n: int, coefficients: Sequence[complex], d: int, tol: float = 1e-10) -> float:
    cmax = max(abs(complex(c)) for c in coefficients)
    return tol * (1 + cmax**n) * d


def disk_samples(rng: np.random.Generator, shape, radius: float = 2.0) -> np.ndarray:
    """Complex samples uniform in the disk ``|c| <= radius``."""
    r = radius * np.sqrt(rng.uniform(size=shape))
    theta = rng.uniform(0.0, 2 * np.pi, size=shape)
    return r * np.exp(1j * theta)


def random_factorization_scan(members, n: int, rng: np.random.Generator, trials: int = 100,
                              tol: float = 1e-10) -> tuple[float, bool]:
    """Max residual and pass flag of ``check_factorization`` over random draws."""
    members = _members(members)
    d = members[0].shape[0]
    worst, ok = 0.0, True
    for coeffs in disk_samples(rng, (trials, len(members))):
        res = check_factorization(members, n, coeffs)
        worst = max(worst, res)
        ok &= res <= factorization_tolerance(n, coeffs, d, tol)
    return worst, bool(ok)


def check_word_identities(family, n: int | None = None) -> list[tuple[dict[int, int], float]]:
    """Residuals of ``word_sum({j: n - m, k: m})`` for every pair ``j < k`` and ``m = 1..n-1``."""
    members = _members(family)
    if n is None:
        n = family.order
    if len(members) < 2:
        raise ValueError("need at least two members")
    out = []
    for j, k in itertools.combinations(range(len(members)), 2):
        for m in range(1, n):
            ms = {j: n - m, k: m}
            out.append((ms, frobenius_norm(word_sum(members, ms))))
    return out


def mixed_word_residuals(members, n: int) -> list[tuple[dict[int, int], float]]:
    """Residuals of every mixed word sum of total length ``n`` over all members."""
    members = _members(members)
    r = len(members)
    out = []
    for counts in itertools.product(range(n + 1), repeat=r):
        if sum(counts) != n or sum(1 for c in counts if c) < 2:
            continue
        ms = {i: c for i, c in enumerate(counts) if c}
        out.append((ms, frobenius_norm(word_sum(members, ms))))
    return out


def triple_cross_sum(members) -> np.ndarray:
    """Sum of ``A B C`` over the six orderings of three members."""
    a, b, c = _members(members)
    return sum(x @ y @ z for x, y, z in itertools.permutations((a, b, c)))


def check_triple_permutations(members, n: int, rng: np.random.Generator,
                              trials: int = 100) -> dict[tuple[int, int, int], float]:
    """Max factorization residual for each assignment of three coefficients to three members."""
    members = _members(members)
    if len(members) != 3:
        raise ValueError("expected exactly three members")
    draws = disk_samples(rng, (trials, 3))
    out = {}
    for perm in itertools.permutations(range(3)):
        ordered = [members[i] for i in perm]
        out[perm] = max(check_factorization(ordered, n, c) for c in draws)
    return out


def quaternion_family_check() -> float:
    qi, qj, qk = quaternion_units()
    minus = -eye(2)
    return max(
        residual(qi @ qi, minus),
        residual(qj @ qj, minus),
        residual(qk @ qk, minus),
        residual(qi @ qj @ qk, minus),
    )


def quaternion_norm_residual(a: float, b: float, c: float) -> float:
    """Residual of ``(a i + b j + c k)**2 == -(a**2 + b**2 + c**2) I``."""
    qi, qj, qk = quaternion_units()
    q = a * qi + b * qj + c * qk
    return residual(q @ q, -(a * a + b * b + c * c) * eye(2))


# --- exhaustive cubic search ------------------------------------------------

@dataclass(frozen=True)
class MonomialMatrix:
    """Generalized permutation matrix with root-of-unity entries, kept as exact indices.

    Row ``r`` has its single nonzero entry ``exp(2*pi*i*exps[r]/n)`` in column ``perm[r]``.
    """

    perm: tuple[int, ...]
    exps: tuple[int, ...]
    n: int

    def __matmul__(self, other: "MonomialMatrix") -> "MonomialMatrix":
        perm = tuple(other.perm[c] for c in self.perm)
        exps = tuple((self.exps[r] + other.exps[c]) % self.n for r, c in enumerate(self.perm))
        return MonomialMatrix(perm, exps, self.n)

    def power(self, k: int) -> "MonomialMatrix":
        result = MonomialMatrix(tuple(range(len(self.perm))), (0,) * len(self.perm), self.n)
        for _ in range(k):
            result = result @ self
        return result

    def is_identity(self) -> bool:
        return self.perm == tuple(range(len(self.perm))) and not any(self.exps)

    @property
    def is_diagonal(self) -> bool:
        return self.perm == tuple(range(len(self.perm)))

    @property
    def phase_normalized(self) -> bool:
        # One representative per class {M, w M, w^2 M}: unit entry in the last row.
        return self.exps[-1] == 0

    def to_array(self) -> np.ndarray:
        eps = unity_roots(self.n)
        m = np.zeros((len(self.perm), len(self.perm)), dtype=complex)
        for r, (c, e) in enumerate(zip(self.perm, self.exps)):
            m[r, c] = eps[e]
        return m


@dataclass
class TripleCertificate:
    matrices: tuple[np.ndarray, np.ndarray, np.ndarray]
    order: int
    checks: list[tuple[str, float]]
    codes: tuple[MonomialMatrix, MonomialMatrix, MonomialMatrix] | None = field(default=None, repr=False)

    @property
    def passed(self) -> bool:
        return all(res <= TRIPLE_TOL for _, res in self.checks)


def cubic_candidates(d: int = 3, n: int = 3) -> list[MonomialMatrix]:
    """All d x d generalized permutation matrices over n-th roots with ``M**n == I`` (exact)."""
    out = []
    for perm in itertools.permutations(range(d)):
        for exps in itertools.product(range(n), repeat=d):
            m = MonomialMatrix(perm, exps, n)
            if m.power(n).is_identity():
                out.append(m)
    return out


def _pair_checks(a: np.ndarray, b: np.ndarray) -> list[float]:
    return [frobenius_norm(word_sum([a, b], {0: 2, 1: 1})), frobenius_norm(word_sum([a, b], {0: 1, 1: 2}))]


def enumerate_triples(n: int = 3) -> list[TripleCertificate]:
    """Every unordered triple of distinct cubic candidates whose mixed word sums vanish.

    Search space: the 162 3 x 3 generalized permutation matrices with cube-root
    entries, filtered to ``M**3 == I``. A triple is kept when each of its three
    pairs passes both two-letter word identities and the six-ordering cross sum
    vanishes. Output order follows the candidate enumeration order.
    """
    if n != 3:
        raise InvalidOrderError(f"only the cubic catalog (n=3) is supported, got n={n}")
    codes = cubic_candidates(3, 3)
    arrays = [c.to_array() for c in codes]

    pair_res: dict[tuple[int, int], list[float]] = {}
    for i, j in itertools.combinations(range(len(codes)), 2):
        pair_res[i, j] = _pair_checks(arrays[i], arrays[j])
    pair_ok = {key: max(v) <= TRIPLE_TOL for key, v in pair_res.items()}

    certs = []
    for i, j, k in itertools.combinations(range(len(codes)), 3):
        if not (pair_ok[i, j] and pair_ok[i, k] and pair_ok[j, k]):
            continue
        triple = (arrays[i], arrays[j], arrays[k])
        checks = []
        for (a, b), la in (((i, j), "12"), ((i, k), "13"), ((j, k), "23")):
            r1, r2 = pair_res[a, b]
            checks.append((f"word{la}_2_1", r1))
            checks.append((f"word{la}_1_2", r2))
        checks.append(("cross_sum_123", frobenius_norm(triple_cross_sum(triple))))
        checks.extend(
            (f"cube_{idx + 1}", residual(mat_pow(m, 3), eye(3))) for idx, m in enumerate(triple)
        )
        cert = TripleCertificate(triple, 3, checks, (codes[i], codes[j], codes[k]))
        if cert.passed:
            certs.append(cert)
    return certs


def triple_counts(certs: Sequence[TripleCertificate]) -> dict[str, int]:
    """Catalog size under several counting conventions."""
    unordered = len(certs)
    normalized = [c for c in certs if all(m.phase_normalized for m in c.codes)]
    with_diag = [c for c in certs if any(m.is_diagonal for m in c.codes)]
    return {
        "ordered": 6 * unordered,
        "unordered": unordered,
        "unordered_up_to_member_phase": len(normalized),
        "ordered_up_to_member_phase": 6 * len(normalized),
        "unordered_with_diagonal_member": len(with_diag),
        "unordered_up_to_member_phase_with_diagonal_member": sum(
            1 for c in normalized if any(m.is_diagonal for m in c.codes)
        ),
    }


def contains_triple(certs: Sequence[TripleCertificate], members, tol: float = 1e-12) -> bool:
    """Whether an unordered triple equal to ``members`` appears in ``certs``."""
    members = _members(members)
    for cert in certs:
        for perm in itertools.permutations(cert.matrices):
            if all(residual(a, b) <= tol for a, b in zip(perm, members)):
                return True
    return False


# --- per-family verification report -----------------------------------------

def _entry(name: str, res: float, tol: float, expect_zero: bool = True, required: bool = True) -> dict:
    passed = res <= tol if expect_zero else res > 1e-6
    return {"name": name, "residual": float(res), "passed": bool(passed), "required": required}


def verify_family(name: str, n: int | None = None, trials: int = 100, seed: int = 42,
                  tol: float = 1e-10) -> dict:
    """Run every identity the named family is expected to satisfy.

    Returns a report ``{family, order, identities: [...], passed}``; ``passed``
    covers the identities marked ``required``.
    """
    rng = np.random.default_rng(seed)
    fam = build_family(name, n)
    d, order = fam.dim, fam.order
    ids: list[dict] = []
    construction_tol = min(tol, CONSTRUCTION_TOL)

    for idx, res in enumerate(fam.power_residuals()):
        power = "square_is_minus_identity" if name == "quaternion" else f"power{order}_is_identity"
        ids.append(_entry(f"{fam.label(idx)}_{power}", res, construction_tol))

    if name == "quaternion":
        qi, qj, qk = fam.members
        ids.append(_entry("ijk_is_minus_identity", residual(qi @ qj @ qk, -eye(2)), 1e-14))
        li, lj, lk = quaternion_units(literal=True)
        ids.append(_entry("literal_k_ijk_is_minus_identity", residual(li @ lj @ lk, -eye(2)), 1e-14,
                          required=False))
        worst = max(quaternion_norm_residual(*rng.uniform(-2, 2, size=3)) for _ in range(trials))
        ids.append(_entry("pure_quaternion_square", worst, 1e-12))
    else:
        for ms, res in check_word_identities(fam):
            key = "_".join(f"{fam.label(i)}^{m}" for i, m in ms.items())
            ids.append(_entry(f"word_sum[{key}]", res, tol))

    if name == "sigma":
        for j, k in itertools.combinations(range(3), 2):
            ac = anticommutator(fam.members[j], fam.members[k])
            ids.append(_entry(f"anticommutator_{j + 1}{k + 1}", frobenius_norm(ac), 1e-14))
        for j, k in itertools.permutations(range(3), 2):
            worst, ok = random_factorization_scan([fam.members[j], fam.members[k]], 2, rng, trials, tol)
            ids.append(_entry(f"two_term_{j + 1}{k + 1}", worst, tol) | {"passed": ok})
        worst, ok = random_factorization_scan(list(fam.members), 2, rng, trials, tol)
        ids.append(_entry("three_term_123", worst, tol) | {"passed": ok})

    if name in ("lambda", "phi"):
        worst, ok = random_factorization_scan(list(fam.members[:2]), 3, rng, trials, tol)
        ids.append(_entry("two_term_12", worst, tol) | {"passed": ok})
        ids.append(_entry("cross_sum_123", frobenius_norm(triple_cross_sum(fam.members)), tol))
        for perm, worst in check_triple_permutations(fam.members, 3, rng, trials).items():
            label = "".join(str(i + 1) for i in perm)
            ids.append(_entry(f"three_term_{label}", worst, tol * (1 + 2**3) * 3))

    if name == "phi":
        for (a, b), expected in phi_commutator_table().items():
            res = residual(commutator(fam.members[a], fam.members[b]), expected)
            ids.append(_entry(f"commutator_{a + 1}{b + 1}_closed_form", res, 1e-14))
        rhs = [m / (EPS1 - 1) for m in phi_commutator_table().values()]
        worst_rhs = max(r for _, r in mixed_word_residuals(rhs, 3))
        ids.append(_entry("commutator_rhs_not_a_triple", worst_rhs, tol, expect_zero=False))

    if name == "chi":
        c1, c2, c3 = fam.members
        ids.append(_entry("commutator_12_is_sqrt2_chi3", residual(commutator(c1, c2), np.sqrt(2) * c3), 1e-14))
        worst, ok = random_factorization_scan([c1, c2], 4, rng, trials, tol)
        ids.append(_entry("two_term_12", worst, tol) | {"passed": ok})
        worst, ok = random_factorization_scan([c1, c2, c3], 4, rng, trials, tol)
        ids.append(_entry("three_term_123", worst, tol, required=False) | {"passed": ok})
        sp, sm, s = sigma_plus(), sigma_minus(), s_matrix()
        blocks = residual(c1[:2, :2], sp) + residual(c1[:2, 2:], sm) + residual(c3[:2, 2:], s)
        ids.append(_entry("block_entries", blocks, 0.0))

    if name == "tau":
        worst, ok = random_factorization_scan(list(fam.members), order, rng, trials, tol)
        ids.append(_entry("two_term_12", worst, tol) | {"passed": ok})
        if order % 2 == 0:
            literal = tau_matrices(order, literal_phase=True)
            worst = max(check_factorization(literal, order, c) for c in disk_samples(rng, (trials, 2)))
            ids.append(_entry("two_term_12_literal_phase", worst, tol, required=False))

    passed = all(e["passed"] for e in ids if e["required"])
    return {"family": name, "order": order, "dim": d, "identities": ids, "passed": passed}
