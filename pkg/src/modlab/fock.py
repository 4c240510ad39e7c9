"""Truncated symmetric Fock space over C^d.

States are stored in the occupation-number basis: a level-n block is
indexed by multi-indices (n_1 .. n_d) with sum n, so its dimension is
C(n + d - 1, d - 1) instead of d^n.  The basis state |alpha> is the
normalized symmetrization of e_1^(x a_1) x ... x e_d^(x a_d); a tensor
power h^(x n) then has coefficients sqrt(n!/alpha!) prod_i h_i^alpha_i.

Operators that would populate level N + 1 drop the overflow; the
overflow mass is available as a diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .hilbert import ComplexVector, RealLinearMap, RealSubspace
from .standard import modular_data, modular_flow, tomita_operator

__all__ = [
    "FockSpace", "FockVector", "FockOperator", "TruncationError",
    "vacuum", "coherent", "coherent_inner", "tensor_power_level",
    "sym_project", "sym_power_expand", "creation", "annihilation",
    "creation_overflow_mass", "field_operator", "gamma",
    "weyl_matrix", "weyl_on_coherent", "weyl_displacement_columns",
    "weyl_unitarity_defect", "coherent_tail_mass",
    "second_quantized_modular_check",
]


class TruncationError(ValueError):
    """Requested tensor degree exceeds the Fock cutoff."""


def _multi_indices(d, n):
    """All (a_1..a_d) with sum n, lexicographically."""
    if d == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _multi_indices(d - 1, n - first):
            yield (first,) + rest


class FockSpace:
    """Symmetric Fock space over C^d truncated at total particle number N."""

    def __init__(self, one_particle_dim: int, cutoff: int):
        if one_particle_dim < 1 or cutoff < 0:
            raise ValueError("need dim >= 1 and cutoff >= 0")
        self.d = int(one_particle_dim)
        self.cutoff = int(cutoff)
        self.occupations = []
        self.level_slices = []
        start = 0
        for n in range(self.cutoff + 1):
            level = list(_multi_indices(self.d, n))
            self.occupations.extend(level)
            self.level_slices.append(slice(start, start + len(level)))
            start += len(level)
        self.dim = start
        self.index = {a: i for i, a in enumerate(self.occupations)}
        # sqrt(alpha!) per basis state, used all over
        self._sqrt_fact = np.array(
            [math.sqrt(math.prod(math.factorial(k) for k in a))
             for a in self.occupations])

    def level_dim(self, n: int) -> int:
        s = self.level_slices[n]
        return s.stop - s.start

    def __eq__(self, other):
        return (isinstance(other, FockSpace) and other.d == self.d
                and other.cutoff == self.cutoff)

    def __hash__(self):
        return hash(("FockSpace", self.d, self.cutoff))

    def __repr__(self):
        return f"FockSpace(d={self.d}, N={self.cutoff}, dim={self.dim})"


class FockVector:
    def __init__(self, space: FockSpace, coeffs):
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.shape != (space.dim,):
            raise ValueError(f"coeffs shape {coeffs.shape} != ({space.dim},)")
        self.space = space
        self.coeffs = coeffs

    def level(self, n: int) -> np.ndarray:
        return self.coeffs[self.space.level_slices[n]]

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def inner(self, other: "FockVector") -> complex:
        return complex(np.vdot(self.coeffs, other.coeffs))

    def __add__(self, other):
        return FockVector(self.space, self.coeffs + other.coeffs)

    def __sub__(self, other):
        return FockVector(self.space, self.coeffs - other.coeffs)

    def __rmul__(self, scalar):
        return FockVector(self.space, complex(scalar) * self.coeffs)


class FockOperator:
    """Matrix operator in the occupation basis, linear or antilinear.

    An antilinear operator with matrix M acts as x -> M conj(x); its
    adjoint (in the sense <F x, y> = <F* y, x>) has matrix M^T.
    """

    def __init__(self, space: FockSpace, matrix, antilinear: bool = False,
                 level_structure: str = "mixed"):
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (space.dim, space.dim):
            raise ValueError("matrix shape mismatch")
        self.space = space
        self.matrix = matrix
        self.antilinear = bool(antilinear)
        self.level_structure = level_structure

    def apply(self, v: FockVector) -> FockVector:
        x = np.conj(v.coeffs) if self.antilinear else v.coeffs
        return FockVector(self.space, self.matrix @ x)

    def __call__(self, v: FockVector) -> FockVector:
        return self.apply(v)

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        if self.antilinear:
            M = self.matrix @ np.conj(other.matrix)
        else:
            M = self.matrix @ other.matrix
        return FockOperator(self.space, M,
                            antilinear=self.antilinear != other.antilinear)

    def adjoint(self) -> "FockOperator":
        M = self.matrix.T if self.antilinear else self.matrix.conj().T
        return FockOperator(self.space, M, antilinear=self.antilinear,
                            level_structure=self.level_structure)

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2))

    @classmethod
    def identity(cls, space: FockSpace) -> "FockOperator":
        return cls(space, np.eye(space.dim), level_structure="preserving")


# -- vectors ------------------------------------------------------------

def vacuum(space: FockSpace) -> FockVector:
    c = np.zeros(space.dim, dtype=complex)
    c[0] = 1.0
    return FockVector(space, c)


def tensor_power_level(space: FockSpace, h, n: int) -> np.ndarray:
    """Level-n block of h^(x n): coefficients sqrt(n!/alpha!) prod h^alpha."""
    if n > space.cutoff:
        raise TruncationError(f"degree {n} exceeds cutoff {space.cutoff}")
    h = np.asarray(h, dtype=complex)
    sl = space.level_slices[n]
    out = np.empty(sl.stop - sl.start, dtype=complex)
    sqrt_n_fact = math.sqrt(math.factorial(n))
    for i, alpha in enumerate(space.occupations[sl.start:sl.stop]):
        prod = 1.0 + 0.0j
        for hi, ai in zip(h, alpha):
            if ai:
                prod *= hi ** ai
        out[i] = sqrt_n_fact / space._sqrt_fact[sl.start + i] * prod
    return out


def coherent(space: FockSpace, h) -> FockVector:
    """e^h = sum_n h^(x n)/sqrt(n!), truncated at the cutoff."""
    h = np.asarray(h, dtype=complex)
    c = np.zeros(space.dim, dtype=complex)
    for n in range(space.cutoff + 1):
        sl = space.level_slices[n]
        c[sl] = tensor_power_level(space, h, n) / math.sqrt(math.factorial(n))
    return FockVector(space, c)


def coherent_inner(h, k, cutoff: int) -> complex:
    """<e^h, e^k> on the truncation: the degree-N partial sum of exp<h, k>."""
    z = complex(np.vdot(np.asarray(h, complex), np.asarray(k, complex)))
    total, term = 0.0 + 0.0j, 1.0 + 0.0j
    for n in range(cutoff + 1):
        if n > 0:
            term *= z / n
        total += term
    return total


def coherent_tail_mass(norm_h: float, cutoff: int) -> float:
    """sum_{n > N} r^(2n)/n!  with r = norm_h; bounds the truncation loss
    of a coherent vector."""
    r2 = norm_h ** 2
    term = r2 ** (cutoff + 1) / math.factorial(cutoff + 1)
    total = 0.0
    n = cutoff + 1
    while term > total * 1e-18 + 1e-300 and n < cutoff + 400:
        total += term
        n += 1
        term *= r2 / n
    return total


# -- symmetrization ------------------------------------------------------

def sym_project(space: FockSpace, vectors) -> FockVector:
    """Symmetrization of x_1 x ... x x_n by the literal permutation average.

    Builds the dense degree-n tensor, so intended for small n and d (the
    guard refuses more than ~2e6 entries).  Result is the level-n block
    embedded in a FockVector.
    """
    xs = [np.asarray(x.coords if isinstance(x, ComplexVector) else x, complex)
          for x in vectors]
    n = len(xs)
    if n > space.cutoff:
        raise TruncationError(f"degree {n} exceeds cutoff {space.cutoff}")
    d = space.d
    if d ** max(n, 1) > 2_000_000:
        raise ValueError("dense symmetrization too large; lower n or d")
    out = np.zeros(space.dim, dtype=complex)
    if n == 0:
        out[0] = 1.0
        return FockVector(space, out)
    import itertools
    T = np.zeros((d,) * n, dtype=complex)
    for sigma in itertools.permutations(range(n)):
        term = xs[sigma[0]]
        for j in sigma[1:]:
            term = np.multiply.outer(term, xs[j])
        T += term
    T /= math.factorial(n)
    sl = space.level_slices[n]
    sqrt_n_fact = math.sqrt(math.factorial(n))
    for i, alpha in enumerate(space.occupations[sl.start:sl.stop]):
        word = tuple(j for j, a in enumerate(alpha) for _ in range(a))
        out[sl.start + i] = sqrt_n_fact / space._sqrt_fact[sl.start + i] * T[word]
    return FockVector(space, out)


def sym_power_expand(space: FockSpace, vectors) -> FockVector:
    """Symmetrization via the tensor-power expansion
    (1/n!) sum_{F subset {1..n}} (-1)^(|F|+n) (sum_{j in F} x_j)^(x n).
    Agrees with sym_project to rounding."""
    import itertools
    xs = [np.asarray(x.coords if isinstance(x, ComplexVector) else x, complex)
          for x in vectors]
    n = len(xs)
    if n > space.cutoff:
        raise TruncationError(f"degree {n} exceeds cutoff {space.cutoff}")
    out = np.zeros(space.dim, dtype=complex)
    if n == 0:
        out[0] = 1.0
        return FockVector(space, out)
    sl = space.level_slices[n]
    block = np.zeros(sl.stop - sl.start, dtype=complex)
    for size in range(1, n + 1):
        sign = (-1) ** (size + n)
        for F in itertools.combinations(range(n), size):
            v = np.sum([xs[j] for j in F], axis=0)
            block += sign * tensor_power_level(space, v, n)
    out[sl] = block / math.factorial(n)
    return FockVector(space, out)


# -- creation / annihilation / second quantization -----------------------

def creation(space: FockSpace, g) -> FockOperator:
    """a*(g) = sum_i g_i a*_i, linear in g; overflow at the top level is
    dropped (see creation_overflow_mass)."""
    g = np.asarray(g, dtype=complex)
    M = np.zeros((space.dim, space.dim), dtype=complex)
    for col, alpha in enumerate(space.occupations):
        if sum(alpha) >= space.cutoff:
            continue
        for i in range(space.d):
            if g[i] == 0:
                continue
            beta = list(alpha)
            beta[i] += 1
            row = space.index[tuple(beta)]
            M[row, col] += g[i] * math.sqrt(alpha[i] + 1)
    return FockOperator(space, M, level_structure="raising")


def annihilation(space: FockSpace, g) -> FockOperator:
    """a(g) = sum_i conj(g_i) a_i; the adjoint of creation(g)."""
    g = np.asarray(g, dtype=complex)
    M = np.zeros((space.dim, space.dim), dtype=complex)
    for col, alpha in enumerate(space.occupations):
        for i in range(space.d):
            if g[i] == 0 or alpha[i] == 0:
                continue
            beta = list(alpha)
            beta[i] -= 1
            row = space.index[tuple(beta)]
            M[row, col] += np.conj(g[i]) * math.sqrt(alpha[i])
    return FockOperator(space, M, level_structure="lowering")


def creation_overflow_mass(space: FockSpace, g, v: FockVector) -> float:
    """Norm of the level-(N+1) part of a*(g) v that truncation drops."""
    g = np.asarray(g, dtype=complex)
    top = space.level_slices[space.cutoff]
    over = {}
    for col in range(top.start, top.stop):
        c = v.coeffs[col]
        if c == 0:
            continue
        alpha = space.occupations[col]
        for i in range(space.d):
            if g[i] == 0:
                continue
            beta = list(alpha)
            beta[i] += 1
            key = tuple(beta)
            over[key] = over.get(key, 0.0) + c * g[i] * math.sqrt(alpha[i] + 1)
    return math.sqrt(sum(abs(x) ** 2 for x in over.values()))


def field_operator(space: FockSpace, h) -> FockOperator:
    """phi(h) = (a(h) + a*(h)) / sqrt(2); selfadjoint on the truncation."""
    A = annihilation(space, h).matrix
    C = creation(space, h).matrix
    return FockOperator(space, (A + C) / math.sqrt(2.0))


def gamma(space: FockSpace, a) -> FockOperator:
    """Second quantization: level-n block acts as a^(x n).

    a may be a complex d x d matrix (complex-linear) or a RealLinearMap;
    an antilinear argument yields an antilinear Fock operator.  Built
    column-by-column through creation operators, so it is exact on the
    truncation and multiplicative: gamma(a) gamma(b) = gamma(ab).
    """
    antilinear = False
    if isinstance(a, RealLinearMap):
        antilinear = a.kind == "antilinear"
        A = a.to_complex()
    else:
        A = np.asarray(a, dtype=complex)
    if A.shape != (space.d, space.d):
        raise ValueError("one-particle matrix has wrong shape")
    cols = [creation(space, A[:, i]).matrix for i in range(space.d)]
    M = np.zeros((space.dim, space.dim), dtype=complex)
    omega = np.zeros(space.dim, dtype=complex)
    omega[0] = 1.0
    for colidx, alpha in enumerate(space.occupations):
        v = omega.copy()
        for i, ai in enumerate(alpha):
            for _ in range(ai):
                v = cols[i] @ v
        M[:, colidx] = v / space._sqrt_fact[colidx]
    return FockOperator(space, M, antilinear=antilinear,
                        level_structure="preserving")


# -- Weyl operators -------------------------------------------------------

def weyl_matrix(space: FockSpace, h) -> FockOperator:
    """W(h) = exp(i phi(h)) by matrix exponential of the truncated field.

    Exactly unitary on the truncation; agrees with the closed-form action
    on coherent vectors up to a truncation defect that shrinks with the
    cutoff (roughly like sqrt(coherent_tail_mass))."""
    phi = field_operator(space, h)
    return FockOperator(space, scipy.linalg.expm(1j * phi.matrix))


def weyl_on_coherent(space: FockSpace, h, k):
    """Closed form of W(h) applied to e^((i/sqrt2) k).

    W(h) e^((i/sqrt2)k) = exp(|k|^2/4 - |h+k|^2/4 - (i/2) Im<h,k>)
                          * e^((i/sqrt2)(h+k));
    follows from the vacuum action and the composition law of the Weyl
    unitaries.  Exact up to losing the coherent tail beyond the cutoff.
    """
    h = np.asarray(h, dtype=complex)
    k = np.asarray(k, dtype=complex)
    phase = (np.vdot(k, k).real / 4.0
             - np.vdot(h + k, h + k).real / 4.0
             - 0.5j * np.vdot(h, k).imag)
    coeff = np.exp(phase)
    return coeff * coherent(space, 1j / math.sqrt(2.0) * (h + k))


def weyl_displacement_columns(h: complex, rows: int, cols: int) -> np.ndarray:
    """Occupation-basis matrix elements <m| W(h) |n> for d = 1, exact.

    W(h) is the displacement by alpha = i h / sqrt(2); the element is the
    finite sum e^(-|a|^2/2) sum_j (-conj(a))^j a^(m-n+j)
    sqrt(m! n!) / (j! (m-n+j)! (n-j)!).  Used as the truncation-free
    reference for unitarity-defect studies."""
    alpha = 1j * complex(h) / math.sqrt(2.0)
    pref = math.exp(-abs(alpha) ** 2 / 2.0)
    lg = [math.lgamma(x + 1) for x in range(max(rows, cols) + 1)]
    V = np.zeros((rows, cols), dtype=complex)
    for mi in range(rows):
        for ni in range(cols):
            total = 0.0 + 0.0j
            for j in range(max(0, ni - mi), ni + 1):
                p = mi - ni + j
                amp = math.exp(0.5 * (lg[mi] + lg[ni]) - lg[j] - lg[p] - lg[ni - j])
                total += (-np.conj(alpha)) ** j * alpha ** p * amp
            V[mi, ni] = pref * total
    return V


def weyl_unitarity_defect(h: complex, cutoff: int, probe_cutoff: int) -> float:
    """Unitarity defect of the cutoff-truncated Weyl operator, measured on
    levels <= probe_cutoff.

    The truncation chops the exact displacement matrix to columns
    n <= cutoff; on the probe block the defect
    || P - V V^dagger ||  with  V = P W P_N  is the mass the unitary
    sends above the cutoff, a positive semidefinite quantity that can
    only decrease as the cutoff grows."""
    V = weyl_displacement_columns(h, probe_cutoff + 1, cutoff + 1)
    D = np.eye(probe_cutoff + 1) - V @ V.conj().T
    return float(np.linalg.norm(D, 2))


# -- second-quantized modular objects -------------------------------------

def second_quantized_modular_check(K: RealSubspace, cutoff: int,
                                   rng: np.random.Generator,
                                   n_samples: int = 6,
                                   flow_times=(0.3, 0.7)) -> dict:
    """Verify the second-quantized modular identities on the truncation.

    For the Tomita data (s, j, delta) of a standard K:
      (1) gamma(s) e^(ik) = e^(-ik) for k in K,
      (2) gamma(j) W(k) gamma(j) = W(jk)*,
      (3) gamma(delta^it) W(k) gamma(delta^-it) = W(delta^it k),
      (4) the Weyl phase exp(-i Im<h, k'>) is 1 across K and K'.
    Returns the four residuals in a dict.
    """
    from .hilbert import symplectic_complement
    space1 = K.space
    fs = FockSpace(space1.dim, cutoff)
    s = tomita_operator(K)
    md = modular_data(s)
    Kp = symplectic_complement(K)

    def sample(space_sub):
        c = rng.standard_normal(space_sub.dim)
        v = space_sub.basis @ c
        z = space1.unrealify(v)
        return z / max(np.linalg.norm(z), 1e-12)

    gs = gamma(fs, s)
    res1 = 0.0
    for _ in range(n_samples):
        k = sample(K)
        lhs = gs.apply(coherent(fs, 1j * k))
        rhs = coherent(fs, -1j * k)
        res1 = max(res1, (lhs - rhs).norm())

    gj = gamma(fs, md.j)
    res2 = 0.0
    res3 = 0.0
    for _ in range(3):
        k = sample(K)
        W = weyl_matrix(fs, k)
        lhs = (gj @ W) @ gj
        jk = md.j.apply(ComplexVector(space1, k)).coords
        rhs = weyl_matrix(fs, jk).adjoint()
        res2 = max(res2, np.linalg.norm(lhs.matrix - rhs.matrix, 2))
        for t in flow_times:
            flow = modular_flow(md, t)
            gflow = gamma(fs, flow)
            gflow_inv = gamma(fs, modular_flow(md, -t))
            lhs3 = (gflow @ W) @ gflow_inv
            kt = flow.apply(ComplexVector(space1, k)).coords
            rhs3 = weyl_matrix(fs, kt)
            res3 = max(res3, np.linalg.norm(lhs3.matrix - rhs3.matrix, 2))

    res4 = 0.0
    for _ in range(max(n_samples, 50)):
        h = sample(K)
        kp = sample(Kp)
        phase = np.exp(-1j * np.vdot(h, kp).imag)
        res4 = max(res4, abs(phase - 1.0))

    return {
        "conjugation_on_coherent": res1,
        "weyl_conjugation": res2,
        "weyl_flow_covariance": res3,
        "ccr_phase_across_complement": res4,
    }
