"""Exact arithmetic in Z[xi_l] and verification of the unitary generator identities.

For an odd prime ``l`` the ring is Z[t]/(1 + t + ... + t^(l-1)) with the
primitive root ``xi = t``; for ``l = 2`` the relevant matrices contain the
imaginary unit, so the ring is the Gaussian integers Z[t]/(t^2 + 1) with
``xi = -1``.  Coefficients are Python ints, so overflow cannot occur.

All conjugation identities are checked with denominators cleared: the
analytic normalizers of the Weyl representatives are unit scalars that cancel
under conjugation, so e.g. ``tau^-1 alpha tau`` is verified in the form
``conj_transpose(T) alpha T = l * (result)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from .ffla import check_prime
from .report import NOTE, PASS, FAIL, CheckReport, run_check


class CycInt:
    """An element of Z[xi_l] in canonical basis form.

    Odd ``l``: coefficients of ``1, t, ..., t^(l-2)`` (``t^(l-1)`` is rewritten
    as ``-(1 + t + ... + t^(l-2))``).  ``l = 2``: coefficients of ``1, t`` with
    ``t^2 = -1``.
    """

    __slots__ = ("prime", "coeffs", "_zero")

    def __init__(self, prime: int, coeffs: Sequence[int]):
        check_prime(prime)
        rank = 2 if prime == 2 else prime - 1
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != rank:
            raise ValueError(f"expected {rank} coefficients, got {len(coeffs)}")
        self.prime = prime
        self.coeffs = coeffs
        self._zero = not any(coeffs)

    # -- constructors ------------------------------------------------------

    @classmethod
    def _rank(cls, prime: int) -> int:
        return 2 if prime == 2 else prime - 1

    @classmethod
    def zero(cls, prime: int) -> "CycInt":
        return cls(prime, (0,) * cls._rank(prime))

    @classmethod
    def from_int(cls, prime: int, n: int) -> "CycInt":
        c = [0] * cls._rank(prime)
        c[0] = n
        return cls(prime, c)

    @classmethod
    def one(cls, prime: int) -> "CycInt":
        return cls.from_int(prime, 1)

    @classmethod
    def imaginary_unit(cls) -> "CycInt":
        return cls(2, (0, 1))

    @classmethod
    def root_power(cls, prime: int, k: int) -> "CycInt":
        """xi^k, where xi = exp(2 pi i / l) abstractly (xi = -1 for l = 2)."""
        if prime == 2:
            return cls.from_int(2, 1 if k % 2 == 0 else -1)
        return cls._from_exponent_vector(prime, {k % prime: 1})

    @classmethod
    def _from_exponent_vector(cls, prime: int, powers: dict[int, int]) -> "CycInt":
        # powers: exponent (0..prime-1) -> integer coefficient
        dense = [0] * prime
        for e, c in powers.items():
            dense[e % prime] += c
        top = dense[prime - 1]
        return cls(prime, [dense[k] - top for k in range(prime - 1)])

    # -- ring operations ---------------------------------------------------

    def _check(self, other: "CycInt") -> None:
        if self.prime != other.prime:
            raise ValueError("prime mismatch")

    def __add__(self, other):
        if isinstance(other, int):
            other = CycInt.from_int(self.prime, other)
        if not isinstance(other, CycInt):
            return NotImplemented
        self._check(other)
        return CycInt(self.prime, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = CycInt.from_int(self.prime, other)
        if not isinstance(other, CycInt):
            return NotImplemented
        self._check(other)
        return CycInt(self.prime, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return CycInt(self.prime, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt(self.prime, [a * other for a in self.coeffs])
        if not isinstance(other, CycInt):
            return NotImplemented
        self._check(other)
        p = self.prime
        if self._zero or other._zero:
            return CycInt.zero(p)
        if p == 2:
            a, b = self.coeffs
            c, d = other.coeffs
            return CycInt(2, (a * c - b * d, a * d + b * c))
        # convolution with t^p = 1, then canonicalize t^(p-1)
        dense = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        dense[(i + j) % p] += a * b
        top = dense[p - 1]
        return CycInt(p, [dense[k] - top for k in range(p - 1)])

    __rmul__ = __mul__

    def conj(self) -> "CycInt":
        """Complex conjugation: t^k -> t^(-k mod l), re-canonicalized."""
        if self.prime == 2:
            return CycInt(2, (self.coeffs[0], -self.coeffs[1]))
        return CycInt._from_exponent_vector(
            self.prime, {(-k) % self.prime: c for k, c in enumerate(self.coeffs)}
        )

    # -- queries -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self._zero

    def is_integer(self) -> bool:
        return not any(self.coeffs[1:])

    def as_int(self) -> int:
        if not self.is_integer():
            raise ValueError(f"{self} is not a rational integer")
        return self.coeffs[0]

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.is_integer() and self.coeffs[0] == other
        return (
            isinstance(other, CycInt)
            and self.prime == other.prime
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.prime, self.coeffs))

    def __repr__(self) -> str:
        sym = "i" if self.prime == 2 else "t"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                mono = sym if k == 1 else f"{sym}^{k}"
                parts.append(f"{c}*{mono}")
        return " + ".join(parts) if parts else "0"


class CycMatrix:
    """Square matrix over Z[xi_l]; multiplication skips zero entries."""

    __slots__ = ("prime", "size", "rows")

    def __init__(self, prime: int, rows: Sequence[Sequence[CycInt]]):
        self.prime = prime
        self.rows = tuple(tuple(r) for r in rows)
        self.size = len(self.rows)
        if any(len(r) != self.size for r in self.rows):
            raise ValueError("matrix must be square")
        for row in self.rows:
            for x in row:
                if x.prime != prime:
                    raise ValueError("entry prime mismatch")

    @classmethod
    def identity(cls, prime: int, n: int) -> "CycMatrix":
        one, zero = CycInt.one(prime), CycInt.zero(prime)
        return cls(prime, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_fn(cls, prime: int, n: int, fn: Callable[[int, int], CycInt]) -> "CycMatrix":
        return cls(prime, [[fn(i, j) for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, prime: int, diag: Sequence[CycInt]) -> "CycMatrix":
        zero = CycInt.zero(prime)
        n = len(diag)
        return cls(prime, [[diag[i] if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, prime: int, value: CycInt, n: int) -> "CycMatrix":
        return cls.diagonal(prime, [value] * n)

    @classmethod
    def block_diag(cls, a: "CycMatrix", b: "CycMatrix") -> "CycMatrix":
        if a.prime != b.prime:
            raise ValueError("prime mismatch")
        zero = CycInt.zero(a.prime)
        n, m = a.size, b.size
        rows = []
        for i in range(n):
            rows.append(list(a.rows[i]) + [zero] * m)
        for i in range(m):
            rows.append([zero] * n + list(b.rows[i]))
        return cls(a.prime, rows)

    def __mul__(self, other: "CycMatrix") -> "CycMatrix":
        if self.prime != other.prime or self.size != other.size:
            raise ValueError("shape or prime mismatch")
        n = self.size
        zero = CycInt.zero(self.prime)
        out = [[zero] * n for _ in range(n)]
        for i in range(n):
            row = self.rows[i]
            acc = out[i]
            for k in range(n):
                a = row[k]
                if a._zero:
                    continue
                brow = other.rows[k]
                for j in range(n):
                    b = brow[j]
                    if not b._zero:
                        acc[j] = acc[j] + a * b
        return CycMatrix(self.prime, out)

    def scale(self, c) -> "CycMatrix":
        return CycMatrix(self.prime, [[x * c for x in row] for row in self.rows])

    def conj_transpose(self) -> "CycMatrix":
        n = self.size
        return CycMatrix(
            self.prime, [[self.rows[j][i].conj() for j in range(n)] for i in range(n)]
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CycMatrix)
            and self.prime == other.prime
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.prime, self.rows))

    def first_mismatch(self, other: "CycMatrix") -> tuple[int, int] | None:
        for i in range(self.size):
            for j in range(self.size):
                if self.rows[i][j] != other.rows[i][j]:
                    return (i, j)
        return None

    def det_monomial(self) -> CycInt:
        """Determinant of a matrix with exactly one nonzero entry per row/column.

        Covers the diagonal and cycle-permutation generators; anything denser
        is rejected rather than approximated.
        """
        n = self.size
        perm = [-1] * n
        values = []
        for i in range(n):
            nonzero = [j for j in range(n) if not self.rows[i][j]._zero]
            if len(nonzero) != 1:
                raise ValueError("matrix is not monomial (row with != 1 nonzero entry)")
            perm[i] = nonzero[0]
            values.append(self.rows[i][nonzero[0]])
        if sorted(perm) != list(range(n)):
            raise ValueError("matrix is not monomial (repeated column)")
        sign = 1
        seen = [False] * n
        for i in range(n):
            if seen[i]:
                continue
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
        out = CycInt.from_int(self.prime, sign)
        for v in values:
            out = out * v
        return out


# ---------------------------------------------------------------------------
# generator matrices


def triangular(i: int) -> int:
    """a_i with a_0 = 0, a_i = i + a_(i-1); evaluated by the recurrence."""
    if i < 0:
        raise ValueError("index must be non-negative")
    a = 0
    for k in range(1, i + 1):
        a += k
    return a


@dataclass(frozen=True)
class GeneratorSet:
    """The unitary generator matrices for one prime.

    Odd ``l``: ``alpha = diag(xi^1..xi^l)``, ``beta`` the cyclic shift,
    ``xi`` the scalar matrix, ``s = diag(xi^(a_1)..xi^(a_l))`` and
    ``t = (xi^(a_(i+j)))`` the Weyl representatives with normalizers dropped.

    ``l = 2``: the Gaussian-integer matrices ``alpha = diag(i, -i)``,
    ``beta = ((0,i),(i,0))``, ``xi = -I``, ``t = ((1,i),(i,1))`` and the
    derived candidate ``s = diag(1, i)`` (see ``verify_l2_generators``).
    """

    prime: int
    alpha: CycMatrix
    beta: CycMatrix
    xi: CycMatrix
    s: CycMatrix
    t: CycMatrix

    @classmethod
    @lru_cache(maxsize=None)
    def build(cls, prime: int) -> "GeneratorSet":
        check_prime(prime)
        if prime == 2:
            i_unit = CycInt.imaginary_unit()
            one = CycInt.one(2)
            zero = CycInt.zero(2)
            alpha = CycMatrix(2, [[i_unit, zero], [zero, -i_unit]])
            beta = CycMatrix(2, [[zero, i_unit], [i_unit, zero]])
            xi = CycMatrix.scalar(2, CycInt.from_int(2, -1), 2)
            s = CycMatrix(2, [[one, zero], [zero, i_unit]])
            t = CycMatrix(2, [[one, i_unit], [i_unit, one]])
            return cls(2, alpha, beta, xi, s, t)
        n = prime
        root = lambda k: CycInt.root_power(prime, k)
        zero = CycInt.zero(prime)
        alpha = CycMatrix.diagonal(prime, [root(i + 1) for i in range(n)])
        beta = CycMatrix.from_fn(
            prime, n, lambda i, j: CycInt.one(prime) if i % n == (j + 1) % n else zero
        )
        xi = CycMatrix.scalar(prime, root(1), n)
        s = CycMatrix.diagonal(prime, [root(triangular(i + 1)) for i in range(n)])
        t = CycMatrix.from_fn(prime, n, lambda i, j: root(triangular((i + 1) + (j + 1))))
        return cls(prime, alpha, beta, xi, s, t)


def root_power_sum(prime: int, m: int) -> int:
    """The integer value of sum_(k=1..l) xi^(km), found by actual summation.

    The canonicalized sum is l when m = 0 mod l and 0 otherwise; the result is
    obtained from the ring arithmetic, not from that closed form.
    """
    check_prime(prime)
    total = CycInt.zero(prime)
    for k in range(1, prime + 1):
        total = total + CycInt.root_power(prime, k * m)
    return total.as_int()


def lemma22_holds(prime: int, i: int, j: int, k: int) -> bool:
    """Congruence a_(j+k) - a_(i+k) = k(j-i) + (a_j - a_i) mod l."""
    check_prime(prime)
    lhs = triangular(j + k) - triangular(i + k)
    rhs = k * (j - i) + (triangular(j) - triangular(i))
    return (lhs - rhs) % prime == 0


# ---------------------------------------------------------------------------
# identity checks


def _identity_check(
    check_id: str, prime: int, lhs: Callable[[], CycMatrix], rhs: Callable[[], CycMatrix],
    description: str, status_on_pass: str = PASS,
) -> CheckReport:
    def body() -> tuple[str, str]:
        left, right = lhs(), rhs()
        bad = left.first_mismatch(right)
        if bad is None:
            return status_on_pass, description
        i, j = bad
        return (
            FAIL,
            f"{description}: entry ({i},{j}) differs: "
            f"{left.rows[i][j]!r} != {right.rows[i][j]!r}",
        )

    return run_check(check_id, prime, body)


def verify_su_generators(prime: int) -> list[CheckReport]:
    """Exact checks on alpha, beta, xi, S, T for an odd prime."""
    check_prime(prime)
    if prime == 2:
        raise ValueError("use verify_l2_generators for the prime 2")
    g = GeneratorSet.build(prime)
    n = prime
    ident = CycMatrix.identity(prime, n)
    checks = [
        _identity_check(
            "matrices.su.alpha_unitary", prime,
            lambda: g.alpha.conj_transpose() * g.alpha, lambda: ident,
            "conj_transpose(alpha) * alpha = I",
        ),
        _identity_check(
            "matrices.su.beta_unitary", prime,
            lambda: g.beta.conj_transpose() * g.beta, lambda: ident,
            "conj_transpose(beta) * beta = I",
        ),
        # [alpha, beta] = xi, checked inverse-free as alpha*beta = beta*alpha*xi
        _identity_check(
            "matrices.su.commutator", prime,
            lambda: g.alpha * g.beta, lambda: g.beta * g.alpha * g.xi,
            "alpha * beta = beta * alpha * xi",
        ),
        _identity_check(
            "matrices.su.s_unitary", prime,
            lambda: g.s.conj_transpose() * g.s, lambda: ident,
            "conj_transpose(S) * S = I",
        ),
        _identity_check(
            "matrices.su.t_gram", prime,
            lambda: g.t.conj_transpose() * g.t,
            lambda: CycMatrix.scalar(prime, CycInt.from_int(prime, prime), n),
            "conj_transpose(T) * T = l * I",
        ),
    ]

    def dets() -> tuple[str, str]:
        da = g.alpha.det_monomial()
        db = g.beta.det_monomial()
        if da == 1 and db == 1:
            return PASS, "det(alpha) = det(beta) = 1"
        return FAIL, f"det(alpha) = {da!r}, det(beta) = {db!r}"

    checks.append(run_check("matrices.su.determinants", prime, dets))
    return checks


def verify_weyl_conjugation(prime: int) -> list[CheckReport]:
    """Conjugation identities for the Weyl representatives, denominators cleared.

    The unit scalars normalizing S and T cancel under conjugation, so the four
    identities are verified as exact matrix equations over Z[xi]:
    S^-1 alpha S = alpha, S^-1 beta S = alpha^-1 beta,
    conj_transpose(T) alpha T = l (alpha^-1 beta),
    conj_transpose(T) beta T = l beta^-1.
    """
    check_prime(prime)
    if prime == 2:
        raise ValueError("use verify_l2_generators for the prime 2")
    g = GeneratorSet.build(prime)
    n = prime
    alpha_inv = g.alpha.conj_transpose()
    beta_inv = g.beta.conj_transpose()
    s_inv = g.s.conj_transpose()
    ell = CycInt.from_int(prime, prime)
    return [
        _identity_check(
            "matrices.weyl.alpha_by_s", prime,
            lambda: s_inv * g.alpha * g.s, lambda: g.alpha,
            "S^-1 alpha S = alpha",
        ),
        _identity_check(
            "matrices.weyl.beta_by_s", prime,
            lambda: s_inv * g.beta * g.s, lambda: alpha_inv * g.beta,
            "S^-1 beta S = alpha^-1 beta",
        ),
        _identity_check(
            "matrices.weyl.alpha_by_t", prime,
            lambda: g.t.conj_transpose() * g.alpha * g.t,
            lambda: (alpha_inv * g.beta).scale(ell),
            "conj_transpose(T) alpha T = l (alpha^-1 beta)",
        ),
        _identity_check(
            "matrices.weyl.beta_by_t", prime,
            lambda: g.t.conj_transpose() * g.beta * g.t,
            lambda: beta_inv.scale(ell),
            "conj_transpose(T) beta T = l beta^-1",
        ),
    ]


def verify_g1_relations(prime: int) -> list[CheckReport]:
    """The 2l x 2l block-matrix relations among Delta/Gamma images.

    Delta(Y) = diag(Y, Y), Gamma(Y) = diag(I, Y).  Conjugations are checked
    inverse-free: g^h = c is asserted as g h = h c, and [g, h] = c as
    g h = h g c.
    """
    g = GeneratorSet.build(prime)
    n = g.alpha.size
    ident_n = CycMatrix.identity(prime, n)
    d_alpha = CycMatrix.block_diag(g.alpha, g.alpha)
    d_beta = CycMatrix.block_diag(g.beta, g.beta)
    d_xi = CycMatrix.block_diag(g.xi, g.xi)
    g_xi = CycMatrix.block_diag(ident_n, g.xi)
    g_beta = CycMatrix.block_diag(ident_n, g.beta)
    ident = CycMatrix.identity(prime, 2 * n)
    return [
        _identity_check(
            "matrices.g1.commutator", prime,
            lambda: d_alpha * d_beta, lambda: d_beta * d_alpha * d_xi,
            "Delta(alpha) Delta(beta) = Delta(beta) Delta(alpha) Delta(xi)",
        ),
        _identity_check(
            "matrices.g1.central_alpha", prime,
            lambda: g_xi * d_alpha, lambda: d_alpha * g_xi * ident,
            "[Gamma(xi), Delta(alpha)] = I",
        ),
        _identity_check(
            "matrices.g1.central_beta", prime,
            lambda: g_xi * d_beta, lambda: d_beta * g_xi * ident,
            "[Gamma(xi), Delta(beta)] = I",
        ),
        _identity_check(
            "matrices.g1.alpha_by_gamma_beta", prime,
            lambda: d_alpha * g_beta, lambda: g_beta * (g_xi * d_alpha),
            "Delta(alpha)^Gamma(beta) = Gamma(xi) Delta(alpha)",
        ),
        _identity_check(
            "matrices.g1.beta_by_gamma_beta", prime,
            lambda: d_beta * g_beta, lambda: g_beta * d_beta,
            "Delta(beta)^Gamma(beta) = Delta(beta)",
        ),
        _identity_check(
            "matrices.g1.xi_by_gamma_beta", prime,
            lambda: g_xi * g_beta, lambda: g_beta * g_xi,
            "Gamma(xi)^Gamma(beta) = Gamma(xi)",
        ),
    ]


def verify_l2_generators() -> list[CheckReport]:
    """The l = 2 identities in Z[i], with sqrt(2) denominators cleared.

    The diagonal Weyl representative is never defined for l = 2 in the source
    construction (the general formula degenerates to a scalar), so the
    conjugation claims attributed to it are checked against the derived
    candidate S2 = diag(1, i) and flagged as a note rather than a plain pass.
    """
    g = GeneratorSet.build(2)
    two = CycInt.from_int(2, 2)
    ident = CycMatrix.identity(2, 2)
    beta_inv = g.beta.conj_transpose()
    s_inv = g.s.conj_transpose()
    checks = [
        _identity_check(
            "matrices.l2.beta_conj", 2,
            lambda: beta_inv * g.alpha * g.beta, lambda: g.xi * g.alpha,
            "beta^-1 alpha beta = xi alpha",
        ),
        _identity_check(
            "matrices.l2.t_gram", 2,
            lambda: g.t.conj_transpose() * g.t, lambda: ident.scale(two),
            "conj_transpose(T) T = 2 I",
        ),
        _identity_check(
            "matrices.l2.alpha_by_t", 2,
            lambda: g.t.conj_transpose() * g.alpha * g.t,
            lambda: (g.alpha * g.beta).scale(two),
            "conj_transpose(T) alpha T = 2 (alpha beta)",
        ),
        _identity_check(
            "matrices.l2.beta_by_t", 2,
            lambda: g.t.conj_transpose() * g.beta * g.t, lambda: g.beta.scale(two),
            "conj_transpose(T) beta T = 2 beta",
        ),
        _identity_check(
            "matrices.l2.sigma_candidate", 2,
            lambda: CycMatrix.block_diag(s_inv * g.alpha * g.s, s_inv * g.beta * g.s),
            lambda: CycMatrix.block_diag(g.alpha, g.alpha * g.beta),
            "derived candidate S2 = diag(1, i): S2^-1 alpha S2 = alpha and "
            "S2^-1 beta S2 = alpha beta (the diagonal Weyl representative is "
            "otherwise undefined at l = 2)",
            status_on_pass=NOTE,
        ),
    ]

    def dets() -> tuple[str, str]:
        vals = {name: m.det_monomial() for name, m in
                [("alpha", g.alpha), ("beta", g.beta), ("xi", g.xi)]}
        if all(v == 1 for v in vals.values()):
            return PASS, "det(alpha) = det(beta) = det(xi) = 1"
        return FAIL, ", ".join(f"det({k}) = {v!r}" for k, v in vals.items())

    checks.append(run_check("matrices.l2.determinants", 2, dets))
    checks.extend(verify_g1_relations(2))
    return checks


def lemma_checks(prime: int) -> list[CheckReport]:
    """Exhaustive sweeps of the two index lemmas behind the T computation."""
    check_prime(prime)

    def root_sum() -> tuple[str, str]:
        for m in range(prime):
            got = root_power_sum(prime, m)
            want = prime if m % prime == 0 else 0
            if got != want:
                return FAIL, f"sum_k xi^(k*{m}) = {got}, expected {want}"
        return PASS, f"sum_(k=1..{prime}) xi^(km) = l*[m=0 mod l] for all m in [0,{prime})"

    def congruence() -> tuple[str, str]:
        for i in range(prime):
            for j in range(prime):
                for k in range(prime):
                    if not lemma22_holds(prime, i, j, k):
                        return FAIL, f"congruence fails at (i,j,k)=({i},{j},{k})"
        return PASS, f"a_(j+k) - a_(i+k) = k(j-i) + (a_j - a_i) mod {prime} on [0,{prime})^3"

    reports = [
        run_check("matrices.lemma.root_sum", prime, root_sum),
        run_check("matrices.lemma.triangular_congruence", prime, congruence),
        run_check(
            "matrices.lemma.root_sum_index_note", prime,
            lambda: (
                NOTE,
                "the root-power-sum statement is written with a Kronecker delta in "
                "an index n while the summand exponent uses m; it is verified as "
                "delta_(m mod l, 0) by direct summation",
            ),
        ),
    ]
    return reports
