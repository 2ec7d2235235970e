"""Exact arithmetic on the nilpotent operator space span{1, x, p, p^2, p^3, p^4}.

Every operator handled by this package is a linear combination

    c0 * 1 + cx * x + c1 * p + c2 * p^2 + c3 * p^3 + c4 * p^4

with complex coefficients.  The space is closed under commutation because the
only nonzero brackets are [x, p^n] = i*hbar*n*p^(n-1); commutators therefore
lower the p-degree and never produce x^2, x*p or p^5 terms.  That closure is
what makes adjoint (BCH) series terminate after a single correction term.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class PhysicalParams:
    """Two-body masses and the derived kinetic parameters.

    mu is the reduced mass m1*m2/(m1+m2).  eta is the auxiliary mass
    mu*(m1*m2/(m1*m2 - 3*mu^2))^(1/3) controlling the quartic kinetic term;
    the radicand is m1*m2*(m1^2 - m1*m2 + m2^2)/(m1+m2)^2 > 0 for all
    positive masses, so eta is always defined and positive.
    """

    m1: float
    m2: float
    hbar: float = 1.0
    mu: float = field(init=False)
    eta: float = field(init=False)

    def __post_init__(self) -> None:
        if not (self.m1 > 0.0):
            raise ValueError(f"m1 must be positive, got {self.m1}")
        if not (self.m2 > 0.0):
            raise ValueError(f"m2 must be positive, got {self.m2}")
        if not (self.hbar > 0.0):
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        mu = self.m1 * self.m2 / (self.m1 + self.m2)
        radicand = self.m1 * self.m2 / (self.m1 * self.m2 - 3.0 * mu * mu)
        eta = mu * radicand ** (1.0 / 3.0)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "eta", eta)

    @property
    def quartic_coeff(self) -> float:
        """Coefficient of p^4 in the kinetic term: 1/(8*eta^3)."""
        return 1.0 / (8.0 * self.eta**3)

    @property
    def quadratic_coeff(self) -> float:
        """Coefficient of p^2 in the kinetic term: 1/(2*mu)."""
        return 1.0 / (2.0 * self.mu)

    def kinetic_energy(self, p):
        """T(p) = p^4/(8*eta^3) + p^2/(2*mu), elementwise on arrays."""
        p2 = p * p
        return self.quartic_coeff * p2 * p2 + self.quadratic_coeff * p2


@dataclass(frozen=True)
class AlgebraElement:
    """One operator c0 + cx*x + sum_k cp[k-1]*p^k with complex coefficients."""

    c0: complex = 0j
    cx: complex = 0j
    cp: tuple[complex, complex, complex, complex] = (0j, 0j, 0j, 0j)

    def __post_init__(self) -> None:
        object.__setattr__(self, "c0", complex(self.c0))
        object.__setattr__(self, "cx", complex(self.cx))
        cp = tuple(complex(c) for c in self.cp)
        if len(cp) != 4:
            raise ValueError(f"cp must hold 4 coefficients, got {len(cp)}")
        object.__setattr__(self, "cp", cp)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return AlgebraElement(
            self.c0 + other.c0,
            self.cx + other.cx,
            tuple(a + b for a, b in zip(self.cp, other.cp)),
        )

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(-self.c0, -self.cx, tuple(-c for c in self.cp))

    def __mul__(self, scalar: complex) -> "AlgebraElement":
        s = complex(scalar)
        return AlgebraElement(self.c0 * s, self.cx * s, tuple(c * s for c in self.cp))

    __rmul__ = __mul__

    def coefficients(self) -> tuple[complex, ...]:
        """All six coefficients in the order (1, x, p, p^2, p^3, p^4)."""
        return (self.c0, self.cx) + self.cp

    def max_abs_coeff(self) -> float:
        return max(abs(c) for c in self.coefficients())

    def is_hermitian(self, tol: float = 0.0) -> bool:
        """Hermitian iff every coefficient is real (1, x, p^k are each Hermitian)."""
        return all(abs(c.imag) <= tol for c in self.coefficients())


def identity(c: complex = 1.0) -> AlgebraElement:
    return AlgebraElement(c0=c)


def x_op(c: complex = 1.0) -> AlgebraElement:
    return AlgebraElement(cx=c)


def p_power(k: int, c: complex = 1.0) -> AlgebraElement:
    if not 1 <= k <= 4:
        raise ValueError(f"p power must be in 1..4, got {k}")
    cp = [0j, 0j, 0j, 0j]
    cp[k - 1] = complex(c)
    return AlgebraElement(cp=tuple(cp))


def hamiltonian(params: PhysicalParams, f_value: float) -> AlgebraElement:
    """H(t) = p^4/(8*eta^3) + p^2/(2*mu) + f(t)*x at one instant."""
    return AlgebraElement(
        cx=f_value,
        cp=(0j, params.quadratic_coeff, 0j, params.quartic_coeff),
    )


def _commute_coeffs(a, b, ihbar):
    """Commutator coefficients, generic over the coefficient ring.

    Works for plain complex numbers and for the symbolic polynomials used by
    the derivation layer; only +, -, * with scalars are required.  Input and
    output are 6-lists ordered (1, x, p, p^2, p^3, p^4).
    """
    ax, bx = a[1], b[1]
    zero = 0 * a[0]
    return [
        ihbar * (ax * b[2] - bx * a[2]),
        zero,
        (2 * ihbar) * (ax * b[3] - bx * a[3]),
        (3 * ihbar) * (ax * b[4] - bx * a[4]),
        (4 * ihbar) * (ax * b[5] - bx * a[5]),
        zero,
    ]


def commutator(a: AlgebraElement, b: AlgebraElement, params: PhysicalParams) -> AlgebraElement:
    """[a, b] = ab - ba reduced by [x, p^n] = i*hbar*n*p^(n-1).

    Bilinear, antisymmetric and total; the result never carries x or p^4
    components, so the algebra is closed.
    """
    out = _commute_coeffs(list(a.coefficients()), list(b.coefficients()), 1j * params.hbar)
    return AlgebraElement(out[0], out[1], tuple(out[2:6]))


def conjugate_by_p_exponential(
    P: AlgebraElement, target: AlgebraElement, params: PhysicalParams
) -> AlgebraElement:
    """e^P * target * e^(-P) for x-free P.

    The adjoint series target + [P, target] + [P,[P,target]]/2! + ... stops
    after the first correction: [P, target] is x-free, hence commutes with P.
    """
    if P.cx != 0:
        raise ValueError("conjugation requires an x-free exponent (cx = 0)")
    return target + commutator(P, target, params)


def element_close(a: AlgebraElement, b: AlgebraElement, tol: float = 0.0) -> bool:
    return all(abs(u - v) <= tol for u, v in zip(a.coefficients(), b.coefficients()))


def random_element(rng, integer: bool = False, span: float = 1.0) -> AlgebraElement:
    """Random element for property tests.

    With integer=True all coefficients are Gaussian integers in [-8, 8], for
    which commutator arithmetic is exact in floating point (products and sums
    of small integers never round), so algebraic identities can be asserted
    with == rather than a tolerance.
    """
    if integer:
        re = rng.integers(-8, 9, size=6)
        im = rng.integers(-8, 9, size=6)
        coeffs = [complex(int(r), int(i)) for r, i in zip(re, im)]
    else:
        mag = rng.uniform(0.2, span, size=6)
        re = mag * rng.choice((-1.0, 1.0), size=6)
        im = rng.uniform(0.2, span, size=6) * rng.choice((-1.0, 1.0), size=6)
        coeffs = [complex(r, i) for r, i in zip(re, im)]
    return AlgebraElement(coeffs[0], coeffs[1], tuple(coeffs[2:6]))


def hermiticity_defect(e: AlgebraElement) -> float:
    """Largest imaginary part over the six coefficients."""
    return max(abs(c.imag) for c in e.coefficients())
