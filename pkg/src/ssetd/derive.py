"""Symbolic derivation of the coefficient ODE systems.

The invariant ansatz A*p^4 + B*p^3 + C*p^2 + D*p + E*x + F and the ordered
exponential-product evolution operator both reduce, after commutator algebra,
to first-order ODE systems for their scalar coefficient functions.  This
module performs that reduction mechanically: operators are formed with
polynomial-valued coefficients (unknowns A..F, gamma1..gamma6, the drive f),
commuted with the generic rules from :mod:`ssetd.algebra`, and the resulting
coefficient-matching equations are solved symbol by symbol.  Downstream
modules integrate the *derived* tables; nothing transcribes a printed system
by hand outside the clearly-separated published-formula module.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import PhysicalParams, _commute_coeffs

Monomial = tuple[str, ...]


class Poly:
    """Sparse polynomial in named symbols with complex coefficients.

    Monomials are sorted tuples of symbol names (repetition allowed).  Only
    the operations needed by the derivation are provided: ring arithmetic,
    substitution of a polynomial for a symbol, linear-coefficient extraction
    and numeric evaluation.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, complex] | None = None):
        self.terms: dict[Monomial, complex] = {}
        if terms:
            for mono, coeff in terms.items():
                c = complex(coeff)
                if c != 0:
                    key = tuple(sorted(mono))
                    self.terms[key] = self.terms.get(key, 0j) + c
            self.terms = {m: c for m, c in self.terms.items() if c != 0}

    @classmethod
    def zero(cls) -> "Poly":
        return cls()

    @classmethod
    def const(cls, c: complex) -> "Poly":
        return cls({(): c})

    @classmethod
    def symbol(cls, name: str) -> "Poly":
        return cls({(name,): 1.0})

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            out[mono] = out.get(mono, 0j) + coeff
        return Poly(out)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Poly):
            out: dict[Monomial, complex] = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    key = tuple(sorted(m1 + m2))
                    out[key] = out.get(key, 0j) + c1 * c2
            return Poly(out)
        return Poly({m: c * complex(other) for m, c in self.terms.items()})

    def __rmul__(self, scalar) -> "Poly":
        return self * scalar

    def is_zero(self) -> bool:
        return not self.terms

    def symbols(self) -> set[str]:
        out: set[str] = set()
        for mono in self.terms:
            out.update(mono)
        return out

    def substitute(self, name: str, replacement: "Poly") -> "Poly":
        """Replace every occurrence of a symbol by a polynomial."""
        result = Poly.zero()
        for mono, coeff in self.terms.items():
            factor = Poly.const(coeff)
            for sym in mono:
                factor = factor * (replacement if sym == name else Poly.symbol(sym))
            result = result + factor
        return result

    def extract_linear(self, name: str) -> tuple[complex, "Poly"]:
        """Split self = c*name + rest where c is a pure constant.

        Raises if the symbol appears nonlinearly or with a non-constant
        coefficient; the triangular structure of both derivations guarantees
        neither happens.
        """
        coeff = 0j
        rest: dict[Monomial, complex] = {}
        for mono, c in self.terms.items():
            k = mono.count(name)
            if k == 0:
                rest[mono] = c
            elif k == 1 and len(mono) == 1:
                coeff += c
            else:
                raise ValueError(f"equation is not linear in {name}: monomial {mono}")
        return coeff, Poly(rest)

    def evaluate(self, env: dict[str, complex]) -> complex:
        total = 0j
        for mono, coeff in self.terms.items():
            value = coeff
            for sym in mono:
                value = value * env[sym]
            total += value
        return total

    def sorted_terms(self) -> list[tuple[Monomial, complex]]:
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Poly({self.terms!r})"


def poly_close(a: Poly, b: Poly, tol: float = 1e-12) -> bool:
    """Coefficient-wise comparison with an absolute-or-relative tolerance."""
    monos = set(a.terms) | set(b.terms)
    for m in monos:
        ca = a.terms.get(m, 0j)
        cb = b.terms.get(m, 0j)
        scale = max(abs(ca), abs(cb), 1.0)
        if abs(ca - cb) > tol * scale:
            return False
    return True


@dataclass(frozen=True)
class ConstraintTable:
    """First-order ODE system d(state)/dt = rows, as data.

    rows maps "<symbol>dot" to a Poly in the state symbols plus the drive
    symbol "f".  The table is consumed by the fixed-step integrator and
    serialized for the CLI `derive` subcommand.
    """

    name: str
    state_symbols: tuple[str, ...]
    rows: dict[str, Poly]

    def row(self, state_symbol: str) -> Poly:
        return self.rows[state_symbol + "dot"]

    def to_json_dict(self) -> dict:
        rows = []
        for sym in self.state_symbols:
            poly = self.row(sym)
            terms = [
                {"coeff": [c.real, c.imag], "monomial": list(mono)}
                for mono, c in poly.sorted_terms()
            ]
            rows.append({"symbol": sym + "dot", "terms": terms})
        return {
            "system": self.name,
            "state_symbols": list(self.state_symbols),
            "rows": rows,
        }

    def compile(self) -> list[list[tuple[complex, tuple[int, ...], int]]]:
        """Precompute (coeff, state indices, f power) triples per row."""
        index = {s: i for i, s in enumerate(self.state_symbols)}
        compiled = []
        for sym in self.state_symbols:
            terms = []
            for mono, coeff in self.row(sym).sorted_terms():
                f_power = sum(1 for s in mono if s == "f")
                idxs = tuple(index[s] for s in mono if s != "f")
                terms.append((coeff, idxs, f_power))
            compiled.append(terms)
        return compiled


_BASIS_SLOTS = ("1", "x", "p", "p2", "p3", "p4")

INVARIANT_SYMBOLS = ("A", "B", "C", "D", "E", "F")
PROPAGATOR_SYMBOLS = tuple(f"gamma{i}" for i in range(1, 7))


def _hamiltonian_sym(params: PhysicalParams) -> list[Poly]:
    return [
        Poly.zero(),
        Poly.symbol("f"),
        Poly.zero(),
        Poly.const(params.quadratic_coeff),
        Poly.zero(),
        Poly.const(params.quartic_coeff),
    ]


def derive_invariant_constraints(params: PhysicalParams) -> ConstraintTable:
    """ODE system for the invariant coefficients A..F.

    Forms dI/dt + (1/i*hbar)[I, H] with symbolic coefficients and collects
    each basis slot; the vanishing of slot (p^3), say, yields the Bdot row.
    """
    sym = Poly.symbol
    invariant = [sym("F"), sym("E"), sym("D"), sym("C"), sym("B"), sym("A")]
    bracket = _commute_coeffs(invariant, _hamiltonian_sym(params), 1j * params.hbar)
    scale = 1.0 / (1j * params.hbar)
    dots_per_slot = ("Fdot", "Edot", "Ddot", "Cdot", "Bdot", "Adot")
    rows = {dots_per_slot[i]: -(scale * bracket[i]) for i in range(6)}
    return ConstraintTable("invariant", INVARIANT_SYMBOLS, rows)


def derive_propagator_constraints(params: PhysicalParams) -> ConstraintTable:
    """ODE system for the factor functions of the ordered-product propagator.

    U = exp(g1*p^4) exp(g2*p^3) exp(g3*p^2) exp(g4*p) exp(g5*x) exp(g6) gives

        i*hbar * dU/dt * U^(-1)
            = i*hbar * [g1dot*p^4 + g2dot*p^3 + g3dot*p^2 + g4dot*p
                        + g5dot * e^P x e^(-P) + g6dot]

    with P the combined p-exponent (all p factors commute).  Matching against
    H slot by slot is triangular: each equation is linear in exactly one new
    dot symbol once earlier solutions are substituted.
    """
    ih = 1j * params.hbar
    g = [Poly.symbol(s) for s in PROPAGATOR_SYMBOLS]
    zero = Poly.zero()
    p_exponent = [zero, zero, g[3], g[2], g[1], g[0]]
    x_element = [zero, Poly.const(1.0), zero, zero, zero, zero]
    conj = _commute_coeffs(p_exponent, x_element, ih)
    conjugated_x = [x_element[i] + conj[i] for i in range(6)]

    dot_names = tuple(s + "dot" for s in PROPAGATOR_SYMBOLS)
    dots = [Poly.symbol(n) for n in dot_names]
    ansatz_slots = [
        [zero, zero, zero, zero, zero, Poly.const(1.0)],  # p^4
        [zero, zero, zero, zero, Poly.const(1.0), zero],  # p^3
        [zero, zero, zero, Poly.const(1.0), zero, zero],  # p^2
        [zero, zero, Poly.const(1.0), zero, zero, zero],  # p
        conjugated_x,                                     # conjugated x factor
        [Poly.const(1.0), zero, zero, zero, zero, zero],  # scalar
    ]
    generator = [zero] * 6
    for dot, element in zip(dots, ansatz_slots):
        generator = [generator[i] + dot * element[i] for i in range(6)]

    target = _hamiltonian_sym(params)
    equations = [ih * generator[i] - target[i] for i in range(6)]

    # Solve in dependency order: slots p^4 and x are immediate, the rest
    # become linear after substituting the already-solved dot symbols.
    slot_of = {"1": 0, "x": 1, "p": 2, "p2": 3, "p3": 4, "p4": 5}
    order = [
        ("gamma1dot", slot_of["p4"]),
        ("gamma5dot", slot_of["x"]),
        ("gamma2dot", slot_of["p3"]),
        ("gamma3dot", slot_of["p2"]),
        ("gamma4dot", slot_of["p"]),
        ("gamma6dot", slot_of["1"]),
    ]
    solved: dict[str, Poly] = {}
    for dot_name, slot in order:
        eq = equations[slot]
        for known, solution in solved.items():
            eq = eq.substitute(known, solution)
        coeff, rest = eq.extract_linear(dot_name)
        if coeff == 0:
            raise RuntimeError(f"degenerate equation while solving for {dot_name}")
        solved[dot_name] = rest * (-1.0 / coeff)

    rows = {name: solved[name] for name in dot_names}
    return ConstraintTable("propagator", PROPAGATOR_SYMBOLS, rows)
