"""Exact linear programs over edge-cost variables and their duality certificates.

All programs are stated as: maximize ``objective`` subject to constraints
``form <= rhs`` or ``form == rhs`` with every variable nonnegative. The
solver is a two-phase tableau simplex over :class:`fractions.Fraction` with
Bland's rule, so optimal values and dual multipliers come out exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .rational import RationalLike, format_fraction, harmonic, to_fraction

LE = "<="
EQ = "="


class CertificateError(ValueError):
    """Malformed certificate (wrong length or a negative inequality weight)."""


@dataclass(frozen=True)
class LinearForm:
    coeffs: tuple
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(to_fraction(c) for c in self.coeffs))
        object.__setattr__(self, "constant", to_fraction(self.constant))

    @classmethod
    def sparse(cls, nvars: int, terms: Mapping[int, RationalLike],
               constant: RationalLike = 0) -> "LinearForm":
        coeffs = [Fraction(0)] * nvars
        for j, c in terms.items():
            coeffs[j] += to_fraction(c)
        return cls(tuple(coeffs), to_fraction(constant))

    @property
    def nvars(self) -> int:
        return len(self.coeffs)

    def __add__(self, other: "LinearForm") -> "LinearForm":
        if other.nvars != self.nvars:
            raise ValueError("forms over different variable counts")
        return LinearForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
                          self.constant + other.constant)

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return self + other.scaled(-1)

    def scaled(self, factor: RationalLike) -> "LinearForm":
        f = to_fraction(factor)
        return LinearForm(tuple(c * f for c in self.coeffs), self.constant * f)

    def evaluate(self, x: Sequence[RationalLike]) -> Fraction:
        return sum((c * to_fraction(v) for c, v in zip(self.coeffs, x)), self.constant)

    def to_json(self) -> dict:
        return {"coeffs": [format_fraction(c) for c in self.coeffs],
                "constant": format_fraction(self.constant)}


@dataclass(frozen=True)
class Constraint:
    form: LinearForm
    relation: str
    rhs: Fraction
    name: str = ""

    def __post_init__(self):
        if self.relation not in (LE, EQ):
            raise ValueError(f"relation must be '<=' or '=', got {self.relation!r}")
        object.__setattr__(self, "rhs", to_fraction(self.rhs))

    def to_json(self) -> dict:
        return {"name": self.name, "form": self.form.to_json(),
                "relation": self.relation, "rhs": format_fraction(self.rhs)}


@dataclass(frozen=True)
class LinearProgramSpec:
    nvars: int
    constraints: tuple
    objective: LinearForm
    name: str = ""
    notes: str = ""

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if self.objective.nvars != self.nvars:
            raise ValueError("objective has the wrong variable count")
        for con in self.constraints:
            if con.form.nvars != self.nvars:
                raise ValueError(f"constraint {con.name!r} has the wrong variable count")

    def index(self, name: str) -> int:
        for r, con in enumerate(self.constraints):
            if con.name == name:
                return r
        raise KeyError(name)

    def is_feasible(self, x: Sequence[RationalLike]) -> bool:
        x = [to_fraction(v) for v in x]
        if len(x) != self.nvars or any(v < 0 for v in x):
            return False
        for con in self.constraints:
            lhs = con.form.evaluate(x)
            if con.relation == LE and lhs > con.rhs:
                return False
            if con.relation == EQ and lhs != con.rhs:
                return False
        return True

    def to_json(self) -> dict:
        return {"name": self.name, "nvars": self.nvars, "sense": "maximize",
                "objective": self.objective.to_json(),
                "constraints": [c.to_json() for c in self.constraints],
                "notes": self.notes}


@dataclass(frozen=True)
class Certificate:
    multipliers: tuple
    bound: Fraction

    def __post_init__(self):
        object.__setattr__(self, "multipliers", tuple(to_fraction(y) for y in self.multipliers))
        object.__setattr__(self, "bound", to_fraction(self.bound))

    @classmethod
    def from_named(cls, lp: LinearProgramSpec, weights: Mapping[str, RationalLike],
                   bound: RationalLike) -> "Certificate":
        ys = [Fraction(0)] * len(lp.constraints)
        for name, w in weights.items():
            ys[lp.index(name)] = to_fraction(w)
        return cls(tuple(ys), to_fraction(bound))

    def to_json(self) -> dict:
        return {"multipliers": [format_fraction(y) for y in self.multipliers],
                "bound": format_fraction(self.bound)}


@dataclass
class SimplexOutcome:
    status: str  # "optimal" | "unbounded" | "infeasible"
    value: Fraction | None = None
    primal: tuple | None = None
    dual: tuple | None = None
    pivots: int = 0

    def to_json(self) -> dict:
        fmt = (lambda xs: None if xs is None else [format_fraction(v) for v in xs])
        return {"status": self.status,
                "value": None if self.value is None else format_fraction(self.value),
                "primal": fmt(self.primal), "dual": fmt(self.dual), "pivots": self.pivots}


class PivotLimitReached(RuntimeError):
    pass


# --------------------------------------------------------------------------
# exact simplex


class _Tableau:
    def __init__(self, rows, rhs, basis, ncols):
        self.rows = rows  # list of lists of Fraction, width ncols
        self.rhs = rhs
        self.basis = basis
        self.ncols = ncols
        self.pivots = 0

    def pivot(self, r: int, j: int) -> None:
        row = self.rows[r]
        piv = row[j]
        if piv != 1:
            inv = 1 / piv
            self.rows[r] = row = [v * inv for v in row]
            self.rhs[r] *= inv
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[j]
            if f:
                self.rows[i] = [a - f * b if b else a for a, b in zip(other, row)]
                self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = j
        self.pivots += 1

    def optimize(self, cost, allowed, rule: str, max_pivots: int | None) -> str:
        """Maximize cost . x over the current basis. Returns 'optimal' or 'unbounded'."""
        while True:
            reduced = list(cost)
            for i, b in enumerate(self.basis):
                cb = cost[b]
                if cb:
                    for j, v in enumerate(self.rows[i]):
                        if v:
                            reduced[j] -= cb * v
            candidates = [j for j in allowed if reduced[j] > 0]
            if not candidates:
                return "optimal"
            if rule == "bland":
                j = candidates[0]
            else:  # textbook largest-coefficient rule; may cycle
                j = max(candidates, key=lambda c: (reduced[c], -c))
            best = None
            for i, row in enumerate(self.rows):
                a = row[j]
                if a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            if max_pivots is not None and self.pivots >= max_pivots:
                raise PivotLimitReached(f"no convergence after {self.pivots} pivots")
            self.pivot(best[1], j)


def simplex_solve(lp: LinearProgramSpec, rule: str = "bland",
                  max_pivots: int | None = None) -> SimplexOutcome:
    """Exact two-phase simplex; returns status, value, primal and dual solutions."""
    if rule not in ("bland", "dantzig"):
        raise ValueError(f"unknown pivot rule {rule!r}")
    nv = lp.nvars
    m = len(lp.constraints)
    # column layout: originals | one slack/surplus per inequality | artificials
    coeff_rows, rhs, flips, kinds = [], [], [], []
    for con in lp.constraints:
        a = list(con.form.coeffs)
        b = con.rhs - con.form.constant
        flip = b < 0
        if flip:
            a = [-v for v in a]
            b = -b
        coeff_rows.append(a)
        rhs.append(b)
        flips.append(flip)
        if con.relation == EQ:
            kinds.append("eq")
        else:
            kinds.append("ge" if flip else "le")
    slack_col = {}
    col = nv
    for r, kind in enumerate(kinds):
        if kind != "eq":
            slack_col[r] = col
            col += 1
    art_col = {}
    for r, kind in enumerate(kinds):
        if kind != "le":
            art_col[r] = col
            col += 1
    ncols = col
    rows, basis, init_col = [], [], []
    for r in range(m):
        row = coeff_rows[r] + [Fraction(0)] * (ncols - nv)
        if r in slack_col:
            row[slack_col[r]] = Fraction(1 if kinds[r] == "le" else -1)
        if r in art_col:
            row[art_col[r]] = Fraction(1)
            basis.append(art_col[r])
            init_col.append(art_col[r])
        else:
            basis.append(slack_col[r])
            init_col.append(slack_col[r])
        rows.append(row)
    tab = _Tableau(rows, rhs, basis, ncols)
    artificial = set(art_col.values())
    if artificial:
        cost1 = [Fraction(-1) if j in artificial else Fraction(0) for j in range(ncols)]
        tab.optimize(cost1, list(range(ncols)), rule, max_pivots)
        if sum((tab.rhs[i] for i, b in enumerate(tab.basis) if b in artificial), Fraction(0)) > 0:
            return SimplexOutcome("infeasible", pivots=tab.pivots)
        for i, b in enumerate(tab.basis):
            if b in artificial:
                for j in range(ncols):
                    if j not in artificial and tab.rows[i][j] != 0:
                        tab.pivot(i, j)
                        break
    cost2 = list(lp.objective.coeffs) + [Fraction(0)] * (ncols - nv)
    allowed = [j for j in range(ncols) if j not in artificial]
    status = tab.optimize(cost2, allowed, rule, max_pivots)
    if status == "unbounded":
        return SimplexOutcome("unbounded", pivots=tab.pivots)
    x = [Fraction(0)] * ncols
    for i, b in enumerate(tab.basis):
        x[b] = tab.rhs[i]
    primal = tuple(x[:nv])
    dual = []
    for r in range(m):
        j = init_col[r]
        y = sum((cost2[b] * tab.rows[i][j] for i, b in enumerate(tab.basis) if cost2[b]),
                Fraction(0))
        dual.append(-y if flips[r] else y)
    value = lp.objective.evaluate(primal)
    return SimplexOutcome("optimal", value, primal, tuple(dual), tab.pivots)


@dataclass
class FloatOutcome:
    """Floating-point LP result (scipy HiGHS); never used to certify a bound."""

    status: str
    value: float | None = None
    primal: tuple | None = None
    dual: tuple | None = None
    approximate: bool = True


def solve_float(lp: LinearProgramSpec) -> FloatOutcome:
    import numpy as np
    from scipy.optimize import linprog

    c = -np.array([float(v) for v in lp.objective.coeffs])
    ub = [k for k, con in enumerate(lp.constraints) if con.relation == LE]
    eq = [k for k, con in enumerate(lp.constraints) if con.relation == EQ]

    def block(idx):
        if not idx:
            return None, None
        A = np.array([[float(v) for v in lp.constraints[k].form.coeffs] for k in idx])
        b = np.array([float(lp.constraints[k].rhs - lp.constraints[k].form.constant) for k in idx])
        return A, b

    A_ub, b_ub = block(ub)
    A_eq, b_eq = block(eq)
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                  bounds=[(0, None)] * lp.nvars, method="highs")
    if res.status == 2:
        return FloatOutcome("infeasible")
    if res.status == 3:
        return FloatOutcome("unbounded")
    if res.status != 0:
        return FloatOutcome(f"failed: {res.message}")
    dual = [0.0] * len(lp.constraints)
    for k, y in zip(ub, getattr(res.ineqlin, "marginals", []) if ub else []):
        dual[k] = -float(y)
    for k, y in zip(eq, getattr(res.eqlin, "marginals", []) if eq else []):
        dual[k] = -float(y)
    value = -float(res.fun) + float(lp.objective.constant)
    return FloatOutcome("optimal", value, tuple(float(v) for v in res.x), tuple(dual))


# --------------------------------------------------------------------------
# certificates


@dataclass
class CertificateCheck:
    certified: bool
    combined: tuple
    rhs: Fraction
    scale: Fraction
    implied_bound: Fraction | None
    shortfalls: dict = field(default_factory=dict)
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "certified": self.certified,
            "implied_bound": None if self.implied_bound is None else format_fraction(self.implied_bound),
            "scale": format_fraction(self.scale),
            "shortfalls": {str(j): format_fraction(v) for j, v in self.shortfalls.items()},
            "reason": self.reason,
        }


def check_certificate(lp: LinearProgramSpec, cert: Certificate,
                      normalize: bool = False) -> CertificateCheck:
    """Weak-duality check that ``objective <= cert.bound`` on every feasible point.

    The weighted sum of constraints must dominate the objective coefficientwise
    (variables are nonnegative). With ``normalize=True`` the weights may be any
    positive multiple of a valid certificate; the largest admissible scale is
    divided out before the bound is compared.
    """
    ys = cert.multipliers
    if len(ys) != len(lp.constraints):
        raise CertificateError(
            f"certificate has {len(ys)} multipliers for {len(lp.constraints)} constraints")
    for y, con in zip(ys, lp.constraints):
        if con.relation == LE and y < 0:
            raise CertificateError(f"negative weight {y} on inequality {con.name!r}")
    nv = lp.nvars
    combined = [Fraction(0)] * nv
    rhs = Fraction(0)
    for y, con in zip(ys, lp.constraints):
        if y:
            for j, a in enumerate(con.form.coeffs):
                if a:
                    combined[j] += y * a
            rhs += y * (con.rhs - con.form.constant)
    obj = lp.objective.coeffs
    scale = Fraction(1)
    if normalize:
        ratios = [combined[j] / obj[j] for j in range(nv) if obj[j] > 0]
        if ratios:
            scale = min(ratios)
        if scale <= 0:
            return CertificateCheck(False, tuple(combined), rhs, scale, None,
                                    reason="weights do not dominate any positive multiple "
                                           "of the objective")
    shortfalls = {j: scale * obj[j] - combined[j] for j in range(nv)
                  if combined[j] < scale * obj[j]}
    implied = rhs / scale + lp.objective.constant
    if shortfalls:
        return CertificateCheck(False, tuple(combined), rhs, scale, implied, shortfalls,
                                "combination does not dominate the objective")
    if implied > cert.bound:
        return CertificateCheck(False, tuple(combined), rhs, scale, implied,
                                reason=f"implied bound {implied} exceeds claim {cert.bound}")
    return CertificateCheck(True, tuple(combined), rhs, scale, implied)


def complete_with_maximality(lp: LinearProgramSpec, cert: Certificate,
                             top: int) -> Certificate:
    """Fill in weights on ``max_q`` rows (a_q - a_top <= 0) to cover shortfalls.

    Each unit of weight on ``max_q`` moves one unit of coefficient from
    variable ``top`` to variable ``q``; only the minimal amounts are added.
    """
    check = check_certificate(lp, cert)
    ys = list(cert.multipliers)
    for q, deficit in check.shortfalls.items():
        if q == top:
            continue
        ys[lp.index(f"max_{q}")] += deficit
    return Certificate(tuple(ys), cert.bound)


# --------------------------------------------------------------------------
# builders


def _normalization(nvars: int, skip: int) -> Constraint:
    form = LinearForm.sparse(nvars, {j: 1 for j in range(nvars) if j != skip})
    return Constraint(form, EQ, Fraction(1), "normalization")


def _sum_except(nvars: int, skip: int) -> LinearForm:
    return LinearForm.sparse(nvars, {j: 1 for j in range(nvars) if j != skip})


def _maximality(nvars: int, top: int) -> list[Constraint]:
    return [Constraint(LinearForm.sparse(nvars, {q: 1, top: -1}), LE, Fraction(0), f"max_{q}")
            for q in range(nvars) if q != top]


SWITCH_CAP = 7


def build_pos_lp(n: int, o: int, k: int) -> LinearProgramSpec:
    """Price-of-stability program for a best-response chain of length k.

    Start from the optimum missing edge ``o``; players o-1, ..., o-k switch to
    RIGHT one after another. Row ``switch_j`` says player o-j prefers RIGHT
    once o-1..o-j+1 already went right; row ``stay`` says player o-k-1 then
    prefers LEFT. For k > 7 only the first seven switch rows are kept.
    Objective: total cost of every edge but o-k, with the optimum normalized to 1.
    """
    if not 1 <= k < o <= n:
        raise ValueError(f"need 1 <= k < o <= n, got n={n}, o={o}, k={k}")
    nv = n + 1
    cons = [_normalization(nv, o)]
    for j in range(1, min(k, SWITCH_CAP) + 1):
        p = o - j
        terms = {}
        for l in range(0, p + 1):
            terms[l] = terms.get(l, 0) - Fraction(1, p + 1 - l)
        for l in range(p + 1, n + 1):
            terms[l] = terms.get(l, 0) + Fraction(1, l - p)
        cons.append(Constraint(LinearForm.sparse(nv, terms), LE, 0, f"switch_{j}"))
    if k <= SWITCH_CAP:
        p = o - k - 1
        terms = {}
        for l in range(0, p + 1):
            terms[l] = terms.get(l, 0) + Fraction(1, p + 1 - l)
        for l in range(p + 1, n + 1):
            terms[l] = terms.get(l, 0) - Fraction(1, l - p)
        cons.append(Constraint(LinearForm.sparse(nv, terms), LE, 0, "stay"))
    name = f"pos(n={n},o={o},k={k})"
    notes = "" if k <= SWITCH_CAP else f"only the first {SWITCH_CAP} switch rows"
    return LinearProgramSpec(nv, tuple(cons), _sum_except(nv, o - k), name, notes)


def build_mspos_lp(n: int, o: int, i: int, maximality: bool = True) -> LinearProgramSpec:
    """Sequential price-of-stability program for arrival order (n-1..o, 0..o-1).

    Row ``left_pref``: player i still prefers LEFT; row ``right_pref``: player
    i+1 prefers RIGHT. Both use the relaxed path costs from the upper-bound
    argument. ``max_q`` rows keep edge o the most expensive; without them the
    program is not bounded by 26/19 (its value at n=o=3, i=1 is 7/5).
    """
    if not (0 <= i and i + 1 < o <= n):
        raise ValueError(f"need 0 <= i and i+1 < o <= n, got n={n}, o={o}, i={i}")
    nv = n + 1
    left = {}
    for k in range(0, i + 1):
        left[k] = Fraction(1, i - k + 1)
    for k in range(i + 1, n + 1):
        left[k] = left.get(k, 0) - 1
    right = {}
    for k in range(i + 2, o + 1):
        right[k] = Fraction(1)
    for k in range(0, i + 2):
        right[k] = right.get(k, 0) - Fraction(1, i + 2 - k)
    cons = [
        Constraint(LinearForm.sparse(nv, left), LE, 0, "left_pref"),
        Constraint(LinearForm.sparse(nv, right), LE, 0, "right_pref"),
        _normalization(nv, o),
    ]
    if maximality:
        cons.extend(_maximality(nv, o))
    return LinearProgramSpec(nv, tuple(cons), _sum_except(nv, i + 1),
                             f"mspos(n={n},o={o},i={i})")


def threshold_potential(nvars: int, gap: int) -> LinearForm:
    """Potential of the threshold profile leaving edge ``gap`` unused."""
    return LinearForm.sparse(nvars, {i: harmonic(abs(i - gap)) for i in range(nvars) if i != gap})


def build_popoa_lp(n: int, p: int) -> LinearProgramSpec:
    """Largest threshold-minimizer cost when the potential minimizer misses edge p.

    Alternatives are restricted to threshold profiles; edge n is forced to be
    the most expensive one and the optimum (everything but edge n) costs 1.
    """
    if not 0 <= p < n:
        raise ValueError(f"need 0 <= p < n, got n={n}, p={p}")
    nv = n + 1
    phi_p = threshold_potential(nv, p)
    cons = [Constraint(phi_p - threshold_potential(nv, q), LE, 0, f"phi_{q}")
            for q in range(nv) if q != p]
    cons.extend(_maximality(nv, n))
    cons.append(_normalization(nv, n))
    return LinearProgramSpec(nv, tuple(cons), _sum_except(nv, p), f"popoa(n={n},p={p})",
                             "alternatives restricted to threshold profiles")


def popoa_float_value(n: int, p: int) -> float | None:
    """``build_popoa_lp(n, p)`` solved in float64 without building Fraction rows.

    Same program, assembled directly as arrays; the Fraction builder costs
    O(n^3) big-denominator operations per sweep and dominates at n = 200.
    """
    import numpy as np
    from scipy.optimize import linprog

    if not 0 <= p < n:
        raise ValueError(f"need 0 <= p < n, got n={n}, p={p}")
    nv = n + 1
    h = np.concatenate(([0.0], np.cumsum(1.0 / np.arange(1, nv + 1))))
    idx = np.arange(nv)
    phi = h[np.abs(idx[:, None] - idx[None, :])]  # row q: potential of gap q
    others = idx[idx != p]
    rows = [phi[p] - phi[others]]
    top = np.zeros((n, nv))
    top[np.arange(n), np.arange(n)] = 1.0
    top[:, n] = -1.0
    rows.append(top)
    A_ub = np.vstack(rows)
    b_ub = np.zeros(A_ub.shape[0])
    A_eq = np.ones((1, nv))
    A_eq[0, n] = 0.0
    c = -np.ones(nv)
    c[p] = 0.0
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0],
                  bounds=[(0, None)] * nv, method="highs")
    return -float(res.fun) if res.status == 0 else None


def popoa_lower_bound(n: int, gaps: Sequence[int] | None = None,
                      exact: bool = False) -> dict:
    """Best POPoA program value over candidate gaps p (default: all 0 <= p < n)."""
    gaps = list(range(n)) if gaps is None else list(gaps)
    values = {}
    for p in gaps:
        if exact:
            out = simplex_solve(build_popoa_lp(n, p))
            value = out.value if out.status == "optimal" else None
        else:
            value = popoa_float_value(n, p)
        if value is not None:
            values[p] = value
    best = max(values, key=lambda p: values[p])
    return {"n": n, "p": best, "value": values[best], "values": values,
            "exact": exact}


# --------------------------------------------------------------------------
# published multipliers


def _parse_weight(text: str):
    return Fraction(text) if "/" in text else text


CHAIN_WEIGHTS: dict = {
    1: ("4/3", "10/9", "2/9"),
    2: ("22/17", "252/323", "202/323", "90/323"),
    3: ("29/23", "2976/4025", "1206/4025", "2256/4025", "1224/4025"),
    4: ("1.243533565", "0.722076586", "446160/1659763", "0.268809463", "0.528169383",
        "0.329251827"),
    5: ("1.229596836", "0.711037768", "0.257115234", "0.201170436", "0.199302216",
        "0.50797093", "0.348431623"),
    6: ("1.217310111", "0.702648246", "0.250967669", "0.189905238", "0.168566505",
        "0.179311025", "0.494134279", "0.362553601"),
    7: ("1.206536915", "0.69586637", "0.247111078", "0.184286036", "0.157438535",
        "0.148587957", "0.165607593", "0.484007846", "0.373384452"),
    "8plus": ("1.330802428", "0.750587484", "0.246845878", "0.168106752", "0.12615003",
              "0.096800836", "0.072578056", "0.048719834"),
}

LONG_CHAIN_BOUND = "1.33081"
DECIMAL_TOLERANCE = Fraction(1, 10 ** 6)

MSPOS_WEIGHTS = {"left_pref": Fraction(2, 19), "right_pref": Fraction(24, 19),
                 "normalization": Fraction(26, 19)}
MSPOS_BOUND = Fraction(26, 19)


def chain_certificate(lp: LinearProgramSpec, k) -> Certificate:
    """Published weights for chain length k (only exact for k <= 3)."""
    weights = CHAIN_WEIGHTS[k]
    ys = [Fraction(w) for w in weights]
    return Certificate(tuple(ys), ys[0])


@dataclass
class DualComparison:
    k: object
    n: int
    o: int
    value: Fraction
    recomputed: tuple
    published: tuple
    mismatches: list

    @property
    def agrees(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {
            "k": self.k, "n": self.n, "o": self.o,
            "value": format_fraction(self.value), "value_decimal": float(self.value),
            "recomputed": [format_fraction(y) for y in self.recomputed],
            "recomputed_decimal": [float(y) for y in self.recomputed],
            "published": list(self.published),
            "mismatches": [{"index": i, "published": p, "recomputed": float(r),
                            "difference": float(d)} for i, p, r, d in self.mismatches],
        }


def recompute_appendix_duals(k, n: int = 40, o: int = 20) -> DualComparison:
    """Solve the chain-length-k program exactly and compare its duals to the table.

    ``k`` is 1..7 or ``"8plus"`` (solved as k = 8 with seven switch rows).
    Fractions are compared exactly, decimals to within 1e-6; any disagreement
    is listed in ``mismatches`` rather than hidden.
    """
    chain = 8 if k == "8plus" else int(k)
    if k != "8plus" and not 1 <= chain <= SWITCH_CAP:
        raise ValueError("k must be 1..7 or '8plus'")
    lp = build_pos_lp(n, o, chain)
    out = simplex_solve(lp)
    if out.status != "optimal":
        raise RuntimeError(f"{lp.name} is {out.status}")
    published = CHAIN_WEIGHTS[k]
    mismatches = []
    for idx, (text, y) in enumerate(zip(published, out.dual)):
        ref = _parse_weight(text)
        if isinstance(ref, Fraction):
            if ref != y:
                mismatches.append((idx, text, y, y - ref))
        else:
            diff = y - Fraction(ref)
            if abs(diff) > DECIMAL_TOLERANCE:
                mismatches.append((idx, text, y, diff))
    return DualComparison(k, n, o, out.value, out.dual, published, mismatches)


def beale_cycling_lp() -> LinearProgramSpec:
    """Beale's degenerate program on which the largest-coefficient rule cycles."""
    nv = 4
    cons = (
        Constraint(LinearForm((Fraction(1, 4), -8, -1, 9)), LE, 0, "r1"),
        Constraint(LinearForm((Fraction(1, 2), -12, Fraction(-1, 2), 3)), LE, 0, "r2"),
        Constraint(LinearForm((0, 0, 1, 0)), LE, 1, "r3"),
    )
    obj = LinearForm((Fraction(3, 4), -20, Fraction(1, 2), -6))
    return LinearProgramSpec(nv, cons, obj, "beale")
