"""Symbolic cost expressions and a divide-and-conquer solver for miss-count
recurrences of the form T(n) = alpha * T(n/beta) + f(n, M, B).

A CostExpr is a sum of monomials

    coeff * n^p * M^q * B^r * log(n/M^lt)^s * logMB(n)^u

with rational p, q, r, lt (Fractions), non-negative integer s, u, and a
positive rational coefficient. logMB(n) is log base M/B of n. lt scales the
log argument: lt=0 is plain log(n), lt=1 is log(n/M), lt=1/2 is log(n/sqrtM).

Asymptotic comparisons substitute M = n^mu, B = n^chi over the regime
polytope {0 <= chi, 2*chi <= mu <= 1} (a tall cache no larger than the
input); exponents become linear forms in (mu, chi) checked at the polytope's
vertices (0,0), (1,0), (1,1/2).

Numeric conventions: logs are base 2 and clamp below at 1.0 so bounds stay
positive at the recursion base; logMB clamps its denominator the same way.

Text syntax (also accepted by the command line):

    T(n)=8T(n/2)+n^2/B; base(sqrtM)=M/B

    recurrence := "T(n)=" INT "T(n/" number ")" "+" expr ";" base
    base       := "base(" ("M"|"sqrtM"|"const") ")=" expr
    expr       := term {"+" term}
    term       := atom {("*"|"/") atom}
    atom       := number | var ["^" exponent]
    var        := "n" | "M" | "B" | "log(n)" | "log(n/M)" | "log(n/sqrtM)"
                | "log(n/M^" exponent ")" | "logMB(n)"
    exponent   := INT | "(" INT "/" INT ")" | decimal

Numbers may be integers, decimals, or slash fractions built from division.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

F = Fraction

# regime polytope vertices (mu, chi)
REGIME_VERTICES = ((F(0), F(0)), (F(1), F(0)), (F(1), F(1, 2)))

BASE_SCALES = ("M", "sqrtM", "const")
# exponent t with base size x = M^t
_SCALE_T = {"M": F(1), "sqrtM": F(1, 2), "const": F(0)}


class CostExprError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f"at position {pos}: {message}")
        self.pos = pos


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return F(x)
    if isinstance(x, float):
        return F(x).limit_denominator(10**9)
    raise CostExprError(f"not a rational: {x!r}")


def _key(p, q, r, s, lt, u):
    p, q, r, lt = _frac(p), _frac(q), _frac(r), _frac(lt)
    s, u = int(s), int(u)
    if s < 0 or u < 0:
        raise CostExprError("log powers must be non-negative")
    if s == 0:
        lt = F(0)
    return (p, q, r, s, lt, u)


class CostExpr:
    """Canonical sum of monomials: like keys merged, zero coefficients
    dropped, coefficients positive rationals."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for k, c in (terms or {}).items():
            c = _frac(c)
            if c == 0:
                continue
            if c < 0:
                raise CostExprError("coefficients must be positive")
            self.terms[k] = self.terms.get(k, F(0)) + c

    @classmethod
    def monomial(cls, coeff=1, p=0, q=0, r=0, s=0, lt=0, u=0):
        return cls({_key(p, q, r, s, lt, u): _frac(coeff)})

    @classmethod
    def zero(cls):
        return cls({})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if not isinstance(other, CostExpr):
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, F(0)) + c
        return CostExpr(out)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _frac(other)
            if c == 0:
                return CostExpr.zero()
            if c < 0:
                raise CostExprError("coefficients must be positive")
            return CostExpr({k: v * c for k, v in self.terms.items()})
        if not isinstance(other, CostExpr):
            return NotImplemented
        out = {}
        for (p1, q1, r1, s1, lt1, u1), c1 in self.terms.items():
            for (p2, q2, r2, s2, lt2, u2), c2 in other.terms.items():
                if s1 > 0 and s2 > 0 and lt1 != lt2:
                    raise CostExprError(
                        "cannot multiply log factors with different scales")
                lt = lt1 if s1 > 0 else lt2
                k = _key(p1 + p2, q1 + q2, r1 + r2, s1 + s2, lt, u1 + u2)
                out[k] = out.get(k, F(0)) + c1 * c2
        return CostExpr(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, CostExpr) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def monomials(self):
        return list(self.terms.keys())

    def eval(self, n, M, B):
        """Numeric value at concrete (n, M, B); logs base 2, clamped >= 1."""
        n, M, B = float(n), float(M), float(B)
        if n <= 0 or M <= 0 or B <= 0:
            raise CostExprError("evaluation needs positive n, M, B")
        total = 0.0
        for (p, q, r, s, lt, u), c in self.terms.items():
            v = float(c) * n ** float(p) * M ** float(q) * B ** float(r)
            if s:
                v *= max(1.0, math.log2(n / M ** float(lt))) ** s
            if u:
                v *= (max(1.0, math.log2(n)) / max(1.0, math.log2(M / B))) ** u
            total += v
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, reverse=True):
            parts.append(_format_monomial(k, self.terms[k]))
        return " + ".join(parts)

    __repr__ = __str__


def _format_exp(e: Fraction):
    if e.denominator == 1:
        return str(e.numerator)
    if e.denominator <= 1000:
        return f"({e.numerator}/{e.denominator})"
    return f"{float(e):.6f}"


def _format_monomial(k, coeff):
    p, q, r, s, lt, u = k
    num, den = [], []
    for sym, e in (("n", p), ("M", q), ("B", r)):
        if e == 0:
            continue
        side = num if e > 0 else den
        e = abs(e)
        side.append(sym if e == 1 else f"{sym}^{_format_exp(e)}")
    if s:
        if lt == 0:
            base = "log(n)"
        elif lt == 1:
            base = "log(n/M)"
        elif lt == F(1, 2):
            base = "log(n/sqrtM)"
        else:
            base = f"log(n/M^{_format_exp(lt)})"
        num.append(base if s == 1 else f"{base}^{s}")
    if u:
        num.append("logMB(n)" if u == 1 else f"logMB(n)^{u}")
    cstr = None
    if coeff != 1 or not num:
        cstr = (str(coeff.numerator) if coeff.denominator == 1
                else f"{coeff.numerator}/{coeff.denominator}")
    head = "*".join(([cstr] if cstr else []) + num) or "1"
    for d in den:
        head += f"/{d}"
    return head


# convenience builders used across the package
def n_over_B():
    return CostExpr.monomial(p=1, r=-1)


# -- asymptotic comparison -----------------------------------------------------

def _expo(k, mu, chi):
    p, q, r, _s, _lt, _u = k
    return p + q * mu + r * chi


def _logs(k):
    # lexicographic tie-break tuple; larger means asymptotically larger
    # among equal polynomial exponents (coarse but pinned behavior)
    p, q, r, s, lt, u = k
    return (s, u, -lt)


def dominates(a, b, regime=None):
    """Strict asymptotic comparison of two monomials over the regime
    polytope: "yes" iff a > b at every vertex (log tuples break exponent
    ties), "no" iff a < b at every vertex, else "incomparable"."""
    if isinstance(a, CostExpr):
        (a,) = a.monomials()
    if isinstance(b, CostExpr):
        (b,) = b.monomials()
    verts = regime or REGIME_VERTICES
    rels = set()
    for mu, chi in verts:
        ga, gb = _expo(a, mu, chi), _expo(b, mu, chi)
        if ga > gb:
            rels.add(1)
        elif ga < gb:
            rels.add(-1)
        else:
            la, lb = _logs(a), _logs(b)
            rels.add(1 if la > lb else (-1 if la < lb else 0))
    if rels == {1}:
        return "yes"
    if rels == {-1}:
        return "no"
    return "incomparable"


def _lead_at(expr: CostExpr, mu, chi):
    """Max exponent among monomials at one vertex, with the largest log
    tuple among the argmax set."""
    best_e, best_logs = None, None
    for k in expr.terms:
        e = _expo(k, mu, chi)
        lg = _logs(k)
        if best_e is None or e > best_e or (e == best_e and lg > best_logs):
            best_e, best_logs = e, lg
    return best_e, best_logs


# -- recurrence specification ---------------------------------------------------

@dataclass(frozen=True)
class RecurrenceSpec:
    alpha: int
    beta: Fraction
    f: CostExpr
    base_scale: str
    base_cost: CostExpr

    def __post_init__(self):
        if not isinstance(self.alpha, int) or self.alpha < 1:
            raise PreconditionError("alpha must be an integer >= 1")
        object.__setattr__(self, "beta", _frac(self.beta))
        if self.beta <= 1:
            raise PreconditionError("beta must be > 1")
        if self.base_scale not in BASE_SCALES:
            raise PreconditionError(f"base_scale must be one of {BASE_SCALES}")
        if self.f.is_zero() or self.base_cost.is_zero():
            raise PreconditionError("f and base_cost must be non-zero")


@dataclass(frozen=True)
class SolveResult:
    case: int
    bound: CostExpr
    tightness: str           # "theta" or "big-O"
    subcase: Optional[str]   # case 4 only: ">1", "=1", "<1"
    leaf_term: CostExpr      # the A(n,M,B) of the analysis

    @property
    def is_tight(self):
        return self.tightness == "theta"


def log_beta_alpha(alpha, beta):
    """log_beta(alpha) as a Fraction, exact when alpha is a rational power
    of beta (searched with exponent denominators up to 6). Returns
    (value, exact)."""
    beta = _frac(beta)
    if alpha == 1:
        return F(0), True
    for den in range(1, 7):
        a_d = F(alpha) ** den
        num = 0
        acc = F(1)
        while acc < a_d and num <= 512:
            acc *= beta
            num += 1
        if acc == a_d:
            return F(num, den), True
    approx = math.log(alpha) / math.log(float(beta))
    return F(approx).limit_denominator(10**6), False


def _cmp_alpha_beta_pow(alpha, beta, p: Fraction):
    """Exact sign of alpha - beta^p for rational beta, p."""
    num, den = p.numerator, p.denominator
    if num >= 0:
        lhs, rhs = F(alpha) ** den, _frac(beta) ** num
    else:
        lhs, rhs = F(alpha) ** den * _frac(beta) ** (-num), F(1)
    return (lhs > rhs) - (lhs < rhs)


def _leaf_term(spec: RecurrenceSpec):
    a, _exact = log_beta_alpha(spec.alpha, spec.beta)
    t = _SCALE_T[spec.base_scale]
    return CostExpr.monomial(p=a, q=-a * t) * spec.base_cost, a, t


def _log_of_base_factor(t: Fraction):
    # log(n/x) as a monomial factor for base x = M^t
    return CostExpr.monomial(s=1, lt=t)


def classify(spec: RecurrenceSpec) -> SolveResult:
    """Pick the solution case for T(n) = alpha T(n/beta) + f and return the
    bound, tight (theta) for cases 1-3 and an upper bound for case 4.

    Base scale sqrt(M) routes directly to the per-monomial ratio analysis of
    case 4; scales M and const attempt the three tight cases first.
    """
    for (p, _q, _r, _s, _lt, _u) in spec.f.terms:
        if p < 0:
            raise PreconditionError(
                "f must be monotone in n: negative n-exponent found")

    A, a, t = _leaf_term(spec)
    nB = n_over_B()

    if spec.base_scale != "sqrtM":
        # w = exponent of n/x as a linear form; vertices where it vanishes
        # tolerate exponent ties (the theorem's epsilon gap lives in powers
        # of n/x, not n)
        w_vals = [1 - t * mu for mu, chi in REGIME_VERTICES]

        def below_lead(target: CostExpr, k):
            # k = O(target / (n/x)^eps) checked vertexwise
            for (mu, chi), w in zip(REGIME_VERTICES, w_vals):
                lead_e, lead_logs = _lead_at(target, mu, chi)
                e = _expo(k, mu, chi)
                if w > 0:
                    if not e < lead_e:
                        return False
                else:
                    if e > lead_e or (e == lead_e and _logs(k) > lead_logs):
                        return False
            return True

        if all(below_lead(A, k) for k in spec.f.terms):
            return SolveResult(1, A + nB, "theta", None, A)

        p_max = max(p for (p, *_rest) in spec.f.terms)
        regular = _cmp_alpha_beta_pow(spec.alpha, spec.beta, p_max) < 0
        if regular and all(below_lead(spec.f, k) for k in A.terms):
            return SolveResult(2, spec.f + nB, "theta", None, A)

        same = all(
            _lead_at(A, mu, chi) == _lead_at(spec.f, mu, chi)
            for mu, chi in REGIME_VERTICES)
        if same:
            bound = spec.f * _log_of_base_factor(t) + nB
            return SolveResult(3, bound, "theta", None, A)

    # case 4: geometric-ratio analysis with one global f'(beta) = beta^p_max
    p_max = max(p for (p, *_rest) in spec.f.terms)
    sign = _cmp_alpha_beta_pow(spec.alpha, spec.beta, p_max)
    if sign > 0:
        lg = a - p_max  # log_beta(alpha / beta^p_max)
        mult = CostExpr.monomial(p=lg, q=-lg * t)
        bound = A + spec.f * mult + spec.f + nB
        sub = ">1"
    elif sign == 0:
        bound = A + spec.f * _log_of_base_factor(t) + spec.f + nB
        sub = "=1"
    else:
        bound = A + spec.f + nB
        sub = "<1"
    return SolveResult(4, bound, "big-O", sub, A)


def solve_one_layer(g: CostExpr, per_subproblem: CostExpr, f: CostExpr):
    """Single-level decomposition: g(n/M) subproblems each costing
    per_subproblem, plus overhead f. Requires f = Omega(n/B)."""
    (nb_key,) = n_over_B().monomials()
    ok = False
    for k in f.terms:
        good = True
        for mu, chi in REGIME_VERTICES:
            e, enb = _expo(k, mu, chi), _expo(nb_key, mu, chi)
            if e < enb or (e == enb and _logs(k) < _logs(nb_key)):
                good = False
                break
        if good:
            ok = True
            break
    if not ok:
        raise PreconditionError("overhead must be Omega(n/B)")
    return g * per_subproblem + f


def numeric_unroll(spec: RecurrenceSpec, n, M, B):
    """Exact recursive evaluation with real-valued subproblem sizes (no
    flooring) and T(x) = base_cost at the base scale. Memoized."""
    if n <= 0:
        raise PreconditionError("n must be positive")
    base = {"M": float(M), "sqrtM": math.sqrt(M), "const": 1.0}[spec.base_scale]
    beta = float(spec.beta)
    memo = {}

    def rec(x):
        if x <= base * (1 + 1e-12):
            return spec.base_cost.eval(x, M, B)
        if x in memo:
            return memo[x]
        v = spec.alpha * rec(x / beta) + spec.f.eval(x, M, B)
        memo[x] = v
        return v

    return rec(float(n))


def loglog_slope(xs, ys):
    """Least-squares slope of log2(y) against log2(x)."""
    lx = [math.log2(x) for x in xs]
    ly = [math.log2(y) for y in ys]
    mx, my = sum(lx) / len(lx), sum(ly) / len(ly)
    sxx = sum((x - mx) ** 2 for x in lx)
    sxy = sum((x - mx) * (y - my) for x, y in zip(lx, ly))
    return sxy / sxx


# -- text syntax ----------------------------------------------------------------

class _Scanner:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, literal):
        self.skip_ws()
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def expect(self, literal):
        if not self.eat(literal):
            raise ParseError(f"expected {literal!r}", self.pos)

    def number(self):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and \
                (self.text[self.pos].isdigit() or self.text[self.pos] == "."):
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected a number", self.pos)
        tok = self.text[start:self.pos]
        try:
            return F(tok) if "." not in tok else \
                F(tok).limit_denominator(10**9)
        except ValueError:
            raise ParseError(f"bad number {tok!r}", start) from None

    def at_end(self):
        self.skip_ws()
        return self.pos >= len(self.text)


def _parse_exponent(sc: _Scanner):
    if sc.eat("("):
        num = sc.number()
        e = num
        if sc.eat("/"):
            e = num / sc.number()
        sc.expect(")")
        return e
    neg = sc.eat("-")
    e = sc.number()
    return -e if neg else e


def _parse_atom(sc: _Scanner):
    sc.skip_ws()
    ch = sc.peek()
    if ch.isdigit() or ch == ".":
        return CostExpr.monomial(coeff=sc.number())
    if sc.eat("logMB(n)"):
        e = _parse_exponent(sc) if sc.eat("^") else F(1)
        if e.denominator != 1 or e < 0:
            raise ParseError("log powers must be non-negative integers",
                             sc.pos)
        return CostExpr.monomial(u=int(e))
    if sc.eat("log(n"):
        lt = F(0)
        if sc.eat("/sqrtM"):
            lt = F(1, 2)
        elif sc.eat("/M"):
            lt = _parse_exponent(sc) if sc.eat("^") else F(1)
        sc.expect(")")
        e = _parse_exponent(sc) if sc.eat("^") else F(1)
        if e.denominator != 1 or e < 0:
            raise ParseError("log powers must be non-negative integers",
                             sc.pos)
        return CostExpr.monomial(s=int(e), lt=lt)
    for sym, kw in (("n", "p"), ("M", "q"), ("B", "r")):
        if sc.eat(sym):
            e = _parse_exponent(sc) if sc.eat("^") else F(1)
            return CostExpr.monomial(**{kw: e})
    raise ParseError("expected a number, n, M, B, or a log factor", sc.pos)


def _invert(expr: CostExpr, pos):
    if len(expr.terms) != 1:
        raise ParseError("can only divide by a single monomial", pos)
    ((p, q, r, s, lt, u), c), = expr.terms.items()
    if s or u:
        raise ParseError("cannot divide by log factors", pos)
    return CostExpr.monomial(coeff=F(1) / c, p=-p, q=-q, r=-r)


def _parse_term(sc: _Scanner):
    out = _parse_atom(sc)
    while True:
        if sc.eat("*"):
            out = out * _parse_atom(sc)
        elif sc.eat("/"):
            pos = sc.pos
            out = out * _invert(_parse_atom(sc), pos)
        else:
            return out


def parse_cost_expr(text) -> CostExpr:
    sc = _Scanner(text)
    out = _parse_expr(sc)
    if not sc.at_end():
        raise ParseError("trailing input", sc.pos)
    return out


def _parse_expr(sc: _Scanner):
    out = _parse_term(sc)
    while sc.eat("+"):
        out = out + _parse_term(sc)
    return out


def parse_recurrence(text) -> RecurrenceSpec:
    """Parse "T(n)=<a>T(n/<b>)+<expr>; base(<scale>)=<expr>"."""
    sc = _Scanner(text)
    sc.expect("T(n)")
    sc.expect("=")
    apos = sc.pos
    alpha = sc.number()
    if alpha.denominator != 1 or alpha < 1:
        raise ParseError("alpha must be an integer >= 1", apos)
    sc.expect("T(n/")
    bpos = sc.pos
    beta = sc.number()
    if sc.eat("/"):
        beta = beta / sc.number()
    if beta <= 1:
        raise ParseError("beta must be > 1", bpos)
    sc.expect(")")
    sc.expect("+")
    f = _parse_expr(sc)
    sc.expect(";")
    sc.expect("base(")
    spos = sc.pos
    scale = None
    for name in ("sqrtM", "M", "const"):
        if sc.eat(name):
            scale = name
            break
    if scale is None:
        raise ParseError("base scale must be M, sqrtM, or const", spos)
    sc.expect(")")
    sc.expect("=")
    base_cost = _parse_expr(sc)
    if not sc.at_end():
        raise ParseError("trailing input", sc.pos)
    return RecurrenceSpec(int(alpha), beta, f, scale, base_cost)
