"""Expression trees, exact multivariate polynomials and first-order
differential operators.

Two coefficient types feed the differential-operator layer:

* Poly -- exact multivariate polynomial over Gaussian rationals; supports
  symbolic partial differentiation and decidable equality, used where
  operator identities must be verified with zero tolerance.
* Expr -- a small tree language {const, var, +, *, power, sin, cos, sinh,
  cosh, exp, abs, sign} with symbolic differentiation and numeric
  evaluation, used for the trigonometric-coefficient operators.

A DiffOperator is zeroth-order coefficient plus a map variable -> first-order
coefficient.  The commutator of two first-order operators is again first
order; the second-order part cancels identically for commutative
coefficients, and the implementation checks that cancellation rather than
assuming it.
"""

from __future__ import annotations

import math

from .scalars import QQi

# -- exact polynomials -------------------------------------------------------


class Poly:
    """Multivariate polynomial with QQi coefficients over named variables."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables, terms=None):
        self.vars = tuple(variables)
        self.terms: dict[tuple, QQi] = {}
        if terms:
            for pows, c in terms.items():
                c = c if isinstance(c, QQi) else QQi(c)
                if c:
                    self.terms[pows] = c

    @classmethod
    def constant(cls, variables, value) -> "Poly":
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def variable(cls, variables, name) -> "Poly":
        pows = [0] * len(variables)
        pows[tuple(variables).index(name)] = 1
        return cls(variables, {tuple(pows): QQi(1)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def _binop(self, other, merge):
        if not isinstance(other, Poly):
            other = Poly.constant(self.vars, other)
        if self.vars != other.vars:
            raise ValueError("polynomials over different variable lists")
        return merge(other)

    def __add__(self, other) -> "Poly":
        def merge(other):
            out = dict(self.terms)
            for p, c in other.terms.items():
                t = out.get(p)
                t = c if t is None else t + c
                if t:
                    out[p] = t
                elif p in out:
                    del out[p]
            r = Poly(self.vars)
            r.terms = out
            return r
        return self._binop(other, merge)

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        other = other if isinstance(other, Poly) else Poly.constant(self.vars, other)
        return self + (-other)

    def __neg__(self) -> "Poly":
        r = Poly(self.vars)
        r.terms = {p: -c for p, c in self.terms.items()}
        return r

    def __mul__(self, other) -> "Poly":
        def merge(other):
            out: dict[tuple, QQi] = {}
            for p1, c1 in self.terms.items():
                for p2, c2 in other.terms.items():
                    p = tuple(a + b for a, b in zip(p1, p2))
                    c = c1 * c2
                    t = out.get(p)
                    t = c if t is None else t + c
                    if t:
                        out[p] = t
                    elif p in out:
                        del out[p]
            r = Poly(self.vars)
            r.terms = out
            return r
        return self._binop(other, merge)

    __rmul__ = __mul__

    def diff(self, name: str) -> "Poly":
        k = self.vars.index(name)
        out: dict[tuple, QQi] = {}
        for pows, c in self.terms.items():
            e = pows[k]
            if not e:
                continue
            p = list(pows)
            p[k] = e - 1
            p = tuple(p)
            add = c * e
            t = out.get(p)
            t = add if t is None else t + add
            if t:
                out[p] = t
            elif p in out:
                del out[p]
        r = Poly(self.vars)
        r.terms = out
        return r

    def evaluate(self, env: dict) -> complex:
        total = 0j
        for pows, c in self.terms.items():
            v = c.to_complex()
            for name, e in zip(self.vars, pows):
                if e:
                    v *= complex(env[name]) ** e
            total += v
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for pows, c in sorted(self.terms.items()):
            mono = "*".join(f"{v}^{e}" if e > 1 else v
                            for v, e in zip(self.vars, pows) if e)
            bits.append(f"({c.re}+{c.im}i)" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)


# -- expression trees --------------------------------------------------------


class Expr:
    """Base expression node."""

    def diff(self, var: str) -> "Expr":
        raise NotImplementedError

    def evaluate(self, env: dict) -> complex:
        raise NotImplementedError

    def __add__(self, other):
        return Add(self, _as_expr(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Add(self, Mul(Const(-1), _as_expr(other)))

    def __rsub__(self, other):
        return Add(_as_expr(other), Mul(Const(-1), self))

    def __mul__(self, other):
        return Mul(self, _as_expr(other))

    __rmul__ = __mul__

    def __neg__(self):
        return Mul(Const(-1), self)


def _as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    return Const(x)


class Const(Expr):
    def __init__(self, value):
        if isinstance(value, QQi):
            value = value.to_complex()
        self.value = value

    def diff(self, var):
        return Const(0)

    def evaluate(self, env):
        return complex(self.value)

    def __repr__(self):
        return f"{self.value}"


class Var(Expr):
    def __init__(self, name: str):
        self.name = name

    def diff(self, var):
        return Const(1 if var == self.name else 0)

    def evaluate(self, env):
        return complex(env[self.name])

    def __repr__(self):
        return self.name


class Add(Expr):
    def __init__(self, *args):
        self.args = args

    def diff(self, var):
        return Add(*(a.diff(var) for a in self.args))

    def evaluate(self, env):
        return sum(a.evaluate(env) for a in self.args)

    def __repr__(self):
        return "(" + " + ".join(map(repr, self.args)) + ")"


class Mul(Expr):
    def __init__(self, *args):
        self.args = args

    def diff(self, var):
        terms = []
        for k in range(len(self.args)):
            factors = list(self.args)
            factors[k] = factors[k].diff(var)
            terms.append(Mul(*factors))
        return Add(*terms)

    def evaluate(self, env):
        out = 1 + 0j
        for a in self.args:
            out *= a.evaluate(env)
        return out

    def __repr__(self):
        return "*".join(map(repr, self.args))


class Pow(Expr):
    """Integer power; negative exponents give rational functions."""

    def __init__(self, base: Expr, exponent: int):
        self.base = base
        self.exponent = int(exponent)

    def diff(self, var):
        n = self.exponent
        if n == 0:
            return Const(0)
        return Mul(Const(n), Pow(self.base, n - 1), self.base.diff(var))

    def evaluate(self, env):
        return self.base.evaluate(env) ** self.exponent

    def __repr__(self):
        return f"({self.base!r})^{self.exponent}"


class _Unary(Expr):
    fn = None
    name = "?"

    def __init__(self, arg: Expr):
        self.arg = arg

    def evaluate(self, env):
        return self.fn(self.arg.evaluate(env))

    def __repr__(self):
        return f"{self.name}({self.arg!r})"


class Sin(_Unary):
    name = "sin"
    fn = staticmethod(lambda z: complex(math.sin(z.real)) if z.imag == 0
                      else __import__("cmath").sin(z))

    def diff(self, var):
        return Mul(Cos(self.arg), self.arg.diff(var))


class Cos(_Unary):
    name = "cos"
    fn = staticmethod(lambda z: complex(math.cos(z.real)) if z.imag == 0
                      else __import__("cmath").cos(z))

    def diff(self, var):
        return Mul(Const(-1), Sin(self.arg), self.arg.diff(var))


class Sinh(_Unary):
    name = "sinh"
    fn = staticmethod(lambda z: complex(math.sinh(z.real)) if z.imag == 0
                      else __import__("cmath").sinh(z))

    def diff(self, var):
        return Mul(Cosh(self.arg), self.arg.diff(var))


class Cosh(_Unary):
    name = "cosh"
    fn = staticmethod(lambda z: complex(math.cosh(z.real)) if z.imag == 0
                      else __import__("cmath").cosh(z))

    def diff(self, var):
        return Mul(Sinh(self.arg), self.arg.diff(var))


class Exp(_Unary):
    name = "exp"
    fn = staticmethod(lambda z: __import__("cmath").exp(z))

    def diff(self, var):
        return Mul(Exp(self.arg), self.arg.diff(var))


class Abs(_Unary):
    name = "abs"
    fn = staticmethod(lambda z: complex(abs(z)))

    def diff(self, var):
        # d|u| = sign(u) du on the real line
        return Mul(Sign(self.arg), self.arg.diff(var))


class Sign(_Unary):
    name = "sign"
    fn = staticmethod(lambda z: complex((z.real > 0) - (z.real < 0)))

    def diff(self, var):
        return Const(0)


# -- first-order differential operators --------------------------------------


class NotALieBracketError(ValueError):
    pass


class DiffOperator:
    """c0 + sum_v c_v d/dv over a fixed variable list."""

    def __init__(self, variables, zeroth, firsts: dict):
        self.vars = tuple(variables)
        self.zeroth = zeroth
        self.firsts = dict(firsts)

    @classmethod
    def zero(cls, variables, make_const):
        return cls(variables, make_const(0), {})

    def _coeff(self, var):
        c = self.firsts.get(var)
        if c is None:
            return None
        return c

    def map_coeffs(self, f) -> "DiffOperator":
        return DiffOperator(self.vars, f(self.zeroth),
                            {v: f(c) for v, c in self.firsts.items()})

    def add(self, other: "DiffOperator") -> "DiffOperator":
        firsts = dict(self.firsts)
        for v, c in other.firsts.items():
            firsts[v] = firsts[v] + c if v in firsts else c
        return DiffOperator(self.vars, self.zeroth + other.zeroth, firsts)

    def scale(self, s) -> "DiffOperator":
        return DiffOperator(self.vars, self.zeroth * s,
                            {v: c * s for v, c in self.firsts.items()})

    def sub(self, other: "DiffOperator") -> "DiffOperator":
        return self.add(other.scale(-1))

    def commutator(self, other: "DiffOperator",
                   check_points=None) -> "DiffOperator":
        """Exact [self, other]; raises if the second-order part survives.

        For commutative coefficients a_i b_j - b_j a_i vanishes identically;
        with Poly coefficients this is checked exactly, with Expr
        coefficients at the supplied sample points.
        """
        a0, b0 = self.zeroth, other.zeroth
        zeroth = _zero_like(a0)
        for v, c in self.firsts.items():
            zeroth = zeroth + c * _diff(b0, v)
        for v, c in other.firsts.items():
            zeroth = zeroth - c * _diff(a0, v)
        firsts = {}
        for w in sorted(set(self.firsts) | set(other.firsts)):
            acc = _zero_like(a0)
            for v in sorted(self.firsts):
                bw = other.firsts.get(w)
                if bw is not None:
                    acc = acc + self.firsts[v] * _diff(bw, v)
            for v in sorted(other.firsts):
                aw = self.firsts.get(w)
                if aw is not None:
                    acc = acc - other.firsts[v] * _diff(aw, v)
            firsts[w] = acc
        self._check_second_order(other, check_points)
        out = DiffOperator(self.vars, zeroth, firsts)
        return out

    def _check_second_order(self, other, check_points):
        # coefficient of dv dw in [A,B], symmetrized over the slot order:
        # (a_v b_w - b_v a_w) + (a_w b_v - b_w a_v); zero iff coefficients
        # commute, which is what makes the commutator first order again.
        template = self.zeroth
        zero = _zero_like(template)

        def get(op, v):
            c = op.firsts.get(v)
            return c if c is not None else zero

        keys = sorted(set(self.firsts) | set(other.firsts))
        for i, v in enumerate(keys):
            for w in keys[i:]:
                av, aw = get(self, v), get(self, w)
                bv, bw = get(other, v), get(other, w)
                sym = av * bw - bv * aw + aw * bv - bw * av
                if isinstance(sym, Poly):
                    if not sym.is_zero:
                        raise NotALieBracketError(
                            "second-order part of the commutator survives")
                else:
                    points = check_points or _default_points(self.vars)
                    for pt in points:
                        if abs(sym.evaluate(pt)) > 1e-9:
                            raise NotALieBracketError(
                                "second-order part of the commutator survives")

    def apply(self, f, env: dict) -> complex:
        """Numeric action on an Expr function at a point."""
        total = self.zeroth.evaluate(env) * f.evaluate(env) \
            if not _is_zero(self.zeroth) else 0j
        for v, c in self.firsts.items():
            total += c.evaluate(env) * f.diff(v).evaluate(env)
        return total

    def apply_symbolic(self, f):
        """Symbolic action on an Expr, returning an Expr."""
        out = Mul(self.zeroth, f) if isinstance(self.zeroth, Expr) else None
        terms = [out] if out is not None else []
        for v, c in self.firsts.items():
            terms.append(Mul(c, f.diff(v)))
        return Add(*terms) if terms else Const(0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffOperator):
            return NotImplemented
        if self.vars != other.vars:
            return False
        if not _coeff_equal(self.zeroth, other.zeroth):
            return False
        for v in set(self.firsts) | set(other.firsts):
            a = self.firsts.get(v)
            b = other.firsts.get(v)
            if a is None:
                a = _zero_like(b)
            if b is None:
                b = _zero_like(a)
            if not _coeff_equal(a, b):
                return False
        return True


def _diff(c, v):
    return c.diff(v)


def _zero_like(c):
    if isinstance(c, Poly):
        return Poly(c.vars)
    return Const(0)


def _is_zero(c) -> bool:
    if isinstance(c, Poly):
        return c.is_zero
    return isinstance(c, Const) and c.value == 0


def _coeff_equal(a, b) -> bool:
    if isinstance(a, Poly) and isinstance(b, Poly):
        return a == b
    raise TypeError("exact operator equality needs Poly coefficients")


def _default_points(variables):
    return [{v: 0.3 + 0.17 * k + 0.05 * j for j, v in enumerate(variables)}
            for k in range(3)]
