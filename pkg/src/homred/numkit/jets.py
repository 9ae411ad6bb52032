"""Truncated Taylor jets (value plus partial derivatives up to order 3).

A :class:`Jet` carries an array-valued quantity together with its partial
derivatives with respect to ``n`` active coordinates.  Derivative axes are
stored *in front of* the value axes, so for a value of shape ``S``::

    grad  -> shape (n,) + S
    hess  -> shape (n, n) + S
    third -> shape (n, n, n) + S

Keeping derivative axes leading lets numpy broadcasting and ``einsum``
ellipses handle all products without reshuffling.  Missing derivative
blocks are stored as ``None`` and mean "identically zero", which keeps
constants cheap.

All arithmetic is exact truncation: for polynomial inputs of degree at most
``order`` the stored derivatives equal the analytic ones.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

MAX_ORDER = 3


class JetDomainError(ArithmeticError):
    """Raised when an elementary function is evaluated outside its domain."""


def _add(*terms):
    acc = None
    for t in terms:
        if t is None:
            continue
        acc = t if acc is None else acc + t
    return acc


def _op(op, x, y):
    if x is None or y is None:
        return None
    return op(x, y)


def _ins(a, axes):
    """Insert singleton axes into ``a`` at the given leading positions."""
    if a is None:
        return None
    return np.expand_dims(a, axes)


class Jet:
    """Array-valued truncated Taylor expansion at a point.

    Args:
        value: Value of the quantity, any array shape ``S``.
        derivs: Up to three derivative blocks (see module docstring).  A
            ``None`` entry means the block is zero.
        order: Number of derivative levels carried (0 to 3).
        nvars: Number of active coordinates; ``None`` for a constant that can
            be combined with jets in any number of variables.
    """

    __array_ufunc__ = None  # make numpy defer to our reflected operators

    def __init__(self, value, derivs=(), order: int = MAX_ORDER, nvars: int | None = None):
        if not 0 <= order <= MAX_ORDER:
            raise ValueError(f"jet order must be in 0..{MAX_ORDER}, got {order}")
        self.v = np.asarray(value, dtype=float)
        ders = list(derivs)[:order] + [None] * (order - min(len(derivs), order))
        self.d = tuple(None if x is None else np.asarray(x, dtype=float) for x in ders)
        self.order = order
        if nvars is None:
            for x in self.d:
                if x is not None:
                    nvars = x.shape[0]
                    break
        self.nvars = nvars

    # -- construction -----------------------------------------------------

    @classmethod
    def constant(cls, value, order: int = MAX_ORDER, nvars: int | None = None) -> "Jet":
        return cls(value, (), order=order, nvars=nvars)

    @classmethod
    def variables(cls, point, order: int = MAX_ORDER) -> "Jet":
        """Coordinate functions at ``point``: a vector jet with unit gradient."""
        p = np.asarray(point, dtype=float)
        if p.ndim != 1:
            raise ValueError("point must be a 1-d coordinate vector")
        n = p.shape[0]
        ders = (np.eye(n),) if order >= 1 else ()
        return cls(p, ders, order=order, nvars=n)

    # -- accessors --------------------------------------------------------

    @property
    def value(self) -> np.ndarray:
        return self.v

    @property
    def shape(self) -> tuple:
        return self.v.shape

    @property
    def ndim(self) -> int:
        return self.v.ndim

    def _block(self, k: int) -> np.ndarray:
        if k > self.order:
            raise ValueError(f"jet of order {self.order} has no order-{k} derivatives")
        blk = self.d[k - 1]
        if blk is None:
            if self.nvars is None:
                raise ValueError("constant jet has no defined number of variables")
            return np.zeros((self.nvars,) * k + self.v.shape)
        return blk

    @property
    def grad(self) -> np.ndarray:
        return self._block(1)

    @property
    def hess(self) -> np.ndarray:
        return self._block(2)

    @property
    def third(self) -> np.ndarray:
        return self._block(3)

    def __repr__(self) -> str:
        return f"Jet(shape={self.v.shape}, order={self.order}, nvars={self.nvars})"

    # -- structural helpers -------------------------------------------------

    def truncate(self, order: int) -> "Jet":
        if order >= self.order:
            return self
        return Jet(self.v, self.d[:order], order=order, nvars=self.nvars)

    def _map(self, fn: Callable[[np.ndarray, int], np.ndarray]) -> "Jet":
        """Apply a linear map acting on value axes; ``fn(arr, lead)``."""
        ders = tuple(None if x is None else fn(x, k + 1) for k, x in enumerate(self.d))
        return Jet(fn(self.v, 0), ders, order=self.order, nvars=self.nvars)

    def __getitem__(self, idx) -> "Jet":
        if not isinstance(idx, tuple):
            idx = (idx,)
        return self._map(lambda a, lead: a[(slice(None),) * lead + idx])

    def reshape(self, *shape) -> "Jet":
        if len(shape) == 1 and isinstance(shape[0], (tuple, list)):
            shape = tuple(shape[0])
        return self._map(lambda a, lead: a.reshape(a.shape[:lead] + tuple(shape)))

    def transpose(self, *axes) -> "Jet":
        if len(axes) == 1 and isinstance(axes[0], (tuple, list)):
            axes = tuple(axes[0])
        if not axes:
            axes = tuple(reversed(range(self.ndim)))
        return self._map(lambda a, lead: a.transpose(tuple(range(lead)) + tuple(lead + x for x in axes)))

    @property
    def T(self) -> "Jet":
        return self.transpose()

    def sum(self, axis=None) -> "Jet":
        if axis is None:
            axis = tuple(range(self.ndim))
        if not isinstance(axis, tuple):
            axis = (axis,)
        axis = tuple(a % self.ndim for a in axis)
        return self._map(lambda a, lead: a.sum(axis=tuple(lead + x for x in axis)))

    def broadcast_to(self, shape) -> "Jet":
        shape = tuple(shape)
        if shape == self.v.shape:
            return self
        pad = len(shape) - self.ndim

        def fn(a, lead):
            a = a.reshape(a.shape[:lead] + (1,) * pad + a.shape[lead:])
            return np.broadcast_to(a, a.shape[:lead] + shape)

        return self._map(fn)

    def partials(self) -> "Jet":
        """Jet of the first partial derivatives, one order lower.

        The derivative index becomes the leading value axis.
        """
        if self.order < 1:
            raise ValueError("cannot differentiate an order-0 jet")
        return Jet(self.grad, self.d[1:], order=self.order - 1, nvars=self.nvars)

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self) -> "Jet":
        return self._map(lambda a, lead: -a)

    def __pos__(self) -> "Jet":
        return self

    def __add__(self, other) -> "Jet":
        other = as_jet(other)
        shape = np.broadcast_shapes(self.shape, other.shape)
        a, b = self.broadcast_to(shape), other.broadcast_to(shape)
        order = min(a.order, b.order)
        nv = _nvars(a, b)
        ders = tuple(_add(x, y) for x, y in zip(a.d[:order], b.d[:order]))
        return Jet(a.v + b.v, ders, order=order, nvars=nv)

    __radd__ = __add__

    def __sub__(self, other) -> "Jet":
        return self + (-as_jet(other))

    def __rsub__(self, other) -> "Jet":
        return as_jet(other) + (-self)

    def _fix_shapes(self) -> "Jet":
        # after broadcasting sums a derivative block may have a smaller value shape
        s = self.v.shape
        ders = []
        for k, x in enumerate(self.d):
            if x is not None and x.shape[k + 1:] != s:
                pad = len(s) - (x.ndim - k - 1)
                x = x.reshape(x.shape[: k + 1] + (1,) * pad + x.shape[k + 1:])
                x = np.broadcast_to(x, x.shape[: k + 1] + s)
            ders.append(x)
        self.d = tuple(ders)
        return self

    def __mul__(self, other) -> "Jet":
        other = as_jet(other)
        shape = np.broadcast_shapes(self.shape, other.shape)
        return bilinear(self.broadcast_to(shape), other.broadcast_to(shape), np.multiply)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet":
        other = as_jet(other)
        if other.order == 0 or all(x is None for x in other.d):
            return self * (1.0 / other.v)
        return self * reciprocal(other)

    def __rtruediv__(self, other) -> "Jet":
        return as_jet(other) * reciprocal(self)

    def __pow__(self, p) -> "Jet":
        if isinstance(p, Jet):
            return exp(p * log(self))
        p = float(p)
        if p == int(p) and 0 <= p <= 4:
            out = as_jet(np.ones(self.shape))
            for _ in range(int(p)):
                out = out * self
            return out
        return power(self, p)

    def __matmul__(self, other) -> "Jet":
        return matmul(self, other)

    def __rmatmul__(self, other) -> "Jet":
        return matmul(as_jet(other), self)

    # -- composition ----------------------------------------------------------

    def compose(self, inner: "Jet") -> "Jet":
        """Evaluate this Taylor polynomial at the jet-valued point ``inner``.

        ``self`` is a jet in variables ``x`` at ``x0``; ``inner`` is a vector
        jet (in some other variables ``y``) whose value is ``x0``.  The result
        is the jet in ``y`` of the composite map, truncated at the common
        order.
        """
        n = self.nvars if self.nvars is not None else inner.shape[0]
        if inner.shape != (n,):
            raise ValueError(f"inner jet must have shape ({n},), got {inner.shape}")
        order = min(self.order, inner.order)
        delta = inner - inner.v
        m = int(np.prod(self.shape))
        out = as_jet(self.v.reshape(m))
        power_ = None
        for k in range(1, order + 1):
            power_ = delta if power_ is None else outer(power_, delta)
            coeff = self._block(k).reshape((n ** k, m)) / math.factorial(k)
            out = out + einsum("ka,k->a", coeff, power_.reshape(n ** k))
        return out.truncate(order).reshape(self.shape)


def _nvars(a: Jet, b: Jet):
    if a.nvars is not None and b.nvars is not None and a.nvars != b.nvars:
        raise ValueError(f"jets in {a.nvars} and {b.nvars} variables cannot be combined")
    return a.nvars if a.nvars is not None else b.nvars


def as_jet(x) -> Jet:
    if isinstance(x, Jet):
        return x
    return Jet.constant(x)


def value_of(x) -> np.ndarray:
    """Plain array value of a jet or array-like."""
    return x.v if isinstance(x, Jet) else np.asarray(x, dtype=float)


def bilinear(a: Jet, b: Jet, op: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> Jet:
    """Leibniz rule for a bilinear ``op`` that broadcasts over leading axes."""
    a, b = as_jet(a), as_jet(b)
    order = min(a.order, b.order)
    nv = _nvars(a, b)
    av, bv = a.v, b.v
    a1, a2, a3 = (list(a.d) + [None] * 3)[:3]
    b1, b2, b3 = (list(b.d) + [None] * 3)[:3]
    ders = []
    if order >= 1:
        ders.append(_add(_op(op, a1, bv), _op(op, av, b1)))
    if order >= 2:
        ders.append(
            _add(
                _op(op, a2, bv),
                _op(op, _ins(a1, 1), _ins(b1, 0)),
                _op(op, _ins(a1, 0), _ins(b1, 1)),
                _op(op, av, b2),
            )
        )
    if order >= 3:
        ders.append(
            _add(
                _op(op, a3, bv),
                _op(op, _ins(a2, 2), _ins(b1, (0, 1))),
                _op(op, _ins(a2, 1), _ins(b1, (0, 2))),
                _op(op, _ins(a2, 0), _ins(b1, (1, 2))),
                _op(op, _ins(a1, (1, 2)), _ins(b2, 0)),
                _op(op, _ins(a1, (0, 2)), _ins(b2, 1)),
                _op(op, _ins(a1, (0, 1)), _ins(b2, 2)),
                _op(op, av, b3),
            )
        )
    return Jet(op(av, bv), ders, order=order, nvars=nv)._fix_shapes()


def _einsum2(spec: str, a, b) -> Jet:
    ins, out = spec.split("->")
    sa, sb = ins.split(",")
    full = f"...{sa},...{sb}->...{out}"
    return bilinear(as_jet(a), as_jet(b), lambda x, y: np.einsum(full, x, y))


def einsum(spec: str, *operands) -> Jet:
    """Jet-aware ``einsum`` with explicit output (no ellipsis in ``spec``).

    Operands may be jets or plain arrays; more than two operands are
    contracted left to right, keeping only indices still needed.
    """
    ins, out = spec.replace(" ", "").split("->")
    terms = ins.split(",")
    if len(terms) != len(operands):
        raise ValueError("number of operands does not match subscripts")
    if len(terms) == 1:
        src = terms[0]
        return as_jet(operands[0])._map(lambda a, lead: np.einsum(f"...{src}->...{out}", a))
    cur, cur_idx = operands[0], terms[0]
    for k in range(1, len(terms)):
        later = set(out).union(*terms[k + 1:]) if k + 1 < len(terms) else set(out)
        nxt = terms[k]
        keep = "".join(dict.fromkeys(c for c in cur_idx + nxt if c in later))
        if k == len(terms) - 1:
            keep = out
        cur = _einsum2(f"{cur_idx},{nxt}->{keep}", cur, operands[k])
        cur_idx = keep
    return cur


def matmul(a, b) -> Jet:
    a, b = as_jet(a), as_jet(b)
    sa = "ij" if a.ndim == 2 else "j"
    sb = "jk" if b.ndim == 2 else "j"
    out = sa.replace("j", "") + sb.replace("j", "")
    return _einsum2(f"{sa},{sb}->{out}", a, b)


def outer(a, b) -> Jet:
    a, b = as_jet(a), as_jet(b)
    la = "abcdefgh"[: a.ndim]
    lb = "pqrstuvw"[: b.ndim]
    return _einsum2(f"{la},{lb}->{la}{lb}", a, b)


def stack(items: Sequence, axis: int = 0) -> Jet:
    """Stack jets (or numbers) along a new value axis."""
    jets = [as_jet(x) for x in items]
    order = min(j.order for j in jets)
    nv = None
    for j in jets:
        if j.nvars is not None:
            nv = j.nvars
    shape = np.broadcast_shapes(*(j.shape for j in jets))
    jets = [j.broadcast_to(shape) for j in jets]
    ax = axis % (len(shape) + 1)
    value = np.stack([j.v for j in jets], axis=ax)
    ders = []
    for k in range(order):
        blocks = [j.d[k] for j in jets]
        if all(x is None for x in blocks):
            ders.append(None)
            continue
        full = [np.zeros((nv,) * (k + 1) + shape) if x is None else x for x in blocks]
        ders.append(np.stack(full, axis=k + 1 + ax))
    return Jet(value, ders, order=order, nvars=nv)


def concatenate(items: Sequence, axis: int = 0) -> Jet:
    jets = [as_jet(x) for x in items]
    order = min(j.order for j in jets)
    nv = None
    for j in jets:
        if j.nvars is not None:
            nv = j.nvars
    ax = axis % jets[0].ndim
    value = np.concatenate([j.v for j in jets], axis=ax)
    ders = []
    for k in range(order):
        blocks = [j.d[k] for j in jets]
        if all(x is None for x in blocks):
            ders.append(None)
            continue
        full = [np.zeros((nv,) * (k + 1) + j.shape) if x is None else x for x, j in zip(blocks, jets)]
        ders.append(np.concatenate(full, axis=k + 1 + ax))
    return Jet(value, ders, order=order, nvars=nv)


# -- elementary functions ------------------------------------------------------


def _chain(a: Jet, f0, f1, f2, f3) -> Jet:
    """Faa di Bruno for an elementwise scalar function with derivatives f1..f3."""
    a = as_jet(a)
    a1, a2, a3 = (list(a.d) + [None] * 3)[:3]
    ders = []
    if a.order >= 1:
        ders.append(None if a1 is None else f1 * a1)
    if a.order >= 2:
        t = None
        if a1 is not None:
            t = f2 * (_ins(a1, 1) * _ins(a1, 0))
        ders.append(_add(t, None if a2 is None else f1 * a2))
    if a.order >= 3:
        t1 = t2 = None
        if a1 is not None:
            t1 = f3 * (_ins(a1, (1, 2)) * _ins(a1, (0, 2)) * _ins(a1, (0, 1)))
            if a2 is not None:
                t2 = f2 * (
                    _ins(a2, 2) * _ins(a1, (0, 1))
                    + _ins(a2, 1) * _ins(a1, (0, 2))
                    + _ins(a2, 0) * _ins(a1, (1, 2))
                )
        ders.append(_add(t1, t2, None if a3 is None else f1 * a3))
    return Jet(f0, ders, order=a.order, nvars=a.nvars)


def _check_domain(ok: np.ndarray, what: str, a: Jet) -> None:
    if not np.all(ok):
        bad = np.argwhere(~np.asarray(ok))
        raise JetDomainError(f"{what} evaluated outside its domain at value index {tuple(bad[0])}: {a.v[tuple(bad[0])]!r}")


def reciprocal(a) -> Jet:
    a = as_jet(a)
    x = a.v
    _check_domain(x != 0, "division", a)
    r = 1.0 / x
    return _chain(a, r, -r**2, 2 * r**3, -6 * r**4)


def sqrt(a) -> Jet:
    a = as_jet(a)
    x = a.v
    _check_domain(x > 0, "sqrt", a)
    s = np.sqrt(x)
    return _chain(a, s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x))


def power(a, p: float) -> Jet:
    a = as_jet(a)
    x = a.v
    _check_domain(x > 0, "power", a)
    return _chain(
        a, x**p, p * x ** (p - 1), p * (p - 1) * x ** (p - 2), p * (p - 1) * (p - 2) * x ** (p - 3)
    )


def exp(a) -> Jet:
    a = as_jet(a)
    e = np.exp(a.v)
    return _chain(a, e, e, e, e)


def log(a) -> Jet:
    a = as_jet(a)
    x = a.v
    _check_domain(x > 0, "log", a)
    return _chain(a, np.log(x), 1 / x, -1 / x**2, 2 / x**3)


def sin(a) -> Jet:
    a = as_jet(a)
    s, c = np.sin(a.v), np.cos(a.v)
    return _chain(a, s, c, -s, -c)


def cos(a) -> Jet:
    a = as_jet(a)
    s, c = np.sin(a.v), np.cos(a.v)
    return _chain(a, c, -s, -c, s)


def inv(a) -> Jet:
    """Inverse of a (batch of) square matrix jet(s) by the truncated Neumann series."""
    a = as_jet(a)
    v = np.linalg.inv(a.v)
    step = -matmul(v, a - a.v)
    term = as_jet(v)
    acc = term
    for _ in range(a.order):
        term = matmul(step, term)
        acc = acc + term
    return acc.truncate(a.order)


def jet_lift(f: Callable, point, order: int = MAX_ORDER) -> Jet:
    """Evaluate ``f`` on coordinate jets at ``point``.

    Returns the jet of ``f`` (value and derivatives to ``order``).  Domain
    violations surface as :class:`JetDomainError` naming the point.
    """
    p = np.asarray(point, dtype=float)
    try:
        out = f(Jet.variables(p, order))
    except JetDomainError as exc:
        raise JetDomainError(f"{exc} (point {p.tolist()})") from exc
    return as_jet(out)


def jacobian_at(f: Callable, inner: Jet) -> Jet:
    """Jet of the Jacobian ``Df`` evaluated along the jet-valued point ``inner``.

    ``f`` is evaluated on fresh variables one order higher, differentiated,
    then composed with ``inner``.  The result has the derivative index first:
    shape ``(n,) + S`` where ``S`` is the shape of ``f``'s output.
    """
    order = inner.order
    if order + 1 > MAX_ORDER:
        raise ValueError(f"jacobian needs an order-{order + 1} evaluation, above {MAX_ORDER}")
    fx = jet_lift(f, inner.v, order + 1)
    return fx.partials().compose(inner)


def field_along(f: Callable, inner: Jet) -> Jet:
    """Jet of ``f`` evaluated along the jet-valued point ``inner``."""
    return jet_lift(f, inner.v, inner.order).compose(inner)
