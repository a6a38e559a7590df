"""Prime-order cyclic groups.

Three backends share one interface:

* ``toy-23``: the order-11 subgroup of Z_23^*, small enough to check by hand.
* ``modp-1024``: the order-q subgroup of Z_p^* for the 1024-bit safe prime of
  RFC 2409 (Oakley group 2), p = 2q + 1, generator 2.
* ``prime192v1``: the NIST P-192 curve (cofactor 1).

Elements are plain Python values: an ``int`` for mod-p groups, an ``(x, y)``
tuple or ``None`` (point at infinity) for the curve.  Scalars are ints and are
reduced mod q by every operation that consumes them.

Group objects are immutable and shared.  Exponentiations are counted through a
context-local counter (see :func:`count_exponentiations`), so concurrent
sessions in different threads or tasks never see each other's counts.
"""

import hashlib
import random
from contextlib import contextmanager
from contextvars import ContextVar
from functools import lru_cache

from .errors import InvalidElement, MalformedElement, MessageNotEncodable, UnsupportedGroup
from .numtheory import jacobi, sqrt_mod

GROUP_NAMES = ("toy-23", "modp-1024", "prime192v1")

_system_rng = random.SystemRandom()


class ExpCounter:
    """Number of group exponentiations performed while this counter was active."""

    __slots__ = ("count",)

    def __init__(self):
        self.count = 0

    def __repr__(self):
        return f"ExpCounter({self.count})"


_active_counter = ContextVar("hansec_exp_counter", default=None)


@contextmanager
def count_exponentiations(counter=None):
    """Activate ``counter`` (or a fresh one) for the duration of the block."""
    counter = ExpCounter() if counter is None else counter
    token = _active_counter.set(counter)
    try:
        yield counter
    finally:
        _active_counter.reset(token)


def _tick():
    counter = _active_counter.get()
    if counter is not None:
        counter.count += 1


def default_rng():
    return _system_rng


def _expand(tag, counter, length):
    out = b""
    block = 0
    while len(out) < length:
        out += hashlib.sha256(
            b"hansec/h2g" + len(tag).to_bytes(2, "big") + tag
            + counter.to_bytes(4, "big") + block.to_bytes(4, "big")
        ).digest()
        block += 1
    return out[:length]


class Group:
    """Interface shared by the backends; see the module docstring."""

    name: str
    kind: str
    p: int
    q: int
    g: object
    g1: object
    g2: object
    identity: object
    element_bytes: int
    insecure: bool = False

    @property
    def scalar_bytes(self):
        return (self.q.bit_length() + 7) // 8

    def scalar(self, value):
        return value % self.q

    def random_scalar(self, rng=None):
        """Uniform scalar in [1, q)."""
        return (rng or _system_rng).randrange(1, self.q)

    def exp(self, base, k):
        _tick()
        return self._exp(base, k % self.q)

    def is_identity(self, e):
        return e == self.identity

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"

    # subclasses implement: _exp, mul, inv, serialize, deserialize,
    # hash_to_element, encode_bytes, decode_bytes


class ModPGroup(Group):
    """Order-q subgroup (the quadratic residues) of Z_p^* for a safe prime p = 2q + 1."""

    kind = "mod-p"

    def __init__(self, name, p, g, g2=None, insecure=False):
        q = (p - 1) // 2
        self.name = name
        self.p = p
        self.q = q
        self.g = g
        self.g1 = g
        self.identity = 1
        self.element_bytes = (p.bit_length() + 7) // 8
        self.insecure = insecure
        self.g2 = g2 if g2 is not None else self.hash_to_element(b"generator-g2")

    def _exp(self, base, k):
        return pow(base, k, self.p)

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        return pow(a, -1, self.p)

    def is_member(self, e):
        # For a safe prime, the order-q subgroup is exactly the set of
        # quadratic residues, so Euler's criterion e^q = 1 is the Jacobi test.
        return isinstance(e, int) and 0 < e < self.p and jacobi(e, self.p) == 1

    def serialize(self, e):
        return e.to_bytes(self.element_bytes, "big")

    def deserialize(self, data):
        if len(data) != self.element_bytes:
            raise MalformedElement(f"expected {self.element_bytes} bytes, got {len(data)}")
        e = int.from_bytes(data, "big")
        if not self.is_member(e):
            raise InvalidElement("element is not in the order-q subgroup")
        return e

    def hash_to_element(self, tag):
        ctr = 0
        while True:
            x = int.from_bytes(_expand(self.name.encode() + b"|" + tag, ctr, self.element_bytes + 16), "big") % self.p
            e = x * x % self.p
            if e not in (0, 1):
                return e
            ctr += 1

    def encode_bytes(self, data):
        """Invertibly map a short byte string into the subgroup."""
        v = int.from_bytes(b"\x01" + data, "big")
        if v > self.q:
            raise MessageNotEncodable(f"{len(data)} bytes do not fit in a {self.name} element")
        return v if jacobi(v, self.p) == 1 else self.p - v

    def decode_bytes(self, e):
        v = e if e <= self.q else self.p - e
        raw = v.to_bytes((v.bit_length() + 7) // 8, "big")
        if not raw or raw[0] != 1:
            raise MessageNotEncodable("element does not carry an encoded message")
        return raw[1:]


def _jdouble(X, Y, Z, p, a):
    if not Y or not Z:
        return 0, 1, 0
    YY = Y * Y % p
    S = 4 * X * YY % p
    ZZ = Z * Z % p
    if a == p - 3:
        M = 3 * (X - ZZ) * (X + ZZ) % p
    else:
        M = (3 * X * X + a * ZZ * ZZ) % p
    X3 = (M * M - 2 * S) % p
    Y3 = (M * (S - X3) - 8 * YY * YY) % p
    Z3 = 2 * Y * Z % p
    return X3, Y3, Z3


def _jadd_affine(X1, Y1, Z1, x2, y2, p, a):
    """Jacobian point plus affine point (mixed addition)."""
    if not Z1:
        return x2, y2, 1
    Z1Z1 = Z1 * Z1 % p
    U2 = x2 * Z1Z1 % p
    S2 = y2 * Z1 * Z1Z1 % p
    if X1 == U2:
        if Y1 != S2:
            return 0, 1, 0
        return _jdouble(X1, Y1, Z1, p, a)
    H = (U2 - X1) % p
    R = (S2 - Y1) % p
    HH = H * H % p
    HHH = H * HH % p
    V = X1 * HH % p
    X3 = (R * R - HHH - 2 * V) % p
    Y3 = (R * (V - X3) - Y1 * HHH) % p
    Z3 = H * Z1 % p
    return X3, Y3, Z3


class CurveGroup(Group):
    """Short Weierstrass curve y^2 = x^3 + ax + b over F_p with prime order q (cofactor 1)."""

    kind = "elliptic-curve"

    def __init__(self, name, p, a, b, q, gx, gy):
        self.name = name
        self.p = p
        self.a = a % p
        self.b = b
        self.q = q
        self.g = (gx, gy)
        self.g1 = self.g
        self.identity = None
        self.coord_bytes = (p.bit_length() + 7) // 8
        self.element_bytes = 1 + 2 * self.coord_bytes
        if not self.on_curve(self.g):
            raise ValueError("generator is not on the curve")
        self.g2 = self.hash_to_element(b"generator-g2")

    def on_curve(self, P):
        if P is None:
            return True
        x, y = P
        p = self.p
        return 0 <= x < p and 0 <= y < p and (y * y - x * x * x - self.a * x - self.b) % p == 0

    def _exp(self, base, k):
        if base is None or k == 0:
            return None
        p, a = self.p, self.a
        qx, qy = base
        R = (0, 1, 0)
        # Double-and-add-always over a fixed bit length: same operation
        # sequence for every scalar.
        for i in range(self.q.bit_length() - 1, -1, -1):
            R = _jdouble(*R, p, a)
            T = _jadd_affine(*R, qx, qy, p, a)
            if (k >> i) & 1:
                R = T
        X, Y, Z = R
        if not Z:
            return None
        zi = pow(Z, -1, p)
        zi2 = zi * zi % p
        return X * zi2 % p, Y * zi2 * zi % p

    def mul(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        p = self.p
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if (y1 + y2) % p == 0:
                return None
            lam = (3 * x1 * x1 + self.a) * pow(2 * y1, -1, p) % p
        else:
            lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
        x3 = (lam * lam - x1 - x2) % p
        return x3, (lam * (x1 - x3) - y1) % p

    def inv(self, P):
        if P is None:
            return None
        return P[0], (-P[1]) % self.p

    def is_member(self, P):
        # cofactor 1: every point on the curve lies in the order-q group
        return self.on_curve(P)

    def serialize(self, P):
        if P is None:
            return b"\x00"
        w = self.coord_bytes
        return b"\x04" + P[0].to_bytes(w, "big") + P[1].to_bytes(w, "big")

    def deserialize(self, data):
        if data == b"\x00":
            return None
        if len(data) != self.element_bytes or data[0] != 4:
            raise MalformedElement("expected an uncompressed point encoding")
        w = self.coord_bytes
        P = int.from_bytes(data[1:1 + w], "big"), int.from_bytes(data[1 + w:], "big")
        if not self.on_curve(P):
            raise InvalidElement("point is not on the curve")
        return P

    def _lift_x(self, x):
        p = self.p
        rhs = (x * x * x + self.a * x + self.b) % p
        if rhs == 0:
            return x, 0
        if jacobi(rhs, p) != 1:
            return None
        y = sqrt_mod(rhs, p)
        return x, y

    def hash_to_element(self, tag):
        ctr = 0
        while True:
            x = int.from_bytes(_expand(self.name.encode() + b"|" + tag, ctr, self.coord_bytes + 16), "big") % self.p
            P = self._lift_x(x)
            if P is not None:
                x, y = P
                return x, y if y % 2 == 0 else self.p - y
            ctr += 1

    def encode_bytes(self, data):
        """Try-and-increment: x = (1 || data) * 256 + k for the first k landing on the curve."""
        v = int.from_bytes(b"\x01" + data, "big")
        for k in range(256):
            x = (v << 8) | k
            if x >= self.p:
                break
            P = self._lift_x(x)
            if P is not None:
                return P
        raise MessageNotEncodable(f"{len(data)} bytes do not fit in a {self.name} point")

    def decode_bytes(self, P):
        if P is None:
            raise MessageNotEncodable("identity carries no message")
        v = P[0] >> 8
        raw = v.to_bytes((v.bit_length() + 7) // 8, "big")
        if not raw or raw[0] != 1:
            raise MessageNotEncodable("point does not carry an encoded message")
        return raw[1:]


# RFC 2409, section 6.2 (Oakley group 2): 2^1024 - 2^960 - 1 + 2^64 * (floor(2^894 pi) + 129093)
MODP_1024_P = int(
    "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD1"
    "29024E088A67CC74020BBEA63B139B22514A08798E3404DD"
    "EF9519B3CD3A431B302B0A6DF25F14374FE1356D6D51C245"
    "E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
    "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE65381"
    "FFFFFFFFFFFFFFFF",
    16,
)

# SEC 2 / X9.62 prime192v1 (NIST P-192)
P192_P = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFFFFFFFFFFFF
P192_A = -3
P192_B = 0x64210519E59C80E70FA7E9AB72243049FEB8DEECC146B9B1
P192_N = 0xFFFFFFFFFFFFFFFFFFFFFFFF99DEF836146BC9B1B4D22831
P192_GX = 0x188DA80EB03090F67CBF20EB43A18800F4FF0AFD82FF1012
P192_GY = 0x07192B95FFC8DA78631011ED6B24CDD573F977A11E794811


@lru_cache(maxsize=None)
def make_group(name):
    """Return the shared, immutable group for a stable group name."""
    if name == "toy-23":
        # g2 = 3 = 2^8 mod 23: its discrete log is known, which the tests
        # use to demonstrate Pedersen equivocation.
        return ModPGroup("toy-23", 23, g=2, g2=3, insecure=True)
    if name == "modp-1024":
        return ModPGroup("modp-1024", MODP_1024_P, g=2)
    if name == "prime192v1":
        return CurveGroup("prime192v1", P192_P, P192_A, P192_B, P192_N, P192_GX, P192_GY)
    raise UnsupportedGroup(f"unknown group {name!r}; expected one of {', '.join(GROUP_NAMES)}")
