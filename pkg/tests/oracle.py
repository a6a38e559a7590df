"""Naive modular arithmetic, written without pow() or the library, for cross-checking hand vectors."""


def power(base, e, m):
    out = 1
    for _ in range(e):
        out = out * base % m
    return out


def inverse(a, m):
    for k in range(1, m):
        if a * k % m == 1:
            return k
    raise ValueError("not invertible")


def subgroup(g, p):
    seen, e = [], 1
    while True:
        e = e * g % p
        seen.append(e)
        if e == 1:
            return seen
