"""
Owner-to-cloud identification, small enough to check by hand
=============================================================

The toy group is the order-11 subgroup of Z_23^* generated by g = 2.  Every
number below can be verified by hand.
"""

import random

from hansec import identification as ident
from hansec.group import make_group

G = make_group("toy-23")
print("subgroup generated by 2:", sorted(G.exp(G.g, k) for k in range(11)))


# A stand-in RNG so the secret, the nonce and the challenge are the
# worked-example values (a = 3, x = 5, mu = 4).
class Fixed:
    def __init__(self, *values):
        self.values = list(values)
        self.fallback = random.Random(0)

    def randrange(self, *args):
        return self.values.pop(0) if self.values else self.fallback.randrange(*args)


# %% Schnorr: prove knowledge of a with A = g^a
rng = Fixed(3, 5, 4)
keys = ident.SchnorrKeys.generate(G, rng)
session, X = ident.schnorr_commit(keys, G, rng)
mu = ident.schnorr_challenge(G, rng)
rho = ident.schnorr_respond(session, mu)
print(f"A = 2^3 = {keys.pk}, X = 2^5 = {X}, mu = {mu}, rho = 5 + 3*4 mod 11 = {rho}")
print(f"g^rho = {G.exp(G.g, rho)}, X * A^mu = {G.mul(X, G.exp(keys.pk, mu))}")

# The nonce is gone once the response exists, and the session refuses a
# second challenge: answering two challenges for one X would leak a.
print("nonce after responding:", session.ephemeral)
a = ident.extract_schnorr_secret(G, 4, 6, 7, (5 + 3 * 7) % 11)
print("secret extracted from two answers to the same X:", a)

# %% Okamoto: two secrets, two generators (g1 = 2, g2 = 3)
rng = Fixed(2, 5, 1, 3, 7)
keys = ident.OkamotoKeys.generate(G, rng)
session, X = ident.okamoto_commit(keys, G, rng)
mu = ident.okamoto_challenge(G, rng)
rho1, rho2 = ident.okamoto_respond(session, mu)
print(f"A = 2^2 * 3^5 = {keys.pk}, X = 2^1 * 3^3 = {X}, mu = {mu}, rho = ({rho1}, {rho2})")
print("verifier accepts:", ident.okamoto_verify(G, X, keys.pk, mu, rho1, rho2))

# %% The same proof at real sizes
G = make_group("prime192v1")
keys = ident.SchnorrKeys.generate(G)
verifier = ident.VerifierSession("schnorr", G, keys.pk)
session, X = ident.schnorr_commit(keys, G)
mu = verifier.receive_commitment(X)
print("prime192v1 proof accepted:", verifier.check(ident.schnorr_respond(session, mu)))
