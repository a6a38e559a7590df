"""
Storing data in the cloud: commitments, re-encryption, homomorphic sums
========================================================================

The owner commits to a meter reading, encrypts a file for itself and later
lets a repair service read it through a proxy, and the cloud adds up
encrypted readings without seeing any of them.
"""

import random

from hansec import commitment
from hansec.delegation import paillier, pre
from hansec.group import make_group

rng = random.Random(2024)

# %% Pedersen commitment in the toy group: every value is possible for every message
toy = make_group("toy-23")
c, opening = commitment.commit(4, toy, r=6)
print("commit(m=4, r=6) =", c)
for m in range(3):
    print(f"  m={m}: commitments over all r ->", sorted({commitment.commit(m, toy, r=r)[0] for r in range(11)}))
# whoever knows log_g g2 = 8 can open c to anything, which is why g2 must be set up honestly
print("open c=9 as m=5 with r'=9:", commitment.reveal(9, commitment.Opening(5, 9), toy))

# %% Proxy re-encryption: owner (x) delegates to a repair service (y)
G = make_group("prime192v1")
x, y = G.random_scalar(rng), G.random_scalar(rng)
kem, sealed = pre.pre_seal(b"boiler service history", G.exp(G.g, x), G, rng)
rk = pre.pre_rekey(x, y, G, source="owner", target="repair")
delegated = pre.pre_reencrypt(kem, rk, G)  # the proxy's only step
print("repair service reads:", pre.pre_open(delegated, sealed, y, G))

# %% Paillier: the cloud sums encrypted hourly readings
keys = paillier.paillier_keygen(1024, rng)
readings = [rng.randrange(0, 3000) for _ in range(24)]
total = paillier.paillier_encrypt(0, keys, rng)
for r in readings:
    total = paillier.paillier_add(total, paillier.paillier_encrypt(r, keys, rng), keys)
print("decrypted sum:", paillier.paillier_decrypt(total, keys), "plain sum:", sum(readings))
