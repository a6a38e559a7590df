"""Owner-to-cloud computation on data the cloud cannot read.

* :mod:`.pre`: proxy re-encryption, so the cloud can hand a ciphertext to a
  delegate without decrypting it.
* :mod:`.paillier`: additively homomorphic encryption, so the cloud can sum
  encrypted readings.
"""

from .paillier import (
    PaillierKeys,
    PaillierPublicKey,
    paillier_add,
    paillier_decrypt,
    paillier_encrypt,
    paillier_keygen,
    paillier_keys_from_primes,
    paillier_scalar_mul,
)
from .pre import (
    DELEGATEE,
    DELEGATOR,
    PreCiphertext,
    ReEncryptionKey,
    pre_decrypt,
    pre_decrypt_bytes,
    pre_decrypt_delegatee,
    pre_decrypt_delegator,
    pre_encrypt,
    pre_encrypt_bytes,
    pre_encrypt_key,
    pre_decrypt_key,
    pre_open,
    pre_reencrypt,
    pre_rekey,
    pre_seal,
)

__all__ = [
    "DELEGATEE",
    "DELEGATOR",
    "PaillierKeys",
    "PaillierPublicKey",
    "PreCiphertext",
    "ReEncryptionKey",
    "paillier_add",
    "paillier_decrypt",
    "paillier_encrypt",
    "paillier_keygen",
    "paillier_keys_from_primes",
    "paillier_scalar_mul",
    "pre_decrypt",
    "pre_decrypt_bytes",
    "pre_decrypt_delegatee",
    "pre_decrypt_delegator",
    "pre_decrypt_key",
    "pre_encrypt",
    "pre_encrypt_bytes",
    "pre_encrypt_key",
    "pre_open",
    "pre_reencrypt",
    "pre_rekey",
    "pre_seal",
]
