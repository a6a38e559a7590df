"""Security protocols for home area networks.

Groups and primitives (:mod:`.group`, :mod:`.primitives`), a key generation
center (:mod:`.pki`), owner-to-cloud identification and commitments
(:mod:`.identification`, :mod:`.commitment`), device-to-device key exchange
(:mod:`.key_exchange`), distance bounding (:mod:`.proximity`), computation on
encrypted data (:mod:`.delegation`), an attack simulator (:mod:`.sim`) and a
benchmark harness (:mod:`.bench`).
"""

from .group import GROUP_NAMES, count_exponentiations, make_group

__version__ = "0.1.0"

__all__ = ["GROUP_NAMES", "count_exponentiations", "make_group", "__version__"]
